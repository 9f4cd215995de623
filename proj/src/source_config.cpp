#include "gcrd/source_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "gcrd/errors.hpp"

namespace gcrd {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
  throw config_error(origin + ": " + what);
}

// nlohmann reports parse errors by byte offset; turn that into line:column.
std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

void require_keys(const json& j, const std::set<std::string>& allowed, const std::string& origin) {
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      std::ostringstream msg;
      msg << "unknown key \"" << item.key() << "\" (allowed:";
      for (const std::string& k : allowed) msg << " " << k;
      msg << ")";
      fail(origin, msg.str());
    }
  }
}

double number_field(const json& j, const std::string& key, const std::string& origin) {
  if (!j.contains(key)) fail(origin, "missing required field \"" + key + "\"");
  if (!j.at(key).is_number()) fail(origin, "field \"" + key + "\" must be a number");
  return j.at(key).get<double>();
}

std::vector<double> array_field(const json& j, const std::string& key, const std::string& origin) {
  if (!j.contains(key)) fail(origin, "missing required field \"" + key + "\"");
  const json& a = j.at(key);
  if (!a.is_array() || a.empty()) fail(origin, "field \"" + key + "\" must be a non-empty array");
  std::vector<double> out;
  out.reserve(a.size());
  for (const json& v : a) {
    if (!v.is_number()) fail(origin, "field \"" + key + "\" must contain only numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

SourceModel parse_source_config(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    std::ostringstream msg;
    msg << origin << ":" << line << ":" << col << ": JSON parse error: " << e.what();
    throw config_error(msg.str());
  }
  if (!j.is_object()) fail(origin, "source config must be a JSON object");
  if (!j.contains("kind")) fail(origin, "missing required field \"kind\"");
  if (!j.at("kind").is_string()) fail(origin, "field \"kind\" must be a string");
  const std::string kind = j.at("kind").get<std::string>();

  if (kind == "gaussian") {
    require_keys(j, {"kind", "variance"}, origin);
    const double v = number_field(j, "variance", origin);
    if (!(v > 0.0)) fail(origin, "field \"variance\" must be positive");
    return SourceModel::gaussian(v);
  }
  if (kind == "rayleigh") {
    require_keys(j, {"kind", "scale"}, origin);
    const double s = number_field(j, "scale", origin);
    if (!(s > 0.0)) fail(origin, "field \"scale\" must be positive");
    return SourceModel::rayleigh(s);
  }
  if (kind == "discrete") {
    require_keys(j, {"kind", "support", "pmf"}, origin);
    const std::vector<double> support = array_field(j, "support", origin);
    const std::vector<double> pmf = array_field(j, "pmf", origin);
    if (support.size() != pmf.size())
      fail(origin, "fields \"support\" and \"pmf\" must have equal length");
    double total = 0.0;
    for (double p : pmf) {
      if (p < 0.0) fail(origin, "field \"pmf\" must be non-negative");
      total += p;
    }
    if (std::fabs(total - 1.0) > 1e-12) {
      std::ostringstream msg;
      msg << "field \"pmf\" must sum to 1 (got " << total << ")";
      fail(origin, msg.str());
    }
    return SourceModel::discrete(support, pmf);
  }
  fail(origin, "field \"kind\" must be one of \"discrete\", \"gaussian\", \"rayleigh\" (got \"" +
                   kind + "\")");
}

SourceModel load_source_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error(path + ": cannot open source config");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_source_config(buf.str(), path);
}

}  // namespace gcrd
