// End-to-end CLI checks: drives the installed binary through popen and
// inspects CSV bytes, error messages, and exit codes.

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

namespace {

const char* kBin = GCRD_BIN_PATH;
const std::string kFixtures = GCRD_FIXTURES_DIR;

struct RunResult {
  int status = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + kBin + "\" " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  RunResult r;
  if (!pipe) return r;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, got);
  const int rc = pclose(pipe);
  if (WIFEXITED(rc)) r.status = WEXITSTATUS(rc);
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::string gaussian() { return kFixtures + "/gaussian.json"; }
std::string ternary() { return kFixtures + "/ternary.json"; }

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  const std::filesystem::path p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("moments emits the summary row") {
  const RunResult r = run_cli("moments --source " + gaussian());
  CHECK(r.status == 0);
  const auto ls = lines(r.output);
  REQUIRE(ls.size() == 2);
  CHECK(ls[0] == "sigma2,zeta,var_x2,dispersion,md_constant");
  CHECK(ls[1] == "1,3,2,0.5,1");

  const RunResult t = run_cli("moments --source " + ternary());
  CHECK(t.status == 0);
  const auto tl = lines(t.output);
  REQUIRE(tl.size() == 2);
  // the irrational atoms land within representation noise of the
  // configured unit power
  std::istringstream row(tl[1]);
  double sigma2, zeta, var_x2, disp;
  char comma;
  row >> sigma2 >> comma >> zeta >> comma >> var_x2 >> comma >> disp;
  CHECK(sigma2 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(zeta == doctest::Approx(1.74).epsilon(1e-14));
  CHECK(disp == doctest::Approx(0.185).epsilon(1e-14));
}

TEST_CASE("simulate output is byte-stable") {
  const std::string quad =
      "simulate --method quadrature --source " + gaussian() +
      " --distortion 0.25 --n 50 --rate 0.8 --kind spherical";
  const RunResult a = run_cli(quad);
  const RunResult b = run_cli(quad);
  CHECK(a.status == 0);
  CHECK(a.output == b.output);
  const auto ls = lines(a.output);
  REQUIRE(ls.size() == 2);
  CHECK(ls[0] == "value,std_error,method,n,log_m,kind,seed");
  CHECK(ls[1].find(",quadrature,50,") != std::string::npos);
  CHECK(ls[1].find(",spherical,") != std::string::npos);
  // frozen reference for this cell
  CHECK(std::stod(ls[1]) == doctest::Approx(0.2372439589405923).epsilon(1e-9));

  const std::string cond =
      "simulate --method conditional --source " + gaussian() +
      " --distortion 0.25 --n 32 --rate 0.75 --samples 2000 --seed 7";
  const RunResult c = run_cli(cond);
  const RunResult d = run_cli(cond);
  CHECK(c.status == 0);
  CHECK(c.output == d.output);
  // worker count never changes the bytes
  const RunResult e = run_cli(cond + " --workers 3");
  CHECK(e.output == c.output);
}

TEST_CASE("simulate surfaces capability and resource errors") {
  const RunResult cap = run_cli("simulate --method quadrature --source " + ternary() +
                                " --distortion 0.25 --n 50 --rate 0.8");
  CHECK(cap.status == 3);
  CHECK(cap.output.find("conditional") != std::string::npos);

  const RunResult res = run_cli("simulate --method direct --source " + gaussian() +
                                " --distortion 0.25 --n 8 --m-count 1073741824");
  CHECK(res.status == 4);
  CHECK(res.output.find("m_count") != std::string::npos);
}

TEST_CASE("source config errors exit with the config status") {
  const auto bad_pmf = write_temp("gcrd_cli_bad_pmf.json",
                                  R"({"kind": "discrete", "support": [1.0, 2.0], "pmf": [0.5, 0.4]})");
  const RunResult a = run_cli("moments --source " + bad_pmf.string());
  CHECK(a.status == 2);
  CHECK(a.output.find("pmf") != std::string::npos);

  const auto malformed = write_temp("gcrd_cli_malformed.json", "{ \"kind\": ");
  const RunResult b = run_cli("moments --source " + malformed.string());
  CHECK(b.status == 2);
  CHECK(b.output.find("JSON parse error") != std::string::npos);
  CHECK(b.output.find(":1:") != std::string::npos);  // line:col locator

  const auto unknown = write_temp("gcrd_cli_unknown_key.json",
                                  R"({"kind": "gaussian", "variance": 1.0, "bogus": 2.0})");
  const RunResult c = run_cli("moments --source " + unknown.string());
  CHECK(c.status == 2);
  CHECK(c.output.find("bogus") != std::string::npos);

  const RunResult d = run_cli("moments --source /nonexistent/gcrd.json");
  CHECK(d.status == 2);
}

TEST_CASE("second-order table and the bits flag") {
  const std::string base = "second-order --source " + gaussian() +
                           " --distortion 0.25 --epsilon 0.5 --n 100";
  const RunResult nats = run_cli(base);
  CHECK(nats.status == 0);
  const auto nl = lines(nats.output);
  REQUIRE(nl.size() == 2);
  CHECK(nl[0] == "n,log_m,rate_nats_per_symbol");

  const RunResult bits = run_cli(base + " --bits");
  CHECK(bits.status == 0);
  const auto bl = lines(bits.output);
  REQUIRE(bl.size() == 2);
  CHECK(bl[0] == "n,log_m,rate_bits_per_symbol");
  // at epsilon 1/2 the target is exactly the first-order term: 1 bit/symbol
  double n_val, log_m, rate;
  char comma;
  std::istringstream row(bl[1]);
  row >> n_val >> comma >> log_m >> comma >> rate;
  CHECK(n_val == 100);
  CHECK(log_m == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(rate == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exponent table marks the zero-exponent region") {
  const RunResult r = run_cli("exponents --source " + gaussian() +
                              " --distortion 0.25 --r-min 0.5 --r-max 1 --r-steps 3");
  CHECK(r.status == 0);
  const auto ls = lines(r.output);
  REQUIRE(ls.size() == 4);
  CHECK(ls[0] == "R,alpha_sp,E_sp,alpha_iid,E_iid");
  CHECK(ls[1] == "0.5,nan,0,nan,0");
  CHECK(ls[3].find("nan") == std::string::npos);
}

TEST_CASE("exponents emit a companion plot script") {
  const std::filesystem::path csv =
      std::filesystem::temp_directory_path() / "gcrd_cli_exponents.csv";
  const std::filesystem::path gp =
      std::filesystem::temp_directory_path() / "gcrd_cli_exponents.gp";
  std::filesystem::remove(csv);
  std::filesystem::remove(gp);

  const RunResult r = run_cli("exponents --source " + gaussian() +
                              " --distortion 0.25 --r-steps 5 --emit-plot --out " + csv.string());
  CHECK(r.status == 0);
  REQUIRE(std::filesystem::exists(csv));
  REQUIRE(std::filesystem::exists(gp));
  std::ifstream in(gp);
  std::stringstream script;
  script << in.rdbuf();
  CHECK(script.str().find("plot '" + csv.string() + "'") != std::string::npos);

  // the script must reference a CSV on disk, so --out is mandatory,
  // and the check fires before any of the curve is computed or printed
  const RunResult bad = run_cli("exponents --source " + gaussian() +
                                " --distortion 0.25 --emit-plot");
  CHECK(bad.status == 2);
  CHECK(bad.output.find("R,alpha_sp") == std::string::npos);
}

TEST_CASE("usage errors exit with the config status") {
  CHECK(run_cli("moments --source " + gaussian() + " --nope").status == 2);
  CHECK(run_cli("simulate --source " + gaussian() + " --distortion 0.25").status == 2);
  CHECK(run_cli("simulate --source " + gaussian() +
                " --distortion 0.25 --n 16 --log-m 4 --rate 0.5").status == 2);
  CHECK(run_cli("simulate --source " + gaussian() + " --distortion 0.25 --n 16").status == 2);
  CHECK(run_cli("").status == 2);  // a subcommand is required
  CHECK(run_cli("--help").status == 0);

  // a distortion outside (0, sigma2) is a user mistake, not an internal failure
  const RunResult bad_d = run_cli("simulate --source " + gaussian() +
                                  " --distortion 1.5 --method quadrature --n 10 --log-m 8");
  CHECK(bad_d.status == 2);
  CHECK(bad_d.output.find("--distortion") != std::string::npos);
  CHECK(run_cli("exponents --source " + gaussian() + " --distortion 0").status == 2);
}
