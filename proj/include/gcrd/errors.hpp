#pragma once

#include <stdexcept>
#include <string>

namespace gcrd {

// A requested operation is not supported by the given source model
// (e.g. analytic power density for a discrete source).
class capability_error : public std::runtime_error {
 public:
  explicit capability_error(const std::string& what) : std::runtime_error(what) {}
};

// A request would exceed a hard resource guard (e.g. direct simulation
// with more than 2^20 codewords).
class resource_error : public std::runtime_error {
 public:
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// Bad user-supplied configuration (JSON source files, CLI flag combinations).
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gcrd
