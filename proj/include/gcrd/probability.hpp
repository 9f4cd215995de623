#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gcrd {

// A probability value, kept honest at module boundaries: the checked
// constructor rejects anything outside [0, 1], while from_log saturates,
// which is the right behaviour when converting log-space tail values that
// may round a hair past the ends.
class Probability {
 public:
  Probability() = default;

  explicit Probability(double v) : v_(v) {
    if (!(v >= 0.0 && v <= 1.0))
      throw std::domain_error("Probability: value outside [0, 1]");
  }

  static Probability from_log(double log_p) {
    Probability p;
    if (log_p >= 0.0)
      p.v_ = 1.0;
    else
      p.v_ = std::exp(log_p);
    return p;
  }

  double value() const { return v_; }

  // Natural log; -inf at zero.
  double log() const {
    return v_ > 0.0 ? std::log(v_) : -std::numeric_limits<double>::infinity();
  }

 private:
  double v_ = 0.0;
};

// Log-domain probability: value <= 0 with -inf meaning exactly zero.
class LogProbability {
 public:
  LogProbability() = default;

  explicit LogProbability(double log_p) : v_(log_p) {
    // Allow a whisker of positive rounding noise, clamp it to zero.
    if (log_p > 1e-9)
      throw std::domain_error("LogProbability: log value above 0");
    if (log_p > 0.0) v_ = 0.0;
  }

  double value() const { return v_; }
  Probability prob() const { return Probability::from_log(v_); }

 private:
  double v_ = -std::numeric_limits<double>::infinity();
};

}  // namespace gcrd
