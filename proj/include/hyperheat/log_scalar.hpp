#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace hyperheat {

/// Nonnegative real stored as its natural logarithm.
///
/// Kernel values multiply e^{-lambda_1 t} by volume factors e^{(n-1) r} with
/// r ~ (n-1) t, so either factor alone leaves double range long before the
/// product does. Everything stays in log form until value() is called.
class LogScalar {
 public:
  constexpr LogScalar() = default;

  static constexpr LogScalar zero() { return LogScalar{}; }
  static constexpr LogScalar from_log(double log_mag) { return LogScalar{log_mag, false}; }
  static LogScalar from_value(double v) {
    return v > 0.0 ? from_log(std::log(v)) : zero();
  }

  constexpr bool is_zero() const { return is_zero_; }
  /// Natural log of the magnitude; -inf when zero.
  constexpr double log_mag() const {
    return is_zero_ ? -std::numeric_limits<double>::infinity() : log_mag_;
  }
  double value() const { return is_zero_ ? 0.0 : std::exp(log_mag_); }

  friend LogScalar operator*(LogScalar a, LogScalar b) {
    if (a.is_zero_ || b.is_zero_) return zero();
    return from_log(a.log_mag_ + b.log_mag_);
  }
  friend LogScalar operator/(LogScalar a, LogScalar b) {
    // Division by zero is not meaningful for magnitudes; treat as a caller bug.
    if (a.is_zero_) return zero();
    return from_log(a.log_mag_ - b.log_mag_);
  }
  friend LogScalar operator+(LogScalar a, LogScalar b) {
    if (a.is_zero_) return b;
    if (b.is_zero_) return a;
    double hi = std::max(a.log_mag_, b.log_mag_);
    double lo = std::min(a.log_mag_, b.log_mag_);
    return from_log(hi + std::log1p(std::exp(lo - hi)));
  }

  LogScalar pow(double p) const {
    if (is_zero_) return p == 0.0 ? from_log(0.0) : zero();
    return from_log(p * log_mag_);
  }

 private:
  constexpr LogScalar(double log_mag, bool is_zero) : log_mag_(log_mag), is_zero_(is_zero) {}

  double log_mag_ = 0.0;
  bool is_zero_ = true;
};

}  // namespace hyperheat
