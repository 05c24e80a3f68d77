#include "hyperheat/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hyperheat/detail/kernel_expr.hpp"
#include "hyperheat/error.hpp"

namespace hyperheat {

using detail::Base;
using detail::kPi;

namespace {

constexpr double kTinyRadius = 1e-100;
constexpr double kEvenFitRadius = 1e-3;

void require_positive_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw Error(ErrorCode::NonpositiveTime, "t = " + std::to_string(t));
  }
}

void require_radius(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw Error(ErrorCode::DomainError, "radius must be finite and >= 0, got " + std::to_string(r));
  }
}

void require_odd_supported(int n, int min_n) {
  if (n % 2 == 0) {
    throw Error(ErrorCode::EvenDimensionUnsupported,
                "no exact kernel for even n = " + std::to_string(n));
  }
  if (n < min_n || n > kMaxOddDimension) {
    throw Error(ErrorCode::DimensionOutOfRange,
                "exact kernels cover odd n in [" + std::to_string(min_n) + ", " +
                    std::to_string(kMaxOddDimension) + "], got " + std::to_string(n));
  }
}

template <Base B, typename T>
T log_kernel_dispatch(int n, const T& r, const T& t) {
  switch (n) {
    case 1: return detail::log_kernel<1, B>(r, t);
    case 3: return detail::log_kernel<3, B>(r, t);
    case 5: return detail::log_kernel<5, B>(r, t);
    case 7: return detail::log_kernel<7, B>(r, t);
    case 9: return detail::log_kernel<9, B>(r, t);
    case 11: return detail::log_kernel<11, B>(r, t);
    default: break;
  }
  throw Error(ErrorCode::DimensionOutOfRange, "n = " + std::to_string(n));
}

// The kernel is even and smooth in r. For n >= 7 and r below kEvenFitRadius,
// fit l(r) = c0 + c2 r^2 through r0 and 2 r0 instead of evaluating directly.
template <Base B>
double log_kernel_value(int n, double r, double t) {
  if (n >= 7 && r < kEvenFitRadius) {
    double r0 = kEvenFitRadius;
    double l0 = log_kernel_dispatch<B>(n, r0, t);
    double l1 = log_kernel_dispatch<B>(n, 2.0 * r0, t);
    double c2 = (l1 - l0) / (3.0 * r0 * r0);
    return l0 + c2 * (r * r - r0 * r0);
  }
  return log_kernel_dispatch<B>(n, std::max(r, kTinyRadius), t);
}

}  // namespace

KernelSpec::KernelSpec(int n) : n_(n), lambda1_(0.0), omega_n_(0.0) {
  if (n < 2) {
    throw Error(ErrorCode::DimensionOutOfRange, "dimension must be >= 2, got " + std::to_string(n));
  }
  lambda1_ = 0.25 * (n - 1) * (n - 1);
  omega_n_ = sphere_area(n);
}

double sphere_area(int n) {
  if (n < 2) {
    throw Error(ErrorCode::DimensionOutOfRange, "dimension must be >= 2, got " + std::to_string(n));
  }
  double half = 0.5 * n;
  return 2.0 * std::pow(kPi, half) / std::tgamma(half);
}

double geodesic_distance(double r, double a, double theta) {
  if (!(r >= 0.0) || !(a >= 0.0) || !std::isfinite(r) || !std::isfinite(a)) {
    throw Error(ErrorCode::DomainError, "radii must be finite and >= 0");
  }
  if (!(theta >= 0.0) || !(theta <= kPi)) {
    throw Error(ErrorCode::DomainError, "angle must lie in [0, pi], got " + std::to_string(theta));
  }
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  double half_gap = 0.5 * std::abs(r - a);
  double log_radial = half_gap > 0.0 ? 2.0 * detail::log_sinh(half_gap) : kNegInf;
  double sin_half = std::sin(0.5 * theta);
  double log_angular = (r > 0.0 && a > 0.0 && sin_half > 0.0)
                           ? detail::log_sinh(r) + detail::log_sinh(a) + 2.0 * std::log(sin_half)
                           : kNegInf;
  double hi = std::max(log_radial, log_angular);
  if (hi == kNegInf) return 0.0;
  double lo = std::min(log_radial, log_angular);
  double log_x = hi + std::log1p(std::exp(lo - hi));  // log sinh^2(L/2)
  double log_y = 0.5 * log_x;                          // log sinh(L/2)
  if (log_y > 300.0) {
    // asinh(y) = log(2y) + O(y^-2)
    return 2.0 * (log_y + detail::kLog2);
  }
  return 2.0 * std::asinh(std::exp(log_y));
}

LogScalar log_volume_weight(const KernelSpec& spec, double r) {
  require_radius(r);
  if (r == 0.0) return LogScalar::zero();
  return LogScalar::from_log(std::log(spec.omega_n()) + (spec.n() - 1) * detail::log_sinh(r));
}

LogScalar gaussian1d_log(double x, double t) {
  require_positive_time(t);
  return LogScalar::from_log(detail::log_line_kernel(x, t));
}

LogScalar kernel_log(const KernelSpec& spec, double r, double t) {
  require_odd_supported(spec.n(), 3);
  require_radius(r);
  require_positive_time(t);
  return LogScalar::from_log(log_kernel_value<Base::Closed3>(spec.n(), r, t));
}

LogScalar kernel_log_from_line(int n, double r, double t) {
  require_odd_supported(n, 1);
  require_radius(r);
  require_positive_time(t);
  return LogScalar::from_log(log_kernel_value<Base::Line>(n, r, t));
}

double kernel_log_dt(const KernelSpec& spec, double r, double t) {
  require_odd_supported(spec.n(), 3);
  require_radius(r);
  require_positive_time(t);
  using D = ad::Dual<double>;
  D rr = ad::constant(std::max(r, spec.n() >= 7 ? kEvenFitRadius : kTinyRadius));
  D tt = ad::variable(t);
  return log_kernel_dispatch<Base::Closed3>(spec.n(), rr, tt).der;
}

LogScalar davies_log(const KernelSpec& spec, double r, double t) {
  require_radius(r);
  require_positive_time(t);
  const int n = spec.n();
  double shifted = r + (n - 1) * t;
  double log_h = -0.5 * n * std::log(4.0 * kPi * t) - shifted * shifted / (4.0 * t) +
                 0.5 * (n - 3) * std::log1p(r + t) + std::log1p(r);
  return LogScalar::from_log(log_h);
}

double davies_ratio3(double r) {
  require_radius(r);
  if (r == 0.0) return 1.0;
  return 2.0 * r / ((1.0 + r) * -std::expm1(-2.0 * r));
}

DaviesEnvelope davies_envelope(const KernelSpec& spec) {
  switch (spec.n()) {
    case 3: return {spec, 1.0, 2.0};
    // Calibrated over r in [0.1, 10 (n-1) t], t in [0.5, 50] and rounded
    // outward; see calibrate_davies_envelope and test_kernel.cpp.
    case 5: return {spec, 0.74, 6.2};
    case 7: return {spec, 1.0, 39.0};
    default: break;
  }
  if (!spec.odd()) {
    throw Error(ErrorCode::EvenDimensionUnsupported,
                "no calibrated Davies constants for even n = " + std::to_string(spec.n()));
  }
  throw Error(ErrorCode::DimensionOutOfRange,
              "no calibrated Davies constants for n = " + std::to_string(spec.n()));
}

DaviesEnvelope calibrate_davies_envelope(const KernelSpec& spec, double r_lo, double r_hi_factor,
                                         double t_lo, double t_hi, int samples_r, int samples_t) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int j = 0; j < samples_t; ++j) {
    double t = t_lo * std::pow(t_hi / t_lo, static_cast<double>(j) / (samples_t - 1));
    double r_hi = r_hi_factor * (spec.n() - 1) * t;
    for (int i = 0; i < samples_r; ++i) {
      double r = r_lo * std::pow(r_hi / r_lo, static_cast<double>(i) / (samples_r - 1));
      double ratio = std::exp(kernel_log(spec, r, t).log_mag() - davies_log(spec, r, t).log_mag());
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
  }
  return {spec, lo, hi};
}

double q_profile(const KernelSpec& spec, double r) {
  require_odd_supported(spec.n(), 3);
  require_radius(r);
  if (spec.n() == 3) {
    return std::pow(4.0 * kPi, -1.5) * std::exp(-detail::log_sinhc(r));
  }
  // t^{3/2} e^{lambda_1 t} G(r, t) = Q(r) (1 + c/t + ...); extrapolate in 1/t.
  auto scaled = [&](double t) {
    return std::exp(1.5 * std::log(t) + spec.lambda1() * t + kernel_log(spec, r, t).log_mag());
  };
  double t = std::max(1e4, 100.0 * r * r);
  double q1 = scaled(t);
  double q2 = scaled(2.0 * t);
  double q = 2.0 * q2 - q1;
  if (!(std::abs(q - q2) <= 1e-3 * std::abs(q))) {
    throw Error(ErrorCode::QuadratureNonconvergence,
                "large-time limit not settled at r = " + std::to_string(r));
  }
  return q;
}

LogScalar weighted_density_log(const KernelSpec& spec, double r, double t) {
  LogScalar g = kernel_log(spec, r, t);
  return log_volume_weight(spec, r) * g;
}

double default_truncation(const KernelSpec& spec, double t) {
  return spec.mass_line(t) + 12.0 * std::sqrt(t);
}

QuadratureResult integrate_density(const KernelSpec& spec, double t, double lo, double hi,
                                   double abs_tol) {
  require_positive_time(t);
  lo = std::max(lo, 0.0);
  if (!(hi > lo)) return {};
  double peak = -std::numeric_limits<double>::infinity();
  constexpr int kProbe = 256;
  for (int i = 0; i <= kProbe; ++i) {
    double r = lo + (hi - lo) * i / kProbe;
    peak = std::max(peak, weighted_density_log(spec, r, t).log_mag());
  }
  double line = spec.mass_line(t);
  if (line > lo && line < hi) peak = std::max(peak, weighted_density_log(spec, line, t).log_mag());

  auto f = [&](double r) { return std::exp(weighted_density_log(spec, r, t).log_mag() - peak); };
  QuadratureOptions opts;
  opts.abs_tol = abs_tol;
  opts.initial_panels = std::max(16, static_cast<int>(std::ceil((hi - lo) / (0.5 * std::sqrt(t)))));
  QuadratureResult res = integrate(f, lo, hi, opts);
  double scale = std::exp(peak);
  res.value *= scale;
  res.error_estimate *= scale;
  return res;
}

double davies_tail_bound(const KernelSpec& spec, double t, double r_from) {
  DaviesEnvelope env = davies_envelope(spec);
  double log_scale = std::log(env.c_upper * spec.omega_n());
  auto majorant = [&](double r) {
    return std::exp(log_scale + (spec.n() - 1) * detail::log_sinh(std::max(r, kTinyRadius)) +
                    davies_log(spec, r, t).log_mag());
  };
  double width = 40.0 * std::sqrt(t) + 40.0;
  QuadratureOptions opts;
  opts.abs_tol = 1e-14;
  return integrate(majorant, r_from, r_from + width, opts).value;
}

BoundedIntegral kernel_mass(const KernelSpec& spec, double t, double r_max) {
  require_positive_time(t);
  double needed = default_truncation(spec, t);
  if (r_max < needed * (1.0 - 1e-12)) {
    throw Error(ErrorCode::DomainError, "r_max = " + std::to_string(r_max) +
                                            " is below (n-1)t + 12 sqrt(t) = " + std::to_string(needed));
  }
  QuadratureResult q = integrate_density(spec, t, 0.0, r_max);
  return {q.value, q.error_estimate, davies_tail_bound(spec, t, r_max)};
}

BoundedIntegral kernel_mass(const KernelSpec& spec, double t) {
  return kernel_mass(spec, t, default_truncation(spec, t));
}

}  // namespace hyperheat
