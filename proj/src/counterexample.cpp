#include "hyperheat/counterexample.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "hyperheat/detail/kernel_expr.hpp"
#include "hyperheat/error.hpp"
#include "hyperheat/kernel.hpp"
#include "hyperheat/quadrature.hpp"

namespace hyperheat {

namespace {

const KernelSpec& spec3() {
  static const KernelSpec spec(3);
  return spec;
}

double log_g(double r, double t) { return kernel_log(spec3(), r, t).log_mag(); }

void require_beyond(double r, double a) {
  if (!(a >= 0.0)) throw Error(ErrorCode::DomainError, "displacement must be >= 0");
  if (!(r > a)) {
    throw Error(ErrorCode::DomainError,
                "need r > a, got r = " + std::to_string(r) + ", a = " + std::to_string(a));
  }
}

void require_time(double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::NonpositiveTime, "t = " + std::to_string(t));
}

// Distance from (r, cos theta = 1 - w) to the displaced pole:
// sinh^2(L/2) = sinh^2((r-a)/2) + sinh r sinh a w / 2.
double distance_from_gap(double r, double a, double w) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  double half_gap = 0.5 * std::abs(r - a);
  double log_radial = half_gap > 0.0 ? 2.0 * detail::log_sinh(half_gap) : kNegInf;
  double log_angular = (r > 0.0 && a > 0.0 && w > 0.0)
                           ? detail::log_sinh(r) + detail::log_sinh(a) + std::log(0.5 * w)
                           : kNegInf;
  double hi = std::max(log_radial, log_angular);
  if (hi == kNegInf) return 0.0;
  double lo = std::min(log_radial, log_angular);
  double log_y = 0.5 * (hi + std::log1p(std::exp(lo - hi)));
  if (log_y > 300.0) return 2.0 * (log_y + detail::kLog2);
  return 2.0 * std::asinh(std::exp(log_y));
}

}  // namespace

LogScalar displaced_value_log(const DisplacedConfig& cfg, double r, double theta) {
  require_time(cfg.t);
  return kernel_log(spec3(), geodesic_distance(r, cfg.a, theta), cfg.t);
}

AxisRatio axis_ratio(double a, double r, double t) {
  require_beyond(r, a);
  require_time(t);
  double top = log_g(r - a, t);
  return {std::exp(top - log_g(r, t)), std::exp(top - log_g(a, t))};
}

PointwiseGap pointwise_gap(double a, double r, double t) {
  require_beyond(r, a);
  require_time(t);
  const double scale = 1.5 * std::log(t) + spec3().lambda1() * t;
  double near = std::exp(scale + log_g(r - a, t));
  double far = std::exp(scale + log_g(r, t));
  return {std::abs(near - far), q_profile(spec3(), r - a) - q_profile(spec3(), r)};
}

DisplacementL1 displacement_l1(double a, double t) {
  if (!(a >= 0.0)) throw Error(ErrorCode::DomainError, "displacement must be >= 0");
  require_time(t);
  const double r_end = 2.0 * t + 12.0 * std::sqrt(t);
  const double tanh_half_a = std::tanh(0.5 * a);

  QuadratureOptions inner;
  inner.abs_tol = 1e-11;
  inner.initial_panels = 2;

  // Per radius: rho(r)/2 times the three angular integrals in w = 1 - cos theta.
  auto angular = [&](double r) -> std::array<double, 4> {
    const double log_gr = log_g(r, t);
    const double rho_half = 0.5 * weighted_density_log(spec3(), r, t).value();
    if (rho_half == 0.0) return {0.0, 0.0, 0.0, 0.0};
    auto excess = [&](double w) {
      return std::expm1(detail::log_kernel3(distance_from_gap(r, a, w), t) - log_gr);
    };
    // d(x_a, x) < r exactly for w < w_star.
    double w_star = a == 0.0 ? 0.0 : std::clamp(1.0 - tanh_half_a / std::tanh(r), 0.0, 2.0);
    QuadratureResult pos{}, neg{};
    if (w_star > 0.0) pos = integrate(excess, 0.0, w_star, inner);
    if (w_star < 2.0) {
      neg = integrate([&](double w) { return -excess(w); }, w_star, 2.0, inner);
    }
    // int_0^2 e^{dl} dw = 2 + int (e^{dl} - 1) dw
    double mass = 2.0 + pos.value - neg.value;
    double err = pos.error_estimate + neg.error_estimate;
    return {rho_half * pos.value, rho_half * neg.value, rho_half * mass, rho_half * err};
  };

  std::vector<double> breaks{0.0};
  for (double b : {0.5 * a, a, 2.0 * t}) {
    if (b > breaks.back() && b < r_end) breaks.push_back(b);
  }
  breaks.push_back(r_end);

  QuadratureOptions outer;
  outer.abs_tol = 1e-9;
  outer.initial_panels =
      std::max(16, static_cast<int>(std::ceil(r_end / (0.5 * std::sqrt(t)))));

  DisplacementL1 out;
  auto component = [&](int k) {
    return integrate([&](double r) { return angular(r)[k]; }, breaks, outer);
  };
  QuadratureResult pos = component(0);
  QuadratureResult neg = component(1);
  QuadratureResult mass = component(2);
  out.positive = pos.value;
  out.negative = neg.value;
  out.displaced_mass = mass.value;
  out.quadrature_error = pos.error_estimate + neg.error_estimate + mass.error_estimate;
  return out;
}

double positive_part_l1(double a, double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::NonpositiveTime, "t = " + std::to_string(t));
  if (a == 0.0) return 0.0;
  return displacement_l1(a, t).positive;
}

double two_mass_value(double a, double r, double t) {
  require_beyond(r, a);
  require_time(t);
  return 0.5 * (std::exp(log_g(r - a, t)) + std::exp(log_g(r + a, t)));
}

double two_mass_ratio(double a, double r, double t) {
  require_beyond(r, a);
  require_time(t);
  double base = log_g(r, t);
  return 0.5 * (std::exp(log_g(r - a, t) - base) + std::exp(log_g(r + a, t) - base));
}

FarFieldBound far_field_delayed_bound(double a, double eps, double r, double t) {
  require_beyond(r, a);
  require_time(t);
  if (!(eps > 0.0)) throw Error(ErrorCode::DomainError, "eps must be positive");
  FarFieldBound out;
  out.ratio = std::exp(log_g(r - a, t) - log_g(r, t + eps));
  out.literal_bound = 2.0 * std::exp(a - r * (eps * r - 2.0 * a * t) / (4.0 * t * t));
  out.corrected_bound = std::exp(eps) * out.literal_bound;
  return out;
}

}  // namespace hyperheat
