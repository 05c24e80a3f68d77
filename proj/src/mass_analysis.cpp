#include "hyperheat/mass_analysis.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <string>

#include "hyperheat/error.hpp"

namespace hyperheat {

double half_mass_radius(const MassProfile& profile) {
  const double total = profile.total();
  if (!(total >= 0.9)) {
    throw Error(ErrorCode::MassDeficit, "total mass " + std::to_string(total) + " is below 0.9");
  }
  const double half = 0.5 * total;
  const auto& x = profile.grid->nodes;
  const auto& m = profile.cumulative;
  auto it = std::lower_bound(m.begin(), m.end(), half);
  std::size_t i = static_cast<std::size_t>(it - m.begin());
  if (i == 0 || m[i] == half) return x[i];
  double frac = (half - m[i - 1]) / (m[i] - m[i - 1]);
  return x[i - 1] + frac * (x[i] - x[i - 1]);
}

double sign_change_radius(int n, double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::NonpositiveTime, "t = " + std::to_string(t));
  KernelSpec spec(n);
  if (!spec.odd()) {
    throw Error(ErrorCode::EvenDimensionUnsupported,
                "sign-change radius needs the exact kernel; n = " + std::to_string(n));
  }
  if (n == 3) return std::sqrt(6.0 * t + 4.0 * t * t);
  auto dlog = [&](double r) { return kernel_log_dt(spec, r, t); };
  double lo = 0.0;
  double hi = std::max(1.0, (n - 1) * t);
  while (dlog(hi) <= 0.0) {
    lo = hi;
    hi *= 2.0;
  }
  boost::uintmax_t iters = 200;
  auto tol = boost::math::tools::eps_tolerance<double>(50);
  auto [a, b] = boost::math::tools::toms748_solve(dlog, lo, hi, tol, iters);
  return 0.5 * (a + b);
}

double annulus_mass_fraction(const KernelSpec& spec, double t, double k) {
  if (!(t > 0.0)) throw Error(ErrorCode::NonpositiveTime, "t = " + std::to_string(t));
  if (!(k > 0.0)) throw Error(ErrorCode::DomainError, "k must be positive");
  double centre = spec.mass_line(t);
  double half_width = k * std::sqrt(t);
  return integrate_density(spec, t, std::max(0.0, centre - half_width), centre + half_width).value;
}

double annulus_mass_fraction(const MassProfile& profile, double k) {
  if (!(k > 0.0)) throw Error(ErrorCode::DomainError, "k must be positive");
  const double t = profile.time;
  if (!(t > 0.0)) throw Error(ErrorCode::NonpositiveTime, "profile time must be positive");
  const double total = profile.total();
  if (!(total > 0.0)) throw Error(ErrorCode::MassDeficit, "profile carries no mass");
  double centre = (profile.grid->n - 1) * t;
  double half_width = k * std::sqrt(t);
  return (profile.at(centre + half_width) - profile.at(centre - half_width)) / total;
}

std::vector<double> rescaled_profile(const KernelSpec& spec, double t, std::span<const double> xi) {
  if (!(t > 0.0)) throw Error(ErrorCode::NonpositiveTime, "t = " + std::to_string(t));
  const double root_t = std::sqrt(t);
  const double xi0 = -(spec.n() - 1) * root_t;
  std::vector<double> out;
  out.reserve(xi.size());
  for (double x : xi) {
    if (x < xi0) {
      throw Error(ErrorCode::OutOfCone,
                  "xi = " + std::to_string(x) + " lies below the cone edge " + std::to_string(xi0));
    }
    double r = std::max(0.0, spec.mass_line(t) + x * root_t);
    out.push_back(root_t * weighted_density_log(spec, r, t).value());
  }
  return out;
}

BoundedIntegral gaussian_l1_error(const KernelSpec& spec, double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::NonpositiveTime, "t = " + std::to_string(t));
  const double line = spec.mass_line(t);
  const double cut = default_truncation(spec, t);
  auto diff = [&](double r) {
    return std::abs(weighted_density_log(spec, r, t).value() - gaussian1d_log(r - line, t).value());
  };
  QuadratureOptions opts;
  opts.abs_tol = 1e-10;
  opts.initial_panels = std::max(16, static_cast<int>(std::ceil(cut / (0.5 * std::sqrt(t)))));
  QuadratureResult q = integrate(diff, 0.0, cut, opts);
  double gauss_tail = 0.5 * std::erfc((cut - line) / (2.0 * std::sqrt(t)));
  return {q.value, q.error_estimate, davies_tail_bound(spec, t, cut) + gauss_tail};
}

DriftFrame make_drift_frame(int n, double t, std::span<const double> r) {
  if (!(t > 0.0)) throw Error(ErrorCode::NonpositiveTime, "t = " + std::to_string(t));
  DriftFrame f{n, t, {}, {}};
  const double root_t = std::sqrt(t);
  for (double x : r) {
    double s = x - (n - 1) * t;
    f.s.push_back(s);
    f.xi.push_back(s / root_t);
  }
  return f;
}

}  // namespace hyperheat
