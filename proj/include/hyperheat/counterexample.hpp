#pragma once

#include "hyperheat/log_scalar.hpp"

namespace hyperheat {

/// Unit mass at the point x_a at distance a from the pole of H^3, observed at
/// time t; u(x, t) = G_t(d(x_a, x)).
struct DisplacedConfig {
  double a = 1.0;
  double t = 1.0;
};

/// log G_t(L) with L the distance from (r, theta) to the displaced pole.
LogScalar displaced_value_log(const DisplacedConfig& cfg, double r, double theta);

/// Axis ratio in both readings: G_t(r-a)/G_t(r) and G_t(r-a)/G_t(a).
struct AxisRatio {
  double centered = 0.0;
  double literal = 0.0;
};

/// Requires r > a. For the centered reading this equals
/// e^{ar/2t} e^{-a^2/4t} (r-a) sinh r / (r sinh(r-a)).
AxisRatio axis_ratio(double a, double r, double t);

struct PointwiseGap {
  /// t^{3/2} e^{t} |G_t(r-a) - G_t(r)|.
  double value = 0.0;
  /// Q_3(r-a) - Q_3(r).
  double limit = 0.0;
};

PointwiseGap pointwise_gap(double a, double r, double t);

struct DisplacementL1 {
  /// ||(u - G_t)_+||_1.
  double positive = 0.0;
  /// ||(G_t - u)_+||_1.
  double negative = 0.0;
  /// int u dmu over the truncated domain.
  double displaced_mass = 0.0;
  /// Sum of quadrature error estimates over the three integrals.
  double quadrature_error = 0.0;
};

/// Axisymmetric 2D integrals over r in [0, 2t + 12 sqrt(t)], theta in [0, pi]:
/// adaptive Gauss-Legendre in r, and in cos(theta) on each side of the
/// angle where d(x_a, x) = r.
DisplacementL1 displacement_l1(double a, double t);

/// ||(u - G_t)_+||_{L^1(H^3)}.
double positive_part_l1(double a, double t);

/// On-axis value of the two half-masses at distance a on either side of the
/// pole: (G_t(r-a) + G_t(r+a)) / 2. Requires r > a.
double two_mass_value(double a, double r, double t);
/// two_mass_value / G_t(r).
double two_mass_ratio(double a, double r, double t);

struct FarFieldBound {
  /// G_t(r-a) / G_{t+eps}(r).
  double ratio = 0.0;
  /// 2 e^a exp(-r (eps r - 2 a t) / 4 t^2).
  double literal_bound = 0.0;
  /// e^{eps} * literal_bound, which carries the e^{-t}/e^{-(t+eps)} factor.
  double corrected_bound = 0.0;
};

/// Requires r > a, eps > 0.
FarFieldBound far_field_delayed_bound(double a, double eps, double r, double t);

}  // namespace hyperheat
