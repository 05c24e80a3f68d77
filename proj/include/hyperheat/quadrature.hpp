#pragma once

#include <functional>
#include <span>

namespace hyperheat {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  /// The interval is first cut into this many equal panels; pick it so that
  /// no panel is much wider than the narrowest feature of the integrand.
  int initial_panels = 16;
  int max_depth = 40;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int panels = 0;
};

/// Adaptive composite 15-point Gauss-Legendre quadrature with recursive
/// bisection. A panel is accepted when the two-half estimate agrees with the
/// whole-panel estimate to within its share of abs_tol. Panel sums are
/// reduced pairwise in a fixed order, so results are reproducible bit for bit.
///
/// Throws QuadratureNonconvergence when a panel still fails after max_depth
/// bisections.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts = {});

/// Same, over consecutive intervals [breaks[i], breaks[i+1]].
QuadratureResult integrate(const std::function<double(double)>& f, std::span<const double> breaks,
                           const QuadratureOptions& opts = {});

/// Fixed 15-point Gauss-Legendre rule on [a, b] (no adaptivity).
double gauss_legendre_15(const std::function<double(double)>& f, double a, double b);

/// Pairwise (cascade) summation; deterministic order, O(log n) error growth.
double pairwise_sum(std::span<const double> values);

}  // namespace hyperheat
