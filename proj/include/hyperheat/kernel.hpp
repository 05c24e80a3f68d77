#pragma once

#include "hyperheat/log_scalar.hpp"
#include "hyperheat/quadrature.hpp"

namespace hyperheat {

/// Largest odd dimension with an exact kernel (nested Dual depth grows by one
/// per two dimensions).
inline constexpr int kMaxOddDimension = 11;

/// Dimension n >= 2 of H^n with its spectral gap and unit-sphere measure.
class KernelSpec {
 public:
  /// Throws DimensionOutOfRange for n < 2.
  explicit KernelSpec(int n);

  int n() const { return n_; }
  /// Bottom of the spectrum, (n-1)^2/4.
  double lambda1() const { return lambda1_; }
  /// Measure of the unit (n-1)-sphere.
  double omega_n() const { return omega_n_; }
  bool odd() const { return n_ % 2 == 1; }
  /// Radius r = (n-1) t around which the kernel's mass travels.
  double mass_line(double t) const { return (n_ - 1) * t; }

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;

 private:
  int n_;
  double lambda1_;
  double omega_n_;
};

/// 2 pi^{n/2} / Gamma(n/2).
double sphere_area(int n);

/// Hyperbolic distance between points at radii r and a from the pole that
/// subtend the angle theta there. Evaluated through
///   sinh^2(L/2) = sinh^2((r-a)/2) + sinh r sinh a sin^2(theta/2),
/// which has no cancellation at theta = 0 and no overflow for large radii.
double geodesic_distance(double r, double a, double theta);

/// log(omega_n sinh^{n-1} r); zero at r = 0.
LogScalar log_volume_weight(const KernelSpec& spec, double r);

/// E_1(x, t) = (4 pi t)^{-1/2} e^{-x^2/4t}.
LogScalar gaussian1d_log(double x, double t);

/// Exact heat kernel G_(n)(r, t) for odd n. n = 3 uses the closed form; larger
/// n apply the dimension recurrence to it by exact differentiation.
LogScalar kernel_log(const KernelSpec& spec, double r, double t);

/// The same kernel, but with the recurrence started from the line Gaussian
/// (n = 1 returns E_1 itself). Kept as an independent route for cross-checks.
LogScalar kernel_log_from_line(int n, double r, double t);

/// d/dt log G_(n)(r, t), exact (forward-mode in t).
double kernel_log_dt(const KernelSpec& spec, double r, double t);

/// Davies comparison function
///   h_n = (4 pi t)^{-n/2} e^{-(r + (n-1) t)^2 / 4t} (1 + r + t)^{(n-3)/2} (1 + r).
/// Defined for every n >= 2.
LogScalar davies_log(const KernelSpec& spec, double r, double t);

/// Two-sided constants with c_lower h_n <= G_(n) <= c_upper h_n.
struct DaviesEnvelope {
  KernelSpec spec;
  double c_lower;
  double c_upper;
};

/// Frozen envelope for n in {3, 5, 7}: exact [1, 2] for n = 3, calibrated
/// with calibrate_davies_envelope for the others. Throws
/// EvenDimensionUnsupported / DimensionOutOfRange otherwise.
DaviesEnvelope davies_envelope(const KernelSpec& spec);

/// Min and max of G/h over a log-spaced sample of r in [r_lo, r_hi_factor*(n-1)*t]
/// and t in [t_lo, t_hi].
DaviesEnvelope calibrate_davies_envelope(const KernelSpec& spec, double r_lo,
                                         double r_hi_factor, double t_lo, double t_hi,
                                         int samples_r = 400, int samples_t = 40);

/// G_3 / h_3 = 2r / ((1 + r)(1 - e^{-2r})), with its limit 1 at r = 0.
double davies_ratio3(double r);

/// Q_n(r) = lim_{t->oo} t^{3/2} e^{lambda_1 t} G_(n)(r, t). Exact for n = 3
/// with C = (4 pi)^{-3/2}; otherwise a Richardson-extrapolated large-t value.
double q_profile(const KernelSpec& spec, double r);

/// log rho(r, t) = log(omega_n sinh^{n-1} r G_(n)(r, t)).
LogScalar weighted_density_log(const KernelSpec& spec, double r, double t);

/// A truncated improper integral together with what was left out.
struct BoundedIntegral {
  double value = 0.0;
  double quadrature_error = 0.0;
  /// Upper bound for the discarded tail, from the Davies envelope.
  double tail_bound = 0.0;
};

/// Integral of the Davies majorant omega_n sinh^{n-1} c_upper h_n over [r_from, oo).
double davies_tail_bound(const KernelSpec& spec, double t, double r_from);

/// Default truncation radius (n-1) t + 12 sqrt(t).
double default_truncation(const KernelSpec& spec, double t);

/// Total mass of G_(n)(., t) over [0, r_max]; r_max must be at least
/// default_truncation(spec, t).
BoundedIntegral kernel_mass(const KernelSpec& spec, double t, double r_max);
BoundedIntegral kernel_mass(const KernelSpec& spec, double t);

/// Integral of rho(., t) over [lo, hi] using peak normalisation and the
/// adaptive Gauss-Legendre rule. Shared by the mass diagnostics.
QuadratureResult integrate_density(const KernelSpec& spec, double t, double lo, double hi,
                                   double abs_tol = 1e-10);

}  // namespace hyperheat
