#pragma once

#include <span>
#include <vector>

#include "hyperheat/kernel.hpp"
#include "hyperheat/radial.hpp"

namespace hyperheat {

/// Radius enclosing half of the profile's total mass (linear interpolation).
/// Throws MassDeficit when the total is below 0.9.
double half_mass_radius(const MassProfile& profile);

/// Radius where d/dt G_(n)(r, t) changes sign. n = 3 returns sqrt(6t + 4t^2);
/// other odd n solve d/dt log G = 0 by bracketing.
double sign_change_radius(int n, double t);

/// Kernel mass inside the annulus |r - (n-1) t| <= k sqrt(t), by quadrature.
double annulus_mass_fraction(const KernelSpec& spec, double t, double k);

/// Same annulus, read off a mass profile (for solver fields, e.g. even n),
/// as a fraction of the profile's total.
double annulus_mass_fraction(const MassProfile& profile, double k);

/// rho_bar(xi, t) = sqrt(t) rho((n-1) t + xi sqrt(t), t). Throws OutOfCone for
/// xi < -(n-1) sqrt(t).
std::vector<double> rescaled_profile(const KernelSpec& spec, double t, std::span<const double> xi);

/// int_0^oo |rho(r, t) - E_1(r - (n-1) t, t)| dr over [0, (n-1) t + 12 sqrt(t)],
/// with the Davies bound for rho and the Gaussian tail beyond the cut-off in
/// tail_bound.
BoundedIntegral gaussian_l1_error(const KernelSpec& spec, double t);

/// Drift-corrected and rescaled coordinates of radial samples.
struct DriftFrame {
  int n = 3;
  double t = 1.0;
  std::vector<double> s;
  std::vector<double> xi;
};

DriftFrame make_drift_frame(int n, double t, std::span<const double> r);

}  // namespace hyperheat
