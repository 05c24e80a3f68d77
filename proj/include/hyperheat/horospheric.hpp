#pragma once

#include <cmath>
#include <vector>

namespace hyperheat {

/// Horospheric profile v(z, t), z = log y, on a uniform or nonuniform z-grid.
struct HoroField {
  int n = 3;
  std::vector<double> z;
  std::vector<double> values;
  double time = 0.0;
};

/// Point mass at z0 at time 0.
struct PointMass {
  int n = 3;
  double z0 = 0.0;
  double mass = 1.0;
};

inline double z_from_y(double y) { return std::log(y); }
inline double y_from_z(double z) { return std::exp(z); }

/// Uniform grid of `count` points on [lo, hi].
std::vector<double> uniform_points(double lo, double hi, int count);

/// Grid that follows data on [lo, hi] to time T: [lo + (n-1) T - pad, hi + (n-1) T + pad]
/// with pad = 10 sqrt(T) + 1 and the spacing of the input grid.
std::vector<double> drift_output_grid(const HoroField& v0, double T);

/// Solution of v_t = v_zz - (n-1) v_z at v0.time + T, as the exact convolution
/// of the piecewise-linear interpolant of v0 with E_1(. - (n-1) T, T).
/// Throws NonintegrableData when v0 is not small at both ends of its grid.
HoroField exact_drift_solution(const HoroField& v0, double T, const std::vector<double>& z_out);
HoroField exact_drift_solution(const HoroField& v0, double T);

/// mass * E_1(z - z0 - (n-1) t, t) at time t.
HoroField exact_drift_solution(const PointMass& p, double t, const std::vector<double>& z_out);

/// sup_z |sqrt(t) v(z, t) - E_1(xi, 1)|, xi = (z - (n-1) t) / sqrt(t).
double horo_error(const HoroField& v);

/// Trapezoid integral of v over its grid.
double horo_mass(const HoroField& v);

/// Location of the maximum of v, refined by a parabola through the top three samples.
double horo_argmax(const HoroField& v);

/// (argmax at 2t - argmax at t) / t for data v0 at time 0.
double argmax_drift_speed(const HoroField& v0, double t);

}  // namespace hyperheat
