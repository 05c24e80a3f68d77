#include "hyperheat/horospheric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hyperheat/error.hpp"
#include "hyperheat/quadrature.hpp"

namespace hyperheat {

namespace {

double line_gaussian(double x, double t) {
  return std::exp(-x * x / (4.0 * t)) / std::sqrt(4.0 * std::numbers::pi * t);
}

// int_lo^hi E_1(., t), using the erfc tail on the side where it is accurate.
double line_gaussian_mass(double lo, double hi, double t) {
  double scale = 1.0 / (2.0 * std::sqrt(t));
  if (hi <= 0.0) return 0.5 * (std::erfc(-hi * scale) - std::erfc(-lo * scale));
  return 0.5 * (std::erfc(lo * scale) - std::erfc(hi * scale));
}

void require_valid(const HoroField& v) {
  if (v.n < 2) throw Error(ErrorCode::DimensionOutOfRange, "dimension must be >= 2");
  if (v.z.size() < 2 || v.z.size() != v.values.size()) {
    throw Error(ErrorCode::GridMismatch, "z-grid and values must match and hold >= 2 points");
  }
  for (std::size_t i = 1; i < v.z.size(); ++i) {
    if (!(v.z[i] > v.z[i - 1])) throw Error(ErrorCode::DegenerateGrid, "z-grid must increase strictly");
  }
}

}  // namespace

std::vector<double> uniform_points(double lo, double hi, int count) {
  if (count < 2 || !(hi > lo)) throw Error(ErrorCode::DegenerateGrid, "need count >= 2 and hi > lo");
  std::vector<double> z(count);
  for (int i = 0; i < count; ++i) z[i] = lo + (hi - lo) * i / (count - 1);
  return z;
}

std::vector<double> drift_output_grid(const HoroField& v0, double T) {
  require_valid(v0);
  double h = (v0.z.back() - v0.z.front()) / (v0.z.size() - 1);
  double shift = (v0.n - 1) * T;
  double pad = 10.0 * std::sqrt(T) + 1.0;
  double lo = v0.z.front() + shift - pad;
  double hi = v0.z.back() + shift + pad;
  int count = static_cast<int>(std::ceil((hi - lo) / h)) + 1;
  return uniform_points(lo, lo + h * (count - 1), count);
}

HoroField exact_drift_solution(const HoroField& v0, double T, const std::vector<double>& z_out) {
  require_valid(v0);
  if (!(T > 0.0)) throw Error(ErrorCode::NonpositiveTime, "T must be positive");
  double peak = 0.0;
  for (double v : v0.values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonintegrableData, "data not finite");
    peak = std::max(peak, std::abs(v));
  }
  double edge = std::max(std::abs(v0.values.front()), std::abs(v0.values.back()));
  if (edge > 1e-12 * peak) {
    throw Error(ErrorCode::NonintegrableData,
                "data does not decay at the ends of its grid (edge value " + std::to_string(edge) + ")");
  }

  // Segments carrying nonzero data; the rest contribute exactly zero.
  std::vector<std::size_t> active;
  for (std::size_t j = 0; j + 1 < v0.z.size(); ++j) {
    if (v0.values[j] != 0.0 || v0.values[j + 1] != 0.0) active.push_back(j);
  }

  const double shift = (v0.n - 1) * T;
  HoroField out{v0.n, z_out, std::vector<double>(z_out.size(), 0.0), v0.time + T};
  std::vector<double> pieces;
  for (std::size_t k = 0; k < z_out.size(); ++k) {
    const double c = z_out[k] - shift;
    pieces.clear();
    for (std::size_t j : active) {
      // v0 = alpha + beta zeta on [zeta_j, zeta_{j+1}]; with s = c - zeta,
      // int (alpha + beta (c - s)) E_1(s, T) ds over [c - zeta_{j+1}, c - zeta_j].
      double za = v0.z[j], zb = v0.z[j + 1];
      double beta = (v0.values[j + 1] - v0.values[j]) / (zb - za);
      double alpha = v0.values[j] - beta * za;
      double sa = c - za, sb = c - zb;
      double mass_part = line_gaussian_mass(sb, sa, T);
      double moment_part = 2.0 * T * (line_gaussian(sa, T) - line_gaussian(sb, T));
      pieces.push_back((alpha + beta * c) * mass_part + beta * moment_part);
    }
    out.values[k] = pairwise_sum(pieces);
  }
  return out;
}

HoroField exact_drift_solution(const HoroField& v0, double T) {
  return exact_drift_solution(v0, T, drift_output_grid(v0, T));
}

HoroField exact_drift_solution(const PointMass& p, double t, const std::vector<double>& z_out) {
  if (p.n < 2) throw Error(ErrorCode::DimensionOutOfRange, "dimension must be >= 2");
  if (!(t > 0.0)) throw Error(ErrorCode::NonpositiveTime, "t must be positive");
  HoroField out{p.n, z_out, std::vector<double>(z_out.size()), t};
  for (std::size_t k = 0; k < z_out.size(); ++k) {
    out.values[k] = p.mass * line_gaussian(z_out[k] - p.z0 - (p.n - 1) * t, t);
  }
  return out;
}

double horo_error(const HoroField& v) {
  require_valid(v);
  if (!(v.time > 0.0)) throw Error(ErrorCode::NonpositiveTime, "field time must be positive");
  const double root_t = std::sqrt(v.time);
  double err = 0.0;
  for (std::size_t k = 0; k < v.z.size(); ++k) {
    double xi = (v.z[k] - (v.n - 1) * v.time) / root_t;
    err = std::max(err, std::abs(root_t * v.values[k] - line_gaussian(xi, 1.0)));
  }
  return err;
}

double horo_mass(const HoroField& v) {
  require_valid(v);
  std::vector<double> pieces(v.z.size() - 1);
  for (std::size_t k = 0; k + 1 < v.z.size(); ++k) {
    pieces[k] = 0.5 * (v.z[k + 1] - v.z[k]) * (v.values[k] + v.values[k + 1]);
  }
  return pairwise_sum(pieces);
}

double horo_argmax(const HoroField& v) {
  require_valid(v);
  auto it = std::max_element(v.values.begin(), v.values.end());
  std::size_t i = static_cast<std::size_t>(it - v.values.begin());
  if (i == 0 || i + 1 == v.values.size()) return v.z[i];
  double y0 = v.values[i - 1], y1 = v.values[i], y2 = v.values[i + 1];
  double h = 0.5 * (v.z[i + 1] - v.z[i - 1]);
  double denom = y0 - 2.0 * y1 + y2;
  if (denom >= 0.0) return v.z[i];
  return v.z[i] + 0.5 * h * (y0 - y2) / denom;
}

double argmax_drift_speed(const HoroField& v0, double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::NonpositiveTime, "t must be positive");
  double first = horo_argmax(exact_drift_solution(v0, t));
  double second = horo_argmax(exact_drift_solution(v0, 2.0 * t));
  return (second - first) / t;
}

}  // namespace hyperheat
