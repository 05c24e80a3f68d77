#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hyperheat/kernel.hpp"

namespace hyperheat {

enum class Grading { Uniform, Graded };

/// Nodes 0 = r_0 < r_1 < ... < r_N = r_max with two sets of volume weights:
///  - weights: trapezoid weights of omega_n sinh^{n-1} r (zero at the pole),
///    used for norms and the mass function;
///  - control_volumes: omega_n times the exact integral of sinh^{n-1} over
///    [r_{i-1/2}, r_{i+1/2}] (the pole cell is [0, r_{1/2}]), the quantity the
///    solver conserves.
struct RadialGrid {
  int n = 3;
  std::vector<double> nodes;
  /// omega_n sinh^{n-1}(r_i).
  std::vector<double> density;
  std::vector<double> weights;
  std::vector<double> control_volumes;

  std::size_t size() const { return nodes.size(); }
  double r_max() const { return nodes.back(); }

  friend bool operator==(const RadialGrid&, const RadialGrid&) = default;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// N + 1 nodes on [0, r_max]. Graded grids follow the node density
/// 1 + 2 e^{-r} + 2 exp(-(r - focus)^2 / 2 w^2), w = max(1, sqrt(focus)),
/// which refines the pole and a band around focus (typically the mass line
/// (n-1) t); focus < 0 refines the pole only.
/// Throws DegenerateGrid for N < 16 or r_max <= 0, DimensionOutOfRange for n < 2.
RadialGrid build_grid(int n, double r_max, int N, Grading grading = Grading::Uniform,
                      double focus = -1.0);

/// Grid with explicit nodes; they must start at 0 and increase strictly.
RadialGrid grid_from_nodes(int n, std::vector<double> nodes);

/// A radial profile sampled on a grid at a given time.
struct RadialField {
  GridPtr grid;
  std::vector<double> values;
  double time = 0.0;
};

RadialField make_field(GridPtr grid, std::vector<double> values, double time);
RadialField sample_field(GridPtr grid, const std::function<double(double)>& u, double time);
/// G_(n)(., t) on the grid, with field time t.
RadialField kernel_field(GridPtr grid, double t);

struct SolverConfig {
  /// 0 selects min(h_min / 2, 1e-2).
  double dt = 0.0;
  /// Domain is kept at r_max >= (n-1) t + margin sqrt(t) + 2 sqrt(t).
  double truncation_margin = 8.0;
  /// Number of backward-Euler half steps replacing the first Crank-Nicolson
  /// steps (Rannacher start-up); must be even.
  int startup_half_steps = 4;
  /// Horizon for the product (n-1) r_max, beyond which the volume weights
  /// leave double range.
  double horizon = 690.0;
};

struct ForcingTerm {
  std::function<double(double r, double t)> evaluator;
  std::optional<double> declared_total;
  /// Optional separable form f = spatial(r) temporal(t). When both are set
  /// they replace evaluator and spatial is sampled once per grid.
  std::function<double(double r)> spatial;
  std::function<double(double t)> temporal;
};

struct EvolveStats {
  int steps = 0;
  double dt = 0.0;
  int extensions = 0;
  double mass_initial = 0.0;
  double mass_final = 0.0;
  /// Discrete source mass injected by the forcing.
  double mass_injected = 0.0;
  /// |mass_final - mass_initial - mass_injected|.
  double mass_drift = 0.0;
  /// Most negative value encountered, relative to sup|u0| (0 when none).
  double min_relative_value = 0.0;
};

struct EvolveResult {
  RadialField field;
  EvolveStats stats;
};

/// Advance u0 by T under u_t = (sinh r)^{1-n} ((sinh r)^{n-1} u_r)_r + f.
///
/// Finite volumes with half-node areas omega_n sinh^{n-1}(r_{i+1/2}), zero
/// flux at the pole, u = 0 at r_max, Crank-Nicolson in time with a Thomas
/// solve per step. The domain is extended (new nodes, value 0, same spacing
/// as the last cell) as the mass line approaches r_max.
///
/// Throws InstabilityDetected on non-finite values or growth past
/// 2 (sup|u0| + int sup|f|), HorizonViolation when the required r_max
/// exceeds SolverConfig::horizon / (n-1).
EvolveResult evolve(const RadialField& u0, double T, const SolverConfig& config = {},
                    const ForcingTerm* f = nullptr);

/// sum_i V_i u_i over the control volumes.
double solver_mass(const RadialField& u);

/// Cumulative mass M(r_i) = omega_n int_0^{r_i} sinh^{n-1} u (trapezoid).
struct MassProfile {
  GridPtr grid;
  std::vector<double> cumulative;
  double time = 0.0;

  double total() const { return cumulative.empty() ? 0.0 : cumulative.back(); }
  /// Linear interpolation of M at r (clamped to the grid).
  double at(double r) const;
};

MassProfile mass_function(const RadialField& u);

inline constexpr double kInfNorm = std::numeric_limits<double>::infinity();

/// Puts u and v on a common grid when one grid's nodes are a prefix of the
/// other's (as after domain extension), padding the shorter field with zeros.
/// Throws GridMismatch otherwise.
std::pair<RadialField, RadialField> align_fields(const RadialField& u, const RadialField& v);

/// ||u - v||_{L^p(dmu)} with the grid weights; p = kInfNorm gives the plain
/// sup over nodes. Throws GridMismatch when grids or times differ.
double distance_metrics(const RadialField& u, const RadialField& v, double p);

/// Sign changes of u - v between consecutive nodes. Differences with
/// |u - v| <= zero_tol count as zero and are skipped.
int intersection_count(const RadialField& u, const RadialField& v, double zero_tol = 0.0);

struct HarnackRatios {
  double ratio_min = 0.0;
  double ratio_max = 0.0;
};

/// Extremes of u / (M G_t) over nodes with 0 < r <= L t, t = u.time.
/// Throws EmptyRegion when no such node exists.
HarnackRatios harnack_check(const RadialField& u, double M, double L);

/// CSV with header "r,value".
void write_profile_csv(const RadialField& u, const std::string& path);
RadialField read_profile_csv(const std::string& path, int n, double time);

}  // namespace hyperheat
