#include "hyperheat/radial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "hyperheat/detail/kernel_expr.hpp"
#include "hyperheat/error.hpp"
#include "hyperheat/quadrature.hpp"

namespace hyperheat {

namespace {

// Edge-to-peak ratio of the weighted density that triggers a domain extension.
constexpr double kCrowdedEdge = 1e-12;

double sinh_power(int n, double r) {
  if (r <= 0.0) return 0.0;
  return std::exp((n - 1) * detail::log_sinh(r));
}

// omega_n int_a^b sinh^{n-1}
double shell_volume(int n, double omega, double a, double b) {
  if (!(b > a)) return 0.0;
  return omega * gauss_legendre_15([n](double r) { return sinh_power(n, r); }, a, b);
}

void fill_weights(RadialGrid& g) {
  const auto& x = g.nodes;
  const std::size_t m = x.size();
  const double omega = sphere_area(g.n);
  g.density.resize(m);
  g.weights.assign(m, 0.0);
  g.control_volumes.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) g.density[i] = omega * sinh_power(g.n, x[i]);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    double h = x[i + 1] - x[i];
    g.weights[i] += 0.5 * h * g.density[i];
    g.weights[i + 1] += 0.5 * h * g.density[i + 1];
  }
  for (std::size_t i = 0; i < m; ++i) {
    double lo = i == 0 ? 0.0 : 0.5 * (x[i - 1] + x[i]);
    double hi = i + 1 == m ? x[i] : 0.5 * (x[i] + x[i + 1]);
    g.control_volumes[i] = shell_volume(g.n, omega, lo, x[i]) + shell_volume(g.n, omega, x[i], hi);
  }
}

void require_same_grid(const RadialField& u, const RadialField& v) {
  if (!u.grid || !v.grid || (u.grid != v.grid && !(*u.grid == *v.grid))) {
    throw Error(ErrorCode::GridMismatch, "fields live on different grids");
  }
  if (std::abs(u.time - v.time) > 1e-12 * std::max(1.0, std::abs(u.time))) {
    throw Error(ErrorCode::GridMismatch, "fields are at different times");
  }
}

double sup_abs(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

GridPtr extend_grid(const RadialGrid& g, double target) {
  std::vector<double> nodes = g.nodes;
  double h = nodes[nodes.size() - 1] - nodes[nodes.size() - 2];
  int extra = static_cast<int>(std::ceil((target - nodes.back()) / h));
  double base = nodes.back();
  for (int k = 1; k <= extra; ++k) nodes.push_back(base + k * h);
  return std::make_shared<const RadialGrid>(grid_from_nodes(g.n, std::move(nodes)));
}

// Off-diagonal coefficients of the semi-discrete operator, row-normalised by
// the control volume: (L u)_i = up_i (u_{i+1} - u_i) - down_i (u_i - u_{i-1}).
struct Operator {
  std::vector<double> up;
  std::vector<double> down;

  explicit Operator(const RadialGrid& g) {
    const auto& x = g.nodes;
    const std::size_t m = x.size() - 1;  // unknowns 0..m-1; node m is Dirichlet
    up.assign(m, 0.0);
    down.assign(m, 0.0);
    const double log_omega = std::log(sphere_area(g.n));
    for (std::size_t i = 0; i < m; ++i) {
      double log_v = std::log(g.control_volumes[i]);
      double h_up = x[i + 1] - x[i];
      double log_a_up = log_omega + (g.n - 1) * detail::log_sinh(0.5 * (x[i] + x[i + 1]));
      up[i] = std::exp(log_a_up - log_v) / h_up;
      if (i > 0) {
        double h_dn = x[i] - x[i - 1];
        double log_a_dn = log_omega + (g.n - 1) * detail::log_sinh(0.5 * (x[i - 1] + x[i]));
        down[i] = std::exp(log_a_dn - log_v) / h_dn;
      }
    }
  }

  void apply(const std::vector<double>& u, std::vector<double>& out) const {
    const std::size_t m = up.size();
    for (std::size_t i = 0; i < m; ++i) {
      double left = i > 0 ? u[i - 1] : u[i];
      out[i] = up[i] * (u[i + 1] - u[i]) - down[i] * (u[i] - left);
    }
  }
};

// (I - theta dt L) x = rhs, Dirichlet x_m = 0.
void solve_implicit(const Operator& op, double theta_dt, std::vector<double>& rhs,
                    std::vector<double>& scratch) {
  const std::size_t m = op.up.size();
  scratch.resize(m);
  // Thomas algorithm: sub a_i = -theta_dt down_i, diag b_i, super c_i = -theta_dt up_i.
  double b0 = 1.0 + theta_dt * op.up[0];
  scratch[0] = -theta_dt * op.up[0] / b0;
  rhs[0] /= b0;
  for (std::size_t i = 1; i < m; ++i) {
    double a = -theta_dt * op.down[i];
    double b = 1.0 + theta_dt * (op.up[i] + op.down[i]);
    double c = -theta_dt * op.up[i];
    double denom = b - a * scratch[i - 1];
    scratch[i] = c / denom;
    rhs[i] = (rhs[i] - a * rhs[i - 1]) / denom;
  }
  for (std::size_t i = m - 1; i-- > 0;) rhs[i] -= scratch[i] * rhs[i + 1];
  rhs[m] = 0.0;
}

}  // namespace

RadialGrid grid_from_nodes(int n, std::vector<double> nodes) {
  if (n < 2) {
    throw Error(ErrorCode::DimensionOutOfRange, "dimension must be >= 2, got " + std::to_string(n));
  }
  if (nodes.size() < 17) {
    throw Error(ErrorCode::DegenerateGrid, "need at least 17 nodes, got " + std::to_string(nodes.size()));
  }
  if (nodes.front() != 0.0) throw Error(ErrorCode::DegenerateGrid, "first node must be 0");
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i] > nodes[i - 1]) || !std::isfinite(nodes[i])) {
      throw Error(ErrorCode::DegenerateGrid, "nodes must increase strictly");
    }
  }
  RadialGrid g;
  g.n = n;
  g.nodes = std::move(nodes);
  fill_weights(g);
  return g;
}

RadialGrid build_grid(int n, double r_max, int N, Grading grading, double focus) {
  if (N < 16) {
    throw Error(ErrorCode::DegenerateGrid, "N must be >= 16, got " + std::to_string(N));
  }
  if (!(r_max > 0.0) || !std::isfinite(r_max)) {
    throw Error(ErrorCode::DegenerateGrid, "r_max must be positive, got " + std::to_string(r_max));
  }
  std::vector<double> nodes(N + 1);
  if (grading == Grading::Uniform) {
    for (int i = 0; i <= N; ++i) nodes[i] = r_max * i / N;
  } else {
    double w = std::max(1.0, std::sqrt(std::max(focus, 0.0)));
    auto density = [&](double r) {
      double d = 1.0 + 2.0 * std::exp(-r);
      if (focus >= 0.0) d += 2.0 * std::exp(-0.5 * (r - focus) * (r - focus) / (w * w));
      return d;
    };
    // Tabulate the cumulative density and invert it by interpolation.
    const int fine = 64 * N;
    std::vector<double> cum(fine + 1, 0.0);
    double step = r_max / fine;
    for (int k = 0; k < fine; ++k) {
      double a = k * step;
      cum[k + 1] = cum[k] + 0.5 * step * (density(a) + density(a + step));
    }
    nodes[0] = 0.0;
    int k = 0;
    for (int i = 1; i < N; ++i) {
      double target = cum[fine] * i / N;
      while (cum[k + 1] < target) ++k;
      double frac = (target - cum[k]) / (cum[k + 1] - cum[k]);
      nodes[i] = (k + frac) * step;
    }
    nodes[N] = r_max;
  }
  return grid_from_nodes(n, std::move(nodes));
}

RadialField make_field(GridPtr grid, std::vector<double> values, double time) {
  if (!grid || values.size() != grid->size()) {
    throw Error(ErrorCode::GridMismatch, "value count does not match the grid");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::DomainError, "field values must be finite");
  }
  if (!(time >= 0.0)) throw Error(ErrorCode::DomainError, "field time must be >= 0");
  return {std::move(grid), std::move(values), time};
}

RadialField sample_field(GridPtr grid, const std::function<double(double)>& u, double time) {
  std::vector<double> values(grid->size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = u(grid->nodes[i]);
  return make_field(std::move(grid), std::move(values), time);
}

RadialField kernel_field(GridPtr grid, double t) {
  KernelSpec spec(grid->n);
  return sample_field(
      grid, [&](double r) { return kernel_log(spec, r, t).value(); }, t);
}

double solver_mass(const RadialField& u) {
  std::vector<double> terms(u.values.size());
  for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = u.grid->control_volumes[i] * u.values[i];
  return pairwise_sum(terms);
}

EvolveResult evolve(const RadialField& u0, double T, const SolverConfig& config,
                    const ForcingTerm* f) {
  if (!u0.grid) throw Error(ErrorCode::DegenerateGrid, "field has no grid");
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw Error(ErrorCode::NonpositiveTime, "evolution time must be positive");
  }
  if (!(config.truncation_margin >= 8.0)) {
    throw Error(ErrorCode::DomainError, "truncation_margin must be >= 8");
  }
  if (config.startup_half_steps < 0 || config.startup_half_steps % 2 != 0) {
    throw Error(ErrorCode::DomainError, "startup_half_steps must be even and >= 0");
  }
  for (double v : u0.values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InstabilityDetected, "initial data not finite");
  }

  const int n = u0.grid->n;
  GridPtr grid = u0.grid;
  std::vector<double> u = u0.values;
  double t = u0.time;
  EvolveStats stats;

  auto required = [&](double time) {
    return (n - 1) * time + (config.truncation_margin + 2.0) * std::sqrt(time);
  };
  // Set after a step when the weighted density at the last interior node is
  // no longer negligible (data that started out already spread).
  bool crowded = false;
  auto ensure_domain = [&](double time) -> bool {
    const bool short_domain = grid->r_max() < required(time);
    if (!short_domain && !crowded) return false;
    double target = grid->r_max() + std::max(2.0, 4.0 * std::sqrt(time + 1.0));
    if (short_domain) {
      double by_time = (n - 1) * time + (config.truncation_margin + 6.0) * std::sqrt(time) + 1.0;
      target = crowded ? std::max(target, by_time) : by_time;
    }
    crowded = false;
    if ((n - 1) * target > config.horizon) {
      throw Error(ErrorCode::HorizonViolation,
                  "domain would need r_max = " + std::to_string(target) + " at t = " +
                      std::to_string(time) + ", past the representable horizon");
    }
    grid = extend_grid(*grid, target);
    u.resize(grid->size(), 0.0);
    ++stats.extensions;
    return true;
  };
  ensure_domain(t);

  double h_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < grid->size(); ++i) h_min = std::min(h_min, grid->nodes[i] - grid->nodes[i - 1]);
  double dt_target = config.dt > 0.0 ? config.dt : std::min(0.5 * h_min, 1e-2);
  int steps = std::max(1, static_cast<int>(std::ceil(T / dt_target - 1e-9)));
  double dt = T / steps;
  stats.dt = dt;

  const double sup0 = sup_abs(u);
  double forcing_budget = 0.0;
  double min_value = 0.0;

  stats.mass_initial = solver_mass({grid, u, t});

  auto op = std::make_unique<Operator>(*grid);
  std::vector<double> lu(grid->size(), 0.0), rhs(grid->size(), 0.0), scratch;
  std::vector<double> f_old, f_new, f_spatial;
  const bool separable = f && f->spatial && f->temporal;
  auto eval_forcing = [&](double time, std::vector<double>& out) {
    out.assign(grid->size(), 0.0);
    if (!f) return;
    if (separable) {
      if (f_spatial.size() != grid->size()) {
        f_spatial.assign(grid->size(), 0.0);
        for (std::size_t i = 0; i + 1 < grid->size(); ++i) f_spatial[i] = f->spatial(grid->nodes[i]);
      }
      const double factor = f->temporal(time);
      for (std::size_t i = 0; i + 1 < grid->size(); ++i) out[i] = f_spatial[i] * factor;
      return;
    }
    for (std::size_t i = 0; i + 1 < grid->size(); ++i) out[i] = f->evaluator(grid->nodes[i], time);
  };
  auto injected = [&](const std::vector<double>& fa, const std::vector<double>& fb, double wa,
                      double wb, double h) {
    std::vector<double> terms(grid->size() - 1);
    for (std::size_t i = 0; i < terms.size(); ++i) {
      terms[i] = grid->control_volumes[i] * h * (wa * fa[i] + wb * fb[i]);
    }
    return pairwise_sum(terms);
  };

  // One theta-step of length h; theta = 1 is backward Euler.
  auto advance = [&](double h, double theta) {
    if (ensure_domain(t + h)) {
      op = std::make_unique<Operator>(*grid);
      lu.assign(grid->size(), 0.0);
      rhs.assign(grid->size(), 0.0);
    }
    const std::size_t m = grid->size() - 1;
    eval_forcing(t, f_old);
    eval_forcing(t + h, f_new);
    if (theta < 1.0) {
      op->apply(u, lu);
    } else {
      std::fill(lu.begin(), lu.end(), 0.0);
    }
    for (std::size_t i = 0; i < m; ++i) {
      rhs[i] = u[i] + (1.0 - theta) * h * lu[i] + h * ((1.0 - theta) * f_old[i] + theta * f_new[i]);
    }
    rhs[m] = 0.0;
    if (f) {
      stats.mass_injected += injected(f_old, f_new, 1.0 - theta, theta, h);
      forcing_budget += h * std::max(sup_abs(f_old), sup_abs(f_new));
    }
    solve_implicit(*op, theta * h, rhs, scratch);
    u.swap(rhs);
    t += h;
    ++stats.steps;

    double sup = 0.0, rho_peak = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double v = u[i];
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::InstabilityDetected, "non-finite value at t = " + std::to_string(t));
      }
      sup = std::max(sup, std::abs(v));
      rho_peak = std::max(rho_peak, std::abs(v) * grid->density[i]);
      min_value = std::min(min_value, v);
    }
    crowded = std::abs(u[m - 1]) * grid->density[m - 1] > kCrowdedEdge * rho_peak;
    double bound = 2.0 * (sup0 + forcing_budget);
    if (sup > bound && sup > 1e-300) {
      throw Error(ErrorCode::InstabilityDetected, "sup |u| = " + std::to_string(sup) +
                                                      " exceeds " + std::to_string(bound) +
                                                      " at t = " + std::to_string(t));
    }
  };

  int cn_steps = steps;
  int startup_cn = std::min(steps, config.startup_half_steps / 2);
  for (int k = 0; k < 2 * startup_cn; ++k) advance(0.5 * dt, 1.0);
  cn_steps -= startup_cn;
  for (int k = 0; k < cn_steps; ++k) advance(dt, 0.5);
  t = u0.time + T;

  RadialField out{grid, std::move(u), t};
  stats.mass_final = solver_mass(out);
  stats.mass_drift = std::abs(stats.mass_final - stats.mass_initial - stats.mass_injected);
  stats.min_relative_value = sup0 > 0.0 ? min_value / sup0 : min_value;
  return {std::move(out), stats};
}

double MassProfile::at(double r) const {
  const auto& x = grid->nodes;
  if (r <= x.front()) return cumulative.front();
  if (r >= x.back()) return cumulative.back();
  auto it = std::upper_bound(x.begin(), x.end(), r);
  std::size_t i = static_cast<std::size_t>(it - x.begin());
  double frac = (r - x[i - 1]) / (x[i] - x[i - 1]);
  return cumulative[i - 1] + frac * (cumulative[i] - cumulative[i - 1]);
}

MassProfile mass_function(const RadialField& u) {
  const auto& g = *u.grid;
  MassProfile p{u.grid, std::vector<double>(g.size(), 0.0), u.time};
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    double h = g.nodes[i + 1] - g.nodes[i];
    p.cumulative[i + 1] =
        p.cumulative[i] + 0.5 * h * (g.density[i] * u.values[i] + g.density[i + 1] * u.values[i + 1]);
  }
  return p;
}

std::pair<RadialField, RadialField> align_fields(const RadialField& u, const RadialField& v) {
  if (!u.grid || !v.grid) throw Error(ErrorCode::GridMismatch, "field has no grid");
  const bool u_short = u.grid->size() <= v.grid->size();
  const RadialField& shorter = u_short ? u : v;
  const RadialField& longer = u_short ? v : u;
  const auto& a = shorter.grid->nodes;
  const auto& b = longer.grid->nodes;
  auto close = [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(x)); };
  if (shorter.grid->n != longer.grid->n || !std::equal(a.begin(), a.end(), b.begin(), close)) {
    throw Error(ErrorCode::GridMismatch, "grids are not nested");
  }
  RadialField padded{longer.grid, shorter.values, shorter.time};
  padded.values.resize(b.size(), 0.0);
  return u_short ? std::pair{padded, longer} : std::pair{longer, padded};
}

double distance_metrics(const RadialField& u, const RadialField& v, double p) {
  require_same_grid(u, v);
  if (!(p >= 1.0)) throw Error(ErrorCode::DomainError, "p must be >= 1");
  const auto& w = u.grid->weights;
  if (std::isinf(p)) {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s = std::max(s, std::abs(u.values[i] - v.values[i]));
    return s;
  }
  std::vector<double> terms(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    terms[i] = w[i] * std::pow(std::abs(u.values[i] - v.values[i]), p);
  }
  double integral = pairwise_sum(terms);
  return p == 1.0 ? integral : std::pow(integral, 1.0 / p);
}

int intersection_count(const RadialField& u, const RadialField& v, double zero_tol) {
  require_same_grid(u, v);
  int count = 0;
  int last_sign = 0;
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    double d = u.values[i] - v.values[i];
    if (std::abs(d) <= zero_tol) continue;
    int sign = d > 0.0 ? 1 : -1;
    if (last_sign != 0 && sign != last_sign) ++count;
    last_sign = sign;
  }
  return count;
}

HarnackRatios harnack_check(const RadialField& u, double M, double L) {
  if (!(M > 0.0)) throw Error(ErrorCode::DomainError, "mass must be positive");
  if (!(u.time > 0.0)) throw Error(ErrorCode::NonpositiveTime, "field time must be positive");
  KernelSpec spec(u.grid->n);
  const double limit = L * u.time;
  HarnackRatios out{std::numeric_limits<double>::infinity(), 0.0};
  bool any = false;
  const double log_m = std::log(M);
  for (std::size_t i = 1; i < u.values.size() && u.grid->nodes[i] <= limit; ++i) {
    double r = u.grid->nodes[i];
    double ratio = u.values[i] / std::exp(log_m + kernel_log(spec, r, u.time).log_mag());
    out.ratio_min = std::min(out.ratio_min, ratio);
    out.ratio_max = std::max(out.ratio_max, ratio);
    any = true;
  }
  if (!any) {
    throw Error(ErrorCode::EmptyRegion, "no nodes in (0, L t] with L t = " + std::to_string(limit));
  }
  return out;
}

void write_profile_csv(const RadialField& u, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path);
  out << "r,value\n";
  char buf[64];
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", u.grid->nodes[i]);
    out << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g", u.values[i]);
    out << buf << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

RadialField read_profile_csv(const std::string& path, int n, double time) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "r,value") {
    throw Error(ErrorCode::IoError, path + ": missing 'r,value' header");
  }
  std::vector<double> r, v;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw Error(ErrorCode::IoError, path + ": malformed row");
    try {
      r.push_back(std::stod(line.substr(0, comma)));
      v.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw Error(ErrorCode::IoError, path + ": malformed number in '" + line + "'");
    }
  }
  auto grid = std::make_shared<const RadialGrid>(grid_from_nodes(n, std::move(r)));
  return make_field(std::move(grid), std::move(v), time);
}

}  // namespace hyperheat
