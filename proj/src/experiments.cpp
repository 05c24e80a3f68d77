#include "hyperheat/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <memory>
#include <mutex>
#include <numbers>
#include <thread>

#include "hyperheat/counterexample.hpp"
#include "hyperheat/error.hpp"
#include "hyperheat/horospheric.hpp"
#include "hyperheat/kernel.hpp"
#include "hyperheat/mass_analysis.hpp"
#include "hyperheat/radial.hpp"

namespace hyperheat {

namespace {

std::string tag(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  std::string s = trim(text);
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty() || !std::isfinite(v)) {
    throw Error(ErrorCode::UsageError, "'" + key + "' expects a number, got '" + text + "'");
  }
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  std::string s = trim(text);
  int v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty()) {
    throw Error(ErrorCode::UsageError, "'" + key + "' expects an integer, got '" + text + "'");
  }
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto comma = text.find(',', start);
    out.push_back(text.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

// Reads config keys with defaults and records the resolved values, which
// become the report's params.
class Params {
 public:
  explicit Params(const Config& cfg) : cfg_(cfg) {}

  std::vector<double> reals(const std::string& key, const std::string& fallback) {
    std::vector<double> out;
    for (const auto& item : split_list(resolve(key, fallback))) out.push_back(parse_double(key, item));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
  std::vector<int> ints(const std::string& key, const std::string& fallback) {
    std::vector<int> out;
    for (const auto& item : split_list(resolve(key, fallback))) out.push_back(parse_int(key, item));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
  double real(const std::string& key, const std::string& fallback) {
    return parse_double(key, resolve(key, fallback));
  }
  int integer(const std::string& key, const std::string& fallback) {
    return parse_int(key, resolve(key, fallback));
  }

  const Config& used() const { return used_; }

 private:
  std::string resolve(const std::string& key, const std::string& fallback) {
    auto it = cfg_.find(key);
    std::string value = it == cfg_.end() ? fallback : it->second;
    used_[key] = value;
    return value;
  }

  const Config& cfg_;
  Config used_;
};

void require_positive_times(const std::vector<double>& ts) {
  for (double t : ts) {
    if (!(t > 0.0)) throw Error(ErrorCode::NonpositiveTime, "times must be positive, got " + tag(t));
  }
}

KernelSpec odd_spec(int n) {
  KernelSpec spec(n);
  if (!spec.odd()) {
    throw Error(ErrorCode::EvenDimensionUnsupported,
                "this experiment needs exact kernels; n = " + std::to_string(n) + " is even");
  }
  if (n > kMaxOddDimension) {
    throw Error(ErrorCode::DimensionOutOfRange, "n = " + std::to_string(n) + " exceeds " +
                                                    std::to_string(kMaxOddDimension));
  }
  return spec;
}

std::vector<double> log_points(double lo, double hi, int count) {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
  return out;
}

GridPtr uniform_grid(int n, double r_max, double h) {
  int N = std::max(16, static_cast<int>(std::ceil(r_max / h - 1e-9)));
  return std::make_shared<const RadialGrid>(build_grid(n, N * h, N));
}

RadialField unit_bump(GridPtr grid, double radius) {
  RadialField u = sample_field(
      grid, [&](double r) { return r <= radius * (1.0 + 1e-12) ? 1.0 : 0.0; }, 0.0);
  double m = solver_mass(u);
  if (!(m > 0.0)) throw Error(ErrorCode::DegenerateGrid, "bump radius below the first grid cell");
  for (double& v : u.values) v /= m;
  return u;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double line_gaussian(double x, double t) {
  return std::exp(-x * x / (4.0 * t)) / std::sqrt(4.0 * std::numbers::pi * t);
}

// ---------------------------------------------------------------------------

ExperimentReport kernel_checks(const Config& cfg) {
  Params p(cfg);
  auto ns = p.ints("n", "3,5");
  auto ts = p.reals("t", "0.5,1,5,20");
  require_positive_times(ts);
  ExperimentReport rep("kernel-checks", p.used());

  const std::vector<double> check_times{0.5, 2.0, 10.0};
  const auto radii = log_points(1e-3, 40.0, 200);

  for (int n : ns) {
    KernelSpec spec = odd_spec(n);
    const std::string pre = "n" + std::to_string(n) + ".";

    std::vector<BoundedIntegral> masses(ts.size());
    parallel_for(ts.size(), [&](std::size_t i) { masses[i] = kernel_mass(spec, ts[i]); });
    Series mass_series{"t", "mass", ts, {}};
    double worst = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      rep.set_metric(pre + "mass.t" + tag(ts[i]), masses[i].value);
      rep.set_metric(pre + "mass_tail_bound.t" + tag(ts[i]), masses[i].tail_bound);
      mass_series.y.push_back(masses[i].value);
      worst = std::max(worst, std::abs(masses[i].value - 1.0));
    }
    rep.set_metric(pre + "max_mass_error", worst);
    rep.add_series("n" + std::to_string(n) + "_mass", std::move(mass_series));

    double route_err = 0.0;
    double ratio_min = std::numeric_limits<double>::infinity(), ratio_max = 0.0;
    double analytic_diff = 0.0;
    for (double t : check_times) {
      for (double r : radii) {
        double closed = kernel_log(spec, r, t).log_mag();
        double line = kernel_log_from_line(n, r, t).log_mag();
        route_err = std::max(route_err, std::abs(std::expm1(line - closed)));
        double ratio = std::exp(closed - davies_log(spec, r, t).log_mag());
        ratio_min = std::min(ratio_min, ratio);
        ratio_max = std::max(ratio_max, ratio);
        if (n == 3) analytic_diff = std::max(analytic_diff, std::abs(ratio - davies_ratio3(r)));
      }
    }
    rep.set_metric(pre + "line_route_max_rel_error", route_err);
    rep.set_metric(pre + "davies_ratio_min", ratio_min);
    rep.set_metric(pre + "davies_ratio_max", ratio_max);
    if (n == 3) rep.set_metric(pre + "davies_analytic_max_abs_diff", analytic_diff);
    if (n <= 7) {
      DaviesEnvelope frozen = davies_envelope(spec);
      DaviesEnvelope fresh = calibrate_davies_envelope(spec, 0.1, 10.0, 0.5, 50.0);
      rep.set_metric(pre + "davies_envelope_lower", frozen.c_lower);
      rep.set_metric(pre + "davies_envelope_upper", frozen.c_upper);
      rep.set_metric(pre + "davies_calibrated_min", fresh.c_lower);
      rep.set_metric(pre + "davies_calibrated_max", fresh.c_upper);
    }

    Series davies{"r", "G_over_h", {}, {}};
    for (double r : radii) {
      davies.x.push_back(r);
      davies.y.push_back(std::exp(kernel_log(spec, r, 1.0).log_mag() - davies_log(spec, r, 1.0).log_mag()));
    }
    rep.add_series("n" + std::to_string(n) + "_davies_ratio", std::move(davies));

    Series centre{"t", "scaled_center_value", {}, {}};
    for (double t : {1.0, 10.0, 100.0, 1000.0}) {
      centre.x.push_back(t);
      centre.y.push_back(std::exp(1.5 * std::log(t) + spec.lambda1() * t + kernel_log(spec, 0.0, t).log_mag()));
    }
    rep.add_series("n" + std::to_string(n) + "_center_scaled", std::move(centre));
  }
  return rep;
}

ExperimentReport radial_converge(const Config& cfg) {
  Params p(cfg);
  int n = p.integer("n", "3");
  auto ts = p.reals("t", "10,25,50");
  double h = p.real("h", "0.005");
  double r_max = p.real("r_max", "16");
  int nodes = p.integer("nodes", "800");
  double dt = p.real("dt", "0");
  double radius = p.real("bump_radius", "1");
  require_positive_times(ts);
  ExperimentReport rep("radial-converge", p.used());
  KernelSpec spec = odd_spec(n);
  SolverConfig solver;
  solver.dt = dt;

  // Kernel-to-kernel propagation from t = 1 to t = 2 at h and h/2.
  const double span = (n - 1) * 2.0 + 12.0 * std::sqrt(2.0);
  std::vector<double> errors(2), drifts(2), minima(2);
  parallel_for(2, [&](std::size_t i) {
    double hh = i == 0 ? h : 0.5 * h;
    GridPtr grid = uniform_grid(n, span, hh);
    SolverConfig c;
    c.dt = dt > 0.0 ? dt / (1 << i) : 0.0;
    EvolveResult res = evolve(kernel_field(grid, 1.0), 1.0, c);
    errors[i] = distance_metrics(res.field, kernel_field(res.field.grid, 2.0), 1.0);
    drifts[i] = res.stats.mass_drift;
    minima[i] = res.stats.min_relative_value;
  });
  rep.set_metric("kernel_l1_error_h", errors[0]);
  rep.set_metric("kernel_l1_error_half_h", errors[1]);
  rep.set_metric("kernel_order_ratio", errors[0] / errors[1]);
  rep.set_metric("kernel_mass_drift", std::max(drifts[0], drifts[1]));
  rep.set_metric("kernel_min_relative_value", std::min(minima[0], minima[1]));

  // Unit-mass bump against the kernel.
  auto grid = std::make_shared<const RadialGrid>(build_grid(n, r_max, nodes));
  RadialField u = unit_bump(grid, radius);
  Series l1{"t", "l1_error", {}, {}}, wsup{"t", "weighted_sup_error", {}, {}};
  Series smooth{"t", "scaled_sup", {}, {}};
  double drift = 0.0, lowest = 0.0;
  for (double t : ts) {
    EvolveResult res = evolve(u, t - u.time, solver);
    u = res.field;
    drift = std::max(drift, res.stats.mass_drift);
    lowest = std::min(lowest, res.stats.min_relative_value);
    RadialField exact = kernel_field(u.grid, t);
    double e1 = distance_metrics(u, exact, 1.0);
    double scale = std::exp(1.5 * std::log(t) + spec.lambda1() * t);
    double einf = scale * distance_metrics(u, exact, kInfNorm);
    double sup = 0.0;
    for (double v : u.values) sup = std::max(sup, v);
    HarnackRatios hr = harnack_check(u, 1.0, 2.0);
    rep.set_metric("l1_error.t" + tag(t), e1);
    rep.set_metric("weighted_sup_error.t" + tag(t), einf);
    rep.set_metric("harnack_min.t" + tag(t), hr.ratio_min);
    rep.set_metric("harnack_max.t" + tag(t), hr.ratio_max);
    rep.set_metric("intersections.t" + tag(t), intersection_count(u, exact));
    l1.x.push_back(t);
    l1.y.push_back(e1);
    wsup.x.push_back(t);
    wsup.y.push_back(einf);
    smooth.x.push_back(t);
    smooth.y.push_back(scale * sup);
  }
  rep.set_metric("bump_mass_drift", drift);
  rep.set_metric("bump_min_relative_value", lowest);
  rep.add_series("l1_error", std::move(l1));
  rep.add_series("weighted_sup_error", std::move(wsup));
  rep.add_series("smoothing", std::move(smooth));
  return rep;
}

ExperimentReport gaussian1d(const Config& cfg) {
  Params p(cfg);
  auto ns = p.ints("n", "3");
  auto ts = p.reals("t", "10,25,50,100");
  require_positive_times(ts);
  ExperimentReport rep("gaussian1d", p.used());

  for (int n : ns) {
    KernelSpec spec = odd_spec(n);
    const std::string pre = "n" + std::to_string(n) + ".";
    std::vector<BoundedIntegral> errs(ts.size());
    parallel_for(ts.size(), [&](std::size_t i) { errs[i] = gaussian_l1_error(spec, ts[i]); });
    Series s{"t", "l1_error", ts, {}};
    for (std::size_t i = 0; i < ts.size(); ++i) {
      rep.set_metric(pre + "l1_error.t" + tag(ts[i]), errs[i].value);
      rep.set_metric(pre + "l1_error_bound.t" + tag(ts[i]),
                     errs[i].value + errs[i].quadrature_error + errs[i].tail_bound);
      s.y.push_back(errs[i].value);
    }
    rep.add_series("n" + std::to_string(n) + "_l1_error", std::move(s));

    const double t = ts.back();
    const double root_t = std::sqrt(t);
    std::vector<double> xi;
    for (int k = -120; k <= 120; ++k) {
      double x = 0.05 * k;
      if (x >= -(n - 1) * root_t) xi.push_back(x);
    }
    auto rho_bar = rescaled_profile(spec, t, xi);
    Series rescaled{"xi", "rho_bar", xi, rho_bar};
    Series gauss{"xi", "E1", xi, {}};
    for (double x : xi) gauss.y.push_back(line_gaussian(x, 1.0));
    rep.add_series("n" + std::to_string(n) + "_rescaled", std::move(rescaled));
    rep.add_series("n" + std::to_string(n) + "_gaussian", std::move(gauss));
    const double zero = 0.0, two = 2.0;
    rep.set_metric(pre + "rescaled_at_0", rescaled_profile(spec, t, std::span(&zero, 1))[0]);
    rep.set_metric(pre + "rescaled_at_2", rescaled_profile(spec, t, std::span(&two, 1))[0]);

    // Zeroth and first moments of rho_bar over the cone, in the r variable.
    const double line = spec.mass_line(t);
    const double cut = default_truncation(spec, t);
    QuadratureOptions opts;
    opts.initial_panels = std::max(16, static_cast<int>(std::ceil(cut / (0.5 * root_t))));
    double mass = integrate([&](double r) { return weighted_density_log(spec, r, t).value(); }, 0.0, cut, opts).value;
    double mean = integrate([&](double r) {
      return (r - line) / root_t * weighted_density_log(spec, r, t).value();
    }, 0.0, cut, opts).value;
    rep.set_metric(pre + "rescaled_mass", mass);
    rep.set_metric(pre + "rescaled_mean", mean);
  }
  return rep;
}

ExperimentReport delayed(const Config& cfg) {
  Params p(cfg);
  int n = p.integer("n", "3");
  auto ts = p.reals("t", "10,25,50");
  double t_center = p.real("t_center", "100");
  double h = p.real("h", "0.01");
  require_positive_times(ts);
  require_positive_times({t_center});
  ExperimentReport rep("delayed", p.used());
  KernelSpec spec = odd_spec(n);

  std::vector<double> dist(ts.size()), weighted(ts.size());
  std::vector<int> crossings(ts.size());
  parallel_for(ts.size(), [&](std::size_t i) {
    double t = ts[i];
    GridPtr grid = uniform_grid(n, default_truncation(spec, t + 1.0), h);
    RadialField now = kernel_field(grid, t);
    RadialField later = kernel_field(grid, t + 1.0);
    later.time = t;
    dist[i] = distance_metrics(now, later, 1.0);
    weighted[i] = std::exp(1.5 * std::log(t) + spec.lambda1() * t) * distance_metrics(now, later, kInfNorm);
    crossings[i] = intersection_count(now, later);
  });
  Series s{"t", "l1_distance", ts, dist};
  for (std::size_t i = 0; i < ts.size(); ++i) {
    rep.set_metric("l1_distance.t" + tag(ts[i]), dist[i]);
    rep.set_metric("weighted_sup_distance.t" + tag(ts[i]), weighted[i]);
    rep.set_metric("intersections.t" + tag(ts[i]), crossings[i]);
  }
  rep.add_series("l1_distance", std::move(s));

  double ratio = std::exp(kernel_log(spec, 0.0, t_center + 1.0).log_mag() -
                          kernel_log(spec, 0.0, t_center).log_mag());
  rep.set_metric("center_ratio", ratio);
  rep.set_metric("center_ratio_limit", std::exp(-spec.lambda1()));
  return rep;
}

ExperimentReport horo(const Config& cfg) {
  Params p(cfg);
  auto ns = p.ints("n", "2,3");
  auto ts = p.reals("t", "10,25,50,100");
  double h = p.real("h", "0.05");
  require_positive_times(ts);
  ExperimentReport rep("horo", p.used());

  const int count = static_cast<int>(std::lround(24.0 / h)) + 1;
  const auto z0 = uniform_points(-12.0, 12.0, count);
  for (int n : ns) {
    KernelSpec spec(n);
    const std::string pre = "n" + std::to_string(n) + ".";
    HoroField gauss{n, z0, {}, 0.0};
    HoroField bump{n, z0, {}, 0.0};
    for (double z : z0) {
      gauss.values.push_back(line_gaussian(z, 1.0));
      bump.values.push_back(std::abs(z) <= 1.0 + 1e-12 ? 0.5 : 0.0);
    }
    std::vector<double> errors(ts.size()), masses(ts.size());
    parallel_for(ts.size(), [&](std::size_t i) {
      HoroField v = exact_drift_solution(gauss, ts[i]);
      errors[i] = horo_error(v);
      masses[i] = horo_mass(v);
    });
    double mass_dev = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      rep.set_metric(pre + "horo_error.t" + tag(ts[i]), errors[i]);
      mass_dev = std::max(mass_dev, std::abs(masses[i] - horo_mass(gauss)));
    }
    rep.set_metric(pre + "mass_deviation", mass_dev);
    rep.add_series("n" + std::to_string(n) + "_error", Series{"t", "horo_error", ts, errors});

    const double t_speed = ts.front();
    rep.set_metric(pre + "drift_speed", argmax_drift_speed(gauss, t_speed));
    rep.set_metric(pre + "bump_drift_speed", argmax_drift_speed(bump, t_speed));
    rep.set_metric(pre + "drift_speed_expected", n - 1.0);

    const double t_last = ts.back();
    HoroField point = exact_drift_solution(PointMass{n, 0.0, 1.0}, t_last,
                                           drift_output_grid(gauss, t_last));
    rep.set_metric(pre + "point_mass_error", horo_error(point));

    HoroField v = exact_drift_solution(gauss, t_last);
    Series shape{"xi", "scaled_v", {}, {}};
    const double root_t = std::sqrt(t_last);
    for (std::size_t k = 0; k < v.z.size(); k += 4) {
      shape.x.push_back((v.z[k] - (n - 1) * t_last) / root_t);
      shape.y.push_back(root_t * v.values[k]);
    }
    rep.add_series("n" + std::to_string(n) + "_profile", std::move(shape));
    (void)spec;
  }
  return rep;
}

ExperimentReport counterexample(const Config& cfg) {
  Params p(cfg);
  double a = p.real("a", "1");
  auto ts = p.reals("t", "10,20,40");
  double gap_t = p.real("gap_t", "200");
  double axis_t = p.real("axis_t", "50");
  double eps = p.real("eps", "0.5");
  require_positive_times(ts);
  require_positive_times({gap_t, axis_t});
  if (!(a > 0.0)) throw Error(ErrorCode::DomainError, "displacement a must be positive");
  ExperimentReport rep("counterexample", p.used());

  std::vector<DisplacementL1> parts(ts.size());
  parallel_for(ts.size(), [&](std::size_t i) { parts[i] = displacement_l1(a, ts[i]); });
  Series pos{"t", "positive_part_l1", ts, {}};
  for (std::size_t i = 0; i < ts.size(); ++i) {
    rep.set_metric("positive_l1.t" + tag(ts[i]), parts[i].positive);
    rep.set_metric("negative_l1.t" + tag(ts[i]), parts[i].negative);
    rep.set_metric("displaced_mass.t" + tag(ts[i]), parts[i].displaced_mass);
    pos.y.push_back(parts[i].positive);
  }
  double lo = *std::min_element(pos.y.begin(), pos.y.end());
  double hi = *std::max_element(pos.y.begin(), pos.y.end());
  double med = median(pos.y);
  rep.set_metric("plateau_min", lo);
  rep.set_metric("plateau_median", med);
  rep.set_metric("plateau_spread", (hi - lo) / med);
  rep.add_series("positive_part_l1", std::move(pos));

  const double r_gap = a + 1.0;
  PointwiseGap gap = pointwise_gap(a, r_gap, gap_t);
  rep.set_metric("gap", gap.value);
  rep.set_metric("gap_limit", gap.limit);
  Series gaps{"t", "pointwise_gap", {}, {}};
  for (double t : {10.0, 20.0, 50.0, 100.0, 200.0, 500.0}) {
    gaps.x.push_back(t);
    gaps.y.push_back(pointwise_gap(a, r_gap, t).value);
  }
  rep.add_series("pointwise_gap", std::move(gaps));

  AxisRatio axis = axis_ratio(a, 2.0 * axis_t, axis_t);
  rep.set_metric("axis_ratio_centered", axis.centered);
  rep.set_metric("axis_ratio_literal", axis.literal);
  rep.set_metric("axis_ratio_limit", std::exp(2.0 * a));
  Series section{"r", "axis_ratio", {}, {}};
  for (double r = a + 0.5; r <= 3.0 * axis_t; r += 0.5) {
    section.x.push_back(r);
    section.y.push_back(axis_ratio(a, r, axis_t).centered);
  }
  rep.add_series("axis_ratio", std::move(section));
  // Ratio against e^{(1 + k/2) a} on a < r < k t with k = 3.
  double bound_constant = 0.0;
  for (double r = a + 0.5; r < 3.0 * axis_t; r += 0.5) {
    bound_constant = std::max(bound_constant, axis_ratio(a, r, axis_t).centered / std::exp(2.5 * a));
  }
  rep.set_metric("axis_bound_constant_k3", bound_constant);

  rep.set_metric("two_mass_ratio", two_mass_ratio(a, 2.0 * axis_t, axis_t));
  rep.set_metric("two_mass_ratio_limit", std::cosh(2.0 * a));

  const double t_far = 20.0;
  const double r_far = 2.0 * (2.0 * a / eps) * t_far;
  FarFieldBound far = far_field_delayed_bound(a, eps, r_far, t_far);
  rep.set_metric("far_field_ratio", far.ratio);
  rep.set_metric("far_field_literal_bound", far.literal_bound);
  rep.set_metric("far_field_corrected_bound", far.corrected_bound);
  double far_sup = 0.0;
  for (double t : {10.0, 20.0, 40.0, 80.0}) {
    for (double k = 1.0; k <= 4.0; k += 0.25) {
      far_sup = std::max(far_sup, far_field_delayed_bound(a, eps, k * (2.0 * a / eps) * t, t).ratio);
    }
  }
  rep.set_metric("far_field_sup", far_sup);
  return rep;
}

ExperimentReport forced(const Config& cfg) {
  Params p(cfg);
  int n = p.integer("n", "3");
  auto ts = p.reals("t", "30");
  double r_max = p.real("r_max", "20");
  int nodes = p.integer("nodes", "1000");
  double dt = p.real("dt", "0");
  require_positive_times(ts);
  ExperimentReport rep("forced", p.used());
  KernelSpec spec = odd_spec(n);
  SolverConfig solver;
  solver.dt = dt;

  // f = s g(r) e^{-t} with g = G_(n)(., 1/2) of unit mass.
  auto forcing = [spec](double scale) {
    auto g = [spec, scale](double r) { return scale * kernel_log(spec, r, 0.5).value(); };
    return ForcingTerm{[g](double r, double t) { return g(r) * std::exp(-t); }, std::nullopt, g,
                       [](double t) { return std::exp(-t); }};
  };
  ForcingTerm full_a = forcing(1.0), full_b = forcing(1.0), half = forcing(0.5);

  const double T = ts.back();
  std::vector<double> samples;
  for (double s : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
    if (s < T) samples.push_back(s);
  }
  for (double s : ts) {
    if (samples.empty() || s > samples.back()) samples.push_back(s);
  }

  auto grid = std::make_shared<const RadialGrid>(build_grid(n, r_max, nodes));
  RadialField kernel0 = kernel_field(grid, 1.0);
  kernel0.time = 0.0;
  RadialField bump0 = unit_bump(grid, 1.0);

  struct Run {
    RadialField u;
    const ForcingTerm* f;
    std::vector<RadialField> snapshots;
    double drift = 0.0;
  };
  std::vector<Run> runs{{kernel0, &full_a, {}}, {bump0, &full_b, {}}, {kernel0, &half, {}}};
  parallel_for(runs.size(), [&](std::size_t i) {
    Run& run = runs[i];
    for (double s : samples) {
      EvolveResult res = evolve(run.u, s - run.u.time, solver, run.f);
      run.u = res.field;
      run.drift = std::max(run.drift, res.stats.mass_drift);
      run.snapshots.push_back(run.u);
    }
  });

  const double m0 = solver_mass(kernel0);
  const double injected = 1.0 - std::exp(-T);
  const double final_mass = solver_mass(runs[0].u);
  rep.set_metric("initial_mass", m0);
  rep.set_metric("forcing_total", injected);
  rep.set_metric("final_mass", final_mass);
  rep.set_metric("expected_final_mass", m0 + injected);
  rep.set_metric("final_mass_error", std::abs(final_mass - m0 - injected));
  rep.set_metric("solver_mass_drift", std::max({runs[0].drift, runs[1].drift, runs[2].drift}));

  auto distance_at = [](const RadialField& a, const RadialField& b) {
    auto [aa, bb] = align_fields(a, b);
    return distance_metrics(aa, bb, 1.0);
  };
  const double d_equal0 = distance_metrics(kernel0, bump0, 1.0);
  const double d_unequal0 = 0.0;
  Series equal{"t", "l1_distance_equal_forcing", {0.0}, {d_equal0}};
  Series unequal{"t", "l1_distance_unequal_forcing", {0.0}, {d_unequal0}};
  Series mass{"t", "mass", {0.0}, {m0}};
  double max_increase = 0.0, max_violation = -std::numeric_limits<double>::infinity();
  double prev = d_equal0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    double s = samples[k];
    double de = distance_at(runs[0].snapshots[k], runs[1].snapshots[k]);
    double du = distance_at(runs[0].snapshots[k], runs[2].snapshots[k]);
    double allowance = d_unequal0 + 0.5 * (1.0 - std::exp(-s));
    max_increase = std::max(max_increase, de - prev);
    max_violation = std::max(max_violation, du - allowance);
    prev = de;
    equal.x.push_back(s);
    equal.y.push_back(de);
    unequal.x.push_back(s);
    unequal.y.push_back(du);
    mass.x.push_back(s);
    mass.y.push_back(solver_mass(runs[0].snapshots[k]));
  }
  rep.set_metric("contraction_max_increase", max_increase);
  rep.set_metric("contraction_max_violation", max_violation);
  rep.add_series("l1_equal_forcing", std::move(equal));
  rep.add_series("l1_unequal_forcing", std::move(unequal));
  rep.add_series("mass", std::move(mass));
  return rep;
}

ExperimentReport mass_lines(const Config& cfg) {
  Params p(cfg);
  auto ns = p.ints("n", "2,3");
  auto ts = p.reals("t", "5,10,20");
  double k = p.real("k", "4");
  double annulus_t = p.real("annulus_t", "25");
  double r_max = p.real("r_max", "16");
  int nodes = p.integer("nodes", "800");
  double dt = p.real("dt", "0");
  double radius = p.real("bump_radius", "0.5");
  require_positive_times(ts);
  require_positive_times({annulus_t});
  ExperimentReport rep("mass-lines", p.used());
  SolverConfig solver;
  solver.dt = dt;

  for (int n : ns) {
    KernelSpec spec(n);
    const std::string pre = "n" + std::to_string(n) + ".";
    const std::string sp = "n" + std::to_string(n) + "_";

    // Solver-based half-mass radius from a small unit bump.
    auto grid = std::make_shared<const RadialGrid>(build_grid(n, r_max, nodes));
    RadialField u = unit_bump(grid, radius);
    Series solver_rm{"t", "half_mass_radius", {}, {}};
    Series line{"t", "mass_line", {}, {}};
    for (double t : ts) {
      u = evolve(u, t - u.time, solver).field;
      MassProfile profile = mass_function(u);
      double rm = half_mass_radius(profile);
      rep.set_metric(pre + "half_mass_solver.t" + tag(t), rm);
      rep.set_metric(pre + "annulus_fraction_solver.t" + tag(t), annulus_mass_fraction(profile, k));
      solver_rm.x.push_back(t);
      solver_rm.y.push_back(rm);
      line.x.push_back(t);
      line.y.push_back(spec.mass_line(t));
    }
    rep.add_series(sp + "half_mass_solver", std::move(solver_rm));
    rep.add_series(sp + "mass_line", std::move(line));

    if (!spec.odd()) continue;
    odd_spec(n);
    Series kernel_rm{"t", "half_mass_radius", {}, {}};
    Series rs{"t", "sign_change_radius", {}, {}};
    std::vector<double> rs_times{1.0};
    for (double t : ts) {
      if (t > rs_times.back()) rs_times.push_back(t);
    }
    for (double t : rs_times) {
      double r = sign_change_radius(n, t);
      rep.set_metric(pre + "sign_change.t" + tag(t), r);
      rs.x.push_back(t);
      rs.y.push_back(r);
    }
    std::vector<double> rm_kernel(ts.size());
    parallel_for(ts.size(), [&](std::size_t i) {
      GridPtr g = uniform_grid(n, default_truncation(spec, ts[i]), 0.01);
      rm_kernel[i] = half_mass_radius(mass_function(kernel_field(g, ts[i])));
    });
    for (std::size_t i = 0; i < ts.size(); ++i) {
      rep.set_metric(pre + "half_mass_kernel.t" + tag(ts[i]), rm_kernel[i]);
      kernel_rm.x.push_back(ts[i]);
      kernel_rm.y.push_back(rm_kernel[i]);
    }
    rep.add_series(sp + "half_mass_kernel", std::move(kernel_rm));
    rep.add_series(sp + "sign_change", std::move(rs));

    rep.set_metric(pre + "annulus_fraction.t" + tag(annulus_t), annulus_mass_fraction(spec, annulus_t, k));
    Series curve{"k", "annulus_fraction", {}, {}};
    for (double kk = 0.5; kk <= 8.0 + 1e-9; kk += 0.5) {
      curve.x.push_back(kk);
      curve.y.push_back(annulus_mass_fraction(spec, annulus_t, kk));
    }
    rep.add_series(sp + "annulus_curve", std::move(curve));
  }
  return rep;
}

using Runner = ExperimentReport (*)(const Config&);

const std::map<std::string, Runner>& registry() {
  static const std::map<std::string, Runner> table{
      {"kernel-checks", kernel_checks}, {"radial-converge", radial_converge},
      {"gaussian1d", gaussian1d},       {"delayed", delayed},
      {"horo", horo},                   {"counterexample", counterexample},
      {"forced", forced},               {"mass-lines", mass_lines},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"kernel-checks", "radial-converge", "gaussian1d",
                                              "delayed",       "horo",            "counterexample",
                                              "forced",        "mass-lines"};
  return names;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{"n",     "t",           "a",         "r_max", "nodes",
                                             "dt",    "h",           "k",         "eps",   "bump_radius",
                                             "t_center", "gap_t",    "axis_t",    "annulus_t"};
  return keys;
}

ExperimentReport run_experiment(const std::string& name, const Config& config) {
  auto it = registry().find(name);
  if (it == registry().end()) {
    throw Error(ErrorCode::UnknownExperiment, "unknown experiment '" + name + "'");
  }
  for (const auto& [key, value] : config) {
    if (std::find(config_keys().begin(), config_keys().end(), key) == config_keys().end()) {
      throw Error(ErrorCode::UsageError, "unknown config key '" + key + "'");
    }
  }
  try {
    return it->second(config);
  } catch (const Error& e) {
    std::string message = e.what();
    const std::string prefix = std::string(to_string(e.code())) + ": ";
    if (message.rfind(prefix, 0) == 0) message.erase(0, prefix.size());
    throw Error(e.code(), name + ": " + message);
  }
}

int worker_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  int count = std::max(1, hw);
  if (const char* env = std::getenv("HYPERHEAT_THREADS")) {
    int cap = std::atoi(env);
    if (cap > 0) count = cap;
  }
  return count;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(worker_count()));
  std::vector<std::exception_ptr> failures(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        fn(i);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            failures[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  for (auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
}

}  // namespace hyperheat
