// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hyperheat/experiments.hpp"
#include "hyperheat/report.hpp"

using namespace hyperheat;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

const std::map<std::string, Config>& configs() {
  static const std::map<std::string, Config> table{
      {"kernel-checks", {{"n", "3,5"}, {"t", "0.5,1,5,20"}}},
      {"radial-converge", {{"n", "3"}, {"t", "10,25,50"}, {"h", "0.005"}, {"bump_radius", "1"}}},
      {"mass-lines", {{"n", "2,3"}, {"t", "5,10,20"}, {"k", "4"}, {"annulus_t", "25"}}},
      {"gaussian1d", {{"n", "3"}, {"t", "10,25,50,100"}}},
      {"delayed", {{"n", "3"}, {"t", "10,25,50"}, {"t_center", "100"}}},
      {"horo", {{"n", "2,3"}, {"t", "10,25,50,100"}}},
      {"counterexample", {{"a", "1"}, {"t", "10,20,40"}, {"gap_t", "200"}, {"axis_t", "50"}}},
      {"forced", {{"n", "3"}, {"t", "30"}}},
  };
  return table;
}

std::map<std::string, ExperimentReport>& cache() {
  static std::map<std::string, ExperimentReport> reports;
  return reports;
}

const ExperimentReport& report(const std::string& name) {
  auto it = cache().find(name);
  if (it == cache().end()) it = cache().emplace(name, run_experiment(name, configs().at(name))).first;
  return it->second;
}

nlohmann::json fixture() {
  std::ifstream in(fs::path(HYPERHEAT_FIXTURES) / "calibration.json");
  if (!in) throw std::runtime_error("missing calibration fixture");
  return nlohmann::json::parse(in);
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

double rel_dev(double value, double target) { return std::abs(value - target) / std::abs(target); }

Outcome kernel_conservation() {
  const auto& r = report("kernel-checks");
  double worst = 0.0;
  for (const char* n : {"n3", "n5"}) {
    for (const char* t : {"0.5", "1", "5", "20"}) {
      worst = std::max(worst, std::abs(r.metric(std::string(n) + ".mass.t" + t) - 1.0));
    }
  }
  return {worst <= 1e-6, fmt("max |mass - 1| = %.3g (tol 1e-6)", worst)};
}

Outcome recurrence_oracle() {
  double e = report("kernel-checks").metric("n3.line_route_max_rel_error");
  return {e <= 1e-8, fmt("max rel error = %.3g (tol 1e-8)", e)};
}

Outcome davies_sandwich() {
  const auto& r = report("kernel-checks");
  double lo = r.metric("n3.davies_ratio_min"), hi = r.metric("n3.davies_ratio_max");
  double diff = r.metric("n3.davies_analytic_max_abs_diff");
  bool ok = lo >= 0.99 && hi <= 2.01 && diff <= 1e-10;
  return {ok, fmt("ratio in [%.6f, %.6f], analytic diff %.3g", lo, hi, diff)};
}

Outcome solver_order() {
  const auto& r = report("radial-converge");
  double e1 = r.metric("kernel_l1_error_h"), ratio = r.metric("kernel_order_ratio");
  double drift = r.metric("kernel_mass_drift");
  bool ok = e1 <= 1e-3 && ratio >= 3.5 && drift <= 1e-6;
  return {ok, fmt("L1 error %.3g at h=0.005, halving ratio %.3f, mass drift %.3g", e1, ratio, drift)};
}

Outcome mass_lines() {
  const auto& r = report("mass-lines");
  double d3 = std::abs(r.metric("n3.half_mass_solver.t20") - 40.0);
  double d2 = std::abs(r.metric("n2.half_mass_solver.t20") - 20.0);
  double rs = r.metric("n3.sign_change.t1");
  double frac = r.metric("n3.annulus_fraction.t25");
  bool ok = d3 <= 2.0 && d2 <= 2.5 && rs == std::sqrt(10.0) && frac >= 0.95;
  return {ok, fmt("|r_m - 2t| = %.3f (n=3), |r_m - t| = %.3f (n=2), r_s(3,1) = %.17g, annulus %.5f",
                  d3, d2, rs, frac)};
}

Outcome gaussian_limit() {
  const auto& r = report("gaussian1d");
  std::vector<double> e;
  for (const char* t : {"10", "25", "50", "100"}) e.push_back(r.metric(std::string("n3.l1_error.t") + t));
  double at0 = r.metric("n3.rescaled_at_0");
  bool ok = strictly_decreasing(e) && e.back() <= 0.12 && std::abs(at0 - 0.28209) <= 0.01;
  return {ok, fmt("L1 errors %.4f %.4f %.4f %.4f, rescaled(0) = %.5f", e[0], e[1], e[2], e[3], at0)};
}

Outcome radial_convergence() {
  const auto& r = report("radial-converge");
  double bound = fixture()["weighted_sup_error"]["bound"].get<double>();
  std::vector<double> l1, sup;
  for (const char* t : {"10", "25", "50"}) {
    l1.push_back(r.metric(std::string("l1_error.t") + t));
    sup.push_back(r.metric(std::string("weighted_sup_error.t") + t));
  }
  double sup_max = *std::max_element(sup.begin(), sup.end());
  bool ok = strictly_decreasing(l1) && l1.back() <= 0.2 && sup_max <= bound;
  return {ok, fmt("L1 %.4f %.4f %.4f, weighted sup max %.4g (bound %.3g)", l1[0], l1[1], l1[2], sup_max,
                  bound)};
}

Outcome delayed_kernel() {
  const auto& r = report("delayed");
  std::vector<double> d;
  for (const char* t : {"10", "25", "50"}) d.push_back(r.metric(std::string("l1_distance.t") + t));
  double ratio = r.metric("center_ratio");
  double dev = rel_dev(ratio, std::exp(-1.0));
  bool ok = strictly_decreasing(d) && dev <= 0.02;
  return {ok, fmt("L1 distances %.4f %.4f %.4f, center ratio %.5f (%.2f%% from 1/e)", d[0], d[1], d[2], ratio,
                  100 * dev)};
}

Outcome horospheric() {
  const auto& r = report("horo");
  double e2 = r.metric("n2.horo_error.t100"), e3 = r.metric("n3.horo_error.t100");
  double s2 = r.metric("n2.drift_speed"), s3 = r.metric("n3.drift_speed");
  bool ok = e2 <= 0.01 && e3 <= 0.01 && rel_dev(s2, 1.0) <= 0.02 && rel_dev(s3, 2.0) <= 0.02;
  return {ok, fmt("error %.3g (n=2) %.3g (n=3), drift speed %.6f (n=2) %.6f (n=3)", e2, e3, s2, s3)};
}

Outcome counterexample() {
  const auto& r = report("counterexample");
  double threshold = fixture()["positive_part_l1"]["threshold"].get<double>();
  double gap = r.metric("gap");
  double lo = r.metric("plateau_min"), med = r.metric("plateau_median");
  double axis = r.metric("axis_ratio_centered"), two = r.metric("two_mass_ratio");
  bool ok = rel_dev(gap, 0.00672) <= 0.10 && lo >= 0.8 * med && lo >= threshold &&
            rel_dev(axis, std::exp(2.0)) <= 0.05 && rel_dev(two, std::cosh(2.0)) <= 0.05;
  return {ok, fmt("gap %.6f, plateau min %.6f / median %.6f (threshold %.2f), axis %.4f, two-mass %.4f", gap,
                  lo, med, threshold, axis, two)};
}

Outcome forced_equation() {
  const auto& r = report("forced");
  double err = r.metric("final_mass_error");
  double increase = r.metric("contraction_max_increase");
  double violation = r.metric("contraction_max_violation");
  bool ok = err <= 1e-4 && increase <= 1e-12 && violation <= 0.0;
  return {ok, fmt("final mass %.8f vs %.8f (err %.3g), equal-forcing increase %.3g, unequal-forcing slack %.3g",
                  r.metric("final_mass"), r.metric("expected_final_mass"), err, increase, violation)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  fs::path root = fs::temp_directory_path() / "hyperheat_acceptance";
  fs::remove_all(root);
  std::size_t files = 0, mismatched = 0;
  for (const auto& name : experiment_names()) {
    auto first = write_report(report(name), root / "a");
    setenv("HYPERHEAT_THREADS", "3", 1);
    ExperimentReport again = run_experiment(name, configs().at(name));
    unsetenv("HYPERHEAT_THREADS");
    auto second = write_report(again, root / "b");
    if (first.size() != second.size()) {
      ++mismatched;
      continue;
    }
    for (std::size_t i = 0; i < first.size(); ++i) {
      ++files;
      if (first[i].filename() != second[i].filename() || slurp(first[i]) != slurp(second[i])) ++mismatched;
    }
  }
  fs::remove_all(root);
  return {mismatched == 0, fmt("%zu artifacts from %zu experiments, %zu differ", files,
                               experiment_names().size(), mismatched)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"kernel conservation", kernel_conservation},
      {"recurrence oracle", recurrence_oracle},
      {"Davies sandwich n=3", davies_sandwich},
      {"solver order", solver_order},
      {"mass-line geometry", mass_lines},
      {"Gaussian 1D limit", gaussian_limit},
      {"radial convergence", radial_convergence},
      {"delayed kernel", delayed_kernel},
      {"horospheric drift", horospheric},
      {"counterexample", counterexample},
      {"forced equation", forced_equation},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s [%2zu] %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
