#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <memory>
#include <numbers>

#include "hyperheat/error.hpp"
#include "hyperheat/kernel.hpp"
#include "hyperheat/radial.hpp"

using namespace hyperheat;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::UsageError;
}

GridPtr grid(int n, double r_max, int N, Grading g = Grading::Uniform, double focus = -1.0) {
  return std::make_shared<const RadialGrid>(build_grid(n, r_max, N, g, focus));
}

RadialField bump(GridPtr g, double radius) {
  RadialField u = sample_field(g, [&](double r) { return r <= radius + 1e-12 ? 1.0 : 0.0; }, 0.0);
  double m = solver_mass(u);
  for (double& v : u.values) v /= m;
  return u;
}

}  // namespace

TEST_CASE("grid construction and control volumes") {
  auto g = grid(3, 20.0, 400);
  CHECK(g->size() == 401);
  CHECK(g->nodes.front() == 0.0);
  CHECK(g->r_max() == 20.0);
  double volume = 0.0;
  for (double v : g->control_volumes) volume += v;
  // Cells tile [0, r_max]: 4 pi int_0^R sinh^2 = pi (sinh 2R - 2R).
  CHECK(volume == doctest::Approx(std::numbers::pi * (std::sinh(40.0) - 40.0)).epsilon(1e-12));
  double ball = 0.0;
  auto ball_grid = grid(3, 10.0, 200);
  for (double v : ball_grid->control_volumes) ball += v;
  CHECK(ball == doctest::Approx(762095644.00657373).epsilon(1e-12));
  auto graded = grid(3, 40.0, 400, Grading::Graded, 20.0);
  double h_near = graded->nodes[201] - graded->nodes[200];
  double h_far = graded->nodes[400] - graded->nodes[399];
  CHECK(graded->r_max() == doctest::Approx(40.0));
  CHECK(h_far > h_near);
  CHECK(code_of([] { build_grid(3, 10.0, 8); }) == ErrorCode::DegenerateGrid);
  CHECK(code_of([] { build_grid(3, -1.0, 100); }) == ErrorCode::DegenerateGrid);
  CHECK(code_of([] { build_grid(1, 10.0, 100); }) == ErrorCode::DimensionOutOfRange);
  CHECK(code_of([] { grid_from_nodes(3, {0.0, 1.0, 0.5}); }) == ErrorCode::DegenerateGrid);
}

TEST_CASE("kernel propagation is second order and conservative") {
  std::vector<double> errors;
  for (double h : {0.01, 0.005}) {
    auto g = grid(3, 24.0, static_cast<int>(std::lround(24.0 / h)));
    EvolveResult res = evolve(kernel_field(g, 1.0), 1.0);
    CHECK(res.field.time == doctest::Approx(2.0));
    CHECK(res.stats.mass_drift < 1e-10);
    CHECK(res.stats.min_relative_value >= -1e-14);
    errors.push_back(distance_metrics(res.field, kernel_field(res.field.grid, 2.0), 1.0));
  }
  CHECK(errors[1] < 1e-4);
  CHECK(errors[0] / errors[1] > 3.5);
}

TEST_CASE("even dimension: solver conserves mass and the mass line moves at speed n-1") {
  auto g = grid(2, 12.0, 600);
  RadialField u = bump(g, 0.5);
  EvolveResult res = evolve(u, 8.0);
  CHECK(res.stats.mass_drift < 1e-9);
  CHECK(res.stats.extensions >= 1);
  MassProfile m = mass_function(res.field);
  CHECK(m.total() == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(m.at(8.0) == doctest::Approx(0.5).epsilon(0.2));
}

TEST_CASE("maximum principle and L1 contraction along the flow") {
  auto g = grid(3, 16.0, 800);
  RadialField a = bump(g, 1.0);
  RadialField b = kernel_field(g, 0.5);
  b.time = 0.0;
  double d0 = distance_metrics(a, b, 1.0);
  double sup0 = *std::max_element(a.values.begin(), a.values.end());
  double prev = d0;
  for (double t : {1.0, 2.0, 4.0}) {
    a = evolve(a, t - a.time).field;
    b = evolve(b, t - b.time).field;
    auto [aa, bb] = align_fields(a, b);
    double d = distance_metrics(aa, bb, 1.0);
    CHECK(d <= prev + 1e-12);
    prev = d;
    CHECK(*std::max_element(a.values.begin(), a.values.end()) <= sup0);
    CHECK(*std::min_element(a.values.begin(), a.values.end()) >= -1e-15 * sup0);
  }
}

TEST_CASE("forcing: injected mass equals the space-time integral") {
  KernelSpec s3(3);
  auto g = grid(3, 16.0, 800);
  RadialField u = kernel_field(g, 1.0);
  u.time = 0.0;
  ForcingTerm f{[&](double r, double t) { return kernel_log(s3, r, 0.5).value() * std::exp(-t); }, 1.0};
  EvolveResult res = evolve(u, 3.0, {}, &f);
  double expected = solver_mass(u) + (1.0 - std::exp(-3.0));
  CHECK(solver_mass(res.field) == doctest::Approx(expected).epsilon(1e-4));
  CHECK(res.stats.mass_injected == doctest::Approx(1.0 - std::exp(-3.0)).epsilon(1e-4));
  CHECK(solver_mass(res.field) - solver_mass(u) == doctest::Approx(res.stats.mass_injected).epsilon(1e-10));

  ForcingTerm sep{{}, std::nullopt, [&](double r) { return kernel_log(s3, r, 0.5).value(); },
                  [](double t) { return std::exp(-t); }};
  EvolveResult res2 = evolve(u, 3.0, {}, &sep);
  for (std::size_t i = 0; i < res.field.values.size(); ++i) {
    CHECK(res2.field.values[i] == doctest::Approx(res.field.values[i]).epsilon(1e-12));
  }
}

TEST_CASE("solver guards") {
  auto g = grid(3, 10.0, 200);
  RadialField u = kernel_field(g, 1.0);
  CHECK(code_of([&] { evolve(u, 0.0); }) == ErrorCode::NonpositiveTime);
  CHECK(code_of([&] { evolve(u, 400.0); }) == ErrorCode::HorizonViolation);
  SolverConfig odd_start;
  odd_start.startup_half_steps = 3;
  CHECK(code_of([&] { evolve(u, 1.0, odd_start); }) == ErrorCode::DomainError);
  RadialField bad = u;
  bad.values[3] = std::nan("");
  CHECK(code_of([&] { evolve(bad, 1.0); }) == ErrorCode::InstabilityDetected);
}

TEST_CASE("distances, intersections and Harnack ratios") {
  auto g = grid(3, 40.0, 2000);
  RadialField a = kernel_field(g, 10.0);
  RadialField b = kernel_field(g, 11.0);
  b.time = 10.0;
  CHECK(intersection_count(a, b) == 1);
  CHECK(distance_metrics(a, a, 1.0) == 0.0);
  CHECK(distance_metrics(a, b, kInfNorm) == doctest::Approx(std::abs(a.values[0] - b.values[0])));
  RadialField other_time = kernel_field(g, 11.0);
  CHECK(code_of([&] { distance_metrics(a, other_time, 1.0); }) == ErrorCode::GridMismatch);
  auto g2 = grid(3, 40.0, 1000);
  CHECK(code_of([&] { distance_metrics(a, kernel_field(g2, 10.0), 1.0); }) == ErrorCode::GridMismatch);
  CHECK(code_of([&] { align_fields(a, kernel_field(g2, 10.0)); }) == ErrorCode::GridMismatch);
  auto short_grid = std::make_shared<const RadialGrid>(grid_from_nodes(3, {g->nodes.begin(), g->nodes.begin() + 500}));
  auto [wide, padded] = align_fields(a, kernel_field(short_grid, 10.0));
  CHECK(padded.grid == a.grid);
  CHECK(padded.values[499] == a.values[499]);
  CHECK(padded.values[500] == 0.0);

  HarnackRatios h = harnack_check(a, 1.0, 2.0);
  CHECK(h.ratio_min == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(h.ratio_max == doctest::Approx(1.0).epsilon(1e-12));
  RadialField tiny = kernel_field(grid(3, 1.0, 16), 1e-3);
  CHECK(code_of([&] { harnack_check(tiny, 1.0, 1.0); }) == ErrorCode::EmptyRegion);
}

TEST_CASE("profile CSV round trip") {
  auto g = grid(3, 8.0, 100);
  RadialField u = kernel_field(g, 1.0);
  auto path = std::filesystem::temp_directory_path() / "hyperheat_profile_roundtrip.csv";
  write_profile_csv(u, path.string());
  RadialField back = read_profile_csv(path.string(), 3, 1.0);
  CHECK(back.grid->nodes == g->nodes);
  CHECK(back.values == u.values);
  std::filesystem::remove(path);
}
