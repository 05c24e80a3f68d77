#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <memory>

#include "hyperheat/error.hpp"
#include "hyperheat/mass_analysis.hpp"

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

}  // namespace

TEST_CASE("half-mass radius tracks the mass line") {
  KernelSpec s3(3);
  for (double t : {5.0, 20.0}) {
    auto g = std::make_shared<const RadialGrid>(build_grid(3, default_truncation(s3, t), 8000));
    double rm = half_mass_radius(mass_function(kernel_field(g, t)));
    CHECK(std::abs(rm - 2.0 * t) < 2.0);
  }
  auto g = std::make_shared<const RadialGrid>(build_grid(3, 10.0, 200));
  CHECK(code_of([&] { half_mass_radius(mass_function(kernel_field(g, 10.0))); }) == ErrorCode::MassDeficit);
}

TEST_CASE("half-mass radius interpolates linearly") {
  auto g = std::make_shared<const RadialGrid>(grid_from_nodes(3, [] {
    std::vector<double> x;
    for (int i = 0; i <= 20; ++i) x.push_back(0.1 * i);
    return x;
  }()));
  MassProfile p{g, {}, 0.0};
  for (int i = 0; i <= 20; ++i) p.cumulative.push_back(i / 20.0);
  CHECK(half_mass_radius(p) == doctest::Approx(1.0));
}

TEST_CASE("sign-change radius") {
  CHECK(sign_change_radius(3, 1.0) == std::sqrt(10.0));
  CHECK(sign_change_radius(3, 0.01) == doctest::Approx(0.24576411454889014).epsilon(1e-14));
  CHECK(sign_change_radius(3, 100.0) == doctest::Approx(201.49441679609884).epsilon(1e-14));
  double r5 = sign_change_radius(5, 4.0);
  CHECK(kernel_log_dt(KernelSpec(5), r5, 4.0) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(r5 > 4.0 * 4.0);
  CHECK(code_of([] { sign_change_radius(4, 1.0); }) == ErrorCode::EvenDimensionUnsupported);
}

TEST_CASE("annulus mass fraction") {
  KernelSpec s3(3), s5(5);
  CHECK(annulus_mass_fraction(s3, 25.0, 4.0) >= 0.95);
  CHECK(annulus_mass_fraction(s5, 25.0, 4.0) >= 0.95);
  CHECK(annulus_mass_fraction(s3, 25.0, 40.0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(annulus_mass_fraction(s3, 25.0, 1.0) < annulus_mass_fraction(s3, 25.0, 2.0));
}

TEST_CASE("rescaled profile approaches the unit Gaussian") {
  KernelSpec s3(3);
  std::vector<double> xi{0.0, 2.0};
  auto v = rescaled_profile(s3, 100.0, xi);
  CHECK(v[0] == doctest::Approx(0.28209479177387814).epsilon(0.01));
  // rho(2t + sqrt t) / rho(2t) at t = 100
  CHECK(v[1] / v[0] == doctest::Approx(0.81774082222497511 * 0.81774082222497511).epsilon(0.2));
  std::vector<double> outside{-30.0};
  CHECK(code_of([&] { rescaled_profile(s3, 100.0, outside); }) == ErrorCode::OutOfCone);
}

TEST_CASE("Gaussian L1 error decreases like t^{-1/2}") {
  KernelSpec s3(3);
  double prev = 1.0;
  for (double t : {10.0, 25.0, 50.0, 100.0}) {
    BoundedIntegral e = gaussian_l1_error(s3, t);
    CHECK(e.value < prev);
    CHECK(e.tail_bound < 1e-10);
    prev = e.value;
  }
  CHECK(prev <= 0.12);
  double ratio = gaussian_l1_error(s3, 25.0).value / gaussian_l1_error(s3, 100.0).value;
  CHECK(ratio == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("drift frame coordinates") {
  std::vector<double> r{0.0, 20.0, 30.0};
  DriftFrame f = make_drift_frame(3, 10.0, r);
  CHECK(f.s[1] == 0.0);
  CHECK(f.xi[2] == doctest::Approx(10.0 / std::sqrt(10.0)));
  CHECK(f.xi[0] == doctest::Approx(-20.0 / std::sqrt(10.0)));
}
