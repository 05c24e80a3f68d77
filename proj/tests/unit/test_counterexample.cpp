#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "hyperheat/counterexample.hpp"
#include "hyperheat/error.hpp"
#include "hyperheat/kernel.hpp"

using namespace hyperheat;

// Reference values: tests/oracles/kernel_oracle.py.

TEST_CASE("displaced kernel value") {
  DisplacedConfig cfg{1.0, 2.0};
  double direct = kernel_log(KernelSpec(3), geodesic_distance(3.0, 1.0, 0.4), 2.0).log_mag();
  CHECK(displaced_value_log(cfg, 3.0, 0.4).log_mag() == doctest::Approx(direct));
  CHECK(displaced_value_log(cfg, 1.0, 0.0).value() == doctest::Approx(kernel_log(KernelSpec(3), 0.0, 2.0).value()));
}

TEST_CASE("axis ratio, two-mass ratio and far-field bound") {
  AxisRatio ax = axis_ratio(1.0, 40.0, 20.0);
  CHECK(ax.centered == doctest::Approx(7.1148360756601357).epsilon(1e-12));
  CHECK(axis_ratio(1.0, 100.0, 50.0).centered == doctest::Approx(7.2786809976118880).epsilon(1e-12));
  CHECK(ax.literal < ax.centered);
  CHECK(two_mass_ratio(1.0, 100.0, 50.0) == doctest::Approx(3.7073439481321745).epsilon(1e-12));
  CHECK(two_mass_ratio(0.1, 100.0, 50.0) - 1.0 == doctest::Approx(0.019814427620362193).epsilon(1e-9));
  FarFieldBound far = far_field_delayed_bound(1.0, 0.5, 160.0, 20.0);
  CHECK(far.ratio == doctest::Approx(0.10161046543337515).epsilon(1e-12));
  CHECK(far.literal_bound == doctest::Approx(0.099574136735727886).epsilon(1e-12));
  CHECK(far.ratio <= far.corrected_bound);
  // a = 0: G_t / G_{t+eps} exceeds 1 near the pole, so only the bound is checked.
  CHECK(far_field_delayed_bound(0.0, 0.5, 1e-6, 10.0).ratio > 1.0);
  for (double r : {1e-6, 2.0, 10.0, 50.0}) {
    FarFieldBound b = far_field_delayed_bound(0.0, 0.5, r, 10.0);
    CHECK(b.ratio <= b.corrected_bound);
  }
}

TEST_CASE("pointwise gap approaches its limit from above") {
  PointwiseGap g200 = pointwise_gap(1.0, 2.0, 200.0);
  CHECK(g200.value == doctest::Approx(0.0067606546304677491).epsilon(1e-10));
  CHECK(g200.limit == doctest::Approx(0.0067227765423066154).epsilon(1e-12));
  CHECK(pointwise_gap(1.0, 2.0, 10.0).value == doctest::Approx(0.0074291671828975104).epsilon(1e-10));
  double prev = 1.0;
  for (double t : {10.0, 20.0, 50.0, 100.0, 200.0}) {
    PointwiseGap g = pointwise_gap(1.0, 2.0, t);
    double dist = std::abs(g.value - g.limit);
    CHECK(dist < prev);
    prev = dist;
  }
}

TEST_CASE("displacement L1 parts balance and the displaced mass is one") {
  DisplacementL1 d = displacement_l1(1.0, 10.0);
  CHECK(d.displaced_mass == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(d.positive == doctest::Approx(d.negative).epsilon(1e-8));
  CHECK(d.positive > 0.4);
  CHECK(positive_part_l1(0.0, 10.0) == 0.0);
}

TEST_CASE("argument checks") {
  auto code = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::UsageError;
  };
  CHECK(code([] { axis_ratio(2.0, 1.0, 1.0); }) == ErrorCode::DomainError);
  CHECK(code([] { pointwise_gap(1.0, 2.0, -1.0); }) == ErrorCode::NonpositiveTime);
  CHECK(code([] { far_field_delayed_bound(1.0, 0.0, 5.0, 1.0); }) == ErrorCode::DomainError);
  CHECK(code([] { displacement_l1(-1.0, 1.0); }) == ErrorCode::DomainError);
}
