#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "hyperheat/error.hpp"
#include "hyperheat/horospheric.hpp"

using namespace hyperheat;

namespace {

double gauss(double x, double t) {
  return std::exp(-x * x / (4.0 * t)) / std::sqrt(4.0 * std::numbers::pi * t);
}

HoroField gaussian_data(int n, double h = 0.05) {
  HoroField v{n, uniform_points(-12.0, 12.0, static_cast<int>(std::lround(24.0 / h)) + 1), {}, 0.0};
  for (double z : v.z) v.values.push_back(gauss(z, 1.0));
  return v;
}

}  // namespace

TEST_CASE("coordinates") {
  CHECK(z_from_y(std::exp(2.0)) == doctest::Approx(2.0));
  CHECK(y_from_z(0.0) == 1.0);
  auto p = uniform_points(-1.0, 1.0, 5);
  CHECK(p == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
}

TEST_CASE("Gaussian data drifts as a Gaussian of variance 2(1 + T)") {
  for (int n : {2, 3}) {
    HoroField v0 = gaussian_data(n);
    HoroField v = exact_drift_solution(v0, 9.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < v.z.size(); ++i) {
      worst = std::max(worst, std::abs(v.values[i] - gauss(v.z[i] - (n - 1) * 9.0, 10.0)));
    }
    CHECK(worst < 1e-5);
    CHECK(horo_mass(v) == doctest::Approx(horo_mass(v0)).epsilon(1e-12));
    CHECK(horo_argmax(v) == doctest::Approx((n - 1) * 9.0).epsilon(1e-6));
    CHECK(argmax_drift_speed(v0, 10.0) == doctest::Approx(n - 1.0).epsilon(1e-6));
  }
}

TEST_CASE("horospheric error decays like 1/t") {
  HoroField v0 = gaussian_data(3);
  double e25 = horo_error(exact_drift_solution(v0, 25.0));
  double e100 = horo_error(exact_drift_solution(v0, 100.0));
  CHECK(e100 < 0.01);
  CHECK(e25 / e100 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("point mass solution is the drifted heat kernel") {
  HoroField v = exact_drift_solution(PointMass{2, 0.5, 2.0}, 4.0, uniform_points(-10.0, 20.0, 301));
  for (std::size_t i = 0; i < v.z.size(); i += 37) {
    CHECK(v.values[i] == doctest::Approx(2.0 * gauss(v.z[i] - 0.5 - 4.0, 4.0)).epsilon(1e-13));
  }
}

TEST_CASE("data must vanish at the ends of its support") {
  HoroField v0{3, uniform_points(0.0, 1.0, 11), std::vector<double>(11, 1.0), 0.0};
  try {
    exact_drift_solution(v0, 1.0);
    FAIL("expected NonintegrableData");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonintegrableData);
  }
}
