#include "hyperheat/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "hyperheat/error.hpp"

namespace hyperheat {
namespace {

using Rule = boost::math::quadrature::gauss<double, 15>;

struct Adaptive {
  const std::function<double(double)>& f;
  const QuadratureOptions& opts;
  double tol_per_length;
  std::vector<double> accepted;
  double error = 0.0;

  void panel(double a, double b, double whole, int depth) {
    double m = 0.5 * (a + b);
    double left = gauss_legendre_15(f, a, m);
    double right = gauss_legendre_15(f, m, b);
    double halves = left + right;
    double diff = std::abs(halves - whole);
    double roundoff = 64.0 * std::numeric_limits<double>::epsilon() *
                      (std::abs(left) + std::abs(right));
    if (diff <= std::max(tol_per_length * (b - a), roundoff) || m <= a || m >= b) {
      accepted.push_back(halves);
      error += diff;
      return;
    }
    if (depth >= opts.max_depth) {
      throw Error(ErrorCode::QuadratureNonconvergence,
                  "panel [" + std::to_string(a) + ", " + std::to_string(b) +
                      "] not converged after max bisection depth");
    }
    panel(a, m, left, depth + 1);
    panel(m, b, right, depth + 1);
  }
};

}  // namespace

double gauss_legendre_15(const std::function<double(double)>& f, double a, double b) {
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  double half = 0.5 * (b - a);
  double mid = 0.5 * (a + b);
  // Rule::abscissa()[0] is the centre node for odd point counts.
  double sum = w[0] * f(mid);
  for (std::size_t i = 1; i < x.size(); ++i) {
    double dx = half * x[i];
    sum += w[i] * (f(mid - dx) + f(mid + dx));
  }
  return sum * half;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  std::size_t h = values.size() / 2;
  return pairwise_sum(values.first(h)) + pairwise_sum(values.subspan(h));
}

QuadratureResult integrate(const std::function<double(double)>& f, std::span<const double> breaks,
                           const QuadratureOptions& opts) {
  QuadratureResult result;
  if (breaks.size() < 2) return result;
  double total_length = breaks.back() - breaks.front();
  if (!(total_length > 0.0)) return result;

  Adaptive run{f, opts, opts.abs_tol / total_length, {}, 0.0};
  int panels = std::max(1, opts.initial_panels);
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    double a = breaks[k];
    double b = breaks[k + 1];
    if (!(b > a)) continue;
    // Distribute the initial panels proportionally to interval length.
    int count = std::max(1, static_cast<int>(std::ceil(panels * (b - a) / total_length)));
    for (int j = 0; j < count; ++j) {
      double pa = a + (b - a) * j / count;
      double pb = (j + 1 == count) ? b : a + (b - a) * (j + 1) / count;
      run.panel(pa, pb, gauss_legendre_15(f, pa, pb), 0);
    }
  }
  result.value = pairwise_sum(run.accepted);
  result.error_estimate = run.error;
  result.panels = static_cast<int>(run.accepted.size());
  if (!std::isfinite(result.value)) {
    throw Error(ErrorCode::QuadratureNonconvergence, "integrand produced a non-finite value");
  }
  return result;
}

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts) {
  const double breaks[] = {a, b};
  return integrate(f, std::span<const double>(breaks), opts);
}

}  // namespace hyperheat
