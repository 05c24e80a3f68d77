#pragma once

// Expression templates for log G_(n)(r, t), generic over the scalar type so
// the same code evaluates values (double), radial derivatives (nested Dual
// layers, one per dimension step) and time derivatives (Dual in t).

#include <numbers>

#include "hyperheat/dual.hpp"

namespace hyperheat::detail {

inline constexpr double kLog2 = std::numbers::ln2;
inline constexpr double kPi = std::numbers::pi;

/// log(sinh(r) / r), even in r, with no cancellation near r = 0 for the value
/// or for any of its derivatives.
template <typename T>
T log_sinhc(const T& r);

/// log(sinh r) for r > 0.
template <typename T>
T log_sinh(const T& r) {
  using std::exp;
  using std::log;
  using std::log1p;
  if (ad::primal(r) >= 1.0) {
    return r - kLog2 + log1p(-exp(-2.0 * r));
  }
  return log(r) + log_sinhc(r);
}

template <typename T>
T log_sinhc(const T& r) {
  using std::log;
  using std::log1p;
  if (ad::primal(r) < 1.0) {
    // sinh(r)/r - 1 = sum_{k>=1} r^{2k} / (2k+1)!, all terms positive.
    T r2 = r * r;
    T term = r2 / 6.0;
    T sum = term;
    for (int k = 2; k <= 11; ++k) {
      term = term * r2 / static_cast<double>((2 * k) * (2 * k + 1));
      sum = sum + term;
    }
    return log1p(sum);
  }
  return log_sinh(r) - log(r);
}

/// log of the line Gaussian E_1(r, t) = (4 pi t)^{-1/2} e^{-r^2/4t}.
template <typename T>
T log_line_kernel(const T& r, const T& t) {
  using std::log;
  return -0.5 * log(4.0 * kPi * t) - r * r / (4.0 * t);
}

/// log of the closed-form three-dimensional kernel
/// (4 pi t)^{-3/2} e^{-t} (r / sinh r) e^{-r^2/4t}.
template <typename T>
T log_kernel3(const T& r, const T& t) {
  using std::log;
  return -1.5 * log(4.0 * kPi * t) - t - r * r / (4.0 * t) - log_sinhc(r);
}

enum class Base { Line, Closed3 };

/// log G_(N)(r, t) for odd N.
///
/// One step N-2 -> N applies G_(N) = -e^{-(N-2) t} (sinh r)^{-1} d_r G_(N-2) / (2 pi).
/// In log form, with l = log G_(N-2):
///   log G_(N) = -(N-2) t - log 2pi + l + log(-l'/r) - log(sinh r / r),
/// where -l'/r is smooth, even and positive. l' comes from one more Dual layer.
/// Requires r > 0.
template <int N, Base B, typename T>
T log_kernel(const T& r, const T& t) {
  static_assert(N >= 1 && N % 2 == 1, "odd dimensions only");
  using std::log;
  if constexpr (N == 1) {
    return log_line_kernel(r, t);
  } else if constexpr (N == 3 && B == Base::Closed3) {
    return log_kernel3(r, t);
  } else {
    using D = ad::Dual<T>;
    D rr = ad::variable(r);
    D tt = ad::constant(t);
    D prev = log_kernel<N - 2, B>(rr, tt);
    T slope = -prev.der / r;
    return -static_cast<double>(N - 2) * t - log(2.0 * kPi) + prev.val + log(slope) -
           log_sinhc(r);
  }
}

}  // namespace hyperheat::detail
