#pragma once

// Forward-mode dual numbers.
//
// Dual<T> carries a value and a first derivative. Nesting (Dual<Dual<double>>)
// gives higher derivatives, which is how the odd-dimensional heat kernels are
// built: each dimension step differentiates the previous kernel once.

#include <cmath>
#include <type_traits>

namespace hyperheat::ad {

template <typename T>
struct Dual {
  T val{};
  T der{};

  constexpr Dual() = default;
  constexpr Dual(double v) : val(v), der(0.0) {}  // NOLINT: implicit constant lift
  constexpr Dual(T v, T d) : val(v), der(d) {}

  constexpr Dual& operator+=(const Dual& o) { val += o.val; der += o.der; return *this; }
  constexpr Dual& operator-=(const Dual& o) { val -= o.val; der -= o.der; return *this; }
  constexpr Dual& operator*=(const Dual& o) { der = der * o.val + val * o.der; val *= o.val; return *this; }
  constexpr Dual& operator/=(const Dual& o) { *this = *this / o; return *this; }

  friend constexpr Dual operator-(const Dual& a) { return {-a.val, -a.der}; }

  friend constexpr Dual operator+(const Dual& a, const Dual& b) { return {a.val + b.val, a.der + b.der}; }
  friend constexpr Dual operator-(const Dual& a, const Dual& b) { return {a.val - b.val, a.der - b.der}; }
  friend constexpr Dual operator*(const Dual& a, const Dual& b) {
    return {a.val * b.val, a.der * b.val + a.val * b.der};
  }
  friend constexpr Dual operator/(const Dual& a, const Dual& b) {
    T q = a.val / b.val;
    return {q, (a.der - q * b.der) / b.val};
  }

  friend constexpr Dual operator+(const Dual& a, double b) { return {a.val + b, a.der}; }
  friend constexpr Dual operator+(double a, const Dual& b) { return {a + b.val, b.der}; }
  friend constexpr Dual operator-(const Dual& a, double b) { return {a.val - b, a.der}; }
  friend constexpr Dual operator-(double a, const Dual& b) { return {a - b.val, -b.der}; }
  friend constexpr Dual operator*(const Dual& a, double b) { return {a.val * b, a.der * b}; }
  friend constexpr Dual operator*(double a, const Dual& b) { return {a * b.val, a * b.der}; }
  friend constexpr Dual operator/(const Dual& a, double b) { return {a.val / b, a.der / b}; }
  friend constexpr Dual operator/(double a, const Dual& b) {
    T q = a / b.val;
    return {q, -q * b.der / b.val};
  }
};

template <typename T>
struct is_dual : std::false_type {};
template <typename T>
struct is_dual<Dual<T>> : std::true_type {};

/// Innermost real value, used for branch decisions inside expressions.
constexpr double primal(double x) { return x; }
template <typename T>
constexpr double primal(const Dual<T>& x) { return primal(x.val); }

/// Seed a variable: value x, derivative 1.
template <typename T>
constexpr Dual<T> variable(const T& x) { return {x, T(1.0)}; }

/// Lift a value into the dual layer as a constant.
template <typename T>
constexpr Dual<T> constant(const T& x) { return {x, T(0.0)}; }

using std::cosh;
using std::exp;
using std::log;
using std::log1p;
using std::sinh;
using std::sqrt;
using std::tanh;

template <typename T>
Dual<T> exp(const Dual<T>& x) {
  T e = exp(x.val);
  return {e, e * x.der};
}

template <typename T>
Dual<T> log(const Dual<T>& x) {
  return {log(x.val), x.der / x.val};
}

template <typename T>
Dual<T> log1p(const Dual<T>& x) {
  return {log1p(x.val), x.der / (1.0 + x.val)};
}

template <typename T>
Dual<T> sqrt(const Dual<T>& x) {
  T s = sqrt(x.val);
  return {s, x.der / (2.0 * s)};
}

template <typename T>
Dual<T> sinh(const Dual<T>& x) {
  return {sinh(x.val), cosh(x.val) * x.der};
}

template <typename T>
Dual<T> cosh(const Dual<T>& x) {
  return {cosh(x.val), sinh(x.val) * x.der};
}

template <typename T>
Dual<T> tanh(const Dual<T>& x) {
  T th = tanh(x.val);
  return {th, (1.0 - th * th) * x.der};
}

}  // namespace hyperheat::ad
