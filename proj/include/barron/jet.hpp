#pragma once

// Truncated Taylor series arithmetic. A Jet holds c_k = f^(k)(z0) / k! for
// k = 0..order(); derivatives of the cutoff and the neuron profile are read
// off these coefficients.

#include <array>
#include <cassert>
#include <cmath>

namespace barron {

class Jet {
 public:
  static constexpr int kMaxOrder = 16;

  Jet() = default;
  explicit Jet(int order) : order_(order) { assert(order >= 0 && order <= kMaxOrder); }

  static Jet constant(double c, int order) {
    Jet j(order);
    j.c_[0] = c;
    return j;
  }
  /// The jet of z -> z at z0.
  static Jet variable(double z0, int order) {
    Jet j(order);
    j.c_[0] = z0;
    if (order >= 1) j.c_[1] = 1.0;
    return j;
  }

  int order() const noexcept { return order_; }
  double operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }
  double& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }
  double value() const { return c_[0]; }

  /// k-th derivative at the expansion point.
  double derivative(int k) const {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return c_[static_cast<std::size_t>(k)] * f;
  }

  bool is_zero() const {
    for (int k = 0; k <= order_; ++k)
      if (c_[static_cast<std::size_t>(k)] != 0.0) return false;
    return true;
  }

  Jet operator-() const {
    Jet r(order_);
    for (int k = 0; k <= order_; ++k) r[k] = -(*this)[k];
    return r;
  }

  friend Jet operator+(const Jet& x, const Jet& y) {
    Jet r(x.order_);
    for (int k = 0; k <= r.order_; ++k) r[k] = x[k] + y[k];
    return r;
  }

  friend Jet operator*(const Jet& x, const Jet& y) {
    Jet r(x.order_);
    for (int k = 0; k <= r.order_; ++k) {
      double acc = 0.0;
      for (int i = 0; i <= k; ++i) acc += x[i] * y[k - i];
      r[k] = acc;
    }
    return r;
  }

  friend Jet operator/(const Jet& x, const Jet& y) {
    Jet r(x.order_);
    const double y0 = y[0];
    for (int k = 0; k <= r.order_; ++k) {
      double acc = x[k];
      for (int i = 1; i <= k; ++i) acc -= y[i] * r[k - i];
      r[k] = acc / y0;
    }
    return r;
  }

  /// Coefficient k of the product x*y, without forming the whole product.
  static double product_coefficient(const Jet& x, const Jet& y, int k) {
    double acc = 0.0;
    for (int i = 0; i <= k; ++i) acc += x[i] * y[k - i];
    return acc;
  }

 private:
  int order_ = 0;
  std::array<double, kMaxOrder + 1> c_{};
};

inline Jet exp(const Jet& g) {
  Jet r(g.order());
  r[0] = std::exp(g[0]);
  if (r[0] == 0.0) return r;
  for (int k = 1; k <= g.order(); ++k) {
    double acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += j * g[j] * r[k - j];
    r[k] = acc / k;
  }
  return r;
}

inline Jet reciprocal(const Jet& x) {
  return Jet::constant(1.0, x.order()) / x;
}

/// u^s for a jet with u[0] > 0 and real exponent s (f' u = s u' f).
inline Jet pow(const Jet& u, double s) {
  Jet r(u.order());
  const double u0 = u[0];
  assert(u0 > 0.0);
  r[0] = std::pow(u0, s);
  for (int k = 1; k <= u.order(); ++k) {
    double acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += (s * j - (k - j)) * u[j] * r[k - j];
    r[k] = acc / (k * u0);
  }
  return r;
}

/// Jet of (z - z0)^s at a point where z - z0 = u > 0:
/// coefficients binom(s, k) u^(s-k). Exact zeros beyond k = s for integer s.
inline Jet shifted_power(double u, double s, int order) {
  Jet r(order);
  r[0] = std::pow(u, s);
  for (int k = 1; k <= order; ++k) r[k] = r[k - 1] * (s - (k - 1)) / (k * u);
  return r;
}

}  // namespace barron
