#pragma once

// 1D Fourier transforms with the convention
//   hat f(xi) = (1/2pi) \int f(z) e^{-i xi z} dz,
// for the extended neuron profiles h_{s,b} and the triangular hat.
//
// For |xi| > 1 the transform is rewritten by integrating by parts K times
// from the kink z0 = -b:
//   2pi hat h(xi) = e^{-i xi z0} sum_{k < K-s} beta_k (i xi)^{-(s+k+1)}
//                   + (i xi)^{-K} \int_{z0}^{2} h^{(K)}(z) e^{-i xi z} dz,
// beta_k = Gamma(s+k+1) chi^{(k)}(z0)/k!. The boundary sum is exact; the
// remainder is bounded by M_K / |xi|^K with M_K = \int |h^{(K)}|, and is only
// integrated numerically when that bound is not already below tolerance.
// This removes the catastrophic cancellation a direct quadrature of an O(1)
// integrand suffers when the true transform is O(|xi|^{-(s+1)}).

#include "barron/core.hpp"

#include <array>
#include <complex>
#include <limits>
#include <memory>
#include <span>
#include <vector>

namespace barron {

struct SpectrumSample {
  double xi = 0.0;
  std::complex<double> value;
  double err_estimate = 0.0;  // absolute
  bool converged = true;
  bool beyond_range = false;  // |xi| above the validated range (1e4)
};

/// Transform of one profile h_{s,b}, with everything that depends only on
/// (s, b) precomputed. Immutable after construction; safe to share across
/// threads.
class ProfileTransform {
 public:
  static constexpr int kExtraOrders = 10;
  static constexpr int kGaussNodes = 10;
  static constexpr double kMaxFrequency = 1e4;

  ProfileTransform(ActivationPower s, double b);

  /// Real-exponent route: max(z+b,0)^s evaluated through pow for any s >= 0,
  /// the plateau is integrated rather than skipped. For non-integer s with a
  /// kink in (-2, 2) the kink singularity of h^{(floor(s)+1)} is removed by
  /// the substitution z = z0 + w t^{1/alpha}.
  static ProfileTransform real_power(double s, double b);

  /// hat h(xi) with |error| <= max(rel_tol |value|, 1e-16 (1+|b|)^s) when
  /// converged. rel_tol must lie in [1e-14, 1e-4].
  SpectrumSample operator()(double xi, double rel_tol = 1e-10) const;

  double power() const noexcept { return s_; }
  double bias() const noexcept { return b_; }
  double kink() const noexcept { return -b_; }
  bool vanishes() const noexcept { return -b_ >= 2.0; }
  bool has_kink() const noexcept { return -b_ > -2.0 && -b_ < 2.0; }
  bool integer_power() const noexcept { return integer_; }
  /// Kink present and s non-integer: no finite M_K beyond K = floor(s)+1.
  bool singular() const noexcept { return has_kink() && !integer_; }

  /// beta_0 .. beta_{kExtraOrders}; all zero when there is no kink.
  std::span<const double> asymptotic_coefficients() const noexcept { return beta_; }

  /// (1/2pi) e^{-i xi z0} sum_{k < terms} beta_k (i xi)^{-(s+k+1)}.
  std::complex<double> asymptotic(double xi, int terms) const;

  /// Smallest K with a nonzero remainder integrand beyond the boundary sum.
  int first_remainder_order() const noexcept { return first_order_; }
  /// Upper bound on \int_{z0}^{2} |h^{(K)}|; +inf when not available.
  double remainder_l1(int K) const;

  /// Lower integration limit max(z0, -2).
  double lower_limit() const noexcept { return lower_; }

  /// h^{(K)}(z) for z in (lower_limit(), 2).
  double derivative(double z, int K) const;

 private:
  ProfileTransform(double s, double b, bool integer_mode);

  std::complex<double> boundary_sum(double xi, int K) const;
  std::complex<double> remainder_integral(double xi, int K, double rel_tol, double& err, bool& converged) const;

  // Samples of h^{(K)} at fixed Gauss nodes, refined per frequency octave;
  // shared between copies.
  struct NodeTable;

  double s_;
  double b_;
  bool integer_;
  bool integer_mode_;
  double lower_;
  int first_order_;
  std::vector<double> pieces_;
  std::vector<double> beta_;
  std::array<double, kExtraOrders + 1> m_{};  // m_[k] bounds \int |h^{(first_order_ + k)}|
  std::shared_ptr<const NodeTable> low_;   // K = 0, |xi| <= 1
  std::shared_ptr<const NodeTable> high_;  // K = first_order_
};

/// hat h_{s,b}(xi).
SpectrumSample ft_profile(ActivationPower s, double b, double xi, double rel_tol = 1e-10);

/// (1 - cos xi) / (pi xi^2), the transform of max(1 - |x|, 0).
double ft_triangular(double xi);

/// (i xi)^{-gamma} on the principal branch.
std::complex<double> inverse_i_power(double xi, double gamma);

}  // namespace barron
