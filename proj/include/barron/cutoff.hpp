#pragma once

// The smooth cutoff chi and the extended 1D neuron profiles
//   h_{s,b}(z) = chi(z) * max(z + b, 0)^s.
//
// chi is the exponential-bump partition
//   chi(z) = psi(2 - |z|) / (psi(2 - |z|) + psi(|z| - 1)),  psi(t) = exp(-1/t) (t > 0),
// equal to 1 on [-1, 1], 0 for |z| >= 2, smooth and even. Every constant
// measured downstream (decay envelopes, moment constants) is specific to
// this choice of chi.

#include "barron/core.hpp"
#include "barron/jet.hpp"

#include <vector>

namespace barron {

inline constexpr double kCutoffPlateau = 1.0;
inline constexpr double kCutoffSupport = 2.0;

double chi_eval(double z);

/// Taylor jet of chi at z up to `order` (<= Jet::kMaxOrder).
Jet chi_jet(double z, int order);

/// chi(z) * max(z + b, 0)^s, with 0^0 = 1.
double profile_eval(ActivationPower s, double b, double z);

/// Same profile with a real exponent s >= 0.
double profile_eval_real(double s, double b, double z);

class NeuronProfile {
 public:
  NeuronProfile(ActivationPower s, double b);

  ActivationPower power() const noexcept { return s_; }
  double bias() const noexcept { return b_; }
  /// The activation kink -b.
  double kink() const noexcept { return -b_; }
  /// True iff the kink lies strictly inside the cutoff support.
  bool has_interior_kink() const noexcept { return -b_ > -kCutoffSupport && -b_ < kCutoffSupport; }
  /// True iff the profile vanishes identically (kink at or beyond +2).
  bool is_zero() const noexcept { return -b_ >= kCutoffSupport; }

  /// Sorted subset of {-2, -1, -b, 1, 2} inside [-2, 2].
  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }

  double operator()(double z) const { return profile_eval(s_, b_, z); }

 private:
  ActivationPower s_;
  double b_;
  std::vector<double> breakpoints_;
};

}  // namespace barron
