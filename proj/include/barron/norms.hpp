#pragma once

// Weighted spectral moments of neuron profiles and the spectral-Barron
// upper bounds they yield for whole networks.
//
// A neuron sigma(w.x + b) with ||w||_Omega = 1, extended by chi(w.x), has a
// d-dimensional spectral moment equal to the 1D moment
//   \int_R (1 + |v|)^order |hat h_{s,b}(v)| dv,
// so every quantity here is computed from 1D transforms only.

#include "barron/core.hpp"
#include "barron/fourier1d.hpp"

namespace barron {

struct MomentEstimate {
  double value = 0.0;
  double truncation_xi = 0.0;  // Xi: [-Xi, Xi] integrated numerically
  double tail_bound = 0.0;     // bound on the error of the |v| > Xi estimate
  double quad_err = 0.0;       // quadrature error estimate on [-Xi, Xi]
  bool converged = true;
};

/// \int (1+|v|)^order |hat h(v)| dv for the profile held by `profile`.
///
/// The part |v| <= Xi is integrated adaptively. Beyond Xi, |hat h| is
/// replaced by the modulus of its boundary expansion at the kink, whose
/// leading power integrates in closed form; the error of that replacement is
/// bounded by M_K \int_Xi^inf (1+v)^order v^{-K} dv / 2pi. Xi doubles until
/// the bound falls below tol/2 of the value. For a non-integer power with a
/// kink no M_K exists and the bound is measured from the mismatch between
/// |hat h| and its expansion near Xi instead.
///
/// Requires order < s + 1 - 1e-6, and order < s - 1e-6 when the profile
/// has a kink in (-2, 2) (the moment diverges otherwise); tol in [1e-10, 1e-2].
MomentEstimate moment_integral(const ProfileTransform& profile, double order, double tol = 1e-6);

MomentEstimate moment_integral(ActivationPower s, double b, double order, double tol = 1e-6);

/// \int_Xi^inf (1+v)^p v^{-q} dv for q - p > 1 and Xi > 1.
double power_tail_integral(double p, double q, double xi);

/// Upper bound on ||f||_{F_{s-delta}(Omega)} realized by the cutoff
/// extension of every neuron: (1/m) sum_j |a'_j| M(s, b'_j, s - delta) over
/// the normalized atoms, with constant (w = 0) atoms contributing their
/// absolute value.
double spectral_upper(const Network& net, const Domain& domain, double delta, double tol = 1e-6);

/// S(R) = \int_{-R}^{R} (1+|xi|) hat t(xi) dxi for the triangular hat;
/// grows like (2/pi) ln R.
double truncated_triangular_moment(double R);

}  // namespace barron
