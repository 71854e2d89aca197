#include "barron/cutoff.hpp"

#include <algorithm>
#include <cmath>

namespace barron {

namespace {

// exp(-1/t) underflows to a denormal below t = 1/745; treat it as exactly 0.
constexpr double kPsiFloor = 1.0 / 745.0;

double psi(double t) { return t < kPsiFloor ? 0.0 : std::exp(-1.0 / t); }

Jet psi_jet(const Jet& t) {
  if (t[0] < kPsiFloor) return Jet(t.order());
  return exp(-reciprocal(t));
}

}  // namespace

double chi_eval(double z) {
  const double t = std::abs(z);
  if (t <= kCutoffPlateau) return 1.0;
  if (t >= kCutoffSupport) return 0.0;
  const double up = psi(2.0 - t);
  const double down = psi(t - 1.0);
  return up / (up + down);
}

Jet chi_jet(double z, int order) {
  const double t = std::abs(z);
  if (t < kCutoffPlateau) return Jet::constant(1.0, order);
  if (t >= kCutoffSupport) return Jet(order);
  const Jet var = Jet::variable(t, order);
  const Jet up = psi_jet(Jet::constant(2.0, order) + (-var));
  const Jet down = psi_jet(var + Jet::constant(-1.0, order));
  Jet r = up / (up + down);
  if (z < 0.0)
    for (int k = 1; k <= order; k += 2) r[k] = -r[k];
  return r;
}

double profile_eval(ActivationPower s, double b, double z) {
  const double c = chi_eval(z);
  if (c == 0.0) return 0.0;
  return c * relu_pow(z + b, s.value());
}

double profile_eval_real(double s, double b, double z) {
  const double c = chi_eval(z);
  const double u = z + b;
  if (c == 0.0 || u < 0.0) return 0.0;
  if (u == 0.0) return s == 0.0 ? c : 0.0;
  return c * std::pow(u, s);
}

NeuronProfile::NeuronProfile(ActivationPower s, double b) : s_(s), b_(b) {
  if (!std::isfinite(b)) throw std::invalid_argument("NeuronProfile: bias must be finite");
  breakpoints_ = {-2.0, -1.0, 1.0, 2.0};
  if (has_interior_kink()) breakpoints_.push_back(-b);
  std::sort(breakpoints_.begin(), breakpoints_.end());
  breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()), breakpoints_.end());
}

}  // namespace barron
