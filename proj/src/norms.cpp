#include "barron/norms.hpp"

#include "barron/parallel.hpp"
#include "barron/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>
#include <variant>

namespace barron {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSpectrumTol = 1e-10;
constexpr double kFirstCut = 16.0;
constexpr double kMaxCut = 1048576.0;
constexpr double kMaxCutSingular = 16384.0;

struct Tail {
  double estimate = 0.0;
  double bound = 0.0;
};

// \int_Xi^inf (1+v)^order (|expansion(v)| - leading(v)) dv, integrated in
// t = log(v / Xi); the integrand decays at least like e^{-t}.
double expansion_correction(const ProfileTransform& profile, double order, double xi_cut, int terms) {
  const auto beta = profile.asymptotic_coefficients();
  bool higher = false;
  for (int k = 1; k < terms && k < static_cast<int>(beta.size()); ++k) higher = higher || beta[static_cast<std::size_t>(k)] != 0.0;
  if (!higher) return 0.0;
  const double s = profile.power();
  const double lead = std::abs(beta[0]) / kTwoPi;
  auto g = [&](double t) {
    const double v = xi_cut * std::exp(t);
    const double full = std::abs(profile.asymptotic(v, terms));
    return v * std::pow(1.0 + v, order) * (full - lead * std::pow(v, -(s + 1.0)));
  };
  const double knots[] = {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0};
  return integrate_adaptive(g, knots, 0.0, 1e-10).value;
}

Tail tail_beyond(const ProfileTransform& profile, double order, double xi_cut) {
  Tail tail;
  const double s = profile.power();
  const auto beta = profile.asymptotic_coefficients();
  const double lead = profile.has_kink() ? std::abs(beta[0]) / kTwoPi * power_tail_integral(order, s + 1.0, xi_cut) : 0.0;

  if (profile.singular()) {
    const int terms = static_cast<int>(beta.size());
    tail.estimate = lead + expansion_correction(profile, order, xi_cut, terms);
    double mismatch = 0.0;
    for (double f : {0.5, 0.75, 1.0}) {
      const double v = f * xi_cut;
      const double asym = std::abs(profile.asymptotic(v, terms));
      const double actual = std::abs(profile(v, kSpectrumTol).value);
      if (asym > 0.0) mismatch = std::max(mismatch, std::abs(actual - asym) / asym);
    }
    const double last = std::abs(beta.back()) / kTwoPi * power_tail_integral(order, s + terms, xi_cut);
    tail.bound = 2.0 * mismatch * tail.estimate + last;
    return tail;
  }

  int best = -1;
  double best_bound = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= ProfileTransform::kExtraOrders; ++k) {
    const int K = profile.first_remainder_order() + k;
    if (!(K - order - 1.0 > 1e-9)) continue;
    if (profile.has_kink() && K < s + 2) continue;
    const double m = profile.remainder_l1(K);
    if (!std::isfinite(m)) continue;
    const double bound = m * power_tail_integral(order, K, xi_cut) / kTwoPi;
    if (bound < best_bound) {
      best_bound = bound;
      best = K;
    }
  }
  tail.bound = best_bound;
  if (profile.has_kink()) {
    const int terms = best > 0 ? best - static_cast<int>(s) : 1;
    tail.estimate = lead + expansion_correction(profile, order, xi_cut, terms);
  }
  return tail;
}

}  // namespace

double power_tail_integral(double p, double q, double xi) {
  if (!(q - p > 1.0)) throw std::invalid_argument("power_tail_integral: needs q - p > 1");
  if (!(xi > 1.0)) throw std::invalid_argument("power_tail_integral: needs Xi > 1");
  // (1+v)^p = v^p sum_m binom(p, m) v^{-m}, convergent for v > 1.
  double binom = 1.0, total = 0.0;
  for (int m = 0; m < 400; ++m) {
    const double term = binom * std::pow(xi, p - q + 1.0 - m) / (q + m - p - 1.0);
    total += term;
    if (std::abs(term) <= 1e-17 * std::abs(total)) break;
    binom *= (p - m) / (m + 1.0);
    if (binom == 0.0) break;
  }
  return total;
}

MomentEstimate moment_integral(const ProfileTransform& profile, double order, double tol) {
  const double s = profile.power();
  if (!std::isfinite(order) || !(order < s + 1.0 - 1e-6))
    throw std::invalid_argument("moment_integral: order must be < s + 1 - 1e-6");
  if (profile.has_kink() && !(order < s - 1e-6))
    throw std::invalid_argument("moment_integral: moment diverges for order >= s when the kink lies in (-2, 2)");
  if (!(tol >= 1e-10 && tol <= 1e-2)) throw std::invalid_argument("moment_integral: tol must lie in [1e-10, 1e-2]");

  MomentEstimate out;
  if (profile.vanishes()) return out;

  auto integrand = [&](double v) { return std::pow(1.0 + v, order) * std::abs(profile(v, kSpectrumTol).value); };
  const double seg_tol = tol / 10.0;
  const double first_knots[] = {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, kFirstCut};
  auto q = integrate_adaptive(integrand, first_knots, 0.0, seg_tol);
  double partial = q.value, quad_err = q.error;
  bool converged = q.converged;

  const double cap = profile.singular() ? kMaxCutSingular : kMaxCut;
  double cut = kFirstCut;
  Tail tail = tail_beyond(profile, order, cut);
  while (tail.bound > 0.5 * tol * (partial + tail.estimate)) {
    if (cut >= cap) {
      converged = false;
      break;
    }
    const double knots[] = {cut, 1.5 * cut, 2.0 * cut};
    auto seg = integrate_adaptive(integrand, knots, 0.0, seg_tol);
    partial += seg.value;
    quad_err += seg.error;
    converged = converged && seg.converged;
    cut *= 2.0;
    tail = tail_beyond(profile, order, cut);
  }

  // |hat h(-v)| = |hat h(v)| for a real profile.
  out.value = 2.0 * (partial + tail.estimate);
  out.truncation_xi = cut;
  out.tail_bound = 2.0 * tail.bound;
  out.quad_err = 2.0 * quad_err;
  out.converged = converged;
  return out;
}

MomentEstimate moment_integral(ActivationPower s, double b, double order, double tol) {
  return moment_integral(ProfileTransform(s, b), order, tol);
}

double spectral_upper(const Network& net, const Domain& domain, double delta, double tol) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("spectral_upper: delta must lie in (0, 1)");
  net.power().require_positive("spectral_upper");
  if (net.dim() != domain.dim()) throw std::invalid_argument("spectral_upper: dimension mismatch");
  const ActivationPower s = net.power();
  const double order = s.value() - delta;

  double constant_part = 0.0;
  std::vector<double> weight;  // |a'| per atom
  std::vector<double> bias;
  for (Eigen::Index j = 0; j < net.width(); ++j) {
    const auto form = normalize_neuron(s, domain, net.outer()[j], net.inner().row(j).transpose(), net.bias()[j]);
    if (const auto* c = std::get_if<ConstantNeuron<double>>(&form)) {
      constant_part += std::abs(c->value);
    } else {
      const auto& n = std::get<NormalizedNeuron<double>>(form);
      if (n.a == 0.0) continue;
      weight.push_back(std::abs(n.a));
      bias.push_back(n.b);
    }
  }

  // Identical biases share one moment evaluation.
  std::map<double, std::size_t> slot;
  std::vector<double> unique;
  for (double b : bias)
    if (slot.emplace(b, unique.size()).second) unique.push_back(b);
  std::vector<double> moment(unique.size());
  parallel_for(unique.size(), [&](std::size_t i) { moment[i] = moment_integral(s, unique[i], order, tol).value; });

  double total = constant_part;
  for (std::size_t j = 0; j < bias.size(); ++j) total += weight[j] * moment[slot.at(bias[j])];
  return total / static_cast<double>(net.width());
}

double truncated_triangular_moment(double R) {
  if (!(R >= 1.0) || !std::isfinite(R)) throw std::invalid_argument("truncated_triangular_moment: R must be >= 1");
  std::vector<double> knots{0.0};
  const double period = 2.0 * std::numbers::pi;
  for (double k = period; k < R; k += period) knots.push_back(k);
  knots.push_back(R);
  auto f = [](double xi) { return (1.0 + xi) * ft_triangular(xi); };
  const auto q = integrate_adaptive(f, knots, 0.0, 1e-12, static_cast<int>(knots.size()) * 4 + 1000);
  return 2.0 * q.value;
}

}  // namespace barron
