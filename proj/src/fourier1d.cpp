#include "barron/fourier1d.hpp"

#include "barron/cutoff.hpp"
#include "barron/jet.hpp"
#include "barron/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace barron {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxPanels = 1 << 22;
constexpr int kMaxDepth = 48;

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

struct PanelSum {
  std::complex<double> value;
  double error = 0.0;
  int panels = 0;
  bool converged = true;
};

std::complex<double> gauss_panel(const GaussRule& rule, const auto& f, double a, double b, double& l1) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  std::complex<double> acc = 0.0;
  double mass = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const std::complex<double> v = f(c + h * rule.nodes[i]);
    acc += rule.weights[i] * v;
    mass += rule.weights[i] * std::abs(v);
  }
  l1 = mass * h;
  return acc * h;
}

// Adaptive bisection of one panel: a GL rule on [a,b] against the same rule
// on both halves. `floor_density` is an absolute error allowance per unit
// length, so negligible stretches of the integrand are not refined forever.
void integrate_panel(const GaussRule& rule, const auto& f, double a, double b, double rel_tol,
                     double floor_density, PanelSum& out) {
  struct Item {
    double a, b;
    std::complex<double> coarse;
    int depth;
  };
  double l1 = 0.0;
  std::vector<Item> stack{{a, b, gauss_panel(rule, f, a, b, l1), 0}};
  while (!stack.empty()) {
    const Item it = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (it.a + it.b);
    double l1l = 0.0, l1r = 0.0;
    const auto left = gauss_panel(rule, f, it.a, mid, l1l);
    const auto right = gauss_panel(rule, f, mid, it.b, l1r);
    const auto fine = left + right;
    const double diff = std::abs(fine - it.coarse);
    ++out.panels;
    const double tol =
        std::max({rel_tol * std::abs(fine), 1e-15 * (l1l + l1r), floor_density * (it.b - it.a)});
    if (diff <= tol || it.depth >= kMaxDepth || out.panels >= kMaxPanels) {
      if (diff > tol) out.converged = false;
      out.value += fine;
      out.error += diff;
    } else {
      stack.push_back({it.a, mid, left, it.depth + 1});
      stack.push_back({mid, it.b, right, it.depth + 1});
    }
  }
}

double profile_derivative(double s, double b, bool integer_mode, double z, int K) {
  const double u = z + b;
  if (u < 0.0 || std::abs(z) >= 2.0) return 0.0;
  if (K == 0) {
    if (integer_mode) return profile_eval(ActivationPower(static_cast<int>(s)), b, z);
    return profile_eval_real(s, b, z);
  }
  if (u == 0.0) return 0.0;
  if (std::abs(z) < 1.0) {
    // chi == 1: only the power contributes.
    double c = 1.0;
    for (int i = 0; i < K; ++i) c *= (s - i);
    return c == 0.0 ? 0.0 : c * std::pow(u, s - K);
  }
  const Jet chi = chi_jet(z, K);
  const Jet sigma = shifted_power(u, s, K);
  return factorial(K) * Jet::product_coefficient(chi, sigma, K);
}

}  // namespace

struct ProfileTransform::NodeTable {
  static constexpr int kTiers = 15;  // tier j serves |xi| <= 2^j
  static constexpr double kBaseWidth = 0.125;
  static constexpr int kMaxBaseDepth = 20;

  struct Tier {
    std::vector<double> z, wg;
  };

  std::function<double(double)> g;
  std::vector<std::pair<double, double>> base;
  double mass = 0.0;
  double err = 0.0;  // error of \int g over the base panels
  mutable std::array<std::once_flag, kTiers> once;
  mutable std::array<Tier, kTiers> tiers;

  NodeTable(std::function<double(double)> fn, const std::vector<std::pair<double, double>>& pieces) : g(std::move(fn)) {
    const GaussRule& rule = gauss_legendre(kGaussNodes);
    auto f = [&](double z) { return std::complex<double>(g(z)); };
    std::vector<std::pair<double, double>> start;
    double length = 0.0;
    for (auto [a, c] : pieces) {
      const int n = std::max(1, static_cast<int>(std::ceil((c - a) / kBaseWidth)));
      for (int j = 0; j < n; ++j) start.emplace_back(a + (c - a) * j / n, j + 1 == n ? c : a + (c - a) * (j + 1) / n);
      length += c - a;
    }
    for (auto [a, c] : start) {
      double l1 = 0.0;
      gauss_panel(rule, f, a, c, l1);
      mass += l1;
    }
    const double floor_density = length > 0.0 ? 1e-16 * mass / length : 0.0;
    for (auto [a0, c0] : start) {
      struct Item {
        double a, c;
        std::complex<double> coarse;
        int depth;
      };
      double l1 = 0.0;
      std::vector<Item> stack{{a0, c0, gauss_panel(rule, f, a0, c0, l1), 0}};
      while (!stack.empty()) {
        const Item it = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (it.a + it.c);
        double l1l = 0.0, l1r = 0.0;
        const auto left = gauss_panel(rule, f, it.a, mid, l1l);
        const auto right = gauss_panel(rule, f, mid, it.c, l1r);
        const double diff = std::abs(left + right - it.coarse);
        const double tol = std::max(1e-14 * (l1l + l1r), floor_density * (it.c - it.a));
        if (diff <= tol || it.depth >= kMaxBaseDepth) {
          base.emplace_back(it.a, it.c);
          err += diff;
        } else {
          stack.push_back({it.a, mid, left, it.depth + 1});
          stack.push_back({mid, it.c, right, it.depth + 1});
        }
      }
    }
    std::sort(base.begin(), base.end());
    err += 1e-15 * mass;
  }

  const Tier& tier(int j) const {
    std::call_once(once[static_cast<std::size_t>(j)], [&] {
      const GaussRule& rule = gauss_legendre(kGaussNodes);
      const double width = std::numbers::pi / std::ldexp(1.0, j);
      Tier& t = tiers[static_cast<std::size_t>(j)];
      for (auto [a, c] : base) {
        const int n = std::max(1, static_cast<int>(std::ceil((c - a) / width)));
        const double h = (c - a) / n;
        for (int k = 0; k < n; ++k) {
          const double mid = a + (k + 0.5) * h;
          for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double z = mid + 0.5 * h * rule.nodes[i];
            t.z.push_back(z);
            t.wg.push_back(0.5 * h * rule.weights[i] * g(z));
          }
        }
      }
    });
    return tiers[static_cast<std::size_t>(j)];
  }

  // \int g(z) e^{-i xi z} dz; false when |xi| is beyond the last tier.
  bool eval(double xi, std::complex<double>& out) const {
    const double ax = std::abs(xi);
    const int j = ax <= 1.0 ? 0 : static_cast<int>(std::ceil(std::log2(ax)));
    if (j >= kTiers) return false;
    const Tier& t = tier(j);
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < t.z.size(); ++i) {
      const double phase = xi * t.z[i];
      re += t.wg[i] * std::cos(phase);
      im -= t.wg[i] * std::sin(phase);
    }
    out = {re, im};
    return true;
  }
};


std::complex<double> inverse_i_power(double xi, double gamma) {
  if (xi == 0.0) throw std::invalid_argument("inverse_i_power: xi must be nonzero");
  const double mag = std::pow(std::abs(xi), -gamma);
  const double phase = (xi > 0 ? -1.0 : 1.0) * gamma * std::numbers::pi / 2.0;
  return std::polar(mag, phase);
}

ProfileTransform::ProfileTransform(ActivationPower s, double b) : ProfileTransform(double(s.value()), b, true) {}

ProfileTransform ProfileTransform::real_power(double s, double b) { return ProfileTransform(s, b, false); }

ProfileTransform::ProfileTransform(double s, double b, bool integer_mode)
    : s_(s), b_(b), integer_(s == std::floor(s)), integer_mode_(integer_mode) {
  if (!(s >= 0.0) || !std::isfinite(s)) throw std::invalid_argument("ProfileTransform: s must be finite and >= 0");
  if (!std::isfinite(b)) throw std::invalid_argument("ProfileTransform: b must be finite");
  first_order_ = static_cast<int>(std::floor(s)) + 1;
  if (first_order_ > Jet::kMaxOrder) throw std::invalid_argument("ProfileTransform: s too large (max 15)");

  const double z0 = -b;
  lower_ = has_kink() ? z0 : (vanishes() ? 2.0 : -2.0);
  pieces_ = {lower_};
  for (double p : {-1.0, 1.0, 2.0})
    if (p > lower_) pieces_.push_back(p);

  beta_.assign(kExtraOrders + 1, 0.0);
  if (has_kink()) {
    const Jet chi = chi_jet(z0, kExtraOrders);
    for (int k = 0; k <= kExtraOrders; ++k) beta_[static_cast<std::size_t>(k)] = std::tgamma(s + k + 1.0) * chi[k];
  }

  m_.fill(std::numeric_limits<double>::infinity());
  if (vanishes()) {
    m_.fill(0.0);
  } else if (!singular()) {
    for (int k = 0; k <= kExtraOrders; ++k) {
      const int K = first_order_ + k;
      if (K > Jet::kMaxOrder) break;
      double total = 0.0;
      for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
        const double a = pieces_[i], c = pieces_[i + 1];
        if (integer_ && K > s_ && a >= -1.0 && c <= 1.0) continue;
        auto q = integrate_adaptive([&](double z) { return std::abs(derivative(z, K)); }, a, c, 0.0, 1e-6, 4000);
        total += q.value + q.error;
      }
      m_[static_cast<std::size_t>(k)] = total * (1.0 + 1e-3);
    }
  }

  if (!vanishes() && !singular()) {
    std::vector<std::pair<double, double>> all, outer;
    for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
      const double a = pieces_[i], c = pieces_[i + 1];
      all.emplace_back(a, c);
      if (!(integer_ && first_order_ > s_ && a >= -1.0 && c <= 1.0)) outer.emplace_back(a, c);
    }
    const bool im = integer_mode_;
    const int K = first_order_;
    low_ = std::make_shared<const NodeTable>([s, b, im](double z) { return profile_derivative(s, b, im, z, 0); }, all);
    high_ = std::make_shared<const NodeTable>([s, b, im, K](double z) { return profile_derivative(s, b, im, z, K); }, outer);
  }
}

double ProfileTransform::derivative(double z, int K) const { return profile_derivative(s_, b_, integer_mode_, z, K); }

double ProfileTransform::remainder_l1(int K) const {
  const int k = K - first_order_;
  if (k < 0 || k > kExtraOrders) return std::numeric_limits<double>::infinity();
  return m_[static_cast<std::size_t>(k)];
}

std::complex<double> ProfileTransform::asymptotic(double xi, int terms) const {
  if (!has_kink()) return 0.0;
  terms = std::min(terms, kExtraOrders + 1);
  std::complex<double> acc = 0.0;
  for (int k = 0; k < terms; ++k) acc += beta_[static_cast<std::size_t>(k)] * inverse_i_power(xi, s_ + k + 1.0);
  return acc * std::polar(1.0, xi * b_) / kTwoPi;  // e^{-i xi z0} with z0 = -b
}

std::complex<double> ProfileTransform::boundary_sum(double xi, int K) const {
  if (!has_kink() || !integer_) return 0.0;
  const int terms = K - static_cast<int>(s_);
  if (terms <= 0) return 0.0;
  return asymptotic(xi, terms) * kTwoPi;
}

std::complex<double> ProfileTransform::remainder_integral(double xi, int K, double rel_tol, double& err,
                                                          bool& converged) const {
  const GaussRule& rule = gauss_legendre(kGaussNodes);
  const double width = std::numbers::pi / std::max(std::abs(xi), 1.0);
  auto integrand = [&](double z) { return derivative(z, K) * std::polar(1.0, -xi * z); };

  struct Panel {
    double a, b;
    bool mapped;
  };
  std::vector<Panel> panels;
  for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
    const double a = pieces_[i], c = pieces_[i + 1];
    if (integer_mode_ && integer_ && K > s_ && a >= -1.0 && c <= 1.0) continue;
    const int n = std::max(1, static_cast<int>(std::ceil((c - a) / width)));
    const double h = (c - a) / n;
    for (int j = 0; j < n; ++j)
      panels.push_back({a + j * h, (j + 1 == n) ? c : a + (j + 1) * h, j == 0 && singular() && a == -b_});
  }

  const double alpha = s_ - std::floor(s_);
  const double p = alpha > 0.0 ? std::min(1.0 / alpha, 50.0) : 1.0;
  auto run = [&](const Panel& pn, auto&& fn) {
    if (!pn.mapped) return fn(integrand, pn.a, pn.b);
    const double w = pn.b - pn.a;
    auto mapped = [&, w](double t) {
      if (t <= 0.0) return std::complex<double>(0.0);
      return integrand(pn.a + w * std::pow(t, p)) * (w * p * std::pow(t, p - 1.0));
    };
    return fn(mapped, 0.0, 1.0);
  };

  // Coarse pass for the overall scale of the integrand.
  double mass = 0.0, length = 0.0;
  for (const auto& pn : panels) {
    run(pn, [&](const auto& f, double a, double b) {
      double l1 = 0.0;
      gauss_panel(rule, f, a, b, l1);
      mass += l1;
      return 0;
    });
    length += pn.b - pn.a;
  }
  const double floor_density = length > 0.0 ? 1e-16 * mass / length : 0.0;

  PanelSum sum;
  for (const auto& pn : panels) {
    run(pn, [&](const auto& f, double a, double b) {
      // Mapped panels live on t in [0, 1]; rescale the floor accordingly.
      const double fd = pn.mapped ? floor_density * (pn.b - pn.a) : floor_density;
      integrate_panel(rule, f, a, b, rel_tol, fd, sum);
      return 0;
    });
  }
  err = sum.error;
  converged = sum.converged;
  return sum.value;
}

SpectrumSample ProfileTransform::operator()(double xi, double rel_tol) const {
  if (!(rel_tol >= 1e-14 && rel_tol <= 1e-4)) throw std::invalid_argument("ft_profile: rel_tol must lie in [1e-14, 1e-4]");
  if (!std::isfinite(xi)) throw std::invalid_argument("ft_profile: xi must be finite");
  SpectrumSample out;
  out.xi = xi;
  out.beyond_range = std::abs(xi) > kMaxFrequency;
  if (vanishes()) return out;

  const double floor_abs = 1e-16 * std::pow(1.0 + std::abs(b_), s_);
  const double ax = std::abs(xi);
  if (ax <= 1.0) {
    std::complex<double> j;
    if (low_ && low_->eval(xi, j)) {
      out.value = j / kTwoPi;
      out.err_estimate = low_->err / kTwoPi + 4e-16 * std::abs(out.value);
      if (out.err_estimate <= std::max(rel_tol * std::abs(out.value), floor_abs)) return out;
    }
    double err = 0.0;
    bool ok = true;
    j = remainder_integral(xi, 0, rel_tol, err, ok);
    out.value = j / kTwoPi;
    out.err_estimate = err / kTwoPi;
    out.converged = ok;
    return out;
  }

  if (!singular()) {
    int best = -1;
    double best_bound = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= kExtraOrders; ++k) {
      const int K = first_order_ + k;
      const double bound = remainder_l1(K) * std::pow(ax, -K) / kTwoPi;
      if (bound < best_bound) {
        best_bound = bound;
        best = K;
      }
    }
    if (best >= 0) {
      const auto series = boundary_sum(xi, best) / kTwoPi;
      if (best_bound <= std::max(rel_tol * std::abs(series), floor_abs)) {
        out.value = series;
        out.err_estimate = best_bound;
        return out;
      }
    }
  }

  const int K = first_order_;
  const auto scale = inverse_i_power(xi, K);
  std::complex<double> j;
  if (high_ && high_->eval(xi, j)) {
    out.value = (boundary_sum(xi, K) + scale * j) / kTwoPi;
    out.err_estimate = std::abs(scale) * high_->err / kTwoPi + 4e-16 * std::abs(out.value);
    if (out.err_estimate <= std::max(rel_tol * std::abs(out.value), floor_abs)) return out;
  }
  double err = 0.0;
  bool ok = true;
  j = remainder_integral(xi, K, rel_tol, err, ok);
  out.value = (boundary_sum(xi, K) + scale * j) / kTwoPi;
  out.err_estimate = std::abs(scale) * err / kTwoPi + 4e-16 * std::abs(out.value);
  out.converged = ok;
  return out;
}

SpectrumSample ft_profile(ActivationPower s, double b, double xi, double rel_tol) {
  return ProfileTransform(s, b)(xi, rel_tol);
}

double ft_triangular(double xi) {
  if (!std::isfinite(xi)) throw std::invalid_argument("ft_triangular: xi must be finite");
  const double x2 = xi * xi;
  if (std::abs(xi) < 1e-4) return (1.0 - x2 / 12.0 + x2 * x2 / 360.0) / kTwoPi;
  // 1 - cos(xi) = 2 sin^2(xi/2), without the cancellation at small xi.
  const double half = std::sin(0.5 * xi);
  return 2.0 * half * half / (std::numbers::pi * x2);
}

}  // namespace barron
