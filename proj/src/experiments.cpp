#include "barron/experiments.hpp"

#include "barron/fourier1d.hpp"
#include "barron/norms.hpp"
#include "barron/parallel.hpp"
#include "barron/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

namespace barron {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

bool is_integer(double s) { return s == std::floor(s); }

std::mt19937_64 make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream) {
  std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  for (auto v : stream) {
    words.push_back(static_cast<std::uint32_t>(v));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

// Gaussian rows normalized to ||w||_1 = 1, the unit sphere of the box norm.
Matrix box_sphere_rows(std::mt19937_64& rng, int m, int d) {
  std::normal_distribution<double> gauss;
  Matrix w(m, d);
  for (int j = 0; j < m; ++j) {
    double n1 = 0.0;
    while (n1 == 0.0) {
      for (int k = 0; k < d; ++k) w(j, k) = gauss(rng);
      n1 = w.row(j).lpNorm<1>();
    }
    w.row(j) /= n1;
  }
  return w;
}

// Keeps the n x chunk activation block small for very wide networks.
Vector evaluate_chunked(const Network& net, const Matrix& x, Eigen::Index chunk = 512) {
  Vector out = Vector::Zero(x.rows());
  const int s = net.power().value();
  for (Eigen::Index j0 = 0; j0 < net.width(); j0 += chunk) {
    const Eigen::Index n = std::min(chunk, net.width() - j0);
    Matrix pre = x * net.inner().middleRows(j0, n).transpose();
    pre.rowwise() += net.bias().segment(j0, n).transpose();
    pre = pre.unaryExpr([s](double z) { return relu_pow(z, s); });
    out += pre * net.outer().segment(j0, n);
  }
  return out / static_cast<double>(net.width());
}

}  // namespace

void ExperimentConfig::validate(std::string_view suite) const {
  const std::string p = std::string(suite) + ": ";
  auto all = [](const auto& v, auto pred) { return std::all_of(v.begin(), v.end(), pred); };
  auto finite = [](double v) { return std::isfinite(v); };
  require(ft_rel_tol >= 1e-14 && ft_rel_tol <= 1e-4, p + "ft_rel_tol must lie in [1e-14, 1e-4]");
  require(moment_tol >= 1e-10 && moment_tol <= 1e-2, p + "moment_tol must lie in [1e-10, 1e-2]");
  require(!output.empty(), p + "output path is empty");

  if (suite == "decay" || suite == "moment" || suite == "embed" || suite == "mc-rate" || suite == "remark2") {
    require(!s_list.empty(), p + "s_list is empty");
    require(all(s_list, finite), p + "s_list has a non-finite entry");
  }
  if (suite == "decay") {
    require(all(s_list, [](double s) { return s >= 0 && s <= 15 && is_integer(s); }), p + "s must be an integer in [0, 15]");
    require(!b_grid.empty() && all(b_grid, finite), p + "b_grid must be non-empty and finite");
    require(!xi_grid.empty() && all(xi_grid, [](double x) { return x > 0 && std::isfinite(x); }), p + "xi_grid must be non-empty and positive");
    require(flat_tol >= 1.0, p + "flat_tol must be >= 1");
    require(flat_split > 0.0, p + "flat_split must be > 0");
  }
  if (suite == "moment" || suite == "embed" || suite == "remark2") {
    require(!delta_grid.empty(), p + "delta_grid is empty");
    require(all(delta_grid, [](double d) { return d > 0.0 && d < 1.0; }), p + "delta must lie in (0, 1)");
  }
  if (suite == "moment" || suite == "embed" || suite == "mc-rate")
    require(all(s_list, [](double s) { return s >= 1 && s <= 15 && is_integer(s); }), p + "s must be an integer in [1, 15]");
  if (suite == "moment") {
    require(!b_grid.empty() && all(b_grid, finite), p + "b_grid must be non-empty and finite");
    require(uniform_tol >= 1.0, p + "uniform_tol must be >= 1");
  }
  if (suite == "embed") {
    require(!d_list.empty() && all(d_list, [](int d) { return d >= 1; }), p + "d_list must hold dimensions >= 1");
    require(width >= 1, p + "width must be >= 1");
  }
  if (suite == "tight") {
    require(R_list.size() >= 2, p + "R_list needs at least two radii");
    require(all(R_list, [](double r) { return r >= 1.0 && std::isfinite(r); }), p + "radii must be >= 1");
    const auto [lo, hi] = std::minmax_element(R_list.begin(), R_list.end());
    require(*hi >= 1e3 * *lo, p + "R_list must span at least three decades");
  }
  if (suite == "mc-rate") {
    require(m_list.size() >= 2 && all(m_list, [](int m) { return m >= 1; }), p + "m_list needs at least two widths >= 1");
    require(atoms >= 1 && resamples >= 1 && grid_points >= 1 && mc_dim >= 1, p + "atoms, resamples, grid_points, mc_dim must be >= 1");
    require(*std::max_element(m_list.begin(), m_list.end()) < atoms, p + "ground-truth atoms must exceed every m");
  }
  if (suite == "remark2") {
    require(all(s_list, [](double s) { return s > 0.0 && s < 3.0; }), p + "s must lie in (0, 3)");
    require(!b_grid.empty() && all(b_grid, finite), p + "b_grid must be non-empty and finite");
    require(!xi_grid.empty() && all(xi_grid, [](double x) { return x > 0 && std::isfinite(x); }), p + "xi_grid must be non-empty and positive");
  }
}

ExperimentConfig default_config(std::string_view suite) {
  ExperimentConfig c;
  if (suite == "decay") {
    c.s_list = {0, 1, 2, 3};
    c.b_grid = {-3, -1, -0.3, 0, 0.3, 1, 3};
    c.xi_grid = log_grid(1.0, 1e4, 60);
  } else if (suite == "moment") {
    c.s_list = {1, 2, 3};
    c.b_grid = {-3, -1, 0, 1, 3};
    c.delta_grid = {0.5, 0.2, 0.1, 0.05, 0.02};
  } else if (suite == "embed") {
    c.s_list = {1};
    c.d_list = {2, 8, 32};
    c.delta_grid = {0.5, 0.1, 0.02};
  } else if (suite == "tight") {
    c.R_list = {1e2, 1e3, 1e4, 1e5, 1e6};
  } else if (suite == "mc-rate") {
    c.s_list = {1};
    c.m_list = {16, 64, 256, 1024};
  } else if (suite == "remark2") {
    c.s_list = {0.5, 1.5, 2.5};
    c.b_grid = {0};
    c.delta_grid = {0.5, 0.2, 0.1};
    c.xi_grid = log_grid(1.0, 1e3, 25);
  } else {
    throw std::invalid_argument("unknown suite: " + std::string(suite));
  }
  return c;
}

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& kv) { return kv.second; });
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0 && hi > lo) || n < 2) throw std::invalid_argument("log_grid: needs 0 < lo < hi and n >= 2");
  std::vector<double> g(static_cast<std::size_t>(n));
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
  g.back() = hi;
  return g;
}

Matrix halton_points(int n, int d) {
  static constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
  if (n < 1 || d < 1 || d > 16) throw std::invalid_argument("halton_points: needs n >= 1 and 1 <= d <= 16");
  Matrix pts(n, d);
  for (int k = 0; k < d; ++k) {
    const int base = kPrimes[k];
    for (int i = 0; i < n; ++i) {
      double f = 1.0, r = 0.0;
      for (int idx = i + 1; idx > 0; idx /= base) {
        f /= base;
        r += f * (idx % base);
      }
      pts(i, k) = 2.0 * r - 1.0;
    }
  }
  return pts;
}

Network triangular_network() {
  Vector a(3), b(3);
  Matrix w(3, 1);
  a << 3.0, -3.0, -3.0;
  w << 0.0, 1.0, -1.0;
  b << 1.0, 0.0, 0.0;
  return Network(ActivationPower(1), a, w, b);
}

SuiteReport run_decay_suite(const ExperimentConfig& cfg) {
  cfg.validate("decay");
  SuiteReport rep;
  rep.suite = "decay";
  rep.table.columns = {"s", "b", "xi", "abs_ft", "ratio", "err_estimate", "converged", "flagged"};

  struct Cell {
    int s;
    double b;
    std::vector<SpectrumSample> samples;
  };
  std::vector<Cell> cells;
  for (double s : cfg.s_list)
    for (double b : cfg.b_grid) cells.push_back({static_cast<int>(s), b, {}});
  parallel_for(cells.size(), [&](std::size_t i) {
    Cell& c = cells[i];
    const ProfileTransform t(ActivationPower(c.s), c.b);
    for (double xi : cfg.xi_grid) c.samples.push_back(t(xi, cfg.ft_rel_tol));
  });

  bool flat = true;
  for (const Cell& c : cells) {
    const double scale = std::pow(1.0 + std::abs(c.b), c.s);
    std::vector<double> ratio;
    double below = 0.0;
    for (const auto& smp : c.samples) {
      ratio.push_back(std::abs(smp.value) * std::pow(1.0 + smp.xi, c.s + 1) / scale);
      if (smp.xi <= cfg.flat_split) below = std::max(below, ratio.back());
    }
    double peak = 0.0;
    int flagged = 0;
    for (std::size_t k = 0; k < ratio.size(); ++k) {
      const auto& smp = c.samples[k];
      const bool flag = smp.xi > cfg.flat_split && ratio[k] > cfg.flat_tol * below;
      flagged += flag;
      peak = std::max(peak, ratio[k]);
      rep.converged = rep.converged && smp.converged;
      rep.table.rows.push_back({double(c.s), c.b, smp.xi, std::abs(smp.value), ratio[k], smp.err_estimate,
                                double(smp.converged), double(flag)});
    }
    flat = flat && flagged == 0;
    const std::string cs = "C_hat_s" + num(c.s);
    rep.constants[cs] = std::max(rep.constants[cs], peak);
    rep.constants["max_below_split_s" + num(c.s) + "_b" + num(c.b)] = below;
  }
  rep.constants["flat_split"] = cfg.flat_split;
  rep.constants["flat_tol"] = cfg.flat_tol;
  rep.constants["ft_rel_tol"] = cfg.ft_rel_tol;
  rep.checks["envelope_flat"] = flat;
  rep.checks["bounded"] = std::all_of(rep.constants.begin(), rep.constants.end(), [](const auto& kv) { return std::isfinite(kv.second); });
  rep.checks["converged"] = rep.converged;
  return rep;
}

SuiteReport run_moment_suite(const ExperimentConfig& cfg) {
  cfg.validate("moment");
  SuiteReport rep;
  rep.suite = "moment";
  rep.table.columns = {"s", "b", "delta", "moment", "scaled", "truncation_xi", "tail_bound", "quad_err", "converged"};

  struct Cell {
    int s;
    double b, delta;
    MomentEstimate m;
  };
  std::vector<Cell> cells;
  for (double s : cfg.s_list)
    for (double b : cfg.b_grid)
      for (double d : cfg.delta_grid) cells.push_back({static_cast<int>(s), b, d, {}});
  parallel_for(cells.size(), [&](std::size_t i) {
    Cell& c = cells[i];
    c.m = moment_integral(ActivationPower(c.s), c.b, c.s - c.delta, cfg.moment_tol);
  });

  for (const Cell& c : cells) {
    const double scaled = c.delta * c.m.value / std::pow(1.0 + std::abs(c.b), c.s);
    rep.converged = rep.converged && c.m.converged;
    rep.table.rows.push_back({double(c.s), c.b, c.delta, c.m.value, scaled, c.m.truncation_xi, c.m.tail_bound,
                              c.m.quad_err, double(c.m.converged)});
  }

  const std::size_t nd = cfg.delta_grid.size();
  for (double sd : cfg.s_list) {
    const int s = static_cast<int>(sd);
    const std::string ss = "_s" + num(s);
    std::map<double, double> k_of_delta;  // K_s(delta) = max over b
    for (double b : cfg.b_grid) {
      std::vector<double> ld, lm;
      for (const Cell& c : cells) {
        if (c.s != s || c.b != b) continue;
        const double scaled = c.delta * c.m.value / std::pow(1.0 + std::abs(c.b), c.s);
        k_of_delta[c.delta] = std::max(k_of_delta[c.delta], scaled);
        if (c.m.value > 0.0) {
          ld.push_back(std::log(c.delta));
          lm.push_back(std::log(c.m.value));
        }
      }
      const std::string sb = ss + "_b" + num(b);
      if (nd >= 2 && ld.size() == nd) {
        const LineFit f = fit_line(ld, lm);
        rep.constants["slope" + sb] = f.slope;
        if (b == 0.0) rep.checks["slope_in_range" + ss + "_b0"] = f.slope >= cfg.slope_lo && f.slope <= cfg.slope_hi;
        // M ~ A/delta as delta -> 0, with A = 2 |beta_0| / 2pi set by the kink.
        const ProfileTransform t(ActivationPower(s), b);
        if (t.has_kink()) rep.constants["blowup_coef" + sb] = std::abs(t.asymptotic_coefficients()[0]) / std::numbers::pi;
      }
    }
    double kmax = 0.0, kmin = std::numeric_limits<double>::infinity();
    for (auto [d, k] : k_of_delta) {
      rep.constants["K" + ss + "_delta" + num(d)] = k;
      kmax = std::max(kmax, k);
      kmin = std::min(kmin, k);
    }
    rep.constants["K" + ss] = kmax;
    rep.constants["uniformity_ratio" + ss] = kmax / kmin;
    rep.checks["delta_uniform" + ss] = kmin > 0.0 && kmax / kmin <= cfg.uniform_tol;
  }
  rep.constants["moment_tol"] = cfg.moment_tol;
  rep.constants["slope_lo"] = cfg.slope_lo;
  rep.constants["slope_hi"] = cfg.slope_hi;
  rep.constants["uniform_tol"] = cfg.uniform_tol;
  rep.checks["converged"] = rep.converged;
  return rep;
}

SuiteReport run_embedding_suite(const ExperimentConfig& cfg) {
  cfg.validate("embed");
  SuiteReport rep;
  rep.suite = "embed";
  rep.table.columns = {"s", "d", "delta", "spectral_upper", "barron_cost", "ratio", "skipped"};

  double spread = 0.0;
  bool uniform = true, monotone = true;
  int skipped = 0;
  for (double sd : cfg.s_list) {
    const int s = static_cast<int>(sd);
    auto rng = make_rng(cfg.seed, {static_cast<std::uint64_t>(s)});
    std::uniform_real_distribution<double> ua(-1.0, 1.0), ub(-3.0, 3.0);
    Vector a(cfg.width), b(cfg.width);
    for (int j = 0; j < cfg.width; ++j) a[j] = ua(rng);
    for (int j = 0; j < cfg.width; ++j) b[j] = ub(rng);
    const bool all_zero = (a.array() == 0.0).all();

    std::vector<double> deltas = cfg.delta_grid;
    std::sort(deltas.begin(), deltas.end());
    std::map<double, std::vector<double>> by_delta;  // spectral_upper per d
    double rmax = 0.0, rmin = std::numeric_limits<double>::infinity();
    for (int d : cfg.d_list) {
      auto wrng = make_rng(cfg.seed, {static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(d)});
      const Network net(ActivationPower(s), a, box_sphere_rows(wrng, cfg.width, d), b);
      const Domain dom = Domain::unit_box(d);
      const double cost = barron_cost_upper(net, dom);
      double prev = std::numeric_limits<double>::infinity();
      for (double delta : deltas) {
        if (all_zero || cost == 0.0) {
          ++skipped;
          rep.table.rows.push_back({double(s), double(d), delta, 0.0, cost, 0.0, 1.0});
          continue;
        }
        const double su = spectral_upper(net, dom, delta, cfg.moment_tol);
        const double ratio = delta * su / cost;
        monotone = monotone && su <= prev * (1.0 + 1e-9);
        prev = su;
        by_delta[delta].push_back(su);
        rmax = std::max(rmax, ratio);
        rmin = std::min(rmin, ratio);
        rep.table.rows.push_back({double(s), double(d), delta, su, cost, ratio, 0.0});
      }
    }
    for (const auto& [delta, v] : by_delta) {
      const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
      if (*hi > 0.0) spread = std::max(spread, (*hi - *lo) / *hi);
    }
    if (rmax > 0.0) {
      rep.constants["K_s" + num(s)] = rmax;
      rep.constants["uniformity_ratio_s" + num(s)] = rmax / rmin;
      uniform = uniform && rmax / rmin <= cfg.uniform_tol;
    }
  }
  rep.constants["d_spread"] = spread;
  rep.constants["skipped"] = skipped;
  rep.constants["moment_tol"] = cfg.moment_tol;
  rep.constants["width"] = cfg.width;
  rep.checks["dimension_independent"] = spread <= 1e-9;
  rep.checks["delta_uniform"] = uniform;
  rep.checks["monotone_in_delta"] = monotone;
  return rep;
}

SuiteReport run_tightness_suite(const ExperimentConfig& cfg) {
  cfg.validate("tight");
  SuiteReport rep;
  rep.suite = "tight";
  rep.table.columns = {"R", "log_R", "S", "fitted", "residual"};
  std::vector<double> lr, sv(cfg.R_list.size());
  for (double r : cfg.R_list) lr.push_back(std::log(r));
  parallel_for(cfg.R_list.size(), [&](std::size_t i) { sv[i] = truncated_triangular_moment(cfg.R_list[i]); });
  const LineFit f = fit_line(lr, sv);
  const auto [lo, hi] = std::minmax_element(sv.begin(), sv.end());
  for (std::size_t i = 0; i < sv.size(); ++i) {
    const double fitted = f.intercept + f.slope * lr[i];
    rep.table.rows.push_back({cfg.R_list[i], lr[i], sv[i], fitted, sv[i] - fitted});
  }
  const double target = 2.0 / std::numbers::pi;
  const double range = *hi - *lo;
  rep.constants["slope"] = f.slope;
  rep.constants["intercept"] = f.intercept;
  rep.constants["two_over_pi"] = target;
  rep.constants["slope_rel_dev"] = std::abs(f.slope - target) / target;
  rep.constants["max_residual"] = f.max_abs_residual;
  rep.constants["max_residual_frac"] = range > 0.0 ? f.max_abs_residual / range : 0.0;
  const double cost = barron_cost_upper(triangular_network(), Domain::unit_box(1));
  rep.constants["triangle_barron_cost"] = cost;
  rep.checks["slope_within_5pct"] = std::abs(f.slope - target) <= 0.05 * target;
  rep.checks["residual_below_2pct"] = range > 0.0 && f.max_abs_residual < 0.02 * range;
  rep.checks["triangle_cost_3"] = cost == 3.0;
  return rep;
}

namespace {

std::vector<double> sup_errors(const Network& truth, const Vector& f, const Matrix& grid, int m, int resamples,
                               std::uint64_t seed) {
  const int big = static_cast<int>(truth.width());
  require(m >= 1 && m <= big, "mc_sup_errors: need 1 <= m <= width");
  require(resamples >= 1, "mc_sup_errors: need resamples >= 1");
  std::vector<double> err(static_cast<std::size_t>(resamples));
  parallel_for(err.size(), [&](std::size_t i) {
    auto r = make_rng(seed, {1, static_cast<std::uint64_t>(m), i});
    // partial Fisher-Yates; sorted so that m = width keeps the original order
    std::vector<int> idx(static_cast<std::size_t>(big));
    std::iota(idx.begin(), idx.end(), 0);
    for (int k = 0; k < m; ++k) {
      std::uniform_int_distribution<int> pick(k, big - 1);
      std::swap(idx[static_cast<std::size_t>(k)], idx[static_cast<std::size_t>(pick(r))]);
    }
    std::sort(idx.begin(), idx.begin() + m);
    Vector sa(m), sb(m);
    Matrix sw(m, truth.dim());
    for (int k = 0; k < m; ++k) {
      const int j = idx[static_cast<std::size_t>(k)];
      sa[k] = truth.outer()[j];
      sw.row(k) = truth.inner().row(j);
      sb[k] = truth.bias()[j];
    }
    const Network sub(truth.power(), sa, sw, sb);
    err[i] = (evaluate_chunked(sub, grid) - f).cwiseAbs().maxCoeff();
  });
  return err;
}

}  // namespace

std::vector<double> mc_sup_errors(const Network& truth, const Matrix& grid, int m, int resamples,
                                  std::uint64_t seed) {
  require(grid.cols() == truth.dim(), "mc_sup_errors: grid dimension mismatch");
  return sup_errors(truth, evaluate_chunked(truth, grid), grid, m, resamples, seed);
}

SuiteReport run_mc_rate_suite(const ExperimentConfig& cfg) {
  cfg.validate("mc-rate");
  SuiteReport rep;
  rep.suite = "mc-rate";
  rep.table.columns = {"s", "m", "mean_sup_error", "min_sup_error", "max_sup_error"};

  for (double sd : cfg.s_list) {
    const int s = static_cast<int>(sd);
    auto rng = make_rng(cfg.seed, {static_cast<std::uint64_t>(s), 0});
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int big = cfg.atoms;
    Vector a(big), b(big);
    for (int j = 0; j < big; ++j) a[j] = u(rng);
    const Matrix w = box_sphere_rows(rng, big, cfg.mc_dim);
    for (int j = 0; j < big; ++j) b[j] = u(rng);
    const Network truth(ActivationPower(s), a, w, b);
    const Matrix grid = halton_points(cfg.grid_points, cfg.mc_dim);
    const Vector f = evaluate_chunked(truth, grid);

    const std::size_t nm = cfg.m_list.size(), nr = static_cast<std::size_t>(cfg.resamples);
    std::vector<double> err(nm * nr);
    for (std::size_t k = 0; k < nm; ++k) {
      const auto e = sup_errors(truth, f, grid, cfg.m_list[k], cfg.resamples,
                                   cfg.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(s + 1)));
      std::copy(e.begin(), e.end(), err.begin() + static_cast<std::ptrdiff_t>(k * nr));
    }

    std::vector<double> lm, le;
    for (std::size_t k = 0; k < nm; ++k) {
      const auto first = err.begin() + static_cast<std::ptrdiff_t>(k * nr);
      const auto last = first + static_cast<std::ptrdiff_t>(nr);
      double mean = 0.0;
      for (auto it = first; it != last; ++it) mean += *it;
      mean /= static_cast<double>(nr);
      const auto [lo, hi] = std::minmax_element(first, last);
      rep.table.rows.push_back({double(s), double(cfg.m_list[k]), mean, *lo, *hi});
      lm.push_back(std::log(cfg.m_list[k]));
      le.push_back(std::log(mean));
    }
    const LineFit fit = fit_line(lm, le);
    rep.constants["rate_s" + num(s)] = fit.slope;
    rep.constants["sup_norm_truth_s" + num(s)] = f.cwiseAbs().maxCoeff();
    rep.checks["rate_in_range_s" + num(s)] = fit.slope >= cfg.rate_lo && fit.slope <= cfg.rate_hi;
  }
  rep.constants["atoms"] = cfg.atoms;
  rep.constants["resamples"] = cfg.resamples;
  rep.constants["grid_points"] = cfg.grid_points;
  rep.constants["dim"] = cfg.mc_dim;
  rep.constants["rate_lo"] = cfg.rate_lo;
  rep.constants["rate_hi"] = cfg.rate_hi;
  return rep;
}

SuiteReport run_remark2_probe(const ExperimentConfig& cfg) {
  cfg.validate("remark2");
  SuiteReport rep;
  rep.suite = "remark2";
  rep.exploratory = true;
  // kind 0: decay row (x = xi, value = |hat h|, scaled = envelope ratio);
  // kind 1: moment row (x = delta, value = M(s - delta), scaled = delta M).
  rep.table.columns = {"kind", "s", "b", "x", "value", "scaled", "err", "converged"};

  struct Cell {
    double s, b;
    std::vector<std::vector<double>> rows;
    bool converged = true;
  };
  std::vector<Cell> cells;
  for (double s : cfg.s_list)
    for (double b : cfg.b_grid) cells.push_back({s, b, {}});
  parallel_for(cells.size(), [&](std::size_t i) {
    Cell& c = cells[i];
    const auto t = ProfileTransform::real_power(c.s, c.b);
    const double scale = std::pow(1.0 + std::abs(c.b), c.s);
    for (double xi : cfg.xi_grid) {
      const auto smp = t(xi, cfg.ft_rel_tol);
      c.converged = c.converged && smp.converged;
      c.rows.push_back({0.0, c.s, c.b, xi, std::abs(smp.value), std::abs(smp.value) * std::pow(1.0 + xi, c.s + 1.0) / scale,
                        smp.err_estimate, double(smp.converged)});
    }
    for (double d : cfg.delta_grid) {
      const auto m = moment_integral(t, c.s - d, cfg.moment_tol);
      c.converged = c.converged && m.converged;
      c.rows.push_back({1.0, c.s, c.b, d, m.value, d * m.value, m.tail_bound + m.quad_err, double(m.converged)});
    }
  });
  for (auto& c : cells) {
    rep.converged = rep.converged && c.converged;
    for (auto& r : c.rows) rep.table.rows.push_back(std::move(r));
  }
  rep.constants["ft_rel_tol"] = cfg.ft_rel_tol;
  rep.constants["moment_tol"] = cfg.moment_tol;
  return rep;
}

// ---------------------------------------------------------------------------
// Fitter
// ---------------------------------------------------------------------------

void FitConfig::validate() const {
  require(m >= 1, "fit: m must be >= 1");
  require(s >= 1 && s <= 15, "fit: s must lie in [1, 15]");
  require(lambda >= 0.0 && std::isfinite(lambda), "fit: lambda must be >= 0");
  require(step > 0.0 && growth >= 1.0 && shrink > 0.0 && shrink < 1.0 && armijo > 0.0 && armijo < 1.0,
          "fit: invalid step schedule");
  require(max_iter >= 0, "fit: max_iter must be >= 0");
  require(x.rows() >= 1 && x.rows() == y.size(), "fit: samples must be non-empty with matching x and y");
  require(x.cols() == domain.dim(), "fit: sample dimension does not match the domain");
  require(x.allFinite() && y.allFinite(), "fit: non-finite sample");
}

namespace {

struct Params {
  Vector a;
  Matrix w;
  Vector b;
};

Vector norm_gradient(const Domain& domain, const Vector& w) {
  return std::visit(
      [&](const auto& dom) -> Vector {
        using T = std::decay_t<decltype(dom)>;
        if constexpr (std::is_same_v<T, Box<double>>) {
          return dom.halfwidths.cwiseProduct(w.unaryExpr([](double v) { return double((v > 0) - (v < 0)); }));
        } else if constexpr (std::is_same_v<T, Ball<double>>) {
          const double n = w.norm();
          return n > 0.0 ? Vector(dom.radius * w / n) : Vector(Vector::Zero(w.size()));
        } else {
          const Vector proj = dom.vertices.transpose() * w;
          Eigen::Index k = 0;
          proj.cwiseAbs().maxCoeff(&k);
          return double((proj[k] > 0) - (proj[k] < 0)) * dom.vertices.col(k);
        }
      },
      domain.variant());
}

class Objective {
 public:
  explicit Objective(const FitConfig& cfg) : cfg_(cfg) {}

  double value(const Params& p, double* mse_out = nullptr) const {
    const Network net(ActivationPower(cfg_.s), p.a, p.w, p.b);
    const double mse = (net.evaluate(cfg_.x) - cfg_.y).squaredNorm() / static_cast<double>(cfg_.y.size());
    if (mse_out) *mse_out = mse;
    return mse + cfg_.lambda * barron_cost_upper(net, cfg_.domain);
  }

  Params gradient(const Params& p) const {
    const int s = cfg_.s;
    const double m = static_cast<double>(p.a.size());
    const double n = static_cast<double>(cfg_.y.size());
    Matrix pre = cfg_.x * p.w.transpose();
    pre.rowwise() += p.b.transpose();
    const Matrix act = pre.unaryExpr([s](double z) { return relu_pow(z, s); });
    // Subgradient 0 at the kink.
    const Matrix dact = pre.unaryExpr([s](double z) { return z > 0.0 ? s * relu_pow(z, s - 1) : 0.0; });
    const Vector r = (act * p.a / m - cfg_.y) * (2.0 / n);

    Params g;
    g.a = act.transpose() * r / m;
    const Matrix coef = dact.array().colwise() * r.array();  // n x m
    const Vector col = coef.colwise().sum().transpose();
    g.b = col.cwiseProduct(p.a) / m;
    g.w = (coef.transpose() * cfg_.x).array().colwise() * (p.a.array() / m);

    if (cfg_.lambda > 0.0) {
      for (Eigen::Index j = 0; j < p.a.size(); ++j) {
        const Vector wj = p.w.row(j).transpose();
        const double t = support_norm(cfg_.domain, wj) + std::abs(p.b[j]);
        const double sgn_a = double((p.a[j] > 0) - (p.a[j] < 0));
        g.a[j] += cfg_.lambda * sgn_a * int_pow(t, s) / m;
        const double dt = cfg_.lambda * std::abs(p.a[j]) * s * int_pow(t, s - 1) / m;
        if (dt != 0.0) {
          g.w.row(j) += dt * norm_gradient(cfg_.domain, wj).transpose();
          g.b[j] += dt * double((p.b[j] > 0) - (p.b[j] < 0));
        }
      }
    }
    return g;
  }

 private:
  const FitConfig& cfg_;
};

double squared_norm(const Params& g) { return g.a.squaredNorm() + g.w.squaredNorm() + g.b.squaredNorm(); }

Params step_from(const Params& p, const Params& g, double eta) {
  return {p.a - eta * g.a, p.w - eta * g.w, p.b - eta * g.b};
}

}  // namespace

FitResult fit_network(const FitConfig& cfg) {
  cfg.validate();
  const Eigen::Index d = cfg.x.cols();
  auto rng = make_rng(cfg.seed, {static_cast<std::uint64_t>(cfg.m)});
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> ub(-1.0, 1.0);

  Params p{Vector::Zero(cfg.m), Matrix(cfg.m, d), Vector(cfg.m)};
  for (int j = 0; j < cfg.m; ++j) {
    // Gaussian direction rescaled onto the unit sphere of the domain norm.
    double c = 0.0;
    while (c == 0.0) {
      for (Eigen::Index k = 0; k < d; ++k) p.w(j, k) = gauss(rng);
      c = support_norm(cfg.domain, Vector(p.w.row(j).transpose()));
    }
    p.w.row(j) /= c;
  }
  for (int j = 0; j < cfg.m; ++j) p.b[j] = ub(rng);

  const Objective obj(cfg);
  double f = obj.value(p);
  if (!std::isfinite(f)) throw std::runtime_error("fit: objective is not finite at initialization");
  std::vector<double> history{f};
  double eta = cfg.step;
  bool converged = false;
  int it = 0;
  for (; it < cfg.max_iter; ++it) {
    const Params g = obj.gradient(p);
    const double gg = squared_norm(g);
    if (!std::isfinite(gg)) throw std::runtime_error("fit: gradient diverged at iteration " + std::to_string(it));
    if (gg <= cfg.grad_tol * cfg.grad_tol) {
      converged = true;
      break;
    }
    bool accepted = false;
    while (eta > 1e-300) {
      const Params trial = step_from(p, g, eta);
      const double ft = obj.value(trial);
      if (std::isnan(ft)) throw std::runtime_error("fit: objective became NaN at iteration " + std::to_string(it));
      if (ft <= f - cfg.armijo * eta * gg) {
        p = trial;
        f = ft;
        accepted = true;
        break;
      }
      eta *= cfg.shrink;
    }
    if (!accepted) {
      converged = true;  // no descent left at machine precision
      break;
    }
    history.push_back(f);
    eta *= cfg.growth;
  }

  FitResult res{Network(ActivationPower(cfg.s), p.a, p.w, p.b), std::move(history)};
  obj.value(p, &res.mse);
  res.norm_estimate = barron_cost_upper(res.net, cfg.domain);
  res.iterations = it;
  res.converged = converged;
  return res;
}

FitConfig triangle_fit_config(int n) {
  if (n < 2) throw std::invalid_argument("triangle_fit_config: needs n >= 2");
  FitConfig cfg;
  cfg.x.resize(n, 1);
  cfg.y.resize(n);
  for (int i = 0; i < n; ++i) {
    const double x = -1.0 + 2.0 * i / (n - 1);
    cfg.x(i, 0) = x;
    cfg.y[i] = std::max(1.0 - std::abs(x), 0.0);
  }
  return cfg;
}

SuiteReport run_fit_suite(const FitConfig& cfg) { return fit_report(cfg, fit_network(cfg)); }

SuiteReport fit_report(const FitConfig& cfg, const FitResult& r) {
  SuiteReport rep;
  rep.suite = "fit";
  rep.table.columns = {"step", "objective"};
  for (std::size_t i = 0; i < r.history.size(); ++i) rep.table.rows.push_back({double(i), r.history[i]});
  bool monotone = true;
  for (std::size_t i = 1; i < r.history.size(); ++i) monotone = monotone && r.history[i] <= r.history[i - 1];
  rep.constants["mse"] = r.mse;
  rep.constants["norm_estimate"] = r.norm_estimate;
  rep.constants["iterations"] = r.iterations;
  rep.constants["grad_tol_met"] = r.converged ? 1.0 : 0.0;
  rep.constants["final_objective"] = r.history.back();
  rep.constants["lambda"] = cfg.lambda;
  rep.constants["width"] = cfg.m;
  rep.checks["objective_monotone"] = monotone;
  rep.converged = std::isfinite(r.history.back());
  return rep;
}

}  // namespace barron
