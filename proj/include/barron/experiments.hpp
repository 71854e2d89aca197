#pragma once

// Scripted suites: spectral decay envelopes, moment blow-up in delta,
// embedding ratios, the tightness slope, the Monte-Carlo rate, the
// fractional-power probe, and a path-norm regularized fitter.

#include "barron/core.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace barron {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Shared configuration of every suite. Each suite reads the fields it
/// needs; default_config(suite) fills in the documented defaults.
struct ExperimentConfig {
  std::uint64_t seed = 7;
  std::vector<double> s_list;
  std::vector<double> b_grid;
  std::vector<double> delta_grid;
  std::vector<double> xi_grid;
  std::vector<int> d_list;
  std::vector<int> m_list;
  std::vector<double> R_list;

  double ft_rel_tol = 1e-10;
  double moment_tol = 1e-6;
  double flat_split = 100.0;  // envelope max below this xi is the reference
  double flat_tol = 1.05;
  double uniform_tol = 10.0;  // allowed max/min of K_s(delta) over delta
  double slope_lo = -1.15;
  double slope_hi = -0.85;

  int width = 50;  // atoms per random network (embed)
  int atoms = 50000;  // ground-truth measure size (mc-rate)
  int resamples = 20;
  int grid_points = 10000;
  int mc_dim = 4;
  double rate_lo = -0.65;
  double rate_hi = -0.35;

  std::string output = "out";

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate(std::string_view suite) const;
};

ExperimentConfig default_config(std::string_view suite);

struct SuiteReport {
  std::string suite;
  Table table;
  std::map<std::string, double> constants;  // measured constants and the tolerances used
  std::map<std::string, bool> checks;
  bool converged = true;
  bool exploratory = false;

  bool passed() const;
};

/// n points log-spaced on [lo, hi], endpoints included.
std::vector<double> log_grid(double lo, double hi, int n);

/// First n points of the Halton sequence in d dimensions (prime bases),
/// mapped to [-1, 1]^d; skips the origin.
Matrix halton_points(int n, int d);

/// sigma(1) - sigma(x) - sigma(-x) with s = 1, written with the 1/m = 1/3
/// scaling: atoms (3, 0, 1), (-3, 1, 0), (-3, -1, 0). Equals max(1-|x|, 0)
/// on [-1, 1].
Network triangular_network();

/// Ratios |hat h(xi)| (1+|xi|)^{s+1} / (1+|b|)^s over s_list x b_grid x xi_grid.
SuiteReport run_decay_suite(const ExperimentConfig& cfg);

/// moment_integral(s, b, s - delta) over s_list x b_grid x delta_grid, with
/// log-log slopes in delta and the constants K_s(delta) = max_b delta M / (1+|b|)^s.
SuiteReport run_moment_suite(const ExperimentConfig& cfg);

/// delta * spectral_upper / barron_cost_upper for random networks on the
/// unit box; (a_j, b_j) are shared across the dimensions in d_list.
SuiteReport run_embedding_suite(const ExperimentConfig& cfg);

/// Least-squares fit of S(R) against ln R over R_list.
SuiteReport run_tightness_suite(const ExperimentConfig& cfg);

/// Sup-norm error of m-atom resamples of a large atomic measure against the
/// full network, averaged over resamples; slope of log error vs log m.
/// Ground truth: a, b ~ U[-1, 1], w Gaussian rows scaled to unit l1 norm.
SuiteReport run_mc_rate_suite(const ExperimentConfig& cfg);

/// Sup-norm errors on `grid` of `resamples` width-m networks, each built
/// from m atoms of `truth` drawn without replacement.
std::vector<double> mc_sup_errors(const Network& truth, const Matrix& grid, int m, int resamples,
                                  std::uint64_t seed);

/// Decay ratios and moments for non-integer s through the real-exponent
/// profile. Exploratory: no checks.
SuiteReport run_remark2_probe(const ExperimentConfig& cfg);

struct FitConfig {
  int m = 8;
  int s = 1;
  double lambda = 1e-3;
  double step = 1.0;       // initial step
  double growth = 2.0;     // step multiplier after an accepted step
  double shrink = 0.5;     // backtracking factor
  double armijo = 1e-4;
  int max_iter = 20000;
  double grad_tol = 1e-12;
  std::uint64_t seed = 7;
  Matrix x;  // n x d samples
  Vector y;
  Domain domain = Domain::unit_box(1);

  void validate() const;
};

struct FitResult {
  Network net;
  std::vector<double> history;  // objective after every accepted step, starting at the initial point
  double mse = 0.0;
  double norm_estimate = 0.0;  // barron_cost_upper of the final network
  int iterations = 0;
  bool converged = false;  // gradient tolerance met before the budget ran out
};

/// Gradient descent on MSE + lambda * barron_cost_upper with Armijo
/// backtracking, so the objective never increases between accepted steps.
/// Starts from a = 0, w uniform on the unit sphere of the domain norm,
/// b ~ U[-1, 1]. Throws std::runtime_error if the objective becomes NaN/inf.
FitResult fit_network(const FitConfig& cfg);

/// n equispaced samples of max(1-|x|, 0) on [-1, 1].
FitConfig triangle_fit_config(int n = 201);

SuiteReport run_fit_suite(const FitConfig& cfg);
SuiteReport fit_report(const FitConfig& cfg, const FitResult& result);

}  // namespace barron
