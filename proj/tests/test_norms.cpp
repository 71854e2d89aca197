#include "barron/norms.hpp"

#include "barron/experiments.hpp"
#include "barron/quadrature.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <numbers>
#include <random>

using namespace barron;

TEST_SUITE("norms") {

TEST_CASE("power tail integral") {
  for (auto [p, q, x] : {std::tuple{0.5, 2.0, 16.0}, {0.0, 3.0, 2.0}, {1.9, 4.0, 100.0}, {2.5, 4.0, 1.5}}) {
    // substitute v = x / u so the range is [0, 1]
    auto f = [&](double u) {
      if (u == 0.0) return 0.0;
      const double v = x / u;
      return std::pow(1 + v, p) * std::pow(v, -q) * x / (u * u);
    };
    const double want = integrate_adaptive(f, 0.0, 1.0, 0.0, 1e-12).value;
    CHECK(power_tail_integral(p, q, x) == doctest::Approx(want).epsilon(1e-9));
  }
  CHECK_THROWS_AS(power_tail_integral(1.0, 2.0, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(power_tail_integral(0.0, 2.0, 0.5), std::invalid_argument);
}

TEST_CASE("moment against the log-grid oracle") {
  const ProfileTransform p(ActivationPower(1), 0.0);
  const auto m = moment_integral(p, 0.5);
  CHECK(m.converged);
  CHECK(m.value > 0.0);
  const double want = oracle::log_grid_moment(p, 0.5, 400000);
  CHECK(std::abs(m.value - want) <= 1e-4 * want);
  CHECK(m.tail_bound <= 1e-6 * m.value);
}

TEST_CASE("moment monotone in order and growing like a power of 1/delta") {
  const ProfileTransform p(ActivationPower(1), 0.0);
  CHECK(moment_integral(p, 0.9).value >= moment_integral(p, 0.5).value);
  double lo = 1e300, hi = 0.0;
  for (double d : {0.5, 0.1, 0.02}) {
    const double v = d * moment_integral(p, 1.0 - d).value;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi / lo <= 10.0);
  CHECK(moment_integral(p, 1.0 - 0.02).value > 5 * moment_integral(p, 0.5).value);
}

TEST_CASE("moment preconditions") {
  const ProfileTransform p(ActivationPower(1), 0.0);
  CHECK_THROWS_AS(moment_integral(p, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(moment_integral(p, 0.5, 1e-12), std::invalid_argument);
  // without a kink the transform decays faster and order up to s + 1 is fine
  const ProfileTransform q(ActivationPower(1), 3.0);
  CHECK(std::isfinite(moment_integral(q, 1.5).value));
  CHECK(moment_integral(ActivationPower(2), -3.0, 1.0).value == 0.0);
}

TEST_CASE("fractional power moment is finite") {
  const auto p = ProfileTransform::real_power(0.5, 0.0);
  const auto m = moment_integral(p, 0.4);
  CHECK(std::isfinite(m.value));
  CHECK(m.value > 0.0);
}

TEST_CASE("spectral bound of simple networks") {
  const Domain box = Domain::unit_box(1);
  Network constant(ActivationPower(1), {{2.5, Vector{{0.0}}, 2.0}});
  CHECK(spectral_upper(constant, box, 0.5) == doctest::Approx(5.0).epsilon(1e-15));
  Network zero(ActivationPower(1), {{0.0, Vector{{1.0}}, 0.3}, {0.0, Vector{{-2.0}}, 0.0}});
  CHECK(spectral_upper(zero, box, 0.5) == 0.0);
  CHECK_THROWS_AS(spectral_upper(constant, box, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(spectral_upper(constant, box, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(spectral_upper(constant, Domain::unit_box(2), 0.5), std::invalid_argument);
}

TEST_CASE("spectral bound of the triangular net") {
  const Network tri = triangular_network();
  const Domain box = Domain::unit_box(1);
  const double v = spectral_upper(tri, box, 0.5);
  // per-neuron sum: constant atom 3 (=|3 max(1,0)|), two neurons 3 M(1, 0, 0.5)
  const double per = (3.0 + 2 * 3 * moment_integral(ActivationPower(1), 0.0, 0.5).value) / 3.0;
  CHECK(v == doctest::Approx(per).epsilon(1e-12));

  ExperimentConfig cfg = default_config("moment");
  cfg.s_list = {1};
  const double k1 = run_moment_suite(cfg).constants.at("K_s1");
  CHECK(0.5 * v <= k1 * barron_cost_upper(tri, box));
}

TEST_CASE("spectral bound is linear in a, monotone in delta, free of d") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::normal_distribution<double> g;
  const int m = 6;
  Vector a(m), b(m);
  for (int j = 0; j < m; ++j) {
    a[j] = u(rng);
    b[j] = 2.5 * u(rng);
  }
  std::vector<double> values;
  for (int d : {2, 8, 32}) {
    Matrix w(m, d);
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < d; ++i) w(j, i) = g(rng);
      w.row(j) /= w.row(j).lpNorm<1>();
    }
    const Network net(ActivationPower(1), a, w, b);
    values.push_back(spectral_upper(net, Domain::unit_box(d), 0.3));
    if (d == 2) {
      const double base = values.back();
      CHECK(spectral_upper(net.scaled_outer(2.0), Domain::unit_box(d), 0.3) ==
            doctest::Approx(2 * base).epsilon(1e-12));
      CHECK(spectral_upper(net, Domain::unit_box(d), 0.5) <= base);
      CHECK(spectral_upper(net, Domain::unit_box(d), 0.1) >= base);
    }
  }
  for (double v : values) CHECK(std::abs(v - values[0]) <= 1e-9 * values[0]);
}

TEST_CASE("truncated triangular moment") {
  const double knots[] = {-1.0, 0.0, 1.0};
  auto f = [](double x) {
    const double t = std::abs(x) < 1e-4 ? (0.5 - x * x / 24) / std::numbers::pi : (1 - std::cos(x)) / (std::numbers::pi * x * x);
    return (1 + std::abs(x)) * t;
  };
  const double want = integrate_adaptive(f, knots, 0.0, 1e-13).value;
  CHECK(truncated_triangular_moment(1.0) == doctest::Approx(want).epsilon(1e-10));
  double prev = 0.0;
  for (double r : {1.0, 3.0, 10.0, 100.0, 1e4}) {
    const double v = truncated_triangular_moment(r);
    CHECK(v > prev);
    prev = v;
  }
  CHECK_THROWS_AS(truncated_triangular_moment(0.5), std::invalid_argument);
}

}
