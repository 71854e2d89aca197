#include "barron/core.hpp"

#include <doctest.h>

#include <random>

using namespace barron;

namespace {

std::vector<Domain> variants(int d) {
  Vector h(d);
  for (int i = 0; i < d; ++i) h[i] = 0.5 + i;
  Matrix v(d, 2 * d + 2);
  for (int i = 0; i < d; ++i) {
    v.col(2 * i) = Vector::Unit(d, i) * (1.0 + 0.3 * i);
    v.col(2 * i + 1) = -v.col(2 * i);
  }
  v.col(2 * d) = Vector::Constant(d, 0.7);
  v.col(2 * d + 1) = -v.col(2 * d);
  return {Domain::box(h), Domain::ball(1.7, d), Domain::polytope(v)};
}

}  // namespace

TEST_SUITE("core") {

TEST_CASE("support norm spot values") {
  CHECK(support_norm(Domain::unit_box(3), Vector{{1.0, -2.0, 3.0}}) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(support_norm(Domain::ball(2.0, 2), Vector{{3.0, 4.0}}) == doctest::Approx(10.0).epsilon(1e-15));
  Matrix v{{1.0, -1.0, 0.0, 0.0}, {0.0, 0.0, 1.0, -1.0}};
  CHECK(support_norm(Domain::polytope(v), Vector{{0.5, 0.5}}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(support_norm(Domain::unit_box(2), Vector{{1.0, 2.0, 3.0}}), std::invalid_argument);
}

TEST_CASE("norm axioms on random pairs") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (const Domain& dom : variants(3)) {
    for (int k = 0; k < 1000; ++k) {
      Vector u(3), v(3);
      for (int i = 0; i < 3; ++i) {
        u[i] = g(rng);
        v[i] = g(rng);
      }
      const double c = g(rng);
      const double nv = support_norm(dom, v);
      CHECK(std::abs(support_norm(dom, Vector(c * v)) - std::abs(c) * nv) <= 1e-12 * std::abs(c) * nv);
      CHECK(support_norm(dom, Vector(u + v)) <= support_norm(dom, u) + nv + 1e-12);
      CHECK(nv > 0.0);
    }
    CHECK(support_norm(dom, Vector::Zero(3)) == 0.0);
  }
}

TEST_CASE("domain constructors reject degenerate input") {
  CHECK_THROWS_AS(Domain::box(Vector{{1.0, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(Domain::ball(-1.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(Domain::ball(1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(Domain::polytope(Matrix{{1.0, 2.0}, {0.0, 0.0}}), std::invalid_argument);  // not symmetric
  CHECK_THROWS_AS(Domain::polytope(Matrix{{1.0, -1.0}, {1.0, -1.0}}), std::invalid_argument);  // flat
}

TEST_CASE("normalization examples") {
  auto n1 = std::get<NormalizedNeuron<double>>(
      normalize_neuron(ActivationPower(1), Domain::unit_box(1), 2.0, Vector{{3.0}}, 6.0));
  CHECK(n1.a == doctest::Approx(6.0));
  CHECK(n1.w[0] == doctest::Approx(1.0));
  CHECK(n1.b == doctest::Approx(2.0));

  auto n2 = std::get<NormalizedNeuron<double>>(
      normalize_neuron(ActivationPower(2), Domain::ball(1.0, 2), 1.0, Vector{{0.0, 2.0}}, 1.0));
  CHECK(n2.a == doctest::Approx(4.0));
  CHECK(n2.w[0] == 0.0);
  CHECK(n2.w[1] == doctest::Approx(1.0));
  CHECK(n2.b == doctest::Approx(0.5));

  auto n0 = std::get<NormalizedNeuron<double>>(
      normalize_neuron(ActivationPower(0), Domain::unit_box(1), 5.0, Vector{{4.0}}, -2.0));
  CHECK(n0.a == doctest::Approx(5.0));
  CHECK(n0.w[0] == doctest::Approx(1.0));
  CHECK(n0.b == doctest::Approx(-0.5));

  auto c = std::get<ConstantNeuron<double>>(
      normalize_neuron(ActivationPower(2), Domain::unit_box(2), 1.5, Vector::Zero(2), 2.0));
  CHECK(c.value == doctest::Approx(6.0));
}

TEST_CASE("normalization preserves values and cost") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int s = 0; s <= 3; ++s) {
    for (const Domain& dom : variants(3)) {
      for (int k = 0; k < 100; ++k) {
        Vector w(3);
        for (int i = 0; i < 3; ++i) w[i] = g(rng);
        const double a = g(rng), b = 2.0 * g(rng);
        const auto n = std::get<NormalizedNeuron<double>>(normalize_neuron(ActivationPower(s), dom, a, w, b));
        CHECK(std::abs(support_norm(dom, n.w) - 1.0) <= 1e-12);
        const double before = std::abs(a) * int_pow(support_norm(dom, w) + std::abs(b), s);
        const double after = std::abs(n.a) * int_pow(1.0 + std::abs(n.b), s);
        CHECK(after == doctest::Approx(before).epsilon(1e-10));
        for (int p = 0; p < 100; ++p) {
          // a point of the unit box scaled into the smallest variant
          Vector x(3);
          for (int i = 0; i < 3; ++i) x[i] = 0.3 * u(rng);
          const double z0 = w.dot(x) + b, z1 = n.w.dot(x) + n.b;
          if (s == 0 && std::abs(z0) < 1e-12) continue;
          const double f0 = a * relu_pow(z0, s), f1 = n.a * relu_pow(z1, s);
          CHECK(std::abs(f0 - f1) <= 1e-10 * std::max(1.0, std::abs(f0)));
        }
      }
    }
  }
}

TEST_CASE("barron cost examples and invariances") {
  Network tri(ActivationPower(1), {{3.0, Vector{{0.0}}, 1.0}, {-3.0, Vector{{1.0}}, 0.0}, {-3.0, Vector{{-1.0}}, 0.0}});
  CHECK(barron_cost_upper(tri, Domain::unit_box(1)) == 3.0);

  Network zero(ActivationPower(2), {{0.0, Vector{{4.0}}, -1.0}});
  CHECK(barron_cost_upper(zero, Domain::unit_box(1)) == 0.0);

  Network two(ActivationPower(2), {{1.0, Vector{{1.0}}, 1.0}, {1.0, Vector{{2.0}}, 0.0}});
  CHECK(barron_cost_upper(two, Domain::unit_box(1)) == doctest::Approx(4.0).epsilon(1e-15));

  Network perm(ActivationPower(2), {{1.0, Vector{{2.0}}, 0.0}, {1.0, Vector{{1.0}}, 1.0}});
  CHECK(barron_cost_upper(perm, Domain::unit_box(1)) == barron_cost_upper(two, Domain::unit_box(1)));

  // every atom duplicated: same function, same cost
  Network dup(ActivationPower(2), {{1.0, Vector{{1.0}}, 1.0}, {1.0, Vector{{2.0}}, 0.0},
                                   {1.0, Vector{{1.0}}, 1.0}, {1.0, Vector{{2.0}}, 0.0}});
  CHECK(barron_cost_upper(dup, Domain::unit_box(1)) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK_THROWS_AS(barron_cost_upper(two, Domain::unit_box(2)), std::invalid_argument);
}

TEST_CASE("network evaluation") {
  Network tri(ActivationPower(1), {{3.0, Vector{{0.0}}, 1.0}, {-3.0, Vector{{1.0}}, 0.0}, {-3.0, Vector{{-1.0}}, 0.0}});
  for (double x : {-1.0, -0.4, 0.0, 0.25, 1.0}) CHECK(tri(Vector{{x}}) == doctest::Approx(1.0 - std::abs(x)));
  Matrix xs(3, 1);
  xs << -0.5, 0.0, 0.5;
  const Vector y = tri.evaluate(xs);
  CHECK(y[1] == doctest::Approx(1.0));
  CHECK(tri.scaled_outer(2.0)(Vector{{0.5}}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(Network(ActivationPower(1), Vector{{1.0}}, Matrix{{std::nan("")}}, Vector{{0.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ActivationPower(-1), std::invalid_argument);
  CHECK(relu_pow(0.0, 0) == 1.0);
  CHECK(relu_pow(-1e-300, 0) == 0.0);
}

}
