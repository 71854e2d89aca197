#include "barron/quadrature.hpp"

#include <doctest.h>

#include <numbers>

using namespace barron;

TEST_SUITE("quadrature") {

TEST_CASE("gauss-legendre is exact to degree 2n-1") {
  for (int n : {2, 5, 10, 20}) {
    const GaussRule& r = gauss_legendre(n);
    REQUIRE(r.nodes.size() == std::size_t(n));
    for (int p = 0; p < 2 * n; ++p) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += r.weights[i] * std::pow(r.nodes[i], p);
      const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
      CHECK(acc == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
    }
  }
}

TEST_CASE("adaptive integrals") {
  auto sq = integrate_adaptive([](double x) { return std::sqrt(x); }, 0.0, 1.0, 0.0, 1e-12);
  CHECK(sq.converged);
  CHECK(sq.value == doctest::Approx(2.0 / 3.0).epsilon(1e-11));
  CHECK(sq.error >= 0.0);

  auto sn = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 0.0, 1e-13);
  CHECK(sn.value == doctest::Approx(2.0).epsilon(1e-13));

  const double knots[] = {-1.0, 0.0, 1.0};
  auto ab = integrate_adaptive([](double x) { return std::abs(x); }, knots, 0.0, 1e-14);
  CHECK(ab.value == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("adaptive integration reports non-convergence honestly") {
  auto r = integrate_adaptive([](double x) { return 1.0 / std::sqrt(std::abs(x - 0.3)); }, 0.0, 1.0, 0.0, 1e-15, 8);
  CHECK_FALSE(r.converged);
  CHECK(r.error > 0.0);
}

TEST_CASE("line fit") {
  const double x[] = {0.0, 1.0, 2.0, 3.0};
  const double y[] = {1.0, 3.0, 5.0, 7.0};
  const LineFit f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
}

}
