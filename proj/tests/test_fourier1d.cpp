#include "barron/fourier1d.hpp"

#include "barron/cutoff.hpp"
#include "barron/quadrature.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <numbers>

using namespace barron;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("fourier1d") {

TEST_CASE("triangular transform spot values") {
  CHECK(ft_triangular(0.0) == doctest::Approx(1.0 / (2 * kPi)).epsilon(1e-15));
  CHECK(std::abs(ft_triangular(kPi) - 2.0 / (kPi * kPi * kPi)) <= 1e-12 * 2.0 / (kPi * kPi * kPi));
  CHECK(std::abs(ft_triangular(2 * kPi)) < 1e-17);
  CHECK(ft_triangular(1e-9) == doctest::Approx(1.0 / (2 * kPi)).epsilon(1e-12));
  CHECK(ft_triangular(-3.0) == ft_triangular(3.0));
}

TEST_CASE("triangular transform against direct integration") {
  for (int k = 0; k < 50; ++k) {
    const double xi = std::pow(10.0, -2.0 + 5.0 * k / 49.0);
    CHECK(std::abs(ft_triangular(xi) - oracle::trapezoid_triangular(xi)) <= 1e-9);
  }
}

TEST_CASE("DC values against plain quadrature") {
  auto dc = [](int s, double b) {
    const double knots[] = {-2.0, -1.0, std::clamp(-b, -2.0, 2.0), 1.0, 2.0};
    std::vector<double> k(std::begin(knots), std::end(knots));
    std::sort(k.begin(), k.end());
    return integrate_adaptive([&](double z) { return oracle::profile(s, b, z); }, k, 0.0, 1e-12).value /
           (2 * kPi);
  };
  const auto a = ft_profile(ActivationPower(0), 3.0, 0.0);
  CHECK(a.value.real() > 0.0);
  CHECK(a.value.real() == doctest::Approx(dc(0, 3.0)).epsilon(1e-11));
  CHECK(std::abs(a.value.imag()) < 1e-15);
  const auto c = ft_profile(ActivationPower(1), 0.0, 0.0);
  CHECK(c.value.real() == doctest::Approx(dc(1, 0.0)).epsilon(1e-11));
  for (int s = 0; s <= 3; ++s)
    for (double b : {-1.5, -0.3, 0.0, 1.0, 3.0})
      CHECK(std::abs(ft_profile(ActivationPower(s), b, 0.0).value) == doctest::Approx(dc(s, b)).epsilon(1e-9));
}

TEST_CASE("trapezoid oracle on the spot grid") {
  for (int s = 0; s <= 3; ++s)
    for (double b : {-3.0, -0.5, 0.0, 0.5, 3.0})
      for (double xi : {0.0, 1.0, 5.0, 20.0}) {
        const auto got = ft_profile(ActivationPower(s), b, xi);
        const auto want = oracle::trapezoid_ft(s, b, xi);
        CAPTURE(s);
        CAPTURE(b);
        CAPTURE(xi);
        CHECK(got.converged);
        CHECK(std::abs(got.value - want) <= 1e-8);
      }
}

TEST_CASE("conjugate symmetry") {
  for (int s = 0; s <= 3; ++s)
    for (double b : {-1.2, 0.0, 0.4})
      for (double xi : {0.3, 2.0, 17.0, 250.0, 4000.0}) {
        const auto p = ft_profile(ActivationPower(s), b, xi);
        const auto m = ft_profile(ActivationPower(s), b, -xi);
        CHECK(p.err_estimate >= 0.0);
        CHECK(std::abs(m.value - std::conj(p.value)) <= 2 * std::max(p.err_estimate, m.err_estimate) + 1e-18);
      }
}

TEST_CASE("decay envelope stays bounded") {
  for (int s = 0; s <= 3; ++s) {
    const ProfileTransform p(ActivationPower(s), 0.0);
    double below = 0.0, above = 0.0;
    for (int k = 0; k < 60; ++k) {
      const double xi = std::pow(10.0, 4.0 * k / 59.0);
      const double r = std::abs(p(xi).value) * std::pow(1 + xi, s + 1);
      (xi < 100 ? below : above) = std::max(xi < 100 ? below : above, r);
    }
    CHECK(std::isfinite(below));
    CHECK(above <= 1.05 * below);
  }
}

TEST_CASE("large frequency matches the boundary expansion") {
  const ProfileTransform p(ActivationPower(1), 0.3);
  // the bump itself contributes ~exp(-sqrt(2 xi)); negligible from a few thousand on
  for (double xi : {3000.0, 9000.0}) {
    const auto v = p(xi).value;
    CHECK(std::abs(v - p.asymptotic(xi, ProfileTransform::kExtraOrders + 1)) <= 1e-12 * std::abs(v));
  }
  CHECK(p.asymptotic_coefficients()[0] == doctest::Approx(1.0));  // Gamma(2) chi(-0.3)
}

TEST_CASE("flags and preconditions") {
  CHECK(ft_profile(ActivationPower(1), 0.0, 2e4).beyond_range);
  CHECK_FALSE(ft_profile(ActivationPower(1), 0.0, 2e3).beyond_range);
  CHECK_THROWS_AS(ft_profile(ActivationPower(1), 0.0, 1.0, 1e-2), std::invalid_argument);
  CHECK_THROWS_AS(ft_profile(ActivationPower(1), 0.0, std::nan("")), std::invalid_argument);
  CHECK(ft_profile(ActivationPower(2), -3.0, 4.0).value == std::complex<double>(0.0));
}

TEST_CASE("real-exponent path reproduces integer powers") {
  for (int s = 1; s <= 2; ++s) {
    const ProfileTransform a(ActivationPower(s), 0.25);
    const auto b = ProfileTransform::real_power(double(s), 0.25);
    for (double xi : {0.0, 0.7, 3.0, 40.0, 900.0}) {
      const auto x = a(xi).value, y = b(xi).value;
      CHECK(std::abs(x - y) <= 1e-8 * std::abs(x));
    }
  }
}

TEST_CASE("fractional power decays at the expected rate") {
  const auto p = ProfileTransform::real_power(1.5, 0.0);
  CHECK(p.singular());
  const double r1 = std::abs(p(1000.0).value) * std::pow(1000.0, 2.5);
  const double r2 = std::abs(p(8000.0).value) * std::pow(8000.0, 2.5);
  CHECK(r2 == doctest::Approx(r1).epsilon(1e-2));
  CHECK(r1 == doctest::Approx(std::tgamma(2.5) / (2 * kPi)).epsilon(1e-2));
}

}
