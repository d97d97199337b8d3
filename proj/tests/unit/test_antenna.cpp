#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"
#include "dirnet/antenna.hpp"
#include "dirnet/error.hpp"

using namespace dirnet;

constexpr double kPi = std::numbers::pi;

TEST_CASE("gain examples") {
  CHECK(gain(GainModel(0.0), 1.234) == 1.0);
  CHECK(gain(GainModel(1.0), 0.0) == 2.0);
  CHECK(gain(GainModel(1.0), kPi) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(gain(GainModel(0.5), kPi / 3.0) == doctest::Approx(1.25).epsilon(1e-15));
}

TEST_CASE("gain reduces the angle and stays in [1 - eps, 1 + eps]") {
  const GainModel g(0.7, 3);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> theta(-1e4, 1e4);
  for (int i = 0; i < 2000; ++i) {
    const double t = theta(rng);
    const double v = g(t);
    CHECK(v >= g.min_gain() - 1e-15);
    CHECK(v <= g.max_gain() + 1e-15);
    CHECK(v == doctest::Approx(g(t + 2.0 * kPi)).epsilon(1e-9));
    CHECK(g.from_cos(std::cos(t)) == doctest::Approx(1.0 + 0.7 * std::cos(3.0 * t)).epsilon(1e-9));
  }
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(GainModel(-0.1), DomainError);
  CHECK_THROWS_AS(GainModel(1.01), DomainError);
  CHECK_THROWS_AS(GainModel(0.5, 0), DomainError);
  CHECK_THROWS_AS(GainModel(std::nan("")), DomainError);
  CHECK(GainModel(0.0).isotropic());
  CHECK(GainModel(1.0).min_gain() == 0.0);
}

TEST_CASE("gain is positive below epsilon 1, nonnegative at 1") {
  for (double t = -kPi; t <= kPi; t += 0.001) {
    CHECK(GainModel(0.999)(t) > 0.0);
    CHECK(GainModel(1.0)(t) >= 0.0);
  }
}

TEST_CASE("mean gain over a turn is one for random (epsilon, lobes)") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> eps(0.0, 1.0);
  std::uniform_int_distribution<int> lobes(1, 8);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const GainModel g(eps(rng), lobes(rng));
    // A trapezoid rule with more points than 2 lobes integrates cos(n t) exactly.
    const int m = 64;
    double sum = 0.0;
    for (int k = 0; k < m; ++k) sum += g(2.0 * kPi * k / m);
    worst = std::max(worst, std::abs(sum / m - 1.0));
  }
  CHECK(worst < 1e-10);
  // Same check by adaptive quadrature on a few models.
  for (int n : {1, 2, 5}) {
    const GainModel g(0.83, n);
    const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double t) { return g(t); }, 0.0, 2.0 * kPi, 10, 1e-14);
    CHECK(std::abs(v / (2.0 * kPi) - 1.0) < 1e-10);
  }
}

TEST_CASE("gain power integral examples") {
  for (double eta : {2.0, 3.0, 4.5}) {
    CHECK(gain_power_integral(GainModel(0.0), 2.0 / eta) == doctest::Approx(2.0 * kPi).epsilon(1e-14));
  }
  for (double eps : {0.0, 0.3, 0.77, 1.0}) {
    CHECK(gain_power_integral(GainModel(eps), 1.0) == doctest::Approx(2.0 * kPi).epsilon(1e-13));
  }
  // epsilon = 1, eta = 4: int sqrt(1 + cos t) dt = 4 sqrt(2)
  const double closed = gain_power_integral(GainModel(1.0), 0.5);
  const double quad = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [](double t) { return std::sqrt(1.0 + std::cos(t)); }, -kPi, kPi, 15, 1e-13);
  CHECK(std::abs(closed - quad) < 1e-10);
  CHECK(std::abs(closed - 4.0 * std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("closed form matches quadrature over the (epsilon, eta) grid") {
  for (int e = 0; e <= 10; ++e) {
    const GainModel g(e / 10.0);
    for (double eta = 2.0; eta <= 6.0 + 1e-12; eta += 0.5) {
      const double closed = gain_power_integral(g, 2.0 / eta);
      const double quad = gain_power_integral_quadrature(g, 2.0 / eta);
      CHECK(std::abs(closed - quad) < 1e-8);
    }
  }
}

TEST_CASE("gain power integral decreases strictly in epsilon for eta > 2") {
  for (double eta : {2.5, 3.0, 4.0, 6.0}) {
    double previous = INFINITY;
    for (int e = 0; e <= 20; ++e) {
      const double v = gain_power_integral(GainModel(e / 20.0), 2.0 / eta);
      CHECK(v < previous);
      previous = v;
    }
  }
}

TEST_CASE("gain power integral does not depend on the lobe count") {
  for (double eps : {0.2, 0.6, 1.0}) {
    for (double eta : {2.5, 3.0, 5.0}) {
      const double one = gain_power_integral_quadrature(GainModel(eps, 1), 2.0 / eta);
      for (int n : {2, 3}) {
        CHECK(std::abs(gain_power_integral_quadrature(GainModel(eps, n), 2.0 / eta) - one) < 1e-10);
        CHECK(std::abs(gain_power_integral(GainModel(eps, n), 2.0 / eta) - one) < 1e-10);
      }
    }
  }
}

TEST_CASE("gain power integral rejects exponents outside (0, 1]") {
  CHECK_THROWS_AS(gain_power_integral(GainModel(0.5), 0.0), DomainError);
  CHECK_THROWS_AS(gain_power_integral(GainModel(0.5), 1.2), DomainError);
  CHECK_THROWS_AS(gain_power_integral(GainModel(0.5), -0.5), DomainError);
}
