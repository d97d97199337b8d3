#pragma once

// Direct numerical integrals of the mean one- and two-hop degrees.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "link.hpp"

namespace oracle {

// rho * (1/2pi) * int d(orientation_j) int d(bearing) int r dr H, node i at the
// origin pointing along +x. Angles are integrated piecewise between the
// pattern nulls so the cusps sit on interval ends.
inline double mu1_integral(double rho, const Link& link) {
  using boost::math::quadrature::gauss_kronrod;
  const double pi = std::numbers::pi;
  boost::math::quadrature::tanh_sinh<double> angular;
  const auto radial = [&](double bearing, double orient) -> double {
    const Node a{0.0, 0.0, 0.0};
    const auto f = [&](double r) {
      const Node b{r * std::cos(bearing), r * std::sin(bearing), orient};
      return r * link(a, b);
    };
    // Cut where this orientation pair falls below 1e-20.
    const double gg = link.gain(bearing) * link.gain(bearing + pi - orient);
    if (link.hard_disk) return 0.5 * link.r0 * link.r0;
    if (gg <= 0.0) return 0.0;
    const double cut = std::pow(46.0 * gg / link.beta, 1.0 / link.eta);
    return gauss_kronrod<double, 61>::integrate(f, 0.0, cut, 8, 1e-12);
  };
  const auto over_orient = [&](double bearing) -> double {
    // j's null sits where orient = bearing (j points away from i).
    const auto g = [&](double u) -> double { return radial(bearing, bearing + u); };
    return angular.integrate(g, -pi, 0.0, 1e-9) + angular.integrate(g, 0.0, pi, 1e-9);
  };
  // tanh-sinh copes with the |u|^{4/eta} behaviour at the nulls.
  const double total =
      angular.integrate(over_orient, -pi, 0.0, 1e-9) + angular.integrate(over_orient, 0.0, pi, 1e-9);
  return rho * total / (2.0 * pi);
}

struct McEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
};

// Plain Monte Carlo of the mean two-hop degree. Node j is uniform on the disk
// of radius 2 * reach(tau) with uniform orientation; a fresh Poisson set of
// relays is drawn on the disk of radius reach(tau) around i, and the sample is
// rho * area * (1 - H_ij) * (1 - prod_k (1 - H_ik H_kj)).
inline McEstimate mu2_monte_carlo(double rho, const Link& link, std::uint64_t samples,
                                  std::uint64_t seed, double tau = 1e-8) {
  const double pi = std::numbers::pi;
  const double inner = link.reach(tau);
  const double outer = 2.0 * inner;
  const double outer_area = pi * outer * outer;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::poisson_distribution<int> relays(rho * pi * inner * inner);
  const Node a{0.0, 0.0, 0.0};
  double sum = 0.0;
  double sum2 = 0.0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    const double rj = outer * std::sqrt(unif(rng));
    const double tj = 2.0 * pi * unif(rng);
    const Node b{rj * std::cos(tj), rj * std::sin(tj), 2.0 * pi * unif(rng)};
    const double miss_direct = 1.0 - link(a, b);
    double none = 1.0;
    const int count = relays(rng);
    for (int k = 0; k < count; ++k) {
      const double rk = inner * std::sqrt(unif(rng));
      const double tk = 2.0 * pi * unif(rng);
      const Node c{rk * std::cos(tk), rk * std::sin(tk), 2.0 * pi * unif(rng)};
      none *= 1.0 - link(a, c) * link(c, b);
    }
    const double v = rho * outer_area * miss_direct * (1.0 - none);
    sum += v;
    sum2 += v * v;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, sum2 / n - mean * mean) * n / (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

// Midpoint rule for 2 pi rho int_{r0}^{2 r0} r (1 - exp(-rho A(r))) dr, with the
// lens written as two circular segments of central angle 2 acos(r / 2 r0).
inline double mu2_hard_disk_riemann(double rho, double r0, int intervals = 400000) {
  const double h = r0 / intervals;
  long double sum = 0.0L;
  for (int k = 0; k < intervals; ++k) {
    const double r = r0 + (k + 0.5) * h;
    const double theta = 2.0 * std::acos(r / (2.0 * r0));
    const double lens = r0 * r0 * (theta - std::sin(theta));
    sum += r * -std::expm1(-rho * lens);
  }
  return 2.0 * std::numbers::pi * rho * static_cast<double>(sum) * h;
}

}  // namespace oracle
