#include "dirnet/antenna.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "dirnet/error.hpp"
#include "dirnet/specfun.hpp"

namespace dirnet {

namespace {

constexpr double kPi = std::numbers::pi;

void check_exponent(double exponent) {
  if (!(exponent > 0.0 && exponent <= 1.0)) {
    throw DomainError("gain exponent 2/eta must lie in (0, 1] (eta >= 2), got " +
                      std::to_string(exponent));
  }
}

}  // namespace

GainModel::GainModel(double epsilon, int lobes) : epsilon_(epsilon), lobes_(lobes) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw DomainError("antenna deformation epsilon must be in [0, 1], got " +
                      std::to_string(epsilon));
  }
  if (lobes < 1) {
    throw DomainError("antenna lobe count must be >= 1, got " +
                      std::to_string(lobes));
  }
}

double GainModel::operator()(double theta) const {
  const double reduced = std::remainder(theta * lobes_, 2.0 * kPi);
  return 1.0 + epsilon_ * std::cos(reduced);
}

double gain_power_integral(const GainModel& model, double exponent) {
  check_exponent(exponent);
  const double eps = model.epsilon();
  if (eps == 0.0) return 2.0 * kPi;

  const double b = -exponent;
  const double upper = std::pow(1.0 + eps, exponent) *
                       specfun::hyp2f1({0.5, b, 1.0, 2.0 * eps / (eps + 1.0)});
  double lower = 0.0;
  if (eps < 1.0) {
    lower = std::pow(1.0 - eps, exponent) *
            specfun::hyp2f1({0.5, b, 1.0, 2.0 * eps / (eps - 1.0)});
  } else {
    // (1-eps)^p 2F1(.., 2eps/(eps-1)) tends to the leading coefficient of the
    // large-|z| expansion, Gamma(c)Gamma(a-b)/(Gamma(a)Gamma(c-b)) 2^p.
    lower = std::pow(2.0, exponent) * specfun::gamma(0.5 - b) /
            (specfun::gamma(0.5) * specfun::gamma(1.0 - b));
  }
  return kPi * (lower + upper);
}

double gain_power_integral_quadrature(const GainModel& model, double exponent,
                                      double tolerance) {
  check_exponent(exponent);
  const auto integrand = [&](double theta) {
    const double g = model(theta);
    return g <= 0.0 ? 0.0 : std::pow(g, exponent);
  };
  // 2n pieces between consecutive extrema of cos(n theta); tanh-sinh copes
  // with the cusp that epsilon = 1 puts on the piece ends.
  const int pieces = 2 * model.lobes();
  const double width = 2.0 * kPi / pieces;
  boost::math::quadrature::tanh_sinh<double> rule;
  double total = 0.0;
  for (int k = 0; k < pieces; ++k) {
    total += rule.integrate(integrand, k * width, (k + 1) * width, tolerance);
  }
  return total;
}

}  // namespace dirnet
