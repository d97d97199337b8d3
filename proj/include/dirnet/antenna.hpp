#pragma once

namespace dirnet {

/// Multi-lobe cardioid pattern G(theta) = 1 + epsilon * cos(lobes * theta).
///
/// The pattern is normalized so that its mean over a full turn is one.
/// epsilon = 0 is the isotropic antenna; epsilon = 1 has a null opposite the
/// boresight (for one lobe).
class GainModel {
 public:
  GainModel() = default;
  /// Throws DomainError unless 0 <= epsilon <= 1 and lobes >= 1.
  explicit GainModel(double epsilon, int lobes = 1);

  double epsilon() const noexcept { return epsilon_; }
  int lobes() const noexcept { return lobes_; }

  double max_gain() const noexcept { return 1.0 + epsilon_; }
  double min_gain() const noexcept { return 1.0 - epsilon_; }
  bool isotropic() const noexcept { return epsilon_ == 0.0; }

  /// Gain toward an angle measured from the boresight (any finite value).
  double operator()(double theta) const;

  /// Gain given cos(theta) directly; cos(n theta) comes from the Chebyshev
  /// recurrence so no trigonometric call is needed.
  double from_cos(double cos_theta) const noexcept {
    if (lobes_ == 1) return 1.0 + epsilon_ * cos_theta;
    double prev = 1.0;
    double cur = cos_theta;
    for (int k = 1; k < lobes_; ++k) {
      const double next = 2.0 * cos_theta * cur - prev;
      prev = cur;
      cur = next;
    }
    return 1.0 + epsilon_ * cur;
  }

  friend bool operator==(const GainModel&, const GainModel&) = default;

 private:
  double epsilon_ = 0.0;
  int lobes_ = 1;
};

inline double gain(const GainModel& model, double theta) { return model(theta); }

/// Integral of G^exponent over a full turn by the closed form (two Gauss
/// hypergeometric terms). The integral does not depend on the lobe count.
/// exponent = 2/eta must lie in (0, 1]; otherwise DomainError.
double gain_power_integral(const GainModel& model, double exponent);

/// Same integral by tanh-sinh quadrature of the pattern itself,
/// split at the pattern extrema so that the nulls sit on interval ends.
double gain_power_integral_quadrature(const GainModel& model, double exponent,
                                      double tolerance = 1e-13);

}  // namespace dirnet
