#pragma once

#include <cmath>

#include "dirnet/antenna.hpp"

namespace dirnet {

enum class ChannelKind { kRayleighDirectional, kHardDisk };

/// Pairwise link model. Rayleigh fading with path-loss exponent eta and
/// directional gains, or the deterministic hard disk of radius r0.
class ChannelModel {
 public:
  /// beta absorbs the SNR threshold, transmit power and wavelength.
  static ChannelModel rayleigh(double eta, GainModel gain, double beta = 1.0);
  static ChannelModel hard_disk(double r0);

  ChannelKind kind() const noexcept { return kind_; }
  double beta() const noexcept { return beta_; }
  double eta() const noexcept { return eta_; }
  double r0() const noexcept { return r0_; }
  const GainModel& gain() const noexcept { return gain_; }

  bool is_rayleigh() const noexcept {
    return kind_ == ChannelKind::kRayleighDirectional;
  }

  /// Link probability for separation (dx, dy) from a to b, with a and b
  /// pointing along unit vectors (cos_a, sin_a) and (cos_b, sin_b).
  double link_probability(double dx, double dy, double cos_a, double sin_a,
                          double cos_b, double sin_b) const noexcept {
    const double r2 = dx * dx + dy * dy;
    if (kind_ == ChannelKind::kHardDisk) return r2 < r0_ * r0_ ? 1.0 : 0.0;
    if (r2 == 0.0) return 1.0;
    const double r = std::sqrt(r2);
    const double ux = dx / r;
    const double uy = dy / r;
    // a sees b along +u, b sees a along -u.
    const double g_ab = gain_.from_cos(ux * cos_a + uy * sin_a);
    const double g_ba = gain_.from_cos(-(ux * cos_b + uy * sin_b));
    const double gg = g_ab * g_ba;
    if (!(gg > 0.0)) return 0.0;
    return std::exp(-beta_ * distance_power(r, r2) / gg);
  }

  /// r^eta, with exact-multiplication fast paths for eta = 2, 3, 4.
  double distance_power(double r, double r2) const noexcept {
    if (eta_ == 2.0) return r2;
    if (eta_ == 3.0) return r2 * r;
    if (eta_ == 4.0) return r2 * r2;
    return std::pow(r, eta_);
  }

  friend bool operator==(const ChannelModel&, const ChannelModel&) = default;

 private:
  ChannelKind kind_ = ChannelKind::kRayleighDirectional;
  double beta_ = 1.0;
  double eta_ = 2.0;
  double r0_ = 1.0;
  GainModel gain_{};
};

struct OrientedNode {
  double x = 0.0;
  double y = 0.0;
  double orientation = 0.0;  // radians, reduced at evaluation time
};

/// Symmetric link probability between two oriented nodes.
double connection_probability(const ChannelModel& model, const OrientedNode& a,
                              const OrientedNode& b);

/// Smallest separation beyond which the link probability is below tau for
/// every orientation pair (r0 for the hard disk). tau in (0, 1).
double effective_range(const ChannelModel& model, double tau);

}  // namespace dirnet
