#pragma once

// Stand-alone link model used by the oracles. Written from the model
// definition, not from the library's channel code.

#include <cmath>
#include <numbers>

namespace oracle {

struct Node {
  double x, y, o;
};

struct Link {
  double eta = 3.0;
  double beta = 1.0;
  double epsilon = 0.0;
  int lobes = 1;
  bool hard_disk = false;
  double r0 = 1.0;

  double gain(double angle_from_boresight) const {
    return 1.0 + epsilon * std::cos(lobes * angle_from_boresight);
  }

  double operator()(const Node& a, const Node& b) const {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double r = std::hypot(dx, dy);
    if (hard_disk) return r < r0 ? 1.0 : 0.0;
    if (r == 0.0) return 1.0;
    const double bearing = std::atan2(dy, dx);
    const double gg = gain(bearing - a.o) * gain(bearing + std::numbers::pi - b.o);
    if (gg <= 0.0) return 0.0;
    return std::exp(-beta * std::pow(r, eta) / gg);
  }

  // Distance past which every orientation pair links with probability < tau.
  double reach(double tau) const {
    if (hard_disk) return r0;
    return std::pow(std::log(1.0 / tau) * std::pow(1.0 + epsilon, 2) / beta, 1.0 / eta);
  }
};

}  // namespace oracle
