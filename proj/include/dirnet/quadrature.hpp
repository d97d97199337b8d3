#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace dirnet::quad {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped to [lo, hi].
Rule gauss_legendre(int n, double lo, double hi);

/// Three-dimensional Sobol sequence (Joe-Kuo direction numbers), Gray-code
/// order starting at the origin. The first 2^m points form a (t, m, 3)-net.
class Sobol3 {
 public:
  Sobol3();
  std::array<double, 3> next();

 private:
  static constexpr int kBits = 32;
  std::array<std::array<std::uint32_t, kBits>, 3> direction_{};
  std::array<std::uint32_t, 3> state_{};
  std::uint64_t index_ = 0;
};

}  // namespace dirnet::quad
