#include "dirnet/quadrature.hpp"

#include <bit>
#include <boost/math/special_functions/legendre.hpp>
#include <cmath>

#include "dirnet/error.hpp"

namespace dirnet::quad {

Rule gauss_legendre(int n, double lo, double hi) {
  if (n < 1) throw ConfigError("Gauss-Legendre rule needs at least one node");
  // Nonnegative zeros of P_n, ascending.
  const std::vector<double> zeros = boost::math::legendre_p_zeros<double>(n);
  Rule rule;
  rule.nodes.reserve(n);
  rule.weights.reserve(n);
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  auto weight = [n](double x) {
    const double dp = boost::math::legendre_p_prime(n, x);
    return 2.0 / ((1.0 - x * x) * dp * dp);
  };
  // Negative half first so nodes come out ascending.
  for (auto it = zeros.rbegin(); it != zeros.rend(); ++it) {
    if (*it == 0.0) continue;
    rule.nodes.push_back(mid - half * *it);
    rule.weights.push_back(half * weight(*it));
  }
  for (double x : zeros) {
    rule.nodes.push_back(mid + half * x);
    rule.weights.push_back(half * weight(x));
  }
  return rule;
}

Sobol3::Sobol3() {
  // Dimension 1: van der Corput. Dimensions 2 and 3: primitive polynomials
  // x + 1 (m = 1) and x^2 + x + 1 (m = 1, 3).
  for (int k = 0; k < kBits; ++k) direction_[0][k] = 1u << (kBits - 1 - k);

  auto fill = [&](std::size_t dim, int degree, unsigned a,
                  std::initializer_list<std::uint32_t> m) {
    auto& v = direction_[dim];
    int k = 0;
    for (std::uint32_t mk : m) {
      v[k] = mk << (kBits - 1 - k);
      ++k;
    }
    for (; k < kBits; ++k) {
      std::uint32_t x = v[k - degree] ^ (v[k - degree] >> degree);
      for (int j = 1; j < degree; ++j) {
        if ((a >> (degree - 1 - j)) & 1u) x ^= v[k - j];
      }
      v[k] = x;
    }
  };
  fill(1, 1, 0, {1});
  fill(2, 2, 1, {1, 3});
}

std::array<double, 3> Sobol3::next() {
  constexpr double kScale = 1.0 / 4294967296.0;
  std::array<double, 3> point{};
  for (int d = 0; d < 3; ++d) point[d] = state_[d] * kScale;
  // Gray code: flip the direction number at the lowest zero bit of index.
  const int c = std::countr_one(index_);
  if (c < kBits) {
    for (int d = 0; d < 3; ++d) state_[d] ^= direction_[d][c];
  }
  ++index_;
  return point;
}

}  // namespace dirnet::quad
