#pragma once

// Plain power series of 2F1 in long double plus endpoint extrapolation.

#include <cmath>
#include <cstddef>

#include <Eigen/Dense>

namespace oracle {

// Sums until the terms fall below 1e-22 relative or max_terms is reached.
inline long double series_2f1(long double a, long double b, long double c, long double z,
                              std::size_t max_terms = 400'000'000) {
  long double term = 1.0L;
  long double sum = 1.0L;
  for (std::size_t n = 0; n < max_terms; ++n) {
    const long double k = static_cast<long double>(n);
    term *= (a + k) * (b + k) / ((c + k) * (k + 1.0L)) * z;
    sum += term;
    if (std::fabs(term) < 1e-22L * std::fabs(sum) && n > 10) break;
  }
  return sum;
}

// F(1) from series values at z = 1 - h, assuming
// F(1 - h) = F(1) + alpha h + beta h^s + gamma h^2 + delta h^(s+1), s = c - a - b.
inline double extrapolate_to_one(double a, double b, double c) {
  const double s = c - a - b;
  const double hs[] = {1e-3, 3e-4, 1e-4, 3e-5, 1e-5};
  Eigen::Matrix<double, 5, 5> m;
  Eigen::Matrix<double, 5, 1> rhs;
  for (int i = 0; i < 5; ++i) {
    const double h = hs[i];
    m(i, 0) = 1.0;
    m(i, 1) = h;
    m(i, 2) = std::pow(h, s);
    m(i, 3) = h * h;
    m(i, 4) = std::pow(h, s + 1.0);
    rhs(i) = static_cast<double>(series_2f1(a, b, c, 1.0L - h));
  }
  return m.fullPivLu().solve(rhs)(0);
}

}  // namespace oracle
