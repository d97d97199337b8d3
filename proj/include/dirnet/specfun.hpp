#pragma once

// Special functions used by the closed-form degree expressions.
//
// Validated regime for hyp2f1: a = 1/2, b in [-1, 0), c = 1, z <= 1. Other
// real parameters are handled on a best-effort basis by the same branches.

namespace dirnet::specfun {

struct Hyp2F1Params {
  double a = 0.0;
  double b = 0.0;
  double c = 1.0;
  double z = 0.0;
};

/// |z| at or below which the Gauss series is summed directly.
inline constexpr double kSeriesSwitch = 0.9;
inline constexpr int kMaxTerms = 100000;
inline constexpr double kTailTolerance = 1e-16;

/// Euler Gamma for x > 0 (Lanczos, g = 7, nine terms). Throws DomainError for
/// x <= 0.
double gamma(double x);

/// Gauss hypergeometric function 2F1(a, b; c; z) for real z <= 1.
double hyp2f1(const Hyp2F1Params& p);

enum class PfaffRoute {
  kA,  // (1-z)^{-a} 2F1(a, c-b; c; z/(z-1))
  kB,  // (1-z)^{-b} 2F1(c-a, b; c; z/(z-1))
};

/// Evaluates 2F1 for z < 0 through the chosen Pfaff transformation. hyp2f1
/// picks the route whose transformed function stays finite at argument 1.
double hyp2f1_pfaff(const Hyp2F1Params& p, PfaffRoute route);

/// Direct power series; requires |z| < 1 unless the series terminates.
double hyp2f1_series(const Hyp2F1Params& p);

/// Expansion about z = 1 (connection formulas, including the logarithmic
/// case when c - a - b is an integer). Requires 0 < z < 1 and |1-z| < 1.
double hyp2f1_near_one(const Hyp2F1Params& p);

/// Gauss summation at z = 1; requires c - a - b > 0.
double hyp2f1_at_one(double a, double b, double c);

namespace detail {

/// Gamma on the whole real line except the poles (reflection below 1/2).
double gamma_real(double x);

/// 1/Gamma(x), returning exactly 0 at nonpositive integers.
double rgamma(double x);

double digamma(double x);

bool is_nonpositive_integer(double x);

}  // namespace detail

}  // namespace dirnet::specfun
