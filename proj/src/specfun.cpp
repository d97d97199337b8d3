#include "dirnet/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "dirnet/error.hpp"

namespace dirnet::specfun {

namespace {

constexpr double kPi = std::numbers::pi;

// Lanczos coefficients for g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,   -1259.1392167224028,
    771.32342877765313,      -176.61502916214059, 12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6,
    1.5056327351493116e-7};

double lanczos_gamma(double x) {
  // x >= 0.5
  x -= 1.0;
  double acc = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) {
    acc += kLanczos[i] / (x + static_cast<double>(i));
  }
  const double t = x + kLanczosG + 0.5;
  // Split the power to delay overflow for large x.
  const double half = std::pow(t, 0.5 * (x + 0.5));
  return std::sqrt(2.0 * kPi) * half * (half * std::exp(-t)) * acc;
}

std::string describe(const Hyp2F1Params& p) {
  std::ostringstream os;
  os.precision(17);
  os << "2F1(a=" << p.a << ", b=" << p.b << ", c=" << p.c << ", z=" << p.z
     << ")";
  return os.str();
}

bool is_integer(double x) { return std::isfinite(x) && x == std::round(x); }

// Finite sum when a or b is a nonpositive integer.
double terminating_sum(const Hyp2F1Params& p) {
  const double top = detail::is_nonpositive_integer(p.a)
                         ? (detail::is_nonpositive_integer(p.b)
                                ? std::max(p.a, p.b)
                                : p.a)
                         : p.b;
  const int degree = static_cast<int>(-top);
  double term = 1.0;
  double sum = 1.0;
  for (int n = 0; n < degree; ++n) {
    term *= (p.a + n) * (p.b + n) / ((p.c + n) * (n + 1.0)) * p.z;
    sum += term;
  }
  return sum;
}

// Sums sum_n coeff_n x^n given the term ratio; stops on the relative tail.
template <class Ratio>
double sum_series(Ratio ratio, double x, const Hyp2F1Params& ctx) {
  double term = 1.0;
  double sum = 1.0;
  double comp = 0.0;
  for (int n = 0; n < kMaxTerms; ++n) {
    const double r = ratio(n) * x;
    term *= r;
    // Neumaier summation.
    const double t = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term
                                            : (term - t) + sum;
    sum = t;
    if (term == 0.0) return sum + comp;
    const double next_ratio = std::abs(ratio(n + 1) * x);
    if (next_ratio < 1.0) {
      const double tail = std::abs(term) * next_ratio / (1.0 - next_ratio);
      if (tail <= kTailTolerance * std::abs(sum + comp)) return sum + comp;
    }
  }
  std::ostringstream os;
  os << "hypergeometric series did not converge within " << kMaxTerms
     << " terms for " << describe(ctx) << " (series argument " << x
     << ", last term " << term << ", partial sum " << sum + comp << ")";
  throw NumericalError(os.str());
}

double plain_series(double a, double b, double c, double x,
                    const Hyp2F1Params& ctx) {
  return sum_series(
      [&](int n) { return (a + n) * (b + n) / ((c + n) * (n + 1.0)); }, x,
      ctx);
}

// Abramowitz & Stegun 15.3.6, c - a - b not an integer.
double connection_generic(double a, double b, double c, double z,
                          const Hyp2F1Params& ctx) {
  const double s = c - a - b;
  const double w = 1.0 - z;
  const double g_c = detail::gamma_real(c);
  const double first = g_c * detail::gamma_real(s) * detail::rgamma(c - a) *
                       detail::rgamma(c - b);
  const double second = g_c * detail::gamma_real(-s) * detail::rgamma(a) *
                        detail::rgamma(b);
  double result = 0.0;
  if (first != 0.0) result += first * plain_series(a, b, 1.0 - s, w, ctx);
  if (second != 0.0) {
    result += second * std::pow(w, s) * plain_series(c - a, c - b, s + 1.0, w, ctx);
  }
  return result;
}

// Abramowitz & Stegun 15.3.10/15.3.11, c = a + b + m with integer m >= 0.
double connection_log(double a, double b, int m, double z,
                      const Hyp2F1Params& ctx) {
  const double w = 1.0 - z;
  const double c = a + b + m;
  double result = 0.0;

  if (m > 0) {
    double term = 1.0;
    double finite = 1.0;
    for (int n = 0; n + 1 < m; ++n) {
      term *= (a + n) * (b + n) / ((n + 1.0) * (1.0 - m + n)) * w;
      finite += term;
    }
    result += detail::gamma_real(m) * detail::gamma_real(c) *
              detail::rgamma(a + m) * detail::rgamma(b + m) * finite;
  }

  const double pref =
      std::pow(-w, m) * detail::gamma_real(c) * detail::rgamma(a) *
      detail::rgamma(b);
  if (pref == 0.0) return result;

  const double log_w = std::log(w);
  double psi_1 = detail::digamma(1.0);            // psi(n+1)
  double psi_m = detail::digamma(m + 1.0);        // psi(n+m+1)
  double psi_a = detail::digamma(a + m);          // psi(a+n+m)
  double psi_b = detail::digamma(b + m);          // psi(b+n+m)
  double coeff = std::exp(-std::lgamma(m + 1.0));  // 1/m!
  double sum = 0.0;
  for (int n = 0; n < kMaxTerms; ++n) {
    const double term = coeff * (log_w - psi_1 - psi_m + psi_a + psi_b);
    sum += term;
    const double ratio = (a + m + n) * (b + m + n) / ((n + 1.0) * (n + m + 1.0)) * w;
    if (std::abs(term) <= kTailTolerance * std::abs(sum) && std::abs(ratio) < 0.5) {
      return result - pref * sum;
    }
    psi_1 += 1.0 / (n + 1.0);
    psi_m += 1.0 / (n + m + 1.0);
    psi_a += 1.0 / (a + m + n);
    psi_b += 1.0 / (b + m + n);
    coeff *= ratio;
    if (coeff == 0.0) return result - pref * sum;
  }
  throw NumericalError("logarithmic connection series did not converge for " +
                       describe(ctx));
}

void validate(const Hyp2F1Params& p) {
  if (!std::isfinite(p.a) || !std::isfinite(p.b) || !std::isfinite(p.c) ||
      std::isnan(p.z)) {
    throw DomainError("non-finite hypergeometric parameters: " + describe(p));
  }
  if (detail::is_nonpositive_integer(p.c)) {
    throw DomainError("c must not be a nonpositive integer: " + describe(p));
  }
  if (p.z > 1.0) {
    throw DomainError("argument above 1 is outside the real branch: " +
                      describe(p));
  }
}

}  // namespace

namespace detail {

bool is_nonpositive_integer(double x) { return x <= 0.0 && is_integer(x); }

double gamma_real(double x) {
  if (std::isnan(x) || is_nonpositive_integer(x)) {
    throw DomainError("Gamma has a pole at " + std::to_string(x));
  }
  if (x < 0.5) return kPi / (std::sin(kPi * x) * lanczos_gamma(1.0 - x));
  return lanczos_gamma(x);
}

double rgamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  return 1.0 / gamma_real(x);
}

double digamma(double x) {
  if (std::isnan(x) || is_nonpositive_integer(x)) {
    throw DomainError("digamma has a pole at " + std::to_string(x));
  }
  double result = 0.0;
  if (x < 0.5) {
    // psi(x) = psi(1-x) - pi cot(pi x)
    result -= kPi / std::tan(kPi * x);
    x = 1.0 - x;
  }
  while (x < 10.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  const double inv2 = 1.0 / (x * x);
  // Bernoulli-number asymptotic series.
  const double series =
      inv2 * (1.0 / 12 -
              inv2 * (1.0 / 120 -
                      inv2 * (1.0 / 252 -
                              inv2 * (1.0 / 240 -
                                      inv2 * (1.0 / 132 -
                                              inv2 * (691.0 / 32760 -
                                                      inv2 / 12.0))))));
  return result + std::log(x) - 0.5 / x - series;
}

}  // namespace detail

double gamma(double x) {
  if (!(x > 0.0)) {
    throw DomainError("gamma requires x > 0, got " + std::to_string(x));
  }
  return detail::gamma_real(x);
}

double hyp2f1_at_one(double a, double b, double c) {
  const double s = c - a - b;
  if (!(s > 0.0)) {
    std::ostringstream os;
    os << "2F1 diverges at z = 1 when c - a - b <= 0 (c - a - b = " << s << ")";
    throw NumericalError(os.str());
  }
  return detail::gamma_real(c) * detail::gamma_real(s) * detail::rgamma(c - a) *
         detail::rgamma(c - b);
}

double hyp2f1_series(const Hyp2F1Params& p) {
  validate(p);
  if (detail::is_nonpositive_integer(p.a) || detail::is_nonpositive_integer(p.b)) {
    return terminating_sum(p);
  }
  if (!(std::abs(p.z) < 1.0)) {
    throw DomainError("direct series requires |z| < 1: " + describe(p));
  }
  return plain_series(p.a, p.b, p.c, p.z, p);
}

double hyp2f1_near_one(const Hyp2F1Params& p) {
  validate(p);
  if (!(p.z > 0.0 && p.z < 1.0)) {
    throw DomainError("expansion about 1 requires 0 < z < 1: " + describe(p));
  }
  const double s = p.c - p.a - p.b;
  const double m = std::round(s);
  // Near-integer s loses about log10(1/|s-m|) digits in the generic formula.
  if (std::abs(s - m) < 1e-9) {
    if (m >= 0.0) return connection_log(p.a, p.b, static_cast<int>(m), p.z, p);
    // Euler transformation maps c-a-b -> a+b-c.
    const double scale = std::pow(1.0 - p.z, s);
    return scale * connection_log(p.c - p.a, p.c - p.b, static_cast<int>(-m),
                                  p.z, p);
  }
  return connection_generic(p.a, p.b, p.c, p.z, p);
}

double hyp2f1_pfaff(const Hyp2F1Params& p, PfaffRoute route) {
  validate(p);
  if (!(p.z < 0.0)) {
    throw DomainError("Pfaff route is used for z < 0: " + describe(p));
  }
  const double w = p.z / (p.z - 1.0);
  Hyp2F1Params q;
  double scale = 0.0;
  if (route == PfaffRoute::kA) {
    q = {p.a, p.c - p.b, p.c, w};
    scale = std::pow(1.0 - p.z, -p.a);
  } else {
    q = {p.c - p.a, p.b, p.c, w};
    scale = std::pow(1.0 - p.z, -p.b);
  }
  return scale * hyp2f1(q);
}

double hyp2f1(const Hyp2F1Params& p) {
  validate(p);
  if (detail::is_nonpositive_integer(p.a) || detail::is_nonpositive_integer(p.b)) {
    return terminating_sum(p);
  }
  if (p.z == 1.0) return hyp2f1_at_one(p.a, p.b, p.c);
  if (std::abs(p.z) <= kSeriesSwitch) return plain_series(p.a, p.b, p.c, p.z, p);
  if (p.z > 0.0) return hyp2f1_near_one(p);
  // Route B keeps c - a - b of the transformed function equal to a - b.
  return hyp2f1_pfaff(p, p.a >= p.b ? PfaffRoute::kB : PfaffRoute::kA);
}

}  // namespace dirnet::specfun
