#include "dirnet/analytics.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "dirnet/error.hpp"
#include "dirnet/parallel.hpp"
#include "dirnet/quadrature.hpp"
#include "dirnet/specfun.hpp"

namespace dirnet {

namespace {

constexpr double kPi = std::numbers::pi;
// exp(-kPrune) is below every tolerance used here.
constexpr double kPrune = 45.0;

void check_density(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw DomainError("density must be > 0, got " + std::to_string(rho));
  }
}

void check_index(std::span<const OrientedNode> nodes, std::size_t i,
                 std::size_t j) {
  if (i >= nodes.size() || j >= nodes.size()) {
    throw ConfigError("node index out of range");
  }
  if (i == j) throw ConfigError("node indices must differ");
}

// Integral of the best-case link probability over |x| > r.
double radial_tail(const ChannelModel& ch, double r) {
  const double g2 = ch.gain().max_gain() * ch.gain().max_gain();
  const double p = 2.0 / ch.eta();
  const double x = ch.beta() * std::pow(r, ch.eta()) / g2;
  return kPi * std::pow(g2 / ch.beta(), p) * p * boost::math::tgamma(p, x);
}

// Tensor rule for the mean relay count around a fixed pair, node i at the
// origin pointing along +x. Radial Gauss-Legendre, trapezoid in both angles.
class InnerRule {
 public:
  InnerRule(const ChannelModel& ch, double radius, int n) : ch_(ch) {
    const quad::Rule radial = quad::gauss_legendre(n, 0.0, radius);
    const double dphi = 2.0 * kPi / n;
    for (int t = 0; t < n; ++t) {
      cos_v_.push_back(std::cos(t * dphi));
      sin_v_.push_back(std::sin(t * dphi));
    }
    for (int ir = 0; ir < n; ++ir) {
      const double r = radial.nodes[ir];
      const double rpow = ch.beta() * std::pow(r, ch.eta());
      for (int t = 0; t < n; ++t) {
        const double gi = ch.gain().from_cos(cos_v_[t]);
        Cell cell;
        cell.x = r * cos_v_[t];
        cell.y = r * sin_v_[t];
        cell.ux = cos_v_[t];
        cell.uy = sin_v_[t];
        cell.a = gi > 0.0 ? rpow / gi : std::numeric_limits<double>::infinity();
        // Orientation average folded into the weight.
        cell.w = radial.weights[ir] * r * dphi / n;
        if (std::isfinite(cell.a)) cells_.push_back(cell);
      }
    }
  }

  /// Mean number of relays per unit density for node j at (xj, yj) pointing
  /// along (cj, sj).
  double mean_relays(double xj, double yj, double cj, double sj) const {
    const double gmax = ch_.gain().max_gain();
    const auto& gain = ch_.gain();
    double total = 0.0;
    for (const Cell& c : cells_) {
      const double dx = xj - c.x;
      const double dy = yj - c.y;
      const double d = std::sqrt(dx * dx + dy * dy);
      double b = 0.0;
      double px = 0.0;
      double py = 0.0;
      if (d > 0.0) {
        px = dx / d;
        py = dy / d;
        // j sees k along -(px, py).
        const double gj = gain.from_cos(-(px * cj + py * sj));
        if (!(gj > 0.0)) continue;
        b = ch_.beta() * std::pow(d, ch_.eta()) / gj;
      }
      if ((c.a + b) / gmax > kPrune) continue;
      double sum = 0.0;
      const std::size_t m = cos_v_.size();
      for (std::size_t t = 0; t < m; ++t) {
        const double g1 = gain.from_cos(-(c.ux * cos_v_[t] + c.uy * sin_v_[t]));
        if (!(g1 > 0.0)) continue;
        double e = c.a / g1;
        if (b > 0.0) {
          const double g2 = gain.from_cos(px * cos_v_[t] + py * sin_v_[t]);
          if (!(g2 > 0.0)) continue;
          e += b / g2;
        }
        sum += std::exp(-e);
      }
      total += c.w * sum;
    }
    return total;
  }

  std::size_t size() const {
    return cos_v_.size() * cos_v_.size() * cos_v_.size();
  }

 private:
  struct Cell {
    double x, y, ux, uy, a, w;
  };
  const ChannelModel& ch_;
  std::vector<double> cos_v_;
  std::vector<double> sin_v_;
  std::vector<Cell> cells_;
};

struct OuterPoint {
  double x, y, c, s;
  double weight;  // includes density and area factors
};

// Outer integrand without its weight: (1 - H_ij)(1 - exp(-rho I_j)).
double two_hop_integrand(const ChannelModel& ch, const InnerRule& inner,
                         double rho, const OuterPoint& p) {
  const double h = ch.link_probability(p.x, p.y, 1.0, 0.0, p.c, p.s);
  if (h >= 1.0) return 0.0;
  const double relays = rho * inner.mean_relays(p.x, p.y, p.c, p.s);
  return (1.0 - h) * -std::expm1(-relays);
}

std::vector<double> evaluate_all(const ChannelModel& ch, const InnerRule& inner,
                                 double rho, const std::vector<OuterPoint>& pts) {
  std::vector<double> values(pts.size());
  constexpr std::size_t kChunk = 64;
  const std::size_t chunks = (pts.size() + kChunk - 1) / kChunk;
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t end = std::min(pts.size(), (c + 1) * kChunk);
    for (std::size_t k = c * kChunk; k < end; ++k) {
      values[k] = two_hop_integrand(ch, inner, rho, pts[k]);
    }
  });
  return values;
}

double weighted_sum(const std::vector<OuterPoint>& pts,
                    const std::vector<double>& values, std::size_t count) {
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const double term = pts[k].weight * values[k];
    const double t = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
  }
  return sum + comp;
}

std::vector<OuterPoint> qmc_points(double rho, double radius, std::size_t n) {
  quad::Sobol3 sobol;
  std::vector<OuterPoint> pts(n);
  const double weight = rho * kPi * radius * radius / static_cast<double>(n);
  for (auto& p : pts) {
    const auto u = sobol.next();
    const double r = radius * std::sqrt(u[0]);
    const double theta = 2.0 * kPi * u[1];
    const double orient = 2.0 * kPi * u[2];
    p = {r * std::cos(theta), r * std::sin(theta), std::cos(orient),
         std::sin(orient), weight};
  }
  return pts;
}

std::vector<OuterPoint> tensor_points(double rho, double radius, int n) {
  const quad::Rule radial = quad::gauss_legendre(n, 0.0, radius);
  const double dang = 2.0 * kPi / n;
  std::vector<OuterPoint> pts;
  pts.reserve(static_cast<std::size_t>(n) * n * n);
  for (int ir = 0; ir < n; ++ir) {
    const double r = radial.nodes[ir];
    // rho/(2 pi) * int r dr dtheta dvartheta
    const double w = rho / (2.0 * kPi) * radial.weights[ir] * r * dang * dang;
    for (int t = 0; t < n; ++t) {
      for (int o = 0; o < n; ++o) {
        pts.push_back({r * std::cos(t * dang), r * std::sin(t * dang),
                       std::cos(o * dang), std::sin(o * dang), w});
      }
    }
  }
  return pts;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(tail_tolerance > 0.0 && tail_tolerance < 1.0)) {
    throw ConfigError("tail_tolerance must lie in (0, 1)");
  }
  if (outer_points < 8 || inner_points < 8) {
    throw ConfigError("quadrature resolutions must be >= 8 points per dimension");
  }
  if (qmc_samples < 1000) throw ConfigError("qmc_samples must be >= 1000");
}

DegreeEstimate mu1_closed_form(double rho, const ChannelModel& channel) {
  check_density(rho);
  if (!channel.is_rayleigh()) {
    return {rho * kPi * channel.r0() * channel.r0(), 0.0};
  }
  const double p = 2.0 / channel.eta();
  const double integral = gain_power_integral(channel.gain(), p);
  const double value = rho * specfun::gamma(p) /
                       (2.0 * kPi * channel.eta() * std::pow(channel.beta(), p)) *
                       integral * integral;
  // Special-function accuracy dominates.
  return {value, 1e-10 * value};
}

double mu2_evaluation_count(const QuadratureSpec& spec) {
  const double inner = std::pow(static_cast<double>(spec.inner_points), 3);
  const double refine = 64.0 * 8.0 * inner;
  double outer = 0.0;
  if (spec.method == QuadratureMethod::kQuasiMonteCarlo) {
    outer = static_cast<double>(spec.qmc_samples);
  } else {
    const double n = spec.outer_points;
    outer = n * n * n + 8.0 * n * n * n;
  }
  return outer * inner + refine;
}

DegreeEstimate mu2_quadrature(double rho, const ChannelModel& channel,
                              const QuadratureSpec& spec) {
  check_density(rho);
  spec.validate();
  if (!channel.is_rayleigh()) {
    throw ConfigError(
        "nested two-hop quadrature needs the Rayleigh channel; use "
        "mu2_hard_disk for the hard disk");
  }
  const double evals = mu2_evaluation_count(spec);
  if (evals > spec.max_evaluations) {
    std::ostringstream os;
    os << "two-hop quadrature would need about " << evals
       << " integrand evaluations, above the cap of " << spec.max_evaluations
       << "; lower inner_points/qmc_samples/outer_points or raise "
          "max_evaluations";
    throw ConfigError(os.str());
  }

  const double reach = effective_range(channel, spec.tail_tolerance);
  const double outer_radius = 2.0 * reach;
  const InnerRule inner(channel, reach, spec.inner_points);

  double coarse = 0.0;
  double fine = 0.0;
  std::vector<OuterPoint> fine_pts;
  if (spec.method == QuadratureMethod::kQuasiMonteCarlo) {
    // The first half of a Sobol run is itself a net; reuse it as the coarse
    // estimate.
    fine_pts = qmc_points(rho, outer_radius, spec.qmc_samples);
    const auto values = evaluate_all(channel, inner, rho, fine_pts);
    const std::size_t half = spec.qmc_samples / 2;
    fine = weighted_sum(fine_pts, values, values.size());
    coarse = 2.0 * weighted_sum(fine_pts, values, half) *
             (static_cast<double>(spec.qmc_samples) / (2.0 * half));
  } else {
    const auto coarse_pts = tensor_points(rho, outer_radius, spec.outer_points);
    const auto coarse_vals = evaluate_all(channel, inner, rho, coarse_pts);
    coarse = weighted_sum(coarse_pts, coarse_vals, coarse_vals.size());
    fine_pts = tensor_points(rho, outer_radius, 2 * spec.outer_points);
    const auto fine_vals = evaluate_all(channel, inner, rho, fine_pts);
    fine = weighted_sum(fine_pts, fine_vals, fine_vals.size());
  }

  // Inner refinement: compare against a doubled inner rule on an evenly
  // strided subset of outer points, scaled up to the full outer weight.
  const InnerRule inner_fine(channel, reach, 2 * spec.inner_points);
  constexpr std::size_t kProbe = 64;
  const std::size_t stride = std::max<std::size_t>(1, fine_pts.size() / kProbe);
  std::vector<OuterPoint> probe;
  double total_weight = 0.0;
  for (const auto& p : fine_pts) total_weight += p.weight;
  for (std::size_t k = 0; k < fine_pts.size() && probe.size() < kProbe; k += stride) {
    probe.push_back(fine_pts[k]);
  }
  const auto probe_lo = evaluate_all(channel, inner, rho, probe);
  const auto probe_hi = evaluate_all(channel, inner_fine, rho, probe);
  double mean_gap = 0.0;
  for (std::size_t k = 0; k < probe.size(); ++k) {
    mean_gap += std::abs(probe_hi[k] - probe_lo[k]);
  }
  mean_gap /= static_cast<double>(probe.size());
  const double inner_err = total_weight * mean_gap;

  // Truncated tails: relays beyond the inner radius, and second nodes beyond
  // the outer radius.
  const double inner_tail = rho * kPi * outer_radius * outer_radius * rho *
                            radial_tail(channel, reach);
  const auto outer_tail_density = [&](double r) {
    return 2.0 * kPi * r * 2.0 * rho * radial_tail(channel, 0.5 * r);
  };
  const double outer_tail =
      rho * boost::math::quadrature::gauss_kronrod<double, 21>::integrate(
                outer_tail_density, outer_radius,
                std::numeric_limits<double>::infinity(), 15, 1e-6);

  const double error = std::abs(fine - coarse) + inner_err + inner_tail + outer_tail;
  return {std::max(0.0, fine), error};
}

double h2_exact_fixed(std::span<const OrientedNode> nodes,
                      const ChannelModel& channel, std::size_t i,
                      std::size_t j) {
  check_index(nodes, i, j);
  double none = 1.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (k == i || k == j) continue;
    none *= 1.0 - connection_probability(channel, nodes[i], nodes[k]) *
                      connection_probability(channel, nodes[k], nodes[j]);
  }
  return 1.0 - none;
}

double hm_approx_fixed(std::span<const OrientedNode> nodes,
                       const ChannelModel& channel, std::size_t i,
                       std::size_t j, int m) {
  check_index(nodes, i, j);
  if (m < 1) throw ConfigError("hop count m must be >= 1");
  const std::size_t n = nodes.size();
  using Matrix = std::vector<double>;
  std::vector<Matrix> levels;  // levels[q-1] holds H^(q)
  Matrix h1(n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b) h1[a * n + b] = connection_probability(channel, nodes[a], nodes[b]);
    }
  }
  levels.push_back(std::move(h1));
  if (m == 1) return levels[0][i * n + j];

  auto next_level = [&](int q) {
    // q >= 2: H^(q)_ab = 1 - prod_l (1 - H^(q-1)_al H_lb prod_{s<q-1}(1 - H^(s)_al))
    const Matrix& prev = levels[q - 2];
    const Matrix& link = levels[0];
    Matrix out(n * n, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (a == b) continue;
        double none = 1.0;
        for (std::size_t l = 0; l < n; ++l) {
          if (l == a || l == b) continue;
          double exact = prev[a * n + l];
          for (int s = 1; s <= q - 2; ++s) exact *= 1.0 - levels[s - 1][a * n + l];
          none *= 1.0 - exact * link[l * n + b];
        }
        out[a * n + b] = 1.0 - none;
      }
    }
    return out;
  };
  for (int q = 2; q <= m; ++q) levels.push_back(next_level(q));
  return levels[m - 1][i * n + j];
}

double hard_disk_lens_area(double r0, double r) {
  if (!(r0 > 0.0)) throw DomainError("disk radius must be > 0");
  if (!(r >= 0.0)) throw DomainError("centre separation must be >= 0");
  if (r >= 2.0 * r0) return 0.0;
  // A = r0^2 (x - sin x) with x = 2 acos(r / 2r0). Near r = 2r0 both the
  // acos and x - sin x cancel, so take the angle from the gap 2r0 - r and sum
  // the series for small x.
  const double gap = (2.0 * r0 - r) / (2.0 * r0);
  const double x = 4.0 * std::asin(std::sqrt(0.5 * gap));
  if (x > 0.1) return r0 * r0 * (x - std::sin(x));
  const double x2 = x * x;
  double term = x * x2 / 6.0;
  double sum = 0.0;
  for (int k = 1; k <= 6; ++k) {
    sum += term;
    term *= -x2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
  }
  return r0 * r0 * sum;
}

DegreeEstimate mu2_hard_disk(double rho, double r0, HardDiskMode mode) {
  check_density(rho);
  if (!(r0 > 0.0)) throw DomainError("disk radius must be > 0");
  switch (mode) {
    case HardDiskMode::kNumericIntegral: {
      const auto integrand = [&](double r) {
        return r * -std::expm1(-rho * hard_disk_lens_area(r0, r));
      };
      // The lens area has a square-root edge at 2 r0; tanh-sinh absorbs it.
      boost::math::quadrature::tanh_sinh<double> rule;
      double err = 0.0;
      const double integral = rule.integrate(integrand, r0, 2.0 * r0, 1e-13, &err);
      const double scale = 2.0 * kPi * rho;
      return {scale * integral,
              scale * err + 1e-14 * std::abs(scale * integral)};
    }
    case HardDiskMode::kAsymptotic2D: {
      const double value =
          3.0 * rho * kPi * r0 * r0 - 2.0 * kPi * std::pow(2.0 * r0, 2.0 / 3.0) *
                                          specfun::gamma(2.0 / 3.0) *
                                          std::cbrt(rho / 3.0);
      // Remainder is O(rho^{-1/3}); no rigorous constant is available.
      return {value, std::numeric_limits<double>::infinity()};
    }
    case HardDiskMode::kAsymptotic3D: {
      const double value = 28.0 / 3.0 * kPi * rho * r0 * r0 * r0 -
                           8.0 * kPi * std::pow(r0, 1.5) * std::sqrt(2.0 * rho);
      return {value, std::numeric_limits<double>::infinity()};
    }
  }
  throw ConfigError("unknown hard-disk mode");
}

}  // namespace dirnet
