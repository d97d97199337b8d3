#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dirnet/analytics.hpp"
#include "dirnet/fit.hpp"
#include "dirnet/simulator.hpp"
#include "dirnet/table.hpp"

namespace dirnet {

/// Provenance block shared by every emitted table: tool name, version,
/// experiment name and the full configuration.
nlohmann::ordered_json provenance(const std::string& experiment,
                                  nlohmann::ordered_json config);

nlohmann::ordered_json to_json(const ChannelModel& channel);
nlohmann::ordered_json to_json(const NetworkConfig& config);
nlohmann::ordered_json to_json(const QuadratureSpec& spec);
nlohmann::ordered_json to_json(const FitResult& fit);

/// Per-k rows of one simulated configuration.
Table stats_table(const NetworkConfig& config, const KHopStats& stats);

/// Analytic mu1 (and mu2 when requested) for one channel at several densities.
Table analytic_table(const ChannelModel& channel, const std::vector<double>& densities,
                     bool with_mu2, const QuadratureSpec& quadrature);

/// Boundary margin to use for a run: the explicit value if given, otherwise
/// default_boundary_margin(channel, k_max). Throws ConfigError if the result
/// leaves no interior region.
double resolve_margin(const ChannelModel& channel, int k_max, double domain_radius,
                      std::optional<double> explicit_margin);

struct SweepSpec {
  std::vector<double> densities;
  std::vector<double> etas;
  std::vector<double> epsilons;
  double beta = 1.0;
  double domain_radius = 10.0;
  std::optional<double> boundary_margin;  // default rule when empty
  int k_max = 3;
  int trials = 200;
  std::uint64_t seed = 0;
  /// Add the quadrature mu2 next to the k = 2 rows.
  bool analytic_mu2 = true;
  QuadratureSpec quadrature;

  void validate() const;
};

/// Rows (rho, eta, epsilon, k, mu, mu_stderr, mu_analytic, ...) in grid order
/// rho-major, then eta, then epsilon. Every grid point uses spec.seed so
/// neighbouring points share random numbers.
Table run_degree_sweep(const SweepSpec& spec);

struct PhaseSpec {
  std::vector<double> densities;
  std::vector<double> etas;
  double epsilon = 1.0;  // compared against the isotropic pattern
  int k = 1;             // 1 or 2
  double beta = 1.0;
  QuadratureSpec quadrature;
  /// Simulation used when the quadrature margin is within its error bars.
  bool simulation_fallback = true;
  int fallback_trials = 20;
  std::uint64_t seed = 0;

  void validate() const;
};

/// One row per (rho, eta) with winner "isotropic", "anisotropic" or "tie".
/// margin = mu(epsilon) - mu(0).
Table run_phase_diagram(const PhaseSpec& spec);

struct HopDistributionSpec {
  double density = 3.0;
  double eta = 3.0;
  double beta = 1.0;
  double epsilon = 1.0;
  double domain_radius = 10.0;
  double boundary_margin = 0.0;
  int trials = 500;
  std::uint64_t seed = 0;

  void validate() const;
};

struct HopDistributionResult {
  Table table;
  KHopStats isotropic;
  KHopStats anisotropic;
  /// Mass beyond one hop: the anisotropic CDF lies on or above the isotropic
  /// one at every k >= 2, strictly somewhere.
  bool left_skewed = false;
  double cdf3_isotropic = 0.0;  // sum of pmf over k <= 3
  double cdf3_anisotropic = 0.0;
};

HopDistributionResult run_hop_distribution(const HopDistributionSpec& spec);

struct HbarCase {
  double epsilon = 0.0;
  double eta = 3.0;
};

struct HbarSpec {
  std::vector<double> densities;  // ascending
  std::vector<HbarCase> cases;
  double beta = 1.0;
  double domain_radius = 10.0;
  double boundary_margin = 0.0;
  int trials = 500;
  std::uint64_t seed = 0;
  /// Grid points skipped after the maximum before the fit window starts.
  int window_offset = 2;

  void validate() const;
};

struct HbarCaseResult {
  HbarCase params;
  std::vector<KHopStats> stats;  // one per density
  std::size_t peak_index = 0;
  FitResult fit;
};

struct HbarResult {
  Table table;
  std::vector<HbarCaseResult> cases;
};

/// Index of the largest value; ties go to the smallest index.
std::size_t peak_index(const std::vector<double>& values);

/// Power-law fit of values[peak + offset ...]. Throws NumericalError with the
/// window when fewer than three points remain.
FitResult fit_post_peak(const std::vector<double>& x, const std::vector<double>& y,
                        int window_offset);

HbarResult run_hbar_scaling(const HbarSpec& spec);

struct KhopFitSpec {
  std::vector<double> densities;
  ChannelModel channel = ChannelModel::rayleigh(3.0, GainModel(0.0));
  int k = 3;
  double domain_radius = 15.0;
  std::optional<double> boundary_margin;
  int trials = 500;
  std::uint64_t seed = 0;

  void validate() const;
};

struct KhopFitResult {
  Table table;
  FitResult fit;
  std::vector<KHopStats> stats;
  /// Area of the disk with the same mean one-hop degree per unit density.
  double reference_area = 0.0;
  /// Fitted linear coefficient over reference_area, compared with 2k - 1.
  double leading_ratio = 0.0;
};

/// Least-squares fit of a - b rho^{1/3} + c rho to simulated mu_k(rho), k = 3
/// unless spec.k says otherwise.
KhopFitResult run_mu3_fit(const KhopFitSpec& spec);

}  // namespace dirnet
