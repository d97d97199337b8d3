#pragma once

#include <cstddef>
#include <span>

#include "dirnet/channel.hpp"

namespace dirnet {

/// Numerical error accompanies every analytic degree.
struct DegreeEstimate {
  double value = 0.0;
  double error_bound = 0.0;
};

enum class QuadratureMethod { kTensorGauss, kQuasiMonteCarlo };

/// Resolution and truncation controls for the nested two-hop integral.
struct QuadratureSpec {
  /// Radial integrals stop where the best-case link probability drops below
  /// this value.
  double tail_tolerance = 1e-8;
  /// Points per dimension of the outer tensor rule (kTensorGauss only).
  int outer_points = 24;
  /// Points per dimension of the inner tensor rule.
  int inner_points = 32;
  QuadratureMethod method = QuadratureMethod::kQuasiMonteCarlo;
  /// Outer Sobol points at the finer of the two compared resolutions.
  std::size_t qmc_samples = 8192;
  /// Refuse to run above this many inner-integrand evaluations.
  double max_evaluations = 2e10;

  void validate() const;
};

/// Mean one-hop degree of the infinite-plane network. Hard disk: rho pi r0^2.
DegreeEstimate mu1_closed_form(double rho, const ChannelModel& channel);

/// Mean two-hop degree from the nested integral: the outer average over the
/// second node's position and orientation of (1 - H_ij) times the probability
/// of at least one Poisson relay, whose mean count is itself a 3-D integral.
///
/// The value is taken at the finer of two resolutions. error_bound adds the
/// coarse/fine difference, an inner-rule refinement estimate and a rigorous
/// bound on the truncated radial tails.
DegreeEstimate mu2_quadrature(double rho, const ChannelModel& channel,
                              const QuadratureSpec& spec = {});

/// Estimated inner-integrand evaluations of mu2_quadrature for this spec.
double mu2_evaluation_count(const QuadratureSpec& spec);

/// Probability that i and j share at least one relay in a fixed layout:
/// 1 - prod_k (1 - H_ik H_kj). Exact for independent links.
double h2_exact_fixed(std::span<const OrientedNode> nodes,
                      const ChannelModel& channel, std::size_t i, std::size_t j);

/// Nested product approximation for "j is reached through some relay that is
/// exactly m-1 hops from i". Equals the link probability for m = 1 and
/// h2_exact_fixed for m = 2; for m >= 3 it treats paths through different
/// relays as independent even when they share links.
double hm_approx_fixed(std::span<const OrientedNode> nodes,
                       const ChannelModel& channel, std::size_t i,
                       std::size_t j, int m);

/// Intersection area of two disks of radius r0 whose centres are r apart.
double hard_disk_lens_area(double r0, double r);

enum class HardDiskMode { kNumericIntegral, kAsymptotic2D, kAsymptotic3D };

/// Two-hop mean degree of the hard-disk graph.
DegreeEstimate mu2_hard_disk(double rho, double r0, HardDiskMode mode);

}  // namespace dirnet
