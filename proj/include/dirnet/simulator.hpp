#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dirnet/channel.hpp"

namespace dirnet {

struct NetworkConfig {
  double density = 1.0;
  double domain_radius = 10.0;
  ChannelModel channel = ChannelModel::rayleigh(3.0, GainModel(0.0));
  /// Nodes closer than this to the domain edge do not contribute statistics.
  double boundary_margin = 0.0;
  std::uint64_t seed = 0;
  int trials = 1;
  /// Draw the node count from Poisson(rho V) instead of fixing floor(rho V).
  bool poisson_count = false;

  void validate() const;
  double area() const;
  /// floor(rho * pi * R^2)
  std::size_t nominal_node_count() const;
};

/// Margin that keeps every k-hop neighbourhood (k <= k_max) clear of the edge:
/// k_max times the range where the best-case link probability falls to 1e-6.
double default_boundary_margin(const ChannelModel& channel, int k_max);

/// Undirected simple graph in compressed sparse row form.
class Adjacency {
 public:
  Adjacency() = default;
  /// edges must be (i < j) pairs in lexicographic order.
  Adjacency(std::size_t nodes,
            std::span<const std::pair<std::uint32_t, std::uint32_t>> edges);

  std::size_t size() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return neighbours_.size() / 2; }
  std::span<const std::uint32_t> neighbours(std::size_t i) const {
    return {neighbours_.data() + offsets_[i], neighbours_.data() + offsets_[i + 1]};
  }
  std::size_t degree(std::size_t i) const { return offsets_[i + 1] - offsets_[i]; }
  bool connected(std::size_t i, std::size_t j) const;
  /// All (i < j) edges in lexicographic order.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges() const;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> neighbours_;  // sorted per row
};

struct Realization {
  std::vector<OrientedNode> nodes;
  Adjacency adjacency;
  std::vector<bool> interior_mask;
};

/// Uniform node positions on the disk, uniform orientations, and independent
/// links: pair (i, j) is linked iff its own uniform variate is <= H_ij.
/// Deterministic in (config.seed, trial_index).
Realization sample_realization(const NetworkConfig& config,
                               std::uint64_t trial_index);

/// Uniform variate in (0, 1] for pair i < j of one trial.
double pair_variate(std::uint64_t seed, std::uint64_t trial, std::uint32_t i,
                    std::uint32_t j) noexcept;

/// Hop counts for a set of source nodes.
struct HopDegrees {
  std::vector<std::size_t> sources;
  /// counts[s][k-1] = nodes at graph distance exactly k from sources[s].
  std::vector<std::vector<std::uint32_t>> counts;
  std::vector<std::uint32_t> unreachable;
  std::size_t node_count = 0;

  std::uint32_t at(std::size_t s, std::size_t k) const {
    return k >= 1 && k <= counts[s].size() ? counts[s][k - 1] : 0u;
  }
};

/// Breadth-first search from every node (or the given sources). Checks the
/// partition identity sum_k d(k) + d(inf) = N - 1 for every source and throws
/// std::logic_error if it fails.
HopDegrees khop_degrees(const Realization& real);
HopDegrees khop_degrees(const Realization& real,
                        std::span<const std::size_t> sources);

/// Per-trial sums over interior nodes.
struct TrialTally {
  std::size_t interior = 0;
  std::size_t node_count = 0;
  std::vector<double> hop_sums;  // index k-1
  double unreachable_sum = 0.0;
  double others_sum = 0.0;       // sum of (N - 1)
  double weighted_hops = 0.0;    // sum of k d(k)
  double reachable = 0.0;        // sum of d(k), k finite
  bool disconnected = false;     // some interior node misses someone
};

TrialTally tally_trial(const Realization& real, const HopDegrees& hops);

struct KHopStats {
  std::vector<double> mu;         // index k-1
  std::vector<double> mu_stderr;  // across-trial standard error
  double mu_inf = 0.0;
  double mu_inf_stderr = 0.0;
  std::vector<double> hop_pmf;    // mu_k / (N - 1)
  double unreachable_fraction = 0.0;
  /// Mean hop count over reachable pairs.
  double h_bar = 0.0;
  double h_bar_stderr = 0.0;
  double mean_cluster_size = 0.0;
  std::size_t n_interior = 0;
  int trials = 0;
  int disconnected_trials = 0;
  double mean_node_count = 0.0;

  double mu_at(std::size_t k) const { return k >= 1 && k <= mu.size() ? mu[k - 1] : 0.0; }
  double stderr_at(std::size_t k) const {
    return k >= 1 && k <= mu_stderr.size() ? mu_stderr[k - 1] : 0.0;
  }
};

/// Throws ConfigError when no interior node exists across all trials.
KHopStats aggregate_stats(const NetworkConfig& config,
                          std::span<const TrialTally> tallies);
KHopStats aggregate_stats(const NetworkConfig& config,
                          std::span<const Realization> realizations);

struct SimulationOptions {
  /// Run the BFS from interior nodes only. Statistics are identical; the
  /// identity is then checked for those sources only.
  bool interior_sources_only = false;
  /// Called in trial order with each realization (e.g. for dumps).
  std::function<void(std::uint64_t trial, const Realization&)> on_realization;
};

/// Runs config.trials independent trials (in parallel) and aggregates them in
/// trial order. Results do not depend on the worker count.
KHopStats simulate(const NetworkConfig& config, const SimulationOptions& options = {});

}  // namespace dirnet
