#include "dirnet/simulator.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "dirnet/error.hpp"
#include "dirnet/parallel.hpp"

namespace dirnet {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t trial) noexcept {
  return mix64(mix64(seed + kGolden) ^ (trial * kGolden + 0x632BE59BD9B4E019ULL));
}

// Variate in (0, 1] for pair (i, j) of the stream identified by key.
double pair_variate_from_key(std::uint64_t key, std::uint32_t i, std::uint32_t j) noexcept {
  const std::uint64_t counter = (static_cast<std::uint64_t>(i) << 32) | j;
  const std::uint64_t bits = mix64(key + (counter + 1) * kGolden);
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

// Uniform in [0, 1) with 53 random bits.
double unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace

void NetworkConfig::validate() const {
  if (!(density > 0.0) || !std::isfinite(density)) {
    throw ConfigError("density must be > 0");
  }
  if (!(domain_radius > 0.0) || !std::isfinite(domain_radius)) {
    throw ConfigError("domain radius must be > 0");
  }
  if (!(boundary_margin >= 0.0) || !(boundary_margin < domain_radius)) {
    throw ConfigError("boundary margin " + std::to_string(boundary_margin) +
                      " must lie in [0, R) with R = " +
                      std::to_string(domain_radius));
  }
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (static_cast<double>(nominal_node_count()) > 4.0e9) {
    throw ConfigError("node count exceeds the 32-bit index range");
  }
}

double NetworkConfig::area() const { return kPi * domain_radius * domain_radius; }

std::size_t NetworkConfig::nominal_node_count() const {
  return static_cast<std::size_t>(std::floor(density * area()));
}

double default_boundary_margin(const ChannelModel& channel, int k_max) {
  if (k_max < 1) throw ConfigError("k_max must be >= 1");
  return k_max * effective_range(channel, 1e-6);
}

Adjacency::Adjacency(std::size_t nodes,
                     std::span<const std::pair<std::uint32_t, std::uint32_t>> edges)
    : offsets_(nodes + 1, 0) {
  for (const auto& [i, j] : edges) {
    if (i >= j || j >= nodes) throw std::invalid_argument("edge must satisfy i < j < N");
    ++offsets_[i + 1];
    ++offsets_[j + 1];
  }
  for (std::size_t k = 0; k < nodes; ++k) offsets_[k + 1] += offsets_[k];
  neighbours_.resize(offsets_[nodes]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [i, j] : edges) {
    neighbours_[fill[i]++] = j;
    neighbours_[fill[j]++] = i;
  }
  for (std::size_t k = 0; k < nodes; ++k) {
    std::sort(neighbours_.begin() + offsets_[k], neighbours_.begin() + offsets_[k + 1]);
  }
}

bool Adjacency::connected(std::size_t i, std::size_t j) const {
  const auto row = neighbours(i);
  return std::binary_search(row.begin(), row.end(), static_cast<std::uint32_t>(j));
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> Adjacency::edges() const {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  out.reserve(edge_count());
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::uint32_t j : neighbours(i)) {
      if (j > i) out.emplace_back(static_cast<std::uint32_t>(i), j);
    }
  }
  return out;
}

double pair_variate(std::uint64_t seed, std::uint64_t trial, std::uint32_t i,
                    std::uint32_t j) noexcept {
  return pair_variate_from_key(stream_key(seed, trial), i, j);
}

Realization sample_realization(const NetworkConfig& config, std::uint64_t trial_index) {
  config.validate();
  std::mt19937_64 engine(stream_key(config.seed, trial_index));
  std::size_t count = config.nominal_node_count();
  if (config.poisson_count) {
    std::poisson_distribution<long long> poisson(config.density * config.area());
    count = static_cast<std::size_t>(poisson(engine));
  }

  Realization real;
  real.nodes.resize(count);
  real.interior_mask.resize(count);
  const double inner = config.domain_radius - config.boundary_margin;
  for (std::size_t k = 0; k < count; ++k) {
    const double r = config.domain_radius * std::sqrt(unit(engine()));
    const double theta = 2.0 * kPi * unit(engine());
    const double orient = 2.0 * kPi * unit(engine());
    real.nodes[k] = {r * std::cos(theta), r * std::sin(theta), orient};
    real.interior_mask[k] = r <= inner;
  }

  // Pairs farther apart than this link with probability below 2^-54, which
  // no variate in (0, 1] can reach.
  const ChannelModel& ch = config.channel;
  const double cutoff = ch.is_rayleigh() ? effective_range(ch, 0x1.0p-54) : ch.r0();
  const double cutoff2 = cutoff * cutoff;
  std::vector<double> cos_o(count);
  std::vector<double> sin_o(count);
  for (std::size_t k = 0; k < count; ++k) {
    cos_o[k] = std::cos(real.nodes[k].orientation);
    sin_o[k] = std::sin(real.nodes[k].orientation);
  }
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  const std::uint64_t key = stream_key(config.seed, trial_index);
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto& a = real.nodes[i];
    for (std::uint32_t j = i + 1; j < count; ++j) {
      const double dx = real.nodes[j].x - a.x;
      const double dy = real.nodes[j].y - a.y;
      if (dx * dx + dy * dy > cutoff2) continue;
      const double h = ch.link_probability(dx, dy, cos_o[i], sin_o[i], cos_o[j], sin_o[j]);
      if (h <= 0.0) continue;
      if (pair_variate_from_key(key, i, j) <= h) edges.emplace_back(i, j);
    }
  }
  real.adjacency = Adjacency(count, edges);
  return real;
}

HopDegrees khop_degrees(const Realization& real) {
  std::vector<std::size_t> all(real.nodes.size());
  for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
  return khop_degrees(real, all);
}

HopDegrees khop_degrees(const Realization& real, std::span<const std::size_t> sources) {
  const Adjacency& adj = real.adjacency;
  const std::size_t n = adj.size();
  HopDegrees out;
  out.node_count = n;
  out.sources.assign(sources.begin(), sources.end());
  out.counts.resize(sources.size());
  out.unreachable.resize(sources.size());

  // kLanes * 64 sources per pass, one bit each.
  constexpr std::size_t kLanes = 4;
  constexpr std::size_t kWidth = 64 * kLanes;
  using Bits = std::array<std::uint64_t, kLanes>;
  std::vector<Bits> seen(n);
  std::vector<Bits> frontier(n);
  std::vector<Bits> next(n);
  std::vector<char> active_row(n);
  using Counts = std::array<std::uint32_t, kWidth>;
  std::vector<Counts> level_counts;  // [level-1][source bit]
  for (std::size_t start = 0; start < sources.size(); start += kWidth) {
    const std::size_t width = std::min(kWidth, sources.size() - start);
    std::fill(seen.begin(), seen.end(), Bits{});
    std::fill(frontier.begin(), frontier.end(), Bits{});
    std::fill(active_row.begin(), active_row.end(), 0);
    for (std::size_t b = 0; b < width; ++b) {
      const std::size_t src = sources[start + b];
      if (src >= n) throw ConfigError("BFS source out of range");
      seen[src][b / 64] |= std::uint64_t{1} << (b % 64);
      frontier[src][b / 64] |= std::uint64_t{1} << (b % 64);
      active_row[src] = 1;
    }
    level_counts.clear();
    bool active = true;
    for (std::size_t level = 1; active; ++level) {
      std::fill(next.begin(), next.end(), Bits{});
      for (std::size_t u = 0; u < n; ++u) {
        if (!active_row[u]) continue;
        const Bits f = frontier[u];
        for (std::uint32_t v : adj.neighbours(u)) {
          for (std::size_t l = 0; l < kLanes; ++l) next[v][l] |= f[l];
        }
      }
      active = false;
      for (std::size_t v = 0; v < n; ++v) {
        bool any = false;
        for (std::size_t l = 0; l < kLanes; ++l) {
          std::uint64_t fresh = next[v][l] & ~seen[v][l];
          frontier[v][l] = fresh;
          if (fresh == 0) continue;
          any = true;
          seen[v][l] |= fresh;
          if (level_counts.size() < level) level_counts.resize(level, Counts{});
          auto& counts = level_counts[level - 1];
          while (fresh != 0) {
            ++counts[l * 64 + std::countr_zero(fresh)];
            fresh &= fresh - 1;
          }
        }
        active_row[v] = any;
        active = active || any;
      }
    }
    for (std::size_t b = 0; b < width; ++b) {
      std::size_t last = level_counts.size();
      while (last > 0 && level_counts[last - 1][b] == 0) --last;
      auto& row = out.counts[start + b];
      row.resize(last);
      for (std::size_t k = 0; k < last; ++k) row[k] = level_counts[k][b];
    }
    // Unreached nodes are counted from the final visited sets, independently
    // of the per-level tallies above.
    for (std::size_t b = 0; b < width; ++b) {
      const std::uint64_t bit = std::uint64_t{1} << (b % 64);
      std::uint32_t missing = 0;
      for (std::size_t v = 0; v < n; ++v) missing += (seen[v][b / 64] & bit) == 0;
      out.unreachable[start + b] = missing;
    }
  }

  for (std::size_t s = 0; s < sources.size(); ++s) {
    std::uint64_t total = out.unreachable[s];
    for (std::uint32_t c : out.counts[s]) total += c;
    if (total + 1 != n) {
      throw std::logic_error("hop partition identity violated at source " +
                             std::to_string(sources[s]) + ": " +
                             std::to_string(total) + " != N - 1 = " +
                             std::to_string(n - 1));
    }
  }
  return out;
}

TrialTally tally_trial(const Realization& real, const HopDegrees& hops) {
  TrialTally t;
  t.node_count = real.nodes.size();
  for (std::size_t s = 0; s < hops.sources.size(); ++s) {
    if (!real.interior_mask[hops.sources[s]]) continue;
    ++t.interior;
    const auto& row = hops.counts[s];
    if (t.hop_sums.size() < row.size()) t.hop_sums.resize(row.size(), 0.0);
    for (std::size_t k = 0; k < row.size(); ++k) {
      t.hop_sums[k] += row[k];
      t.weighted_hops += static_cast<double>(k + 1) * row[k];
      t.reachable += row[k];
    }
    t.unreachable_sum += hops.unreachable[s];
    t.others_sum += static_cast<double>(hops.node_count - 1);
    if (hops.unreachable[s] > 0) t.disconnected = true;
  }
  return t;
}

namespace {

// Standard error of the ratio estimator sum(num)/sum(den) across trials.
double ratio_stderr(std::span<const TrialTally> tallies,
                    const std::function<double(const TrialTally&)>& num,
                    const std::function<double(const TrialTally&)>& den) {
  const std::size_t t = tallies.size();
  if (t < 2) return std::nan("");
  double sn = 0.0;
  double sd = 0.0;
  for (const auto& x : tallies) {
    sn += num(x);
    sd += den(x);
  }
  if (sd == 0.0) return std::nan("");
  const double ratio = sn / sd;
  const double mean_den = sd / static_cast<double>(t);
  double ss = 0.0;
  for (const auto& x : tallies) {
    const double e = num(x) - ratio * den(x);
    ss += e * e;
  }
  return std::sqrt(ss / (static_cast<double>(t) * static_cast<double>(t - 1))) / mean_den;
}

}  // namespace

KHopStats aggregate_stats(const NetworkConfig& config, std::span<const TrialTally> tallies) {
  if (tallies.empty()) throw ConfigError("no trials to aggregate");
  KHopStats s;
  s.trials = static_cast<int>(tallies.size());
  std::size_t max_k = 0;
  double interior = 0.0;
  double others = 0.0;
  double unreachable = 0.0;
  double weighted = 0.0;
  double reachable = 0.0;
  double nodes = 0.0;
  for (const auto& t : tallies) {
    max_k = std::max(max_k, t.hop_sums.size());
    interior += static_cast<double>(t.interior);
    others += t.others_sum;
    unreachable += t.unreachable_sum;
    weighted += t.weighted_hops;
    reachable += t.reachable;
    nodes += static_cast<double>(t.node_count);
    s.disconnected_trials += t.disconnected ? 1 : 0;
  }
  if (interior == 0.0) {
    throw ConfigError("no interior nodes: boundary margin " +
                      std::to_string(config.boundary_margin) +
                      " leaves nothing to measure in a domain of radius " +
                      std::to_string(config.domain_radius));
  }
  s.n_interior = static_cast<std::size_t>(interior);
  s.mean_node_count = nodes / static_cast<double>(tallies.size());
  const auto den = [](const TrialTally& t) { return static_cast<double>(t.interior); };

  s.mu.assign(max_k, 0.0);
  s.mu_stderr.assign(max_k, 0.0);
  s.hop_pmf.assign(max_k, 0.0);
  for (std::size_t k = 0; k < max_k; ++k) {
    double sum = 0.0;
    for (const auto& t : tallies) sum += k < t.hop_sums.size() ? t.hop_sums[k] : 0.0;
    s.mu[k] = sum / interior;
    s.hop_pmf[k] = others > 0.0 ? sum / others : 0.0;
    s.mu_stderr[k] = ratio_stderr(
        tallies,
        [k](const TrialTally& t) { return k < t.hop_sums.size() ? t.hop_sums[k] : 0.0; },
        den);
  }
  s.mu_inf = unreachable / interior;
  s.mu_inf_stderr = ratio_stderr(
      tallies, [](const TrialTally& t) { return t.unreachable_sum; }, den);
  s.unreachable_fraction = others > 0.0 ? unreachable / others : 0.0;
  s.mean_cluster_size = 1.0 + reachable / interior;
  if (reachable > 0.0) {
    s.h_bar = weighted / reachable;
    s.h_bar_stderr = ratio_stderr(
        tallies, [](const TrialTally& t) { return t.weighted_hops; },
        [](const TrialTally& t) { return t.reachable; });
  } else {
    s.h_bar = std::nan("");
    s.h_bar_stderr = std::nan("");
  }
  return s;
}

KHopStats aggregate_stats(const NetworkConfig& config,
                          std::span<const Realization> realizations) {
  std::vector<TrialTally> tallies;
  tallies.reserve(realizations.size());
  for (const auto& r : realizations) tallies.push_back(tally_trial(r, khop_degrees(r)));
  return aggregate_stats(config, tallies);
}

KHopStats simulate(const NetworkConfig& config, const SimulationOptions& options) {
  config.validate();
  const auto trials = static_cast<std::size_t>(config.trials);
  std::vector<TrialTally> tallies(trials);
  auto run_trial = [&](std::size_t t, Realization* keep) {
    Realization real = sample_realization(config, t);
    HopDegrees hops;
    if (options.interior_sources_only) {
      std::vector<std::size_t> src;
      for (std::size_t k = 0; k < real.nodes.size(); ++k) {
        if (real.interior_mask[k]) src.push_back(k);
      }
      hops = khop_degrees(real, src);
    } else {
      hops = khop_degrees(real);
    }
    tallies[t] = tally_trial(real, hops);
    if (keep != nullptr) *keep = std::move(real);
  };

  if (!options.on_realization) {
    parallel_for(trials, [&](std::size_t t) { run_trial(t, nullptr); });
  } else {
    // Blocks keep memory bounded while the callback still sees trial order.
    const std::size_t block = std::max<std::size_t>(1, 2 * worker_count());
    std::vector<Realization> held(block);
    for (std::size_t start = 0; start < trials; start += block) {
      const std::size_t width = std::min(block, trials - start);
      parallel_for(width, [&](std::size_t b) { run_trial(start + b, &held[b]); });
      for (std::size_t b = 0; b < width; ++b) options.on_realization(start + b, held[b]);
    }
  }
  return aggregate_stats(config, tallies);
}

}  // namespace dirnet
