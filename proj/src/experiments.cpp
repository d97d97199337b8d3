#include "dirnet/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dirnet/error.hpp"

#ifndef DIRNET_VERSION
#define DIRNET_VERSION "unknown"
#endif

namespace dirnet {

namespace {

using json = nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Link probability below which a pair counts as out of range for margins.
constexpr double kMarginTolerance = 1e-6;

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void require_grid(const std::vector<double>& grid, const char* name) {
  if (grid.empty()) throw ConfigError(std::string(name) + " grid is empty");
  for (double v : grid) {
    if (!std::isfinite(v)) throw ConfigError(std::string(name) + " grid has a non-finite value");
  }
}

void require_positive_grid(const std::vector<double>& grid, const char* name) {
  require_grid(grid, name);
  for (double v : grid) {
    if (!(v > 0.0)) throw ConfigError(std::string(name) + " values must be > 0");
  }
}

void require_trials(int trials) {
  if (trials < 1) throw ConfigError("trials must be >= 1");
}

KHopStats run_interior(const NetworkConfig& config) {
  SimulationOptions options;
  options.interior_sources_only = true;
  return simulate(config, options);
}

}  // namespace

json provenance(const std::string& experiment, json config) {
  json meta;
  meta["tool"] = "dirnet";
  meta["version"] = DIRNET_VERSION;
  meta["experiment"] = experiment;
  meta["config"] = std::move(config);
  return meta;
}

json to_json(const ChannelModel& channel) {
  json j;
  if (channel.is_rayleigh()) {
    j["kind"] = "rayleigh";
    j["eta"] = channel.eta();
    j["beta"] = channel.beta();
    j["epsilon"] = channel.gain().epsilon();
    j["lobes"] = channel.gain().lobes();
  } else {
    j["kind"] = "hard_disk";
    j["r0"] = channel.r0();
  }
  return j;
}

json to_json(const NetworkConfig& config) {
  json j;
  j["density"] = config.density;
  j["domain_radius"] = config.domain_radius;
  j["boundary_margin"] = config.boundary_margin;
  j["channel"] = to_json(config.channel);
  j["seed"] = config.seed;
  j["trials"] = config.trials;
  j["poisson_count"] = config.poisson_count;
  return j;
}

json to_json(const QuadratureSpec& spec) {
  json j;
  j["tail_tolerance"] = spec.tail_tolerance;
  j["method"] = spec.method == QuadratureMethod::kQuasiMonteCarlo ? "qmc" : "tensor";
  j["outer_points"] = spec.outer_points;
  j["inner_points"] = spec.inner_points;
  j["qmc_samples"] = spec.qmc_samples;
  j["max_evaluations"] = spec.max_evaluations;
  return j;
}

json to_json(const FitResult& fit) {
  json j;
  j["model"] = to_string(fit.model);
  json coeffs = json::object();
  json errors = json::object();
  for (std::size_t i = 0; i < fit.names.size(); ++i) {
    coeffs[fit.names[i]] = finite_or_null(fit.coefficients[i]);
    errors[fit.names[i]] = finite_or_null(fit.standard_errors[i]);
  }
  j["coefficients"] = std::move(coeffs);
  j["standard_errors"] = std::move(errors);
  j["residual_norm"] = finite_or_null(fit.residual_norm);
  j["window"] = {fit.window_lo, fit.window_hi};
  j["points"] = fit.points;
  j["constraints_satisfied"] = fit.constraints_satisfied;
  if (!fit.diagnostics.empty()) j["diagnostics"] = fit.diagnostics;
  return j;
}

Table stats_table(const NetworkConfig& config, const KHopStats& stats) {
  Table t;
  json summary;
  summary["mean_node_count"] = stats.mean_node_count;
  summary["n_interior"] = stats.n_interior;
  summary["mu_inf"] = finite_or_null(stats.mu_inf);
  summary["mu_inf_stderr"] = finite_or_null(stats.mu_inf_stderr);
  summary["unreachable_fraction"] = finite_or_null(stats.unreachable_fraction);
  summary["h_bar"] = finite_or_null(stats.h_bar);
  summary["h_bar_stderr"] = finite_or_null(stats.h_bar_stderr);
  summary["mean_cluster_size"] = stats.mean_cluster_size;
  summary["disconnected_trials"] = stats.disconnected_trials;
  t.metadata = provenance("simulate", to_json(config));
  t.metadata["summary"] = std::move(summary);
  t.columns = {"k", "mu", "mu_stderr", "hop_pmf"};
  for (std::size_t k = 1; k <= stats.mu.size(); ++k) {
    t.add_row({static_cast<std::int64_t>(k), stats.mu_at(k), stats.stderr_at(k),
               stats.hop_pmf[k - 1]});
  }
  return t;
}

Table analytic_table(const ChannelModel& channel, const std::vector<double>& densities,
                     bool with_mu2, const QuadratureSpec& quadrature) {
  require_positive_grid(densities, "density");
  json config;
  config["channel"] = to_json(channel);
  config["densities"] = densities;
  config["mu2"] = with_mu2;
  if (with_mu2 && channel.is_rayleigh()) config["quadrature"] = to_json(quadrature);

  Table t;
  t.metadata = provenance("analytic", std::move(config));
  t.columns = {"rho", "mu1", "mu1_error", "mu2", "mu2_error"};
  for (double rho : densities) {
    const DegreeEstimate m1 = mu1_closed_form(rho, channel);
    DegreeEstimate m2{kNaN, kNaN};
    if (with_mu2) {
      m2 = channel.is_rayleigh()
               ? mu2_quadrature(rho, channel, quadrature)
               : mu2_hard_disk(rho, channel.r0(), HardDiskMode::kNumericIntegral);
    }
    t.add_row({rho, m1.value, m1.error_bound, m2.value, m2.error_bound});
  }
  return t;
}

double resolve_margin(const ChannelModel& channel, int k_max, double domain_radius,
                      std::optional<double> explicit_margin) {
  if (explicit_margin) {
    if (!(*explicit_margin >= 0.0) || !(*explicit_margin < domain_radius)) {
      throw ConfigError("boundary margin must lie in [0, domain radius)");
    }
    return *explicit_margin;
  }
  const double margin = default_boundary_margin(channel, k_max);
  if (!(margin < domain_radius)) {
    std::ostringstream os;
    os << "default boundary margin " << margin << " (k_max = " << k_max
       << " times the range where links fall below " << kMarginTolerance
       << ") is not below the domain radius " << domain_radius
       << "; enlarge the domain or set the margin explicitly";
    throw ConfigError(os.str());
  }
  return margin;
}

void SweepSpec::validate() const {
  require_positive_grid(densities, "density");
  require_grid(etas, "eta");
  require_grid(epsilons, "epsilon");
  require_trials(trials);
  if (k_max < 1) throw ConfigError("k_max must be >= 1");
  if (!(domain_radius > 0.0)) throw ConfigError("domain radius must be > 0");
  if (!(beta > 0.0)) throw ConfigError("beta must be > 0");
  quadrature.validate();
}

Table run_degree_sweep(const SweepSpec& spec) {
  spec.validate();
  // Channels and margins first so a bad grid fails before any simulation.
  struct Point {
    double rho, eta, epsilon, margin;
    ChannelModel channel;
  };
  std::vector<Point> points;
  for (double rho : spec.densities) {
    for (double eta : spec.etas) {
      for (double eps : spec.epsilons) {
        const ChannelModel ch = ChannelModel::rayleigh(eta, GainModel(eps), spec.beta);
        const double margin =
            resolve_margin(ch, spec.k_max, spec.domain_radius, spec.boundary_margin);
        points.push_back({rho, eta, eps, margin, ch});
      }
    }
  }
  const bool mu2_allowed = spec.analytic_mu2 && spec.k_max >= 2 &&
                           mu2_evaluation_count(spec.quadrature) <= spec.quadrature.max_evaluations;

  json config;
  config["densities"] = spec.densities;
  config["etas"] = spec.etas;
  config["epsilons"] = spec.epsilons;
  config["beta"] = spec.beta;
  config["domain_radius"] = spec.domain_radius;
  config["boundary_margin"] = spec.boundary_margin ? json(*spec.boundary_margin) : json("auto");
  config["k_max"] = spec.k_max;
  config["trials"] = spec.trials;
  config["seed"] = spec.seed;
  config["analytic_mu2"] = mu2_allowed;
  if (mu2_allowed) config["quadrature"] = to_json(spec.quadrature);

  Table t;
  t.metadata = provenance("sweep", std::move(config));
  t.columns = {"rho",         "eta",  "epsilon",     "k",
               "mu",          "mu_stderr", "mu_analytic", "mu_analytic_error",
               "boundary_margin", "n_interior", "trials"};
  for (const Point& p : points) {
    NetworkConfig nc;
    nc.density = p.rho;
    nc.domain_radius = spec.domain_radius;
    nc.channel = p.channel;
    nc.boundary_margin = p.margin;
    nc.seed = spec.seed;
    nc.trials = spec.trials;
    const KHopStats stats = run_interior(nc);
    for (int k = 1; k <= spec.k_max; ++k) {
      DegreeEstimate analytic{kNaN, kNaN};
      if (k == 1) analytic = mu1_closed_form(p.rho, p.channel);
      if (k == 2 && mu2_allowed) analytic = mu2_quadrature(p.rho, p.channel, spec.quadrature);
      const auto uk = static_cast<std::size_t>(k);
      t.add_row({p.rho, p.eta, p.epsilon, static_cast<std::int64_t>(k), stats.mu_at(uk),
                 stats.stderr_at(uk), analytic.value, analytic.error_bound, p.margin,
                 static_cast<std::int64_t>(stats.n_interior),
                 static_cast<std::int64_t>(stats.trials)});
    }
  }
  return t;
}

void PhaseSpec::validate() const {
  require_positive_grid(densities, "density");
  require_grid(etas, "eta");
  if (k != 1 && k != 2) throw ConfigError("phase diagram supports k = 1 or 2");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must lie in (0, 1]");
  if (!(beta > 0.0)) throw ConfigError("beta must be > 0");
  require_trials(fallback_trials);
  quadrature.validate();
}

Table run_phase_diagram(const PhaseSpec& spec) {
  spec.validate();
  json config;
  config["densities"] = spec.densities;
  config["etas"] = spec.etas;
  config["epsilon"] = spec.epsilon;
  config["k"] = spec.k;
  config["beta"] = spec.beta;
  if (spec.k == 2) {
    config["quadrature"] = to_json(spec.quadrature);
    config["simulation_fallback"] = spec.simulation_fallback;
    config["fallback_trials"] = spec.fallback_trials;
    config["seed"] = spec.seed;
  }

  Table t;
  t.metadata = provenance("phase", std::move(config));
  t.columns = {"rho", "eta", "k", "mu_isotropic", "mu_anisotropic",
               "margin", "margin_error", "winner", "source"};
  for (double rho : spec.densities) {
    for (double eta : spec.etas) {
      const ChannelModel iso = ChannelModel::rayleigh(eta, GainModel(0.0), spec.beta);
      const ChannelModel aniso = ChannelModel::rayleigh(eta, GainModel(spec.epsilon), spec.beta);
      DegreeEstimate a, b;
      std::string source;
      if (spec.k == 1) {
        a = mu1_closed_form(rho, iso);
        b = mu1_closed_form(rho, aniso);
        source = "analytic";
      } else {
        a = mu2_quadrature(rho, iso, spec.quadrature);
        b = mu2_quadrature(rho, aniso, spec.quadrature);
        source = "quadrature";
      }
      double margin = b.value - a.value;
      double error = a.error_bound + b.error_bound;
      if (spec.k == 2 && std::abs(margin) <= error && spec.simulation_fallback) {
        // Both patterns share one domain sized for the wider one.
        const double delta = std::max(default_boundary_margin(iso, 2),
                                      default_boundary_margin(aniso, 2));
        NetworkConfig nc;
        nc.density = rho;
        nc.domain_radius = std::max(10.0, 2.0 * delta);
        nc.boundary_margin = delta;
        nc.seed = spec.seed;
        nc.trials = spec.fallback_trials;
        nc.channel = iso;
        const KHopStats si = run_interior(nc);
        nc.channel = aniso;
        const KHopStats sa = run_interior(nc);
        a = {si.mu_at(2), si.stderr_at(2)};
        b = {sa.mu_at(2), sa.stderr_at(2)};
        margin = b.value - a.value;
        error = 3.0 * std::hypot(a.error_bound, b.error_bound);
        source = "simulation";
      }
      std::string winner = "tie";
      if (std::abs(margin) > error) winner = margin > 0.0 ? "anisotropic" : "isotropic";
      t.add_row({rho, eta, static_cast<std::int64_t>(spec.k), a.value, b.value, margin, error,
                 winner, source});
    }
  }
  return t;
}

void HopDistributionSpec::validate() const {
  if (!(density > 0.0)) throw ConfigError("density must be > 0");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must lie in [0, 1]");
  require_trials(trials);
}

HopDistributionResult run_hop_distribution(const HopDistributionSpec& spec) {
  spec.validate();
  NetworkConfig nc;
  nc.density = spec.density;
  nc.domain_radius = spec.domain_radius;
  nc.boundary_margin = spec.boundary_margin;
  nc.seed = spec.seed;
  nc.trials = spec.trials;
  nc.channel = ChannelModel::rayleigh(spec.eta, GainModel(0.0), spec.beta);
  nc.validate();

  HopDistributionResult out;
  out.isotropic = run_interior(nc);
  nc.channel = ChannelModel::rayleigh(spec.eta, GainModel(spec.epsilon), spec.beta);
  out.anisotropic = run_interior(nc);
  const KHopStats& si = out.isotropic;
  const KHopStats& sa = out.anisotropic;

  const std::size_t kmax = std::max(si.hop_pmf.size(), sa.hop_pmf.size());
  const auto pmf = [](const KHopStats& s, std::size_t k) {
    return k >= 1 && k <= s.hop_pmf.size() ? s.hop_pmf[k - 1] : 0.0;
  };
  for (std::size_t k = 1; k <= std::min<std::size_t>(3, kmax); ++k) {
    out.cdf3_isotropic += pmf(si, k);
    out.cdf3_anisotropic += pmf(sa, k);
  }

  // Compare the hop-count distributions conditioned on k >= 2.
  double tail_i = 0.0, tail_a = 0.0;
  for (std::size_t k = 2; k <= kmax; ++k) {
    tail_i += pmf(si, k);
    tail_a += pmf(sa, k);
  }
  bool dominated = tail_i > 0.0 && tail_a > 0.0;
  bool strict = false;
  double cdf_i = 0.0, cdf_a = 0.0;
  for (std::size_t k = 2; dominated && k <= kmax; ++k) {
    cdf_i += pmf(si, k) / tail_i;
    cdf_a += pmf(sa, k) / tail_a;
    if (cdf_a < cdf_i - 1e-12) dominated = false;
    if (cdf_a > cdf_i + 1e-12) strict = true;
  }
  out.left_skewed = dominated && strict;

  json config;
  config["density"] = spec.density;
  config["eta"] = spec.eta;
  config["beta"] = spec.beta;
  config["epsilon"] = spec.epsilon;
  config["domain_radius"] = spec.domain_radius;
  config["boundary_margin"] = spec.boundary_margin;
  config["trials"] = spec.trials;
  config["seed"] = spec.seed;
  const auto summary = [](const KHopStats& s) {
    json j;
    j["h_bar"] = finite_or_null(s.h_bar);
    j["h_bar_stderr"] = finite_or_null(s.h_bar_stderr);
    j["mu_inf"] = finite_or_null(s.mu_inf);
    j["unreachable_fraction"] = finite_or_null(s.unreachable_fraction);
    j["disconnected_trials"] = s.disconnected_trials;
    j["mean_node_count"] = s.mean_node_count;
    return j;
  };
  out.table.metadata = provenance("hopdist", std::move(config));
  out.table.metadata["isotropic"] = summary(si);
  out.table.metadata["anisotropic"] = summary(sa);
  out.table.metadata["cdf3_isotropic"] = out.cdf3_isotropic;
  out.table.metadata["cdf3_anisotropic"] = out.cdf3_anisotropic;
  out.table.metadata["left_skewed"] = out.left_skewed;
  out.table.columns = {"k", "pmf_isotropic", "pmf_anisotropic", "mu_isotropic",
                       "mu_anisotropic", "mu_stderr_isotropic", "mu_stderr_anisotropic"};
  for (std::size_t k = 1; k <= kmax; ++k) {
    out.table.add_row({static_cast<std::int64_t>(k), pmf(si, k), pmf(sa, k), si.mu_at(k),
                       sa.mu_at(k), si.stderr_at(k), sa.stderr_at(k)});
  }
  return out;
}

void HbarSpec::validate() const {
  require_positive_grid(densities, "density");
  if (!std::is_sorted(densities.begin(), densities.end())) {
    throw ConfigError("density grid must be ascending");
  }
  if (cases.empty()) throw ConfigError("no (epsilon, eta) cases given");
  if (window_offset < 0) throw ConfigError("window offset must be >= 0");
  require_trials(trials);
}

std::size_t peak_index(const std::vector<double>& values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

FitResult fit_post_peak(const std::vector<double>& x, const std::vector<double>& y,
                        int window_offset) {
  if (x.size() != y.size() || x.empty()) {
    throw ConfigError("fit needs matching, nonempty x and y");
  }
  const std::size_t peak = peak_index(y);
  const std::size_t start = peak + static_cast<std::size_t>(window_offset);
  const std::size_t n = start < x.size() ? x.size() - start : 0;
  if (n < 3) {
    std::ostringstream os;
    os << "power-law fit refused: maximum at x = " << x[peak] << " (index " << peak
       << "), window starts " << window_offset << " points later and leaves " << n
       << " of the required 3 points; extend the grid past the maximum";
    throw NumericalError(os.str());
  }
  return fit_power_law(std::span(x).subspan(start), std::span(y).subspan(start));
}

HbarResult run_hbar_scaling(const HbarSpec& spec) {
  spec.validate();
  HbarResult out;
  json config;
  config["densities"] = spec.densities;
  json cases = json::array();
  for (const auto& c : spec.cases) cases.push_back({{"epsilon", c.epsilon}, {"eta", c.eta}});
  config["cases"] = std::move(cases);
  config["beta"] = spec.beta;
  config["domain_radius"] = spec.domain_radius;
  config["boundary_margin"] = spec.boundary_margin;
  config["trials"] = spec.trials;
  config["seed"] = spec.seed;
  config["window_offset"] = spec.window_offset;

  for (const auto& c : spec.cases) {
    HbarCaseResult cr;
    cr.params = c;
    NetworkConfig nc;
    nc.domain_radius = spec.domain_radius;
    nc.boundary_margin = spec.boundary_margin;
    nc.seed = spec.seed;
    nc.trials = spec.trials;
    nc.channel = ChannelModel::rayleigh(c.eta, GainModel(c.epsilon), spec.beta);
    for (double rho : spec.densities) {
      nc.density = rho;
      cr.stats.push_back(run_interior(nc));
    }
    out.cases.push_back(std::move(cr));
  }

  for (auto& cr : out.cases) {
    std::vector<double> h;
    for (const auto& s : cr.stats) h.push_back(s.h_bar);
    for (double v : h) {
      if (!std::isfinite(v)) {
        throw NumericalError("typical hop distance undefined (no reachable pairs) at some density");
      }
    }
    cr.peak_index = peak_index(h);
    cr.fit = fit_post_peak(spec.densities, h, spec.window_offset);
  }

  out.table.metadata = provenance("hbar", std::move(config));
  json fit_json = json::array();
  for (const auto& cr : out.cases) {
    json j;
    j["epsilon"] = cr.params.epsilon;
    j["eta"] = cr.params.eta;
    j["peak_rho"] = spec.densities[cr.peak_index];
    j["fit"] = to_json(cr.fit);
    fit_json.push_back(std::move(j));
  }
  out.table.metadata["fits"] = std::move(fit_json);
  out.table.columns = {"epsilon", "eta", "rho", "h_bar", "h_bar_stderr", "mu_inf",
                       "unreachable_fraction", "disconnected_trials", "in_fit_window"};
  for (const auto& cr : out.cases) {
    const std::size_t start = cr.peak_index + static_cast<std::size_t>(spec.window_offset);
    for (std::size_t i = 0; i < spec.densities.size(); ++i) {
      const KHopStats& s = cr.stats[i];
      out.table.add_row({cr.params.epsilon, cr.params.eta, spec.densities[i], s.h_bar,
                         s.h_bar_stderr, s.mu_inf, s.unreachable_fraction,
                         static_cast<std::int64_t>(s.disconnected_trials),
                         static_cast<std::int64_t>(i >= start ? 1 : 0)});
    }
  }
  return out;
}

void KhopFitSpec::validate() const {
  require_positive_grid(densities, "density");
  if (densities.size() < 5) throw ConfigError("the fit needs at least 5 densities");
  if (k < 1) throw ConfigError("k must be >= 1");
  require_trials(trials);
}

KhopFitResult run_mu3_fit(const KhopFitSpec& spec) {
  spec.validate();
  const double margin =
      resolve_margin(spec.channel, spec.k, spec.domain_radius, spec.boundary_margin);
  KhopFitResult out;
  NetworkConfig nc;
  nc.domain_radius = spec.domain_radius;
  nc.boundary_margin = margin;
  nc.channel = spec.channel;
  nc.seed = spec.seed;
  nc.trials = spec.trials;
  std::vector<double> mu;
  for (double rho : spec.densities) {
    nc.density = rho;
    out.stats.push_back(run_interior(nc));
    mu.push_back(out.stats.back().mu_at(static_cast<std::size_t>(spec.k)));
  }
  out.fit = fit_cube_root_law(spec.densities, mu);
  out.reference_area = mu1_closed_form(1.0, spec.channel).value;
  out.leading_ratio = out.fit.coefficient("c") / out.reference_area;

  json config;
  config["densities"] = spec.densities;
  config["channel"] = to_json(spec.channel);
  config["k"] = spec.k;
  config["domain_radius"] = spec.domain_radius;
  config["boundary_margin"] = margin;
  config["trials"] = spec.trials;
  config["seed"] = spec.seed;
  out.table.metadata = provenance("fit", std::move(config));
  out.table.metadata["fit"] = to_json(out.fit);
  out.table.metadata["reference_area"] = out.reference_area;
  out.table.metadata["leading_ratio"] = out.leading_ratio;
  out.table.metadata["conjectured_leading_ratio"] = 2 * spec.k - 1;

  const double a = out.fit.coefficient("a");
  const double b = out.fit.coefficient("b");
  const double c = out.fit.coefficient("c");
  out.table.columns = {"rho", "mu", "mu_stderr", "fitted", "residual"};
  for (std::size_t i = 0; i < spec.densities.size(); ++i) {
    const double rho = spec.densities[i];
    const double fitted = a - b * std::cbrt(rho) + c * rho;
    out.table.add_row({rho, mu[i], out.stats[i].stderr_at(static_cast<std::size_t>(spec.k)),
                       fitted, mu[i] - fitted});
  }
  return out;
}

}  // namespace dirnet
