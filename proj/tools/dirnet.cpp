// dirnet: analytic and simulated multihop connectivity of random networks
// with randomly oriented directional antennas.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dirnet/error.hpp"
#include "dirnet/experiments.hpp"
#include "json.hpp"
#include "json_config.hpp"

namespace {

using namespace dirnet;
using json = nlohmann::ordered_json;

struct Output {
  std::string config;
  std::string path = "-";
  std::string format = "csv";
};

struct ChannelArgs {
  double eta = 3.0;
  double epsilon = 0.0;
  double beta = 1.0;
  int lobes = 1;
  std::optional<double> hard_disk;

  ChannelModel build() const {
    if (hard_disk) {
      if (!(*hard_disk > 0.0)) throw ConfigError("hard-disk radius must be > 0");
      return ChannelModel::hard_disk(*hard_disk);
    }
    return ChannelModel::rayleigh(eta, GainModel(epsilon, lobes), beta);
  }
};

struct QuadArgs {
  QuadratureSpec spec;
  std::string method = "qmc";

  QuadratureSpec build() const {
    QuadratureSpec q = spec;
    if (method == "qmc") {
      q.method = QuadratureMethod::kQuasiMonteCarlo;
    } else if (method == "tensor") {
      q.method = QuadratureMethod::kTensorGauss;
    } else {
      throw ConfigError("unknown quadrature method '" + method + "' (expected qmc or tensor)");
    }
    return q;
  }
};

void add_common(CLI::App* cmd, Output& out) {
  cmd->add_option("--config", out.config, "JSON file with option values; flags given here win");
  cmd->add_option("-o,--out", out.path, "Output file ('-' for stdout)")->capture_default_str();
  cmd->add_option("--format", out.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

void add_channel(CLI::App* cmd, ChannelArgs& ch, bool hard_disk) {
  cmd->add_option("--eta", ch.eta, "Path-loss exponent (>= 2)")->capture_default_str();
  cmd->add_option("--epsilon", ch.epsilon, "Gain deformation in [0, 1]")->capture_default_str();
  cmd->add_option("--beta", ch.beta, "Path-loss constant")->capture_default_str();
  cmd->add_option("--lobes", ch.lobes, "Lobe count n of 1 + epsilon cos(n theta)")
      ->capture_default_str();
  if (hard_disk) {
    cmd->add_option("--hard-disk", ch.hard_disk, "Use the hard-disk channel with this radius");
  }
}

void add_quadrature(CLI::App* cmd, QuadArgs& q) {
  cmd->add_option("--quadrature-tail", q.spec.tail_tolerance, "Truncation link probability")
      ->capture_default_str();
  cmd->add_option("--quadrature-method", q.method, "Outer rule: qmc or tensor")
      ->capture_default_str();
  cmd->add_option("--quadrature-inner-points", q.spec.inner_points, "Inner points per dimension")
      ->capture_default_str();
  cmd->add_option("--quadrature-outer-points", q.spec.outer_points,
                  "Outer points per dimension (tensor)")
      ->capture_default_str();
  cmd->add_option("--quadrature-qmc-samples", q.spec.qmc_samples, "Outer Sobol points (qmc)")
      ->capture_default_str();
  cmd->add_option("--quadrature-max-evaluations", q.spec.max_evaluations,
                  "Refuse above this many integrand evaluations")
      ->capture_default_str();
}

std::string command_line(int argc, char** argv) {
  std::string s;
  for (int i = 1; i < argc; ++i) {
    if (i > 1) s += ' ';
    s += argv[i];
  }
  return s;
}

void emit(Table table, const Output& out, const std::string& command) {
  table.metadata["command"] = command;
  write_table(table, parse_format(out.format), out.path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multihop connectivity of networks with randomly oriented directional antennas"};
  app.set_version_flag("--version", std::string("dirnet ") + DIRNET_VERSION);
  app.require_subcommand(1);

  // simulate
  Output sim_out;
  ChannelArgs sim_ch;
  NetworkConfig sim_cfg;
  std::optional<double> sim_margin;
  int sim_kmax = 1;
  std::string sim_dump;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo k-hop statistics for one configuration");
  add_common(sim, sim_out);
  add_channel(sim, sim_ch, true);
  sim->add_option("--rho", sim_cfg.density, "Node density")->capture_default_str();
  sim->add_option("--domain-radius", sim_cfg.domain_radius, "Domain radius R")
      ->capture_default_str();
  sim->add_option("--margin", sim_margin, "Boundary margin (default: k-max effective ranges)");
  sim->add_option("--k-max", sim_kmax, "Hop count the default margin protects")
      ->capture_default_str();
  sim->add_option("--seed", sim_cfg.seed, "Master seed (required)");
  sim->add_option("--trials", sim_cfg.trials, "Monte Carlo trials")->capture_default_str();
  sim->add_flag("--poisson", sim_cfg.poisson_count, "Poisson node count instead of floor(rho V)");
  sim->add_option("--dump", sim_dump, "Write each realization as a JSON line to this file");

  // analytic
  Output an_out;
  ChannelArgs an_ch;
  QuadArgs an_q;
  std::vector<double> an_rho{1.0};
  bool an_mu2 = false;
  auto* an = app.add_subcommand("analytic", "Analytic mean one-hop (and two-hop) degree");
  add_common(an, an_out);
  add_channel(an, an_ch, true);
  add_quadrature(an, an_q);
  an->add_option("--rho", an_rho, "Densities")->capture_default_str();
  an->add_flag("--mu2", an_mu2, "Also compute the two-hop degree");

  // sweep
  Output sw_out;
  SweepSpec sw;
  sw.densities = {1, 2, 3, 4};
  sw.etas = {3};
  sw.epsilons = {0, 1};
  QuadArgs sw_q;
  bool sw_no_mu2 = false;
  auto* swc = app.add_subcommand("sweep", "Simulated k-hop degrees over a (rho, eta, epsilon) grid");
  add_common(swc, sw_out);
  add_quadrature(swc, sw_q);
  swc->add_option("--rho", sw.densities, "Density grid")->capture_default_str();
  swc->add_option("--eta", sw.etas, "Path-loss exponent grid")->capture_default_str();
  swc->add_option("--epsilon", sw.epsilons, "Gain deformation grid")->capture_default_str();
  swc->add_option("--beta", sw.beta, "Path-loss constant")->capture_default_str();
  swc->add_option("--domain-radius", sw.domain_radius, "Domain radius R")->capture_default_str();
  swc->add_option("--margin", sw.boundary_margin, "Boundary margin (default: k-max ranges)");
  swc->add_option("--k-max", sw.k_max, "Largest hop count reported")->capture_default_str();
  swc->add_option("--trials", sw.trials, "Trials per grid point")->capture_default_str();
  swc->add_option("--seed", sw.seed, "Master seed (required)");
  swc->add_flag("--no-mu2", sw_no_mu2, "Skip the quadrature two-hop column");

  // phase
  Output ph_out;
  PhaseSpec ph;
  ph.densities = {1, 2, 4, 8, 16};
  ph.etas = {2, 2.5, 3, 3.5, 4};
  QuadArgs ph_q;
  bool ph_no_fallback = false;
  std::optional<std::uint64_t> ph_seed;
  auto* phc = app.add_subcommand("phase", "Isotropic versus anisotropic winner over (rho, eta)");
  add_common(phc, ph_out);
  add_quadrature(phc, ph_q);
  phc->add_option("--rho", ph.densities, "Density grid")->capture_default_str();
  phc->add_option("--eta", ph.etas, "Path-loss exponent grid")->capture_default_str();
  phc->add_option("--epsilon", ph.epsilon, "Anisotropic deformation")->capture_default_str();
  phc->add_option("--k", ph.k, "Hop count, 1 or 2")->capture_default_str();
  phc->add_option("--beta", ph.beta, "Path-loss constant")->capture_default_str();
  phc->add_option("--fallback-trials", ph.fallback_trials, "Trials for undecided cells")
      ->capture_default_str();
  phc->add_flag("--no-fallback", ph_no_fallback, "Never fall back to simulation");
  phc->add_option("--seed", ph_seed, "Master seed (needed when k = 2 may simulate)");

  // hopdist
  Output hd_out;
  HopDistributionSpec hd;
  auto* hdc = app.add_subcommand("hopdist", "Hop distribution, isotropic versus anisotropic");
  add_common(hdc, hd_out);
  hdc->add_option("--rho", hd.density, "Node density")->capture_default_str();
  hdc->add_option("--eta", hd.eta, "Path-loss exponent")->capture_default_str();
  hdc->add_option("--epsilon", hd.epsilon, "Anisotropic deformation")->capture_default_str();
  hdc->add_option("--beta", hd.beta, "Path-loss constant")->capture_default_str();
  hdc->add_option("--domain-radius", hd.domain_radius, "Domain radius R")->capture_default_str();
  hdc->add_option("--margin", hd.boundary_margin, "Boundary margin")->capture_default_str();
  hdc->add_option("--trials", hd.trials, "Monte Carlo trials")->capture_default_str();
  hdc->add_option("--seed", hd.seed, "Master seed (required)");

  // hbar
  Output hb_out;
  HbarSpec hb;
  hb.densities = {0.5, 0.75, 1, 1.25, 1.5, 2, 2.5, 3, 4, 5, 6, 8};
  std::vector<std::string> hb_cases{"0:3", "1:3"};
  auto* hbc = app.add_subcommand("hbar", "Typical hop distance versus density with power-law fits");
  add_common(hbc, hb_out);
  hbc->add_option("--rho", hb.densities, "Ascending density grid")->capture_default_str();
  hbc->add_option("--case", hb_cases, "Cases as epsilon:eta")->capture_default_str();
  hbc->add_option("--beta", hb.beta, "Path-loss constant")->capture_default_str();
  hbc->add_option("--domain-radius", hb.domain_radius, "Domain radius R")->capture_default_str();
  hbc->add_option("--margin", hb.boundary_margin, "Boundary margin")->capture_default_str();
  hbc->add_option("--trials", hb.trials, "Trials per grid point")->capture_default_str();
  hbc->add_option("--window-offset", hb.window_offset, "Points skipped after the maximum")
      ->capture_default_str();
  hbc->add_option("--seed", hb.seed, "Master seed (required)");

  // fit
  Output ft_out;
  KhopFitSpec ft;
  ft.densities = {0.5, 1, 1.5, 2, 2.5, 3, 3.5, 4};
  ChannelArgs ft_ch;
  auto* ftc = app.add_subcommand("fit", "Fit a - b rho^(1/3) + c rho to simulated mu_k");
  add_common(ftc, ft_out);
  add_channel(ftc, ft_ch, true);
  ftc->add_option("--rho", ft.densities, "Density grid (at least 5 points)")->capture_default_str();
  ftc->add_option("--k", ft.k, "Hop count")->capture_default_str();
  ftc->add_option("--domain-radius", ft.domain_radius, "Domain radius R")->capture_default_str();
  ftc->add_option("--margin", ft.boundary_margin, "Boundary margin (default: k ranges)");
  ftc->add_option("--trials", ft.trials, "Trials per grid point")->capture_default_str();
  ftc->add_option("--seed", ft.seed, "Master seed (required)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string command = command_line(argc, argv);
  const std::vector<std::pair<CLI::App*, Output*>> commands{
      {sim, &sim_out}, {an, &an_out}, {swc, &sw_out}, {phc, &ph_out},
      {hdc, &hd_out},  {hbc, &hb_out}, {ftc, &ft_out}};
  try {
    for (const auto& [cmd, out] : commands) {
      if (!*cmd) continue;
      if (!out->config.empty()) cli::apply_config(cmd, cli::read_config(out->config), out->config);
      // Every command that draws random numbers needs an explicit seed.
      if (cmd != an && cmd != phc && cmd->get_option("--seed")->count() == 0) {
        throw ConfigError("--seed is required for " + cmd->get_name());
      }
    }
    if (*sim) {
      sim_cfg.channel = sim_ch.build();
      sim_cfg.boundary_margin =
          resolve_margin(sim_cfg.channel, sim_kmax, sim_cfg.domain_radius, sim_margin);
      sim_cfg.validate();
      SimulationOptions options;
      std::ofstream dump;
      if (!sim_dump.empty()) {
        dump.open(sim_dump, std::ios::binary);
        if (!dump) throw IoError("cannot open " + sim_dump + " for writing");
        options.on_realization = [&](std::uint64_t trial, const Realization& r) {
          json line;
          line["seed"] = sim_cfg.seed;
          line["trial"] = trial;
          json nodes = json::array();
          for (const auto& n : r.nodes) nodes.push_back({n.x, n.y, n.orientation});
          line["nodes"] = std::move(nodes);
          json edges = json::array();
          for (const auto& [i, j] : r.adjacency.edges()) edges.push_back({i, j});
          line["edges"] = std::move(edges);
          dump << line.dump() << '\n';
          if (!dump) throw IoError("failed writing " + sim_dump);
        };
      }
      const KHopStats stats = simulate(sim_cfg, options);
      emit(stats_table(sim_cfg, stats), sim_out, command);
    } else if (*an) {
      emit(analytic_table(an_ch.build(), an_rho, an_mu2, an_q.build()), an_out, command);
    } else if (*swc) {
      sw.analytic_mu2 = !sw_no_mu2;
      sw.quadrature = sw_q.build();
      emit(run_degree_sweep(sw), sw_out, command);
    } else if (*phc) {
      ph.quadrature = ph_q.build();
      ph.simulation_fallback = !ph_no_fallback;
      if (ph.k == 2 && ph.simulation_fallback) {
        if (!ph_seed) throw ConfigError("--seed is required for k = 2 unless --no-fallback is set");
      }
      ph.seed = ph_seed.value_or(0);
      emit(run_phase_diagram(ph), ph_out, command);
    } else if (*hdc) {
      emit(run_hop_distribution(hd).table, hd_out, command);
    } else if (*hbc) {
      hb.cases.clear();
      for (const auto& c : hb_cases) {
        const auto colon = c.find(':');
        if (colon == std::string::npos) throw ConfigError("case '" + c + "' is not epsilon:eta");
        try {
          hb.cases.push_back({std::stod(c.substr(0, colon)), std::stod(c.substr(colon + 1))});
        } catch (const std::exception&) {
          throw ConfigError("case '" + c + "' is not epsilon:eta");
        }
      }
      emit(run_hbar_scaling(hb).table, hb_out, command);
    } else if (*ftc) {
      ft.channel = ft_ch.build();
      emit(run_mu3_fit(ft).table, ft_out, command);
    }
  } catch (const Error& e) {
    std::cerr << "dirnet: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "dirnet: internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
