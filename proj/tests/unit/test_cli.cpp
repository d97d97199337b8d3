#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <sys/wait.h>
#include <vector>

#include "doctest.h"
#include "enumeration.hpp"
#include "json.hpp"
#include "link.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(DIRNET_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "dirnet_cli_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run("--help").code == 0);
  CHECK(run("").code == 2);
  CHECK(run("simulate --rho 1").code == 2);  // no seed
  CHECK(run("simulate --seed 1 --format xml").code == 2);
  CHECK(run("simulate --seed 1 --rho -1").code == 2);
  CHECK(run("analytic --eta 1.5").code == 2);
  CHECK(run("simulate --seed 1 --rho 0.2 --domain-radius 3 --margin 0 --out /proc/nope/x.csv").code == 4);
  CHECK(run("analytic --config /nonexistent/config.json").code == 4);
  // Fit window with fewer than three points.
  CHECK(run("hbar --seed 1 --rho 0.5 1 1.5 --trials 1 --domain-radius 4").code == 3);
}

TEST_CASE("config file values apply and flags override them") {
  const fs::path cfg = scratch() / "analytic.json";
  std::ofstream(cfg) << R"({"rho": [2, 3], "eta": 2, "epsilon": 0.4, "format": "json"})";
  const Run a = run("analytic --config " + cfg.string());
  REQUIRE(a.code == 0);
  const auto j = nlohmann::json::parse(a.out);
  CHECK(j["rows"].size() == 2);
  CHECK(j["rows"][1]["mu1"].get<double>() == doctest::Approx(3.0 * M_PI).epsilon(1e-12));
  CHECK(j["metadata"]["config"]["channel"]["epsilon"] == 0.4);

  const Run b = run("analytic --config " + cfg.string() + " --rho 5");
  REQUIRE(b.code == 0);
  CHECK(nlohmann::json::parse(b.out)["rows"].size() == 1);

  std::ofstream(scratch() / "bad.json") << R"({"not_an_option": 1})";
  CHECK(run("analytic --config " + (scratch() / "bad.json").string()).code == 2);
  std::ofstream(scratch() / "broken.json") << "{ nope";
  CHECK(run("analytic --config " + (scratch() / "broken.json").string()).code == 2);
  std::ofstream(scratch() / "seed.json") << R"({"seed": 3, "rho": 0.3, "domain_radius": 3, "margin": 0})";
  CHECK(run("simulate --config " + (scratch() / "seed.json").string()).code == 0);
}

TEST_CASE("output is identical across runs and thread counts") {
  const std::string args = "sweep --seed 5 --rho 0.5 1 --eta 3 --epsilon 0 1 --k-max 2 "
                           "--trials 6 --domain-radius 8 --margin 3 --no-mu2";
  setenv("DIRNET_THREADS", "1", 1);
  const Run one = run(args);
  setenv("DIRNET_THREADS", "4", 1);
  const Run four = run(args);
  const Run again = run(args);
  unsetenv("DIRNET_THREADS");
  REQUIRE(one.code == 0);
  CHECK(one.out == four.out);
  CHECK(four.out == again.out);
}

TEST_CASE("dumped realizations re-check against the reported statistics") {
  const fs::path dump = scratch() / "dump.jsonl";
  const Run r = run("simulate --seed 17 --rho 1.2 --eta 3 --epsilon 1 --domain-radius 5 "
                    "--margin 0 --trials 3 --format json --dump " + dump.string());
  REQUIRE(r.code == 0);
  const auto stats = nlohmann::json::parse(r.out);

  oracle::Link link;
  link.eta = 3.0;
  link.epsilon = 1.0;
  std::ifstream in(dump);
  std::string line;
  std::vector<double> hop_sum(64, 0.0);
  double nodes_total = 0.0;
  int trials = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j["seed"] == 17);
    CHECK(j["trial"] == trials);
    const auto& nodes = j["nodes"];
    const std::size_t n = nodes.size();
    CHECK(n == static_cast<std::size_t>(std::floor(1.2 * M_PI * 25.0)));
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    std::pair<std::size_t, std::size_t> previous{0, 0};
    for (const auto& e : j["edges"]) {
      const std::size_t a = e[0], b = e[1];
      CHECK(a < b);
      CHECK(b < n);
      CHECK(std::pair(a, b) > previous);  // sorted and unique
      previous = {a, b};
      adj[a][b] = adj[b][a] = true;
      // A sampled link needs a positive link probability.
      const oracle::Node na{nodes[a][0], nodes[a][1], nodes[a][2]};
      const oracle::Node nb{nodes[b][0], nodes[b][1], nodes[b][2]};
      CHECK(link(na, nb) > 0.0);
    }
    for (std::size_t s = 0; s < n; ++s) {
      CHECK(std::hypot(nodes[s][0].get<double>(), nodes[s][1].get<double>()) <= 5.0);
      const auto dist = oracle::hop_distances(adj, s);
      std::size_t reached = 0, unreachable = 0;
      for (int d : dist) {
        if (d > 0) {
          hop_sum[d - 1] += 1.0;
          ++reached;
        } else if (d < 0) {
          ++unreachable;
        }
      }
      CHECK(reached + unreachable == n - 1);
    }
    nodes_total += static_cast<double>(n);
    ++trials;
  }
  CHECK(trials == 3);
  for (const auto& row : stats["rows"]) {
    const int k = row["k"];
    CHECK(row["mu"].get<double>() == doctest::Approx(hop_sum[k - 1] / nodes_total).epsilon(1e-12));
  }
}
