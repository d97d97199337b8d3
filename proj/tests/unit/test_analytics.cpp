#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "degree_integrals.hpp"
#include "dirnet/analytics.hpp"
#include "dirnet/error.hpp"
#include "dirnet/specfun.hpp"
#include "enumeration.hpp"

using namespace dirnet;

constexpr double kPi = std::numbers::pi;

namespace {

oracle::Link oracle_link(const ChannelModel& ch) {
  oracle::Link l;
  if (ch.is_rayleigh()) {
    l.eta = ch.eta();
    l.beta = ch.beta();
    l.epsilon = ch.gain().epsilon();
    l.lobes = ch.gain().lobes();
  } else {
    l.hard_disk = true;
    l.r0 = ch.r0();
  }
  return l;
}

std::vector<OrientedNode> random_layout(std::mt19937_64& rng, int n, double spread) {
  std::uniform_real_distribution<double> pos(-spread, spread);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
  std::vector<OrientedNode> nodes;
  for (int k = 0; k < n; ++k) nodes.push_back({pos(rng), pos(rng), ang(rng)});
  return nodes;
}

std::vector<oracle::Node> to_oracle(const std::vector<OrientedNode>& nodes) {
  std::vector<oracle::Node> out;
  for (const auto& n : nodes) out.push_back({n.x, n.y, n.orientation});
  return out;
}

QuadratureSpec fast_spec() {
  QuadratureSpec q;
  q.inner_points = 16;
  q.qmc_samples = 2048;
  return q;
}

}  // namespace

TEST_CASE("mu1 closed-form examples") {
  for (double eps : {0.0, 0.3, 1.0}) {
    CHECK(mu1_closed_form(1.0, ChannelModel::rayleigh(2.0, GainModel(eps))).value ==
          doctest::Approx(kPi).epsilon(1e-12));
  }
  CHECK(mu1_closed_form(2.0, ChannelModel::rayleigh(2.0, GainModel(0.0))).value ==
        doctest::Approx(2.0 * kPi).epsilon(1e-12));
  const double expected = specfun::gamma(2.0 / 3.0) * 2.0 * kPi / 3.0;
  CHECK(mu1_closed_form(1.0, ChannelModel::rayleigh(3.0, GainModel(0.0))).value ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(mu1_closed_form(1.0, ChannelModel::rayleigh(3.0, GainModel(0.0))).value ==
        doctest::Approx(2.8359).epsilon(1e-4));
  CHECK(mu1_closed_form(3.0, ChannelModel::hard_disk(0.5)).value ==
        doctest::Approx(3.0 * kPi * 0.25).epsilon(1e-14));
  CHECK_THROWS_AS(mu1_closed_form(0.0, ChannelModel::rayleigh(3.0, GainModel(0.0))), DomainError);
}

TEST_CASE("mu1 isotropic to anisotropic ratio at eta 3") {
  const double iso = mu1_closed_form(3.0, ChannelModel::rayleigh(3.0, GainModel(0.0))).value;
  const double aniso = mu1_closed_form(3.0, ChannelModel::rayleigh(3.0, GainModel(1.0))).value;
  MESSAGE("mu1(eps=0)/mu1(eps=1) - 1 at eta = 3: " << iso / aniso - 1.0);
  CHECK(iso > aniso);
}

TEST_CASE("mu1 closed form matches direct 3-D integration") {
  for (double eta : {2.0, 3.0, 4.0}) {
    for (double eps : {0.0, 0.5, 1.0}) {
      const auto ch = ChannelModel::rayleigh(eta, GainModel(eps));
      for (double rho : {0.5, 2.0}) {
        const DegreeEstimate m = mu1_closed_form(rho, ch);
        const double direct = oracle::mu1_integral(rho, oracle_link(ch));
        CHECK(std::abs(m.value - direct) <= 1e-6 * m.value);
        CHECK(m.error_bound >= 0.0);
      }
    }
  }
}

TEST_CASE("mu1 is linear in rho, decreasing in epsilon for eta > 2, flat for eta = 2") {
  for (double eta : {2.5, 3.0, 4.0}) {
    double previous = INFINITY;
    for (int e = 0; e <= 10; ++e) {
      const auto ch = ChannelModel::rayleigh(eta, GainModel(e / 10.0));
      const double v = mu1_closed_form(1.0, ch).value;
      CHECK(v < previous);
      previous = v;
      CHECK(mu1_closed_form(3.7, ch).value == doctest::Approx(3.7 * v).epsilon(1e-14));
    }
  }
  const double base = mu1_closed_form(1.0, ChannelModel::rayleigh(2.0, GainModel(0.0))).value;
  for (int e = 1; e <= 10; ++e) {
    CHECK(std::abs(mu1_closed_form(1.0, ChannelModel::rayleigh(2.0, GainModel(e / 10.0))).value -
                   base) < 1e-10);
  }
}

TEST_CASE("quadrature spec validation and the evaluation guard") {
  QuadratureSpec q;
  q.tail_tolerance = 1.0;
  CHECK_THROWS_AS(q.validate(), ConfigError);
  q = {};
  q.inner_points = 4;
  CHECK_THROWS_AS(q.validate(), ConfigError);
  q = {};
  q.qmc_samples = 500;
  CHECK_THROWS_AS(q.validate(), ConfigError);
  q = {};
  q.max_evaluations = 1e6;
  CHECK(mu2_evaluation_count(q) > 1e6);
  CHECK_THROWS_AS(mu2_quadrature(1.0, ChannelModel::rayleigh(3.0, GainModel(0.0)), q), ConfigError);
  CHECK_THROWS_AS(mu2_quadrature(1.0, ChannelModel::hard_disk(1.0), fast_spec()), ConfigError);
}

TEST_CASE("mu2 vanishes in the sparse limit and is nonnegative") {
  const auto ch = ChannelModel::rayleigh(3.0, GainModel(0.0));
  const DegreeEstimate tiny = mu2_quadrature(1e-6, ch, fast_spec());
  CHECK(tiny.value >= 0.0);
  CHECK(tiny.value < 1e-9);
  for (double eps : {0.0, 1.0}) {
    const DegreeEstimate m = mu2_quadrature(0.5, ChannelModel::rayleigh(3.0, GainModel(eps)), fast_spec());
    CHECK(m.value > 0.0);
    CHECK(m.error_bound > 0.0);
  }
}

TEST_CASE("mu2 changes by less than its error bound under resolution doubling") {
  for (double eps : {0.0, 1.0}) {
    const auto ch = ChannelModel::rayleigh(3.0, GainModel(eps));
    const DegreeEstimate coarse = mu2_quadrature(1.0, ch, fast_spec());
    QuadratureSpec fine = fast_spec();
    fine.inner_points *= 2;
    fine.qmc_samples *= 2;
    const DegreeEstimate f = mu2_quadrature(1.0, ch, fine);
    CHECK(std::abs(f.value - coarse.value) <= coarse.error_bound);
  }
  QuadratureSpec tensor;
  tensor.method = QuadratureMethod::kTensorGauss;
  tensor.outer_points = 12;
  tensor.inner_points = 12;
  const auto ch = ChannelModel::rayleigh(3.0, GainModel(0.5));
  const DegreeEstimate t = mu2_quadrature(1.0, ch, tensor);
  const DegreeEstimate s = mu2_quadrature(1.0, ch, fast_spec());
  CHECK(std::abs(t.value - s.value) <= t.error_bound + s.error_bound);
}

TEST_CASE("mu2 quadrature agrees with plain Monte Carlo") {
  const auto ch = ChannelModel::rayleigh(3.0, GainModel(0.0));
  const DegreeEstimate q = mu2_quadrature(1.0, ch, {});
  const oracle::McEstimate mc = oracle::mu2_monte_carlo(1.0, oracle_link(ch), 1'000'000, 77);
  MESSAGE("quadrature " << q.value << " +- " << q.error_bound << ", Monte Carlo " << mc.mean
                        << " +- " << mc.stderr_);
  CHECK(std::abs(q.value - mc.mean) <= q.error_bound + 3.0 * mc.stderr_);
}

TEST_CASE("two-hop probability on fixed layouts matches link-state enumeration") {
  const auto disk = ChannelModel::hard_disk(1.0);
  const std::vector<OrientedNode> pair{{0, 0, 0}, {3, 0, 0}};
  CHECK(h2_exact_fixed(pair, disk, 0, 1) == 0.0);
  const std::vector<OrientedNode> relay{{0, 0, 0}, {1.5, 0, 0}, {0.75, 0, 0}};
  CHECK(h2_exact_fixed(relay, disk, 0, 1) == 1.0);
  CHECK_THROWS_AS(h2_exact_fixed(relay, disk, 0, 0), ConfigError);
  CHECK_THROWS_AS(h2_exact_fixed(relay, disk, 0, 3), ConfigError);

  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 3 + trial % 4;
    const auto ch = ChannelModel::rayleigh(2.0 + 2.0 * u(rng), GainModel(u(rng)));
    const auto nodes = random_layout(rng, n, 1.0);
    const auto on = to_oracle(nodes);
    const oracle::Link link = oracle_link(ch);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (std::size_t j = 0; j < nodes.size(); ++j) {
        if (i == j) continue;
        const double exact = oracle::common_neighbour_probability(on, link, i, j);
        CHECK(std::abs(h2_exact_fixed(nodes, ch, i, j) - exact) < 1e-12);
        CHECK(hm_approx_fixed(nodes, ch, i, j, 2) == h2_exact_fixed(nodes, ch, i, j));
        CHECK(hm_approx_fixed(nodes, ch, i, j, 1) == connection_probability(ch, nodes[i], nodes[j]));
      }
    }
  }
}

TEST_CASE("three-hop product form versus enumeration (reported)") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto ch = ChannelModel::rayleigh(3.0, GainModel(u(rng)));
    const auto nodes = random_layout(rng, 5, 1.2);
    const double exact = oracle::relay_at_distance_probability(to_oracle(nodes), oracle_link(ch), 0, 1, 3);
    const double approx = hm_approx_fixed(nodes, ch, 0, 1, 3);
    CHECK(approx >= 0.0);
    CHECK(approx <= 1.0);
    worst = std::max(worst, std::abs(approx - exact));
  }
  MESSAGE("largest |product form - enumeration| at m = 3 over 20 layouts: " << worst);
  CHECK_THROWS_AS(hm_approx_fixed(random_layout(rng, 3, 1.0), ChannelModel::hard_disk(1.0), 0, 1, 0),
                  ConfigError);
}

TEST_CASE("lens area") {
  CHECK(hard_disk_lens_area(1.3, 0.0) == doctest::Approx(kPi * 1.69).epsilon(1e-14));
  CHECK(hard_disk_lens_area(1.0, 2.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(hard_disk_lens_area(1.0, 2.5) == 0.0);
  CHECK(hard_disk_lens_area(1.0, 1.0) ==
        doctest::Approx(2.0 * kPi / 3.0 - std::sqrt(3.0) / 2.0).epsilon(1e-14));
  CHECK(hard_disk_lens_area(1.0, 1.0) == doctest::Approx(1.22837).epsilon(1e-5));
  CHECK_THROWS_AS(hard_disk_lens_area(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(hard_disk_lens_area(1.0, -0.1), DomainError);

  double previous = hard_disk_lens_area(1.0, 0.0);
  for (double r = 1e-3; r <= 2.0; r += 1e-3) {
    const double a = hard_disk_lens_area(1.0, r);
    CHECK(a < previous);
    CHECK(previous - a < 2.1e-3);  // Lipschitz constant 2 r0
    previous = a;
  }
  // Near tangency A ~ (4 sqrt(r0) / 3) (2 r0 - r)^{3/2}.
  for (double r0 : {0.5, 1.0, 2.0}) {
    double last_err = INFINITY;
    for (double gap : {1e-1, 1e-2, 1e-3, 1e-4}) {
      const double r = 2.0 * r0 - gap * r0;
      const double lead = 4.0 * std::sqrt(r0) / 3.0 * std::pow(2.0 * r0 - r, 1.5);
      const double err = std::abs(hard_disk_lens_area(r0, r) / lead - 1.0);
      CHECK(err < last_err);
      last_err = err;
    }
    CHECK(last_err < 1e-3);
  }
}

TEST_CASE("hard-disk two-hop degree") {
  const DegreeEstimate num = mu2_hard_disk(10.0, 1.0, HardDiskMode::kNumericIntegral);
  CHECK(std::abs(num.value - oracle::mu2_hard_disk_riemann(10.0, 1.0)) < 1e-6);
  CHECK(num.error_bound < 1e-8);

  double last = INFINITY;
  for (double rho : {10.0, 100.0, 1000.0, 10000.0}) {
    const double ratio = mu2_hard_disk(rho, 1.0, HardDiskMode::kNumericIntegral).value / (3.0 * rho * kPi);
    CHECK(std::abs(ratio - 1.0) < last);
    last = std::abs(ratio - 1.0);
  }
  CHECK(last < 0.01);

  const DegreeEstimate a2 = mu2_hard_disk(100.0, 1.0, HardDiskMode::kAsymptotic2D);
  const DegreeEstimate n2 = mu2_hard_disk(100.0, 1.0, HardDiskMode::kNumericIntegral);
  CHECK(std::isinf(a2.error_bound));
  CHECK(std::abs(a2.value - n2.value) < 0.01 * n2.value);
  const double expected3 = 28.0 / 3.0 * kPi * 50.0 - 8.0 * kPi * std::sqrt(100.0);
  CHECK(mu2_hard_disk(50.0, 1.0, HardDiskMode::kAsymptotic3D).value == doctest::Approx(expected3));
  CHECK_THROWS_AS(mu2_hard_disk(1.0, -1.0, HardDiskMode::kNumericIntegral), DomainError);
}
