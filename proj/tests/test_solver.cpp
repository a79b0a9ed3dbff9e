#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "illusory/fixtures.hpp"
#include "illusory/shape.hpp"
#include "illusory/solver.hpp"
#include "support.hpp"

using namespace illusory;

namespace {

SolverConfig<double> config_for(const ConfigurationMask& mask, double eps_cells = 3.0) {
  const auto canyon = build_canyon(mask, CanyonParams<double>{});
  return SolverConfig<double>{ModelParams<double>(canyon, mask, eps_cells * mask.geometry().h(), 1.0)};
}

const RunResult<double>& small_disk_run() {
  static const RunResult<double> result = [] {
    const auto fx = fixtures::kanizsa_disk(48);
    return run(config_for(fx.inducers));
  }();
  return result;
}

}  // namespace

TEST_CASE("null hypothesis") {
  const auto fx = fixtures::kanizsa_triangle(32);
  const auto z = null_hypothesis<double>(fx.inducers);
  CHECK(has_zero_boundary(z));
  for (int y = 1; y < 31; ++y) {
    for (int x = 1; x < 31; ++x) CHECK(z(x, y) == (fx.inducers(x, y) ? 0.0 : 1.0));
  }
}

TEST_CASE("presmoothing") {
  std::mt19937_64 rng(1);
  const GridGeometry g(15, 12);
  const auto z0 = testing::random_field(g, rng);
  CHECK(presmooth(z0, 0) == z0);
  CHECK((presmooth(PhaseField<double>(g), 7).values() == 0.0).all());
  for (int trial = 0; trial < 20; ++trial) {
    const auto z = testing::random_field(g, rng, 0, 1, trial % 2 == 0);
    const auto s = presmooth(z, 1 + trial);
    CHECK(s.values().minCoeff() >= 0.0);
    CHECK(s.values().maxCoeff() <= 1.0);
    CHECK(has_zero_boundary(s));
  }
  CHECK_THROWS_AS(presmooth(z0, -1), Error);
}

TEST_CASE("a step from zero stays at zero") {
  const auto fx = fixtures::kanizsa_triangle(24);
  const auto cfg = config_for(fx.inducers);
  const auto [z, stats] = step(PhaseField<double>(fx.inducers.geometry()), cfg);
  CHECK((z.values() == 0.0).all());
  CHECK(stats.cg_iters == 0);
}

TEST_CASE("steps preserve the unit range and minimise the surrogate") {
  std::mt19937_64 rng(2);
  const GridGeometry g(16, 16);
  for (int trial = 0; trial < 10; ++trial) {
    SolverConfig<double> cfg{testing::random_model(g, rng, 1.0 + trial % 3)};
    const auto zn = testing::random_field(g, rng);
    const auto [z, stats] = step(zn, cfg);
    CHECK(stats.pre_clamp_min >= -10 * cfg.cg.rel_tol);
    CHECK(stats.pre_clamp_max <= 1 + 10 * cfg.cg.rel_tol);
    CHECK(z.values().minCoeff() >= 0.0);
    CHECK(z.values().maxCoeff() <= 1.0);
    CHECK(has_zero_boundary(z));

    const double best = surrogate_energy(z, zn, cfg.model);
    std::uniform_real_distribution<double> t(-0.1, 0.1);
    for (int k = 0; k < 20; ++k) {
      const auto u = testing::random_field(g, rng, -1, 1);
      const PhaseField<double> w(g, z.values() + t(rng) * u.values());
      CHECK(best <= surrogate_energy(w, zn, cfg.model) + 1e-12 * (1 + best));
    }
  }
}

TEST_CASE("energy decreases by at least the monotonicity bound") {
  std::mt19937_64 rng(3);
  const GridGeometry g(14, 14);
  for (int trial = 0; trial < 10; ++trial) {
    SolverConfig<double> cfg{testing::random_model(g, rng)};
    auto z = testing::random_field(g, rng);
    for (int n = 0; n < 5; ++n) {
      auto [next, stats] = step(z, cfg);
      const double rho = total_energy(z, cfg.model) - total_energy(next, cfg.model);
      const double bound = energy_decrease_bound(z, next, cfg.model);
      CHECK(bound >= 0.0);
      CHECK(rho >= bound - 1e-9 * (1 + total_energy(z, cfg.model)));
      z = std::move(next);
    }
  }
}

TEST_CASE("starting from zero terminates in one step") {
  const auto fx = fixtures::kanizsa_triangle(32);
  const auto cfg = config_for(fx.inducers);
  const auto r = run_from(PhaseField<double>(fx.inducers.geometry()), cfg);
  CHECK(r.report.status == RunStatus::kConverged);
  REQUIRE(r.report.steps.size() == 1);
  CHECK(r.report.final_energy() == 0.0);
  CHECK(extract_shape(r.field).empty());
}

TEST_CASE("small disk run satisfies the report invariants") {
  const auto& r = small_disk_run();
  const auto fx = fixtures::kanizsa_disk(48);
  const auto cfg = config_for(fx.inducers);
  REQUIRE(r.report.status == RunStatus::kConverged);
  const auto& steps = r.report.steps;
  REQUIRE(!steps.empty());
  const double slack = 1e-9 * (1 + steps.front().energy);
  double prev = r.report.initial_energy;
  for (const auto& s : steps) {
    CHECK(s.rho >= -slack);
    CHECK(s.energy <= prev + slack);
    CHECK(s.rho >= s.decrease_bound - 1e-8 * (1 + steps.front().energy));
    CHECK(s.pre_clamp_min >= -1e-9);
    CHECK(s.pre_clamp_max <= 1 + 1e-9);
    prev = s.energy;
  }
  CHECK(steps.back().rms_update <= cfg.delta);
  CHECK(euler_lagrange_residual(r.field, cfg.model) <= 100 * cfg.delta);
  CHECK(has_zero_boundary(r.field));
  const auto sums = r.report.sqrt_rho_partial_sums();
  CHECK(sums.size() == steps.size());
  CHECK(std::is_sorted(sums.begin(), sums.end()));

  const auto shape = extract_shape(r.field);
  CHECK(!shape.empty());
  CHECK(connected_components(shape).count == 1);
}

TEST_CASE("runs are bit-identical and snapshots follow the cadence") {
  const auto fx = fixtures::kanizsa_disk(48);
  auto cfg = config_for(fx.inducers);
  cfg.snapshot_every = 25;
  std::vector<long> seen;
  const SnapshotSink<double> sink = [&](long n, const PhaseField<double>& z) {
    CHECK(has_zero_boundary(z));
    seen.push_back(n);
  };
  const auto r = run(cfg, sink);
  const auto& ref = small_disk_run();
  CHECK(r.field == ref.field);
  REQUIRE(r.report.steps.size() == ref.report.steps.size());
  for (std::size_t k = 0; k < ref.report.steps.size(); ++k) {
    CHECK(r.report.steps[k].energy == ref.report.steps[k].energy);
    CHECK(r.report.steps[k].rms_update == ref.report.steps[k].rms_update);
    CHECK(r.report.steps[k].cg_iters == ref.report.steps[k].cg_iters);
  }
  CHECK(seen.size() == r.report.steps.size() / 25);
  for (std::size_t k = 0; k < seen.size(); ++k) CHECK(seen[k] == 25L * static_cast<long>(k + 1));
}

TEST_CASE("iteration cap is reported, not thrown") {
  const auto fx = fixtures::kanizsa_triangle(32);
  auto cfg = config_for(fx.inducers);
  cfg.max_outer = 3;
  const auto r = run(cfg);
  CHECK(r.report.status == RunStatus::kMaxOuterReached);
  CHECK(r.report.steps.size() == 3);
  CHECK(std::string(to_string(r.report.status)) == "max_outer_reached");
  cfg.max_outer = 0;
  CHECK_THROWS_AS(run(cfg), Error);
}

TEST_CASE("presmoothed start still converges") {
  const auto fx = fixtures::kanizsa_triangle(32);
  auto cfg = config_for(fx.inducers);
  cfg.presmooth_steps = 4;
  const auto r = run(cfg);
  CHECK(r.report.status == RunStatus::kConverged);
  CHECK(r.report.initial_energy != total_energy(null_hypothesis<double>(fx.inducers), cfg.model));
}
