#include "doctest.h"

#include <cmath>

#include "cpm/baselines.hpp"
#include "cpm/metrics.hpp"
#include "cpm/solver.hpp"
#include "oracles.hpp"

using namespace cpm;

namespace {

struct Problem {
  GameSpec spec;
  ProximalSetup setup;
  explicit Problem(const NormalFormGame& g)
      : spec(make_normal_form_spec(g)), setup(ProximalSetup::for_spec(spec)) {}
};

}  // namespace

TEST_CASE("null game keeps every baseline still") {
  const Problem p(NormalFormGame({3, 2}, {Vector(6, 0.0), Vector(6, 0.0)}, 0.0));
  for (auto kind : {LearnerKind::mwu, LearnerKind::optimistic_mwu, LearnerKind::mirror_prox}) {
    BaselineConfig cfg;
    cfg.learner = kind;
    cfg.horizon = 15;
    const auto trace = run_baseline(p.setup, p.spec, cfg);
    REQUIRE(trace.size() == 15);
    for (const auto& s : trace.steps()) {
      CHECK(s.w == trace.initial_point());
      CHECK(s.z == trace.initial_point());
    }
    for (double r : regrets(trace, 15)) CHECK(r == 0.0);
  }
}

TEST_CASE("MWU closed-form step and regret bound") {
  // Player 1 always earns 1 on its first action.
  const NormalFormGame g({2, 2}, {{1, 1, 0, 0}, {0, 0, 0, 0}}, 1.0);
  const Problem p(g);
  BaselineConfig cfg;
  cfg.eta = std::log(2.0);
  cfg.horizon = 1;
  const auto one = run_mwu(p.setup, p.spec, cfg);
  CHECK(one.step(1).z.block(0)[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(one.step(1).z.block(0)[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(one.step(1).prox_evaluations == 1);

  const Problem mp(matching_pennies());
  BaselineConfig long_run;
  long_run.eta = 0.1;
  long_run.horizon = 1000;
  long_run.initial_point = JointPoint({{0.7, 0.3}, {0.5, 0.5}});
  const auto trace = run_mwu(mp.setup, mp.spec, long_run);
  const double bound = std::log(2.0) / 0.1 + 0.1 * 1000.0 / 2.0;
  for (std::size_t h = 1; h <= 1000; ++h) {
    for (double r : regrets(trace, h)) CHECK(r <= bound);
  }
  CHECK(regret(trace, 0, 1000) > regret(trace, 0, 10));
}

TEST_CASE("optimistic MWU starts with a plain MWU step") {
  const Problem p(random_game(2, {3, 2}, 1.0, 4));
  BaselineConfig cfg;
  cfg.horizon = 1;
  cfg.initial_point = JointPoint({{0.2, 0.3, 0.5}, {0.6, 0.4}});
  const auto mwu = run_mwu(p.setup, p.spec, cfg);
  const auto omwu = run_optimistic_mwu(p.setup, p.spec, cfg);
  // Zero prediction: the first played point is the start, the anchor update matches MWU.
  CHECK(omwu.step(1).w == *cfg.initial_point);
  for (std::size_t k = 0; k < 5; ++k) {
    CHECK(omwu.step(1).z.flat()[k] == doctest::Approx(mwu.step(1).z.flat()[k]).epsilon(1e-15));
  }
  CHECK(omwu.step(1).prox_evaluations == 2);
}

TEST_CASE("optimistic MWU approaches the interior equilibrium") {
  const double a = 1.0, b = -0.5, c = -1.0, d = 0.5;
  const NormalFormGame g({2, 2}, {{a, b, c, d}, {-a, -b, -c, -d}}, 1.0);
  const auto nash = oracle::solve_zero_sum_2x2(a, b, c, d);
  REQUIRE(nash.row_first > 0.0);
  REQUIRE(nash.row_first < 1.0);
  const Problem p(g);
  BaselineConfig cfg;
  cfg.horizon = 500;
  cfg.initial_point = JointPoint({{0.9, 0.1}, {0.2, 0.8}});
  const auto trace = run_optimistic_mwu(p.setup, p.spec, cfg);
  auto distance = [&](std::size_t t) {
    const auto& w = trace.step(t).w;
    return std::abs(w.block(0)[0] - nash.row_first) + std::abs(w.block(1)[0] - nash.col_first);
  };
  double previous = distance(1);
  for (std::size_t t = 100; t <= 500; t += 100) {
    const double now = distance(t);
    CHECK(now < previous);
    previous = now;
  }
  CHECK(distance(500) < 1e-2);
}

TEST_CASE("Mirror Prox equals the prox method with two map applications") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = random_game(2 + seed % 2, std::vector<std::size_t>(2 + seed % 2, 3), 1.0, seed);
    const Problem p(g);
    BaselineConfig mp_cfg;
    mp_cfg.learner = LearnerKind::mirror_prox;
    mp_cfg.horizon = 60;
    const auto mp = run_baseline(p.setup, p.spec, mp_cfg);
    SolverConfig cpm_cfg;
    cpm_cfg.outer_iterations = 60;
    cpm_cfg.inner_mode = InnerMode::fixed_budget;
    cpm_cfg.forced_inner_budget = 2;
    const auto cpm = run_centralized(p.setup, p.spec, cpm_cfg);
    for (std::size_t t = 1; t <= 60; ++t) {
      for (std::size_t k = 0; k < mp.step(t).w.size(); ++k) {
        CHECK(std::abs(mp.step(t).w.flat()[k] - cpm.step(t).w.flat()[k]) <= 1e-12);
        CHECK(std::abs(mp.step(t).z.flat()[k] - cpm.step(t).z.flat()[k]) <= 1e-12);
      }
    }
    CHECK(mp.total_prox_evaluations() == 120);
  }
}

TEST_CASE("Mirror Prox regret on matching pennies stays bounded") {
  const Problem p(matching_pennies());
  BaselineConfig cfg;
  cfg.learner = LearnerKind::mirror_prox;
  cfg.eta = 1.0 / (2.0 * std::sqrt(2.0));
  cfg.horizon = 200;
  cfg.initial_point = JointPoint({{0.8, 0.2}, {0.35, 0.65}});
  const auto trace = run_baseline(p.setup, p.spec, cfg);
  // Prox-method bound with the inner slack replaced by the measured residuals.
  double slack = 0.0;
  for (const auto& s : trace.steps()) slack += p.spec.gradient_bound * s.residual;
  const double range = -std::log(0.2);
  for (std::size_t h = 1; h <= 200; ++h) {
    for (double r : regrets(trace, h)) CHECK(r <= range / trace.eta() + slack);
  }
  CHECK(!trace.eta_clamped());
  cfg.eta = 10.0;
  CHECK(run_baseline(p.setup, p.spec, cfg).eta() == doctest::Approx(1.0 / (2.0 * std::sqrt(2.0))));
}
