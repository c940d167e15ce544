#include "doctest.h"

#include <cmath>
#include <random>

#include "cpm/baselines.hpp"
#include "cpm/metrics.hpp"
#include "cpm/solver.hpp"
#include "oracles.hpp"

using namespace cpm;

namespace {

RunTrace handmade(const std::vector<std::pair<Vector, Vector>>& steps) {
  const std::vector<Domain> domains{Simplex{2}};
  RunTrace trace("test", domains, JointPoint({{0.5, 0.5}}), 1.0, 1.0);
  std::size_t t = 0;
  for (const auto& [w, g] : steps) {
    OuterIterate it;
    it.t = ++t;
    it.w = JointPoint({w});
    it.z = it.w;
    it.utility_gradient = BlockVector({g});
    trace.append(std::move(it));
  }
  return trace;
}

RunTrace run_cpm(const NormalFormGame& g, std::size_t T, InnerMode mode = InnerMode::residual_check) {
  const auto spec = make_normal_form_spec(g);
  SolverConfig cfg;
  cfg.outer_iterations = T;
  cfg.inner_mode = mode;
  return run_centralized(ProximalSetup::for_spec(spec), spec, cfg);
}

}  // namespace

TEST_CASE("regret examples") {
  CHECK(regret(handmade({{{0.5, 0.5}, {0, 0}}, {{0.2, 0.8}, {0, 0}}}), 0, 2) == 0.0);
  CHECK(regret(handmade({{{0.5, 0.5}, {1, 0}}}), 0, 1) == doctest::Approx(0.5));
  CHECK_THROWS_AS(regret(handmade({{{0.5, 0.5}, {1, 0}}}), 0, 2), std::out_of_range);
  CHECK_THROWS_AS(regret(handmade({{{0.5, 0.5}, {1, 0}}}), 0, 0), std::out_of_range);
}

TEST_CASE("regret over balls uses the support function") {
  const std::vector<Domain> domains{Ball{2, 2.0}};
  RunTrace trace("test", domains, JointPoint({{0.0, 0.0}}), 1.0, 1.0);
  OuterIterate it;
  it.t = 1;
  it.w = JointPoint({{0.5, 0.0}});
  it.z = it.w;
  it.utility_gradient = BlockVector({{3.0, 4.0}});
  trace.append(it);
  CHECK(regret(trace, 0, 1) == doctest::Approx(2.0 * 5.0 - 1.5));
}

TEST_CASE("prefix-sum regret equals the raw per-step sum") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = random_game(3, {2, 3, 4}, 1.0, seed);
    const auto trace = run_cpm(g, 80);
    for (std::size_t h : {1, 7, 40, 80}) {
      for (std::size_t i = 0; i < 3; ++i) {
        Vector sum(g.action_counts()[i], 0.0);
        double played = 0.0;
        for (std::size_t t = 1; t <= h; ++t) {
          const auto grad = gradient(g, i, trace.step(t).w);
          for (std::size_t a = 0; a < sum.size(); ++a) sum[a] += grad[a];
          played += utility(g, i, trace.step(t).w);
        }
        const double raw = *std::max_element(sum.begin(), sum.end()) - played;
        CHECK(std::abs(regret(trace, i, h) - raw) <= 1e-10);
      }
    }
  }
}

TEST_CASE("cce gap identities") {
  const auto mp = matching_pennies();
  const auto spec = make_normal_form_spec(mp);
  SolverConfig cfg;
  cfg.outer_iterations = 10;
  const auto uniform = run_centralized(ProximalSetup::for_spec(spec), spec, cfg);
  CHECK(cce_gap(uniform, mp, 10) == 0.0);

  const auto g = random_game(2, {3, 3}, 1.0, 5);
  const auto trace = run_cpm(g, 50);
  for (std::size_t h = 1; h <= 50; ++h) {
    const auto r = regrets(trace, h);
    CHECK(std::abs(cce_gap(trace, g, h) - std::max(r[0], r[1]) / double(h)) <= 1e-12);
    CHECK(cce_gap(trace, g, h) >= -1e-9);
  }
  CHECK_THROWS_AS(cce_gap(trace, random_game(2, {2, 3}, 1.0, 1), 5), ShapeError);
}

TEST_CASE("cce gap agrees with the brute-force mixture") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto g = seed % 2 ? random_game(3, {2, 2, 2}, 1.0, seed) : random_game(2, {2, 2}, 1.0, seed);
    for (const auto& trace : {run_cpm(g, 20), [&] {
                                const auto spec = make_normal_form_spec(g);
                                BaselineConfig cfg;
                                cfg.horizon = 20;
                                cfg.eta = 0.3;
                                return run_mwu(ProximalSetup::for_spec(spec), spec, cfg);
                              }()}) {
      for (std::size_t h = 1; h <= 20; ++h) {
        CHECK(std::abs(cce_gap(trace, g, h) - oracle::brute_cce_gap(trace, g, h)) <= 1e-9);
      }
    }
  }
}

TEST_CASE("duality gap") {
  const auto mp = matching_pennies();
  const auto spec = make_normal_form_spec(mp);
  SolverConfig cfg;
  cfg.outer_iterations = 5;
  CHECK(duality_gap(run_centralized(ProximalSetup::for_spec(spec), spec, cfg), mp, 5) == 0.0);
  CHECK_THROWS_AS(duality_gap(run_cpm(random_game(2, {2, 2}, 1.0, 1), 3), random_game(2, {2, 2}, 1.0, 1), 3),
                  std::invalid_argument);

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = random_zero_sum_game(2, 2, 1.0, seed);
    const auto trace = run_cpm(g, 300);
    for (std::size_t h = 1; h <= 300; ++h) {
      const auto r = regrets(trace, h);
      const double gap = duality_gap(trace, g, h);
      CHECK(gap >= -1e-9);
      CHECK(gap <= (r[0] + r[1]) / double(h) + 1e-9);
    }
    // Against the closed-form equilibrium: the gap is max_x u(x, y_bar) - min_y u(x_bar, y).
    const auto A = g.payoff_tensor(0);
    const double x0 = average_strategy(trace, 0, 300)[0], y0 = average_strategy(trace, 1, 300)[0];
    const double best_row = std::max(oracle::bilinear(A[0], A[1], A[2], A[3], 1.0, y0),
                                     oracle::bilinear(A[0], A[1], A[2], A[3], 0.0, y0));
    const double best_col = std::min(oracle::bilinear(A[0], A[1], A[2], A[3], x0, 1.0),
                                     oracle::bilinear(A[0], A[1], A[2], A[3], x0, 0.0));
    CHECK(duality_gap(trace, g, 300) == doctest::Approx(best_row - best_col).epsilon(1e-12));
    const auto nash = oracle::solve_zero_sum_2x2(A[0], A[1], A[2], A[3]);
    CHECK(best_row >= nash.value - 1e-12);
    CHECK(best_col <= nash.value + 1e-12);
  }

  // [[1,0],[0,1]] has value 1/2; the equilibrium averages close the gap exactly.
  const NormalFormGame diag({2, 2}, {{1, 0, 0, 1}, {-1, 0, 0, -1}}, 1.0);
  const auto nash = oracle::solve_zero_sum_2x2(1, 0, 0, 1);
  CHECK(nash.value == 0.5);
  const std::vector<Domain> domains{Simplex{2}, Simplex{2}};
  RunTrace at_nash("test", domains, JointPoint({{0.5, 0.5}, {0.5, 0.5}}), 1.0, 1.0);
  OuterIterate it;
  it.t = 1;
  it.w = JointPoint({{nash.row_first, 1 - nash.row_first}, {nash.col_first, 1 - nash.col_first}});
  it.z = it.w;
  it.utility_gradient = BlockVector({gradient(diag, 0, it.w), gradient(diag, 1, it.w)});
  at_nash.append(it);
  CHECK(duality_gap(at_nash, diag, 1) == doctest::Approx(0.0));
}
