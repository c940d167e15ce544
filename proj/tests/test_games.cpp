#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "cpm/games.hpp"
#include "cpm/proximal.hpp"
#include "oracles.hpp"

using namespace cpm;

namespace {

JointPoint profile(std::vector<Vector> blocks) { return JointPoint(blocks); }

std::vector<Vector> random_profile(const std::vector<std::size_t>& counts, std::mt19937_64& rng) {
  std::vector<Vector> out;
  for (auto d : counts) out.push_back(sample_point(Simplex{d}, rng));
  return out;
}

}  // namespace

TEST_CASE("matching pennies utilities") {
  const auto g = matching_pennies();
  CHECK(utility(g, 0, profile({{0.5, 0.5}, {0.5, 0.5}})) == 0.0);
  CHECK(utility(g, 0, profile({{1, 0}, {1, 0}})) == 1.0);
  CHECK(utility(g, 1, profile({{1, 0}, {1, 0}})) == -1.0);

  const auto uniform_opponent = gradient(g, 0, profile({{0.3, 0.7}, {0.5, 0.5}}));
  CHECK(uniform_opponent[0] == 0.0);
  CHECK(uniform_opponent[1] == 0.0);
  const auto heads = gradient(g, 0, profile({{0.3, 0.7}, {1, 0}}));
  CHECK(heads[0] == 1.0);
  CHECK(heads[1] == -1.0);

  const auto F = operator_F(make_normal_form_spec(g), profile({{0.5, 0.5}, {0.5, 0.5}}));
  for (double v : F.flat()) CHECK(v == 0.0);
  CHECK(g.is_two_player_zero_sum());
}

TEST_CASE("utility agrees with brute-force enumeration") {
  std::mt19937_64 rng(11);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = random_game(2, {2, 3}, 1.0, seed);
    const auto p = random_profile(g.action_counts(), rng);
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(utility(g, i, profile(p)) == doctest::Approx(oracle::brute_utility(g, i, p)).epsilon(1e-13));
    }
  }
  const auto g3 = random_game(3, {2, 3, 4}, 2.0, 5);
  for (int s = 0; s < 10; ++s) {
    const auto p = random_profile(g3.action_counts(), rng);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(std::abs(utility(g3, i, profile(p)) - oracle::brute_utility(g3, i, p)) <= 1e-12);
    }
  }
}

TEST_CASE("gradient matches finite differences and linearity") {
  std::mt19937_64 rng(3);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = random_game(3, {2, 2, 2}, 1.0, seed);
    const auto p = random_profile(g.action_counts(), rng);
    for (std::size_t i = 0; i < 3; ++i) {
      const auto analytic = gradient(g, i, profile(p));
      const auto numeric = oracle::fd_gradient(g, i, p);
      for (std::size_t a = 0; a < 2; ++a) CHECK(std::abs(analytic[a] - numeric[a]) <= 1e-6);
      // u_i is linear in x_i with slope grad_i u_i.
      CHECK(std::abs(dot(analytic, p[i]) - utility(g, i, profile(p))) <= 1e-12);
      const auto F = operator_F(make_normal_form_spec(g), profile(p));
      for (std::size_t a = 0; a < 2; ++a) CHECK(F.block(i)[a] == -analytic[a]);
    }
  }
}

TEST_CASE("bilinear operator matches matrix products") {
  const auto g = random_zero_sum_game(3, 2, 1.0, 9);
  std::mt19937_64 rng(1);
  const auto p = random_profile(g.action_counts(), rng);
  const auto F = operator_F(make_normal_form_spec(g), profile(p));
  const auto A = g.payoff_tensor(0);
  for (std::size_t r = 0; r < 3; ++r) {
    double Az2 = 0.0;
    for (std::size_t c = 0; c < 2; ++c) Az2 += A[r * 2 + c] * p[1][c];
    CHECK(F.block(0)[r] == doctest::Approx(-Az2).epsilon(1e-14));
  }
  for (std::size_t c = 0; c < 2; ++c) {
    double Atz1 = 0.0;
    for (std::size_t r = 0; r < 3; ++r) Atz1 += A[r * 2 + c] * p[0][r];
    CHECK(F.block(1)[c] == doctest::Approx(Atz1).epsilon(1e-14));
  }
}

TEST_CASE("normal-form constants") {
  const auto two = make_normal_form_spec(random_game(2, {2, 2}, 1.0, 1));
  CHECK(two.gradient_bound == doctest::Approx(std::sqrt(2.0)));
  CHECK(two.lipschitz == doctest::Approx(std::sqrt(2.0)));
  const auto four = make_normal_form_spec(random_game(4, {2, 2, 2, 2}, 3.0, 1));
  CHECK(four.gradient_bound == doctest::Approx(6.0));
  CHECK(four.lipschitz == doctest::Approx(6.0));
  const auto null = make_normal_form_spec(NormalFormGame({2, 2}, {Vector(4, 0.0), Vector(4, 0.0)}, 0.0));
  CHECK(null.lipschitz == 1e-9);
}

TEST_CASE("sampled dual norm of F stays below B") {
  std::mt19937_64 rng(21);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto g = random_game(2 + seed % 2, std::vector<std::size_t>(2 + seed % 2, 3), 1.0, seed);
    const auto spec = make_normal_form_spec(g);
    const auto setup = ProximalSetup::for_spec(spec);
    for (int s = 0; s < 1000; ++s) {
      const auto z = sample_point(spec.domains, rng);
      CHECK(dual_norm(setup, operator_F(spec, z)) <= spec.gradient_bound + 1e-12);
    }
  }
}

TEST_CASE("two-player Lipschitz constant holds at adversarial pairs") {
  std::mt19937_64 rng(5);
  const auto spec = make_normal_form_spec(random_game(2, {3, 3}, 1.0, 2));
  const auto setup = ProximalSetup::for_spec(spec);
  for (int s = 0; s < 2000; ++s) {
    std::vector<Vector> a, b;
    for (const auto& d : spec.domains) {
      a.push_back(s % 2 ? sample_extreme_point(d, rng) : sample_point(d, rng));
      b.push_back(sample_extreme_point(d, rng));
    }
    const JointPoint z(a), zp(b);
    const double dz = primal_norm(setup, z - zp);
    if (dz < 1e-12) continue;
    CHECK(dual_norm(setup, operator_F(spec, z) - operator_F(spec, zp)) <= spec.lipschitz * dz + 1e-12);
  }
}

TEST_CASE("three-player coordination game exceeds sqrt(n) V near a pure profile") {
  // u_i = +-V * s_j * s_k with s = +1 on action 0, -1 on action 1. Moving all
  // three players off the pure profile by t changes every F_i by about 4Vt in
  // sup norm while the mixed primal norm grows by 2t per block, so the local
  // ratio approaches (n - 1) V = 2 > sqrt(3).
  Vector tensor(8);
  for (std::size_t a = 0; a < 8; ++a) {
    const double s0 = (a & 4) ? -1.0 : 1.0, s1 = (a & 2) ? -1.0 : 1.0, s2 = (a & 1) ? -1.0 : 1.0;
    tensor[a] = s0 * s1 * s2;
  }
  const NormalFormGame g({2, 2, 2}, {tensor, tensor, tensor}, 1.0);
  const auto spec = make_normal_form_spec(g);
  const auto setup = ProximalSetup::for_spec(spec);
  const double t = 1e-4;
  const JointPoint z({{1, 0}, {1, 0}, {1, 0}});
  const JointPoint zp({{1 - t, t}, {1 - t, t}, {1 - t, t}});
  const double ratio =
      dual_norm(setup, operator_F(spec, z) - operator_F(spec, zp)) / primal_norm(setup, z - zp);
  CHECK(ratio == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(ratio > spec.lipschitz);
}

TEST_CASE("quadratic ball spec constants") {
  InteractionMatrices identity(2, std::vector<Eigen::MatrixXd>(2));
  identity[0][1] = Eigen::MatrixXd::Identity(2, 2);
  identity[1][0] = -Eigen::MatrixXd::Identity(2, 2);
  const auto spec = make_quadratic_ball_spec(identity, {2, 2}, {1.0, 1.0});
  CHECK(spec.lipschitz == doctest::Approx(1.0));

  InteractionMatrices zero(2, std::vector<Eigen::MatrixXd>(2));
  const auto null = make_quadratic_ball_spec(zero, {2, 3}, {1.0, 1.0});
  CHECK(null.lipschitz == 1e-9);
  std::mt19937_64 rng(1);
  const auto null_F = operator_F(null, sample_point(null.domains, rng));
  for (double v : null_F.flat()) CHECK(v == 0.0);

  // Random interaction and sampled Lipschitz ratio.
  std::mt19937_64 mrng(4);
  std::normal_distribution<double> normal;
  InteractionMatrices random(2, std::vector<Eigen::MatrixXd>(2));
  random[0][1] = Eigen::MatrixXd(3, 2);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 2; ++c) random[0][1](r, c) = normal(mrng);
  random[1][0] = -random[0][1].transpose();
  const auto rspec = make_quadratic_ball_spec(random, {3, 2}, {1.0, 1.0});
  const auto setup = ProximalSetup::for_spec(rspec);
  double worst = 0.0;
  for (int s = 0; s < 1000; ++s) {
    const auto z = sample_point(rspec.domains, rng);
    const auto zp = sample_point(rspec.domains, rng);
    worst = std::max(worst, dual_norm(setup, operator_F(rspec, z) - operator_F(rspec, zp)) /
                                primal_norm(setup, z - zp));
    CHECK(dual_norm(setup, operator_F(rspec, z)) <= rspec.gradient_bound + 1e-12);
  }
  CHECK(worst <= rspec.lipschitz + 1e-12);
}

TEST_CASE("random game generator") {
  const auto a = random_game(3, {4, 5, 6}, 2.5, 77);
  const auto b = random_game(3, {4, 5, 6}, 2.5, 77);
  double sum = 0.0, count = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto ta = a.payoff_tensor(i), tb = b.payoff_tensor(i);
    REQUIRE(ta.size() == 120);
    for (std::size_t k = 0; k < ta.size(); ++k) {
      CHECK(ta[k] == tb[k]);
      CHECK(std::abs(ta[k]) <= 2.5);
    }
  }
  const auto big = random_game(2, {100, 100}, 1.0, 3);
  for (double v : big.payoff_tensor(0)) {
    sum += v;
    count += 1.0;
  }
  // Uniform[-1, 1] has standard deviation 1/sqrt(3).
  const double stderr_ = 1.0 / std::sqrt(3.0) / std::sqrt(count);
  CHECK(std::abs(sum / count) <= 3.0 * stderr_);
  CHECK(random_game(2, {3, 3}, 1.0, 1).payoff_tensor(0)[0] != random_game(2, {3, 3}, 1.0, 2).payoff_tensor(0)[0]);
}

TEST_CASE("game validation and JSON") {
  CHECK_THROWS_AS(NormalFormGame({2, 2}, {Vector(4, 0.0)}, 1.0), ShapeError);
  CHECK_THROWS_AS(NormalFormGame({2, 2}, {Vector(4, 0.0), Vector(3, 0.0)}, 1.0), ShapeError);
  CHECK_THROWS_AS(NormalFormGame({2, 2}, {Vector(4, 2.0), Vector(4, 0.0)}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(utility(matching_pennies(), 0, JointPoint({{1.0, 0.0}})), ShapeError);

  const auto g = random_game(3, {2, 3, 2}, 1.5, 4);
  const auto back = game_from_json(game_to_json(g));
  CHECK(back.action_counts() == g.action_counts());
  for (std::size_t i = 0; i < 3; ++i) {
    const auto x = g.payoff_tensor(i), y = back.payoff_tensor(i);
    CHECK(std::equal(x.begin(), x.end(), y.begin(), y.end()));
  }
  const auto dir = std::filesystem::temp_directory_path() / "cpm_game_test";
  std::filesystem::create_directories(dir);
  save_game(g, dir / "g.json");
  CHECK(load_game(dir / "g.json").payoff_tensor(2)[5] == g.payoff_tensor(2)[5]);
  CHECK_THROWS(load_game(dir / "missing.json"));
  std::ofstream(dir / "bad.json") << "{\"players\": 2, \"actions\": [2], \"V\": 1, \"payoffs\": []}";
  CHECK_THROWS(load_game(dir / "bad.json"));
  std::ofstream(dir / "garbage.json") << "not json";
  CHECK_THROWS(load_game(dir / "garbage.json"));
}
