#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include "json.hpp"

#include "cpm/block_vector.hpp"
#include "cpm/domain.hpp"

namespace cpm {

/// Finite n-player game with one payoff tensor per player.
///
/// Each tensor has shape d_1 x ... x d_n and is stored flat in row-major
/// order (the last player's action varies fastest). Every entry must lie in
/// [-V, V] where V is the declared utility bound.
class NormalFormGame {
 public:
  NormalFormGame(std::vector<std::size_t> action_counts, std::vector<Vector> payoffs,
                 double utility_bound);

  std::size_t num_players() const { return action_counts_.size(); }
  const std::vector<std::size_t>& action_counts() const { return action_counts_; }
  double utility_bound() const { return utility_bound_; }
  std::size_t num_joint_actions() const { return num_joint_actions_; }

  /// Flat row-major tensor of player i.
  std::span<const double> payoff_tensor(std::size_t player) const { return payoffs_.at(player); }
  double payoff(std::size_t player, std::span<const std::size_t> actions) const;

  /// Row-major stride of player j's action index.
  std::size_t stride(std::size_t player) const { return strides_.at(player); }

  /// True when u_2 = -u_1 entrywise for a two-player game.
  bool is_two_player_zero_sum() const;

 private:
  std::vector<std::size_t> action_counts_;
  std::vector<std::size_t> strides_;
  std::vector<Vector> payoffs_;
  double utility_bound_;
  std::size_t num_joint_actions_;
};

/// Expected utility of player i under the product distribution z.
double utility(const NormalFormGame& game, std::size_t player, const JointPoint& z);

/// Gradient of player i's expected utility with respect to its own mixed
/// strategy; entry a is the expected payoff of pure action a against z_{-i}.
Vector gradient(const NormalFormGame& game, std::size_t player, const JointPoint& z);

/// A convex game described through oracles.
///
/// `lipschitz` and `gradient_bound` are the constants L and B of the game
/// operator with respect to the norm pair the game is meant to be solved
/// under (mixed l1/l-inf for simplex games, l2 otherwise).
struct GameSpec {
  std::vector<Domain> domains;
  std::function<Vector(std::size_t player, const JointPoint& z)> gradient;
  std::function<double(std::size_t player, const JointPoint& z)> utility;
  double lipschitz = 1.0;
  double gradient_bound = 0.0;
  /// Set for specs built from a normal-form game.
  std::shared_ptr<const NormalFormGame> normal_form;

  std::size_t num_players() const { return domains.size(); }
  std::vector<std::size_t> dimensions() const;
};

/// Stacked negated utility gradients (-grad_1 u_1(z), ..., -grad_n u_n(z)).
BlockVector operator_F(const GameSpec& spec, const JointPoint& z);

/// Gradient of one player through the spec's oracle, with the shape checked.
Vector player_gradient(const GameSpec& spec, std::size_t player, const JointPoint& z);

/// Simplex domains, tensor oracles, B = L = sqrt(n) * V. A null game (V = 0)
/// reports L = 1e-9 since L must be positive.
GameSpec make_normal_form_spec(std::shared_ptr<const NormalFormGame> game);
GameSpec make_normal_form_spec(const NormalFormGame& game);

/// Interaction matrices for the game u_i(z) = sum_{j != i} z_i^T A_ij z_j.
/// `interactions[i][j]` is d_i x d_j; diagonal entries and empty matrices are
/// treated as zero.
using InteractionMatrices = std::vector<std::vector<Eigen::MatrixXd>>;

/// Multilinear game over Euclidean balls. L is the spectral norm of the
/// block operator (floored at 1e-9), B = L * max ||z||_2.
GameSpec make_quadratic_ball_spec(const InteractionMatrices& interactions,
                                  const std::vector<std::size_t>& dims,
                                  const std::vector<double>& radii);

/// Payoffs drawn i.i.d. uniform in [-V, V]; deterministic for a fixed seed.
NormalFormGame random_game(std::size_t num_players, const std::vector<std::size_t>& action_counts,
                           double utility_bound, std::uint64_t seed);

/// Random two-player zero-sum game (u_2 = -u_1) with entries in [-V, V].
NormalFormGame random_zero_sum_game(std::size_t rows, std::size_t cols, double utility_bound,
                                    std::uint64_t seed);

NormalFormGame matching_pennies();

/// JSON game format:
/// {"players": n, "actions": [d1..dn], "V": v, "payoffs": [[...], ...]}
NormalFormGame game_from_json(const nlohmann::json& j);
nlohmann::json game_to_json(const NormalFormGame& game);
NormalFormGame load_game(const std::filesystem::path& path);
void save_game(const NormalFormGame& game, const std::filesystem::path& path);

}  // namespace cpm
