#include "cpm/games.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>

namespace cpm {

namespace {

constexpr double kLipschitzFloor = 1e-9;

// Contracts mode `mode` of a row-major tensor of shape `shape` against
// `weights`, removing that mode from `shape`.
Vector contract_mode(const Vector& tensor, std::vector<std::size_t>& shape, std::size_t mode,
                     std::span<const double> weights) {
  std::size_t pre = 1;
  std::size_t post = 1;
  for (std::size_t k = 0; k < mode; ++k) pre *= shape[k];
  for (std::size_t k = mode + 1; k < shape.size(); ++k) post *= shape[k];
  const std::size_t mid = shape[mode];
  Vector out(pre * post, 0.0);
  for (std::size_t p = 0; p < pre; ++p) {
    const double* base = tensor.data() + p * mid * post;
    double* dst = out.data() + p * post;
    for (std::size_t a = 0; a < mid; ++a) {
      const double w = weights[a];
      const double* row = base + a * post;
      for (std::size_t q = 0; q < post; ++q) dst[q] += w * row[q];
    }
  }
  shape.erase(shape.begin() + std::ptrdiff_t(mode));
  return out;
}

void check_profile(const NormalFormGame& game, std::size_t player, const JointPoint& z) {
  if (player >= game.num_players()) {
    throw ShapeError("player index " + std::to_string(player) + " out of range");
  }
  if (z.num_blocks() != game.num_players()) {
    throw ShapeError("profile has " + std::to_string(z.num_blocks()) + " blocks, game has " +
                     std::to_string(game.num_players()) + " players");
  }
  for (std::size_t j = 0; j < game.num_players(); ++j) {
    if (z.block_size(j) != game.action_counts()[j]) {
      throw ShapeError("block " + std::to_string(j) + " has length " +
                       std::to_string(z.block_size(j)) + ", expected " +
                       std::to_string(game.action_counts()[j]));
    }
  }
}

}  // namespace

NormalFormGame::NormalFormGame(std::vector<std::size_t> action_counts, std::vector<Vector> payoffs,
                               double utility_bound)
    : action_counts_(std::move(action_counts)),
      payoffs_(std::move(payoffs)),
      utility_bound_(utility_bound) {
  if (action_counts_.empty()) throw std::invalid_argument("game needs at least one player");
  if (!(utility_bound_ >= 0.0) || !std::isfinite(utility_bound_)) {
    throw std::invalid_argument("utility bound V must be finite and >= 0");
  }
  num_joint_actions_ = 1;
  for (auto d : action_counts_) {
    if (d == 0) throw std::invalid_argument("every player needs at least one action");
    num_joint_actions_ *= d;
  }
  strides_.assign(action_counts_.size(), 1);
  for (std::size_t j = action_counts_.size() - 1; j > 0; --j) {
    strides_[j - 1] = strides_[j] * action_counts_[j];
  }
  if (payoffs_.size() != action_counts_.size()) {
    throw ShapeError("expected " + std::to_string(action_counts_.size()) + " payoff tensors, got " +
                     std::to_string(payoffs_.size()));
  }
  for (std::size_t i = 0; i < payoffs_.size(); ++i) {
    if (payoffs_[i].size() != num_joint_actions_) {
      throw ShapeError("payoff tensor of player " + std::to_string(i) + " has " +
                       std::to_string(payoffs_[i].size()) + " entries, expected " +
                       std::to_string(num_joint_actions_));
    }
    for (double e : payoffs_[i]) {
      if (!std::isfinite(e) || std::abs(e) > utility_bound_) {
        throw std::invalid_argument("payoff entry " + std::to_string(e) + " of player " +
                                    std::to_string(i) + " violates the bound V = " +
                                    std::to_string(utility_bound_));
      }
    }
  }
}

double NormalFormGame::payoff(std::size_t player, std::span<const std::size_t> actions) const {
  if (actions.size() != num_players()) throw ShapeError("action profile has wrong length");
  std::size_t index = 0;
  for (std::size_t j = 0; j < actions.size(); ++j) {
    if (actions[j] >= action_counts_[j]) throw ShapeError("action index out of range");
    index += actions[j] * strides_[j];
  }
  return payoffs_.at(player)[index];
}

bool NormalFormGame::is_two_player_zero_sum() const {
  if (num_players() != 2) return false;
  for (std::size_t k = 0; k < num_joint_actions_; ++k) {
    if (payoffs_[0][k] != -payoffs_[1][k]) return false;
  }
  return true;
}

double utility(const NormalFormGame& game, std::size_t player, const JointPoint& z) {
  check_profile(game, player, z);
  Vector tensor(game.payoff_tensor(player).begin(), game.payoff_tensor(player).end());
  std::vector<std::size_t> shape = game.action_counts();
  for (std::size_t j = game.num_players(); j-- > 0;) {
    tensor = contract_mode(tensor, shape, j, z.block(j));
  }
  return tensor.at(0);
}

Vector gradient(const NormalFormGame& game, std::size_t player, const JointPoint& z) {
  check_profile(game, player, z);
  Vector tensor(game.payoff_tensor(player).begin(), game.payoff_tensor(player).end());
  std::vector<std::size_t> shape = game.action_counts();
  // Contract trailing modes first; after skipping `player` its mode index
  // stays fixed because only later modes have been removed.
  for (std::size_t j = game.num_players(); j-- > 0;) {
    if (j == player) continue;
    tensor = contract_mode(tensor, shape, j, z.block(j));
  }
  return tensor;
}

std::vector<std::size_t> GameSpec::dimensions() const {
  std::vector<std::size_t> dims;
  dims.reserve(domains.size());
  for (const auto& d : domains) dims.push_back(dimension(d));
  return dims;
}

Vector player_gradient(const GameSpec& spec, std::size_t player, const JointPoint& z) {
  Vector g;
  try {
    g = spec.gradient(player, z);
  } catch (const ShapeError&) {
    throw;
  } catch (const std::exception& e) {
    throw std::runtime_error("gradient oracle failed for player " + std::to_string(player) + ": " +
                             e.what());
  }
  if (g.size() != dimension(spec.domains.at(player))) {
    throw ShapeError("gradient oracle for player " + std::to_string(player) + " returned length " +
                     std::to_string(g.size()) + ", expected " +
                     std::to_string(dimension(spec.domains[player])));
  }
  return g;
}

BlockVector operator_F(const GameSpec& spec, const JointPoint& z) {
  if (z.num_blocks() != spec.num_players()) throw ShapeError("operator_F: wrong number of blocks");
  BlockVector out = BlockVector::zeros(spec.dimensions());
  for (std::size_t i = 0; i < spec.num_players(); ++i) {
    Vector g = player_gradient(spec, i, z);
    auto dst = out.block(i);
    for (std::size_t a = 0; a < g.size(); ++a) dst[a] = -g[a];
  }
  return out;
}

GameSpec make_normal_form_spec(std::shared_ptr<const NormalFormGame> game) {
  if (!game) throw std::invalid_argument("null game");
  GameSpec spec;
  for (auto d : game->action_counts()) spec.domains.push_back(Simplex{d});
  spec.gradient = [game](std::size_t i, const JointPoint& z) { return gradient(*game, i, z); };
  spec.utility = [game](std::size_t i, const JointPoint& z) { return utility(*game, i, z); };
  const double bound = std::sqrt(double(game->num_players())) * game->utility_bound();
  spec.gradient_bound = bound;
  spec.lipschitz = std::max(bound, kLipschitzFloor);
  spec.normal_form = std::move(game);
  return spec;
}

GameSpec make_normal_form_spec(const NormalFormGame& game) {
  return make_normal_form_spec(std::make_shared<const NormalFormGame>(game));
}

GameSpec make_quadratic_ball_spec(const InteractionMatrices& interactions,
                                  const std::vector<std::size_t>& dims,
                                  const std::vector<double>& radii) {
  const std::size_t n = dims.size();
  if (radii.size() != n) throw ShapeError("need one radius per player");
  if (interactions.size() != n) throw ShapeError("interaction table must be n x n");
  std::vector<std::size_t> offsets(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (dims[i] == 0) throw std::invalid_argument("player dimension must be positive");
    offsets[i + 1] = offsets[i] + dims[i];
  }

  auto blocks = std::make_shared<InteractionMatrices>(n, std::vector<Eigen::MatrixXd>(n));
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(Eigen::Index(offsets[n]), Eigen::Index(offsets[n]));
  for (std::size_t i = 0; i < n; ++i) {
    if (interactions[i].size() != n) throw ShapeError("interaction table must be n x n");
    for (std::size_t j = 0; j < n; ++j) {
      const auto& a = interactions[i][j];
      if (i == j || a.size() == 0) continue;
      if (std::size_t(a.rows()) != dims[i] || std::size_t(a.cols()) != dims[j]) {
        throw ShapeError("A_" + std::to_string(i) + std::to_string(j) + " must be " +
                         std::to_string(dims[i]) + " x " + std::to_string(dims[j]));
      }
      (*blocks)[i][j] = a;
      full.block(Eigen::Index(offsets[i]), Eigen::Index(offsets[j]), a.rows(), a.cols()) = a;
    }
  }

  GameSpec spec;
  double radius_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    spec.domains.push_back(Ball{dims[i], radii[i]});
    radius_sq += radii[i] * radii[i];
  }
  for (const auto& d : spec.domains) validate(d);

  // F(z) = -M z with M the block matrix of the A_ij, so L = ||M||_2.
  double spectral = 0.0;
  if (full.size() > 0) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(full);
    spectral = svd.singularValues()(0);
  }
  spec.lipschitz = std::max(spectral, kLipschitzFloor);
  spec.gradient_bound = spectral * std::sqrt(radius_sq);

  spec.gradient = [blocks, dims](std::size_t i, const JointPoint& z) {
    if (z.num_blocks() != dims.size()) throw ShapeError("wrong number of blocks");
    Eigen::VectorXd g = Eigen::VectorXd::Zero(Eigen::Index(dims.at(i)));
    for (std::size_t j = 0; j < dims.size(); ++j) {
      const auto& a = (*blocks)[i][j];
      if (a.size() == 0) continue;
      auto zj = z.block(j);
      g += a * Eigen::Map<const Eigen::VectorXd>(zj.data(), Eigen::Index(zj.size()));
    }
    return Vector(g.data(), g.data() + g.size());
  };
  spec.utility = [blocks, dims](std::size_t i, const JointPoint& z) {
    if (z.num_blocks() != dims.size()) throw ShapeError("wrong number of blocks");
    auto zi = z.block(i);
    Eigen::Map<const Eigen::VectorXd> xi(zi.data(), Eigen::Index(zi.size()));
    double u = 0.0;
    for (std::size_t j = 0; j < dims.size(); ++j) {
      const auto& a = (*blocks)[i][j];
      if (a.size() == 0) continue;
      auto zj = z.block(j);
      u += xi.dot(a * Eigen::Map<const Eigen::VectorXd>(zj.data(), Eigen::Index(zj.size())));
    }
    return u;
  };
  return spec;
}

NormalFormGame random_game(std::size_t num_players, const std::vector<std::size_t>& action_counts,
                           double utility_bound, std::uint64_t seed) {
  if (num_players == 0 || action_counts.size() != num_players) {
    throw std::invalid_argument("random_game: need one action count per player");
  }
  if (!(utility_bound > 0.0)) throw std::invalid_argument("random_game: V must be positive");
  std::size_t total = 1;
  for (auto d : action_counts) {
    if (d == 0) throw std::invalid_argument("random_game: action counts must be positive");
    total *= d;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> entry(-utility_bound, utility_bound);
  std::vector<Vector> payoffs(num_players, Vector(total));
  for (auto& tensor : payoffs) {
    for (auto& e : tensor) e = entry(rng);
  }
  return NormalFormGame(action_counts, std::move(payoffs), utility_bound);
}

NormalFormGame random_zero_sum_game(std::size_t rows, std::size_t cols, double utility_bound,
                                    std::uint64_t seed) {
  NormalFormGame base = random_game(2, {rows, cols}, utility_bound, seed);
  Vector first(base.payoff_tensor(0).begin(), base.payoff_tensor(0).end());
  Vector second(first.size());
  for (std::size_t k = 0; k < first.size(); ++k) second[k] = -first[k];
  return NormalFormGame({rows, cols}, {std::move(first), std::move(second)}, utility_bound);
}

NormalFormGame matching_pennies() {
  return NormalFormGame({2, 2}, {{1.0, -1.0, -1.0, 1.0}, {-1.0, 1.0, 1.0, -1.0}}, 1.0);
}

NormalFormGame game_from_json(const nlohmann::json& j) {
  try {
    const auto n = j.at("players").get<std::size_t>();
    auto actions = j.at("actions").get<std::vector<std::size_t>>();
    const auto bound = j.at("V").get<double>();
    auto payoffs = j.at("payoffs").get<std::vector<Vector>>();
    if (actions.size() != n) {
      throw ShapeError("\"actions\" has " + std::to_string(actions.size()) + " entries but \"players\" is " +
                       std::to_string(n));
    }
    return NormalFormGame(std::move(actions), std::move(payoffs), bound);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed game JSON: ") + e.what());
  }
}

nlohmann::json game_to_json(const NormalFormGame& game) {
  nlohmann::json payoffs = nlohmann::json::array();
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    auto t = game.payoff_tensor(i);
    payoffs.push_back(Vector(t.begin(), t.end()));
  }
  return {{"players", game.num_players()},
          {"actions", game.action_counts()},
          {"V", game.utility_bound()},
          {"payoffs", payoffs}};
}

NormalFormGame load_game(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open game file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("cannot parse " + path.string() + ": " + e.what());
  }
  return game_from_json(j);
}

void save_game(const NormalFormGame& game, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write game file " + path.string());
  out << game_to_json(game).dump(2) << '\n';
}

}  // namespace cpm
