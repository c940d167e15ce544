#include "cpm/metrics.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace cpm {

namespace {

void check_horizon(const RunTrace& trace, std::size_t horizon) {
  if (horizon == 0 || horizon > trace.size()) {
    throw std::out_of_range("horizon " + std::to_string(horizon) + " outside trace of length " +
                            std::to_string(trace.size()));
  }
}

void check_game(const RunTrace& trace, const NormalFormGame& game) {
  if (trace.num_players() != game.num_players()) throw ShapeError("trace and game player counts differ");
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    const auto* s = std::get_if<Simplex>(&trace.domains()[i]);
    if (!s || s->dim != game.action_counts()[i]) throw ShapeError("trace domains do not match the game");
  }
}

}  // namespace

double regret(const RunTrace& trace, std::size_t player, std::size_t horizon) {
  check_horizon(trace, horizon);
  if (player >= trace.num_players()) throw std::out_of_range("player index out of range");
  const auto g = trace.cumulative_gradient(player, horizon);
  return support(trace.domains()[player], g) - trace.cumulative_value(player, horizon);
}

std::vector<double> regrets(const RunTrace& trace, std::size_t horizon) {
  std::vector<double> out(trace.num_players());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = regret(trace, i, horizon);
  return out;
}

std::vector<double> cce_gaps(const RunTrace& trace, const NormalFormGame& game, std::size_t horizon) {
  check_game(trace, game);
  auto out = regrets(trace, horizon);
  for (auto& r : out) r /= double(horizon);
  return out;
}

double cce_gap(const RunTrace& trace, const NormalFormGame& game, std::size_t horizon) {
  const auto gaps = cce_gaps(trace, game, horizon);
  return *std::max_element(gaps.begin(), gaps.end());
}

Vector average_strategy(const RunTrace& trace, std::size_t player, std::size_t horizon) {
  check_horizon(trace, horizon);
  Vector avg(trace.initial_point().block_size(player), 0.0);
  for (std::size_t t = 1; t <= horizon; ++t) {
    auto w = trace.step(t).w.block(player);
    for (std::size_t a = 0; a < avg.size(); ++a) avg[a] += w[a];
  }
  for (auto& v : avg) v /= double(horizon);
  return avg;
}

double duality_gap(const RunTrace& trace, const NormalFormGame& game, std::size_t horizon) {
  if (!game.is_two_player_zero_sum()) throw std::invalid_argument("duality gap needs a two-player zero-sum game");
  check_game(trace, game);
  const JointPoint avg({average_strategy(trace, 0, horizon), average_strategy(trace, 1, horizon)});
  // Best responses are pure, so the extremes are max/min entries of the gradients.
  const Vector row_values = gradient(game, 0, avg);  // u_1(a, avg_2)
  const Vector col_values = gradient(game, 1, avg);  // u_2(avg_1, b) = -u_1(avg_1, b)
  const double best_row = *std::max_element(row_values.begin(), row_values.end());
  const double worst_col_for_row = -*std::max_element(col_values.begin(), col_values.end());
  return best_row - worst_col_for_row;
}

}  // namespace cpm
