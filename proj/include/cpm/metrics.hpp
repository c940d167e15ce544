#pragma once

#include <cstddef>
#include <vector>

#include "cpm/games.hpp"
#include "cpm/trace.hpp"

namespace cpm {

/// Reg_i^T = max_{x in X_i} sum_{t <= T} <grad_i u_i(w^t), x - w_i^t>,
/// evaluated from the trace's prefix sums.
double regret(const RunTrace& trace, std::size_t player, std::size_t horizon);

std::vector<double> regrets(const RunTrace& trace, std::size_t horizon);

/// Per-player deviation incentive under the average product distribution of
/// the regret-bearing iterates, i.e. regret_i / horizon.
std::vector<double> cce_gaps(const RunTrace& trace, const NormalFormGame& game, std::size_t horizon);

/// Largest per-player entry of cce_gaps.
double cce_gap(const RunTrace& trace, const NormalFormGame& game, std::size_t horizon);

/// Averaged strategy (1/T) sum_{t <= T} w_i^t.
Vector average_strategy(const RunTrace& trace, std::size_t player, std::size_t horizon);

/// For two-player zero-sum games: max_x u_1(x, avg_2) - min_y u_1(avg_1, y).
/// Throws std::invalid_argument for any other game.
double duality_gap(const RunTrace& trace, const NormalFormGame& game, std::size_t horizon);

}  // namespace cpm
