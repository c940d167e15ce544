#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cpm/block_vector.hpp"
#include "cpm/domain.hpp"

namespace cpm {

/// One outer step of a learner.
///
/// `w` is the point whose gradients enter regret (the approximate fixed point
/// for the prox method, the played strategy for baselines) and `z` is the
/// prox anchor carried into the next step.
struct OuterIterate {
  std::size_t t = 0;
  JointPoint z;
  JointPoint w;
  /// (grad_1 u_1(w), ..., grad_n u_n(w)).
  BlockVector utility_gradient;
  /// Applications of the map w -> prox(z^{t-1}, eta F(w)), or prox
  /// evaluations per outer step for baselines.
  std::size_t inner_iterations = 0;
  std::size_t prox_evaluations = 0;
  /// ||w - prox(z^{t-1}, eta F(w))|| in the setup's primal norm.
  double residual = 0.0;
  /// Residual of every inner iterate, in order; the last equals `residual`.
  std::vector<double> inner_residuals;
  double epsilon = 0.0;
};

/// Immutable-once-finished record of a run with prefix sums for regret
/// queries at any horizon.
class RunTrace {
 public:
  RunTrace(std::string solver, std::vector<Domain> domains, JointPoint initial, double eta_requested,
           double eta);

  void append(OuterIterate step);
  void set_error(std::string message) { error_ = std::move(message); }

  const std::string& solver() const { return solver_; }
  const std::vector<Domain>& domains() const { return domains_; }
  std::size_t num_players() const { return domains_.size(); }
  const JointPoint& initial_point() const { return initial_; }
  double eta_requested() const { return eta_requested_; }
  double eta() const { return eta_; }
  bool eta_clamped() const { return eta_ != eta_requested_; }
  const std::optional<std::string>& error() const { return error_; }

  std::size_t size() const { return steps_.size(); }
  bool empty() const { return steps_.empty(); }
  /// Outer step t, 1-based.
  const OuterIterate& step(std::size_t t) const { return steps_.at(t - 1); }
  const std::vector<OuterIterate>& steps() const { return steps_; }

  /// Sum over the first `horizon` steps of grad_i u_i(w^t).
  std::span<const double> cumulative_gradient(std::size_t player, std::size_t horizon) const;
  /// Sum over the first `horizon` steps of <grad_i u_i(w^t), w_i^t>.
  double cumulative_value(std::size_t player, std::size_t horizon) const;

  std::size_t total_inner_iterations() const;
  std::size_t total_prox_evaluations() const;

 private:
  std::string solver_;
  std::vector<Domain> domains_;
  JointPoint initial_;
  double eta_requested_;
  double eta_;
  std::vector<OuterIterate> steps_;
  std::vector<BlockVector> cumulative_gradient_;
  std::vector<std::vector<double>> cumulative_value_;
  std::optional<std::string> error_;
};

}  // namespace cpm
