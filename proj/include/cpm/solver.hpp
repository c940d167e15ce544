#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpm/block_vector.hpp"
#include "cpm/games.hpp"
#include "cpm/proximal.hpp"
#include "cpm/trace.hpp"

namespace cpm {

/// Fixed-point tolerance eps^t for outer step t >= 1.
using ToleranceSchedule = std::function<double(std::size_t t)>;

/// eps^t = 1 / t^2.
ToleranceSchedule inverse_square_schedule();
/// eps^t = value.
ToleranceSchedule constant_schedule(double value);

enum class InnerMode {
  /// Iterate until the measured residual drops to eps^t.
  residual_check,
  /// Apply the map exactly N^t times per outer step.
  fixed_budget,
};

struct SolverConfig {
  /// Defaults to 1/(2L).
  std::optional<double> eta;
  /// Requested step sizes above 1/(2L) are reduced to 1/(2L) when set.
  bool clamp_eta = true;
  ToleranceSchedule tolerance = inverse_square_schedule();
  std::size_t outer_iterations = 100;
  InnerMode inner_mode = InnerMode::residual_check;
  /// Defaults to the center of every domain (uniform strategies on simplices).
  std::optional<JointPoint> initial_point;
  /// Residual mode only; defaults to 10 x compute_inner_budget(eps^t).
  std::optional<std::size_t> max_inner;
  /// Fixed-budget mode only; replaces N^t when set.
  std::optional<std::size_t> forced_inner_budget;
};

struct StepSize {
  double requested = 0.0;
  double effective = 0.0;
  bool clamped() const { return effective != requested; }
};

StepSize resolve_step_size(std::optional<double> eta, double lipschitz, bool clamp);

class RunTrace;

/// The inner loop ran out of iterations before the residual met its
/// tolerance. Carries the best inner iterate and, when raised from a full
/// run, the trace of the outer steps completed so far.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, JointPoint best, double best_residual,
                   std::size_t iterations)
      : std::runtime_error(what),
        best_(std::move(best)),
        best_residual_(best_residual),
        iterations_(iterations) {}

  const JointPoint& best_iterate() const { return best_; }
  double best_residual() const { return best_residual_; }
  std::size_t iterations() const { return iterations_; }
  std::size_t outer_iteration() const { return outer_iteration_; }
  const std::shared_ptr<const RunTrace>& partial_trace() const { return partial_; }

  ConvergenceError with_context(std::size_t outer_iteration, std::shared_ptr<const RunTrace> partial) const;

 private:
  JointPoint best_;
  double best_residual_;
  std::size_t iterations_;
  std::size_t outer_iteration_ = 0;
  std::shared_ptr<const RunTrace> partial_;
};

struct InnerResult {
  /// Approximate fixed point.
  JointPoint w;
  /// prox(z_prev, eta F(w)), i.e. the next anchor.
  JointPoint image;
  /// F(w).
  BlockVector operator_value;
  std::size_t iterations = 0;
  double residual = 0.0;
  std::vector<double> residuals;
};

/// Iterates w <- prox(z_prev, eta F(w)) from w = z_prev until
/// ||w - prox(z_prev, eta F(w))|| <= epsilon. Each map application is one
/// iteration; the last one doubles as the residual check.
InnerResult inner_fixed_point(const ProximalSetup& setup, const GameSpec& spec, const JointPoint& z_prev,
                              double eta, double epsilon, std::size_t max_inner);

/// Exactly `applications` map applications from w = z_prev: w is the output
/// of application `applications - 1` and image that of the last one.
InnerResult inner_fixed_budget(const ProximalSetup& setup, const GameSpec& spec, const JointPoint& z_prev,
                               double eta, std::size_t applications);

/// N^t = ceil(1 + log2(diameter) + log2(1/epsilon)), at least 1.
std::size_t compute_inner_budget(const ProximalSetup& setup, double epsilon);

/// Conceptual prox method over the joint space. Regret is carried by the
/// approximate fixed points w^t.
RunTrace run_centralized(const ProximalSetup& setup, const GameSpec& spec, const SolverConfig& config);

/// Per-player Clairvoyant OMD: N^t synchronous rounds per outer step in
/// which every player takes an OMD step anchored at its own z_i^{t-1} with
/// the gradient at the previous round's profile.
RunTrace run_decentralized(const ProximalSetup& setup, const GameSpec& spec, const SolverConfig& config);

/// Clairvoyant MWU: the decentralized dynamics on simplices with the
/// closed-form multiplicative update.
RunTrace run_cmwu(const NormalFormGame& game, const SolverConfig& config);

/// w[a] proportional to center[a] * exp(eta * utility_gradient[a]).
Vector clairvoyant_mwu_update(std::span<const double> center, std::span<const double> utility_gradient,
                              double eta);

}  // namespace cpm
