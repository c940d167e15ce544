#include "cpm/trace.hpp"

#include <stdexcept>

namespace cpm {

RunTrace::RunTrace(std::string solver, std::vector<Domain> domains, JointPoint initial,
                   double eta_requested, double eta)
    : solver_(std::move(solver)),
      domains_(std::move(domains)),
      initial_(std::move(initial)),
      eta_requested_(eta_requested),
      eta_(eta) {
  if (initial_.num_blocks() != domains_.size()) throw ShapeError("trace: initial point does not match domains");
}

void RunTrace::append(OuterIterate step) {
  require_same_shape(step.w, initial_, "trace w");
  require_same_shape(step.z, initial_, "trace z");
  require_same_shape(step.utility_gradient, initial_, "trace gradient");
  if (step.t != steps_.size() + 1) throw std::logic_error("trace steps must be appended in order");

  BlockVector cumulative = cumulative_gradient_.empty() ? step.utility_gradient
                                                        : cumulative_gradient_.back() + step.utility_gradient;
  std::vector<double> values(num_players(), 0.0);
  for (std::size_t i = 0; i < num_players(); ++i) {
    values[i] = dot(step.utility_gradient.block(i), step.w.block(i));
    if (!cumulative_value_.empty()) values[i] += cumulative_value_.back()[i];
  }
  cumulative_gradient_.push_back(std::move(cumulative));
  cumulative_value_.push_back(std::move(values));
  steps_.push_back(std::move(step));
}

std::span<const double> RunTrace::cumulative_gradient(std::size_t player, std::size_t horizon) const {
  if (horizon == 0 || horizon > steps_.size()) throw std::out_of_range("horizon outside the trace");
  return cumulative_gradient_[horizon - 1].block(player);
}

double RunTrace::cumulative_value(std::size_t player, std::size_t horizon) const {
  if (horizon == 0 || horizon > steps_.size()) throw std::out_of_range("horizon outside the trace");
  return cumulative_value_[horizon - 1].at(player);
}

std::size_t RunTrace::total_inner_iterations() const {
  std::size_t n = 0;
  for (const auto& s : steps_) n += s.inner_iterations;
  return n;
}

std::size_t RunTrace::total_prox_evaluations() const {
  std::size_t n = 0;
  for (const auto& s : steps_) n += s.prox_evaluations;
  return n;
}

}  // namespace cpm
