#include "cpm/baselines.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cpm/solver.hpp"

namespace cpm {

namespace {

struct Prepared {
  StepSize step;
  JointPoint z0;
};

Prepared prepare(const ProximalSetup& setup, const GameSpec& spec, const BaselineConfig& config, bool clamp) {
  if (setup.dimensions() != spec.dimensions()) throw ShapeError("setup and game dimensions differ");
  Prepared p{resolve_step_size(config.eta, spec.lipschitz, clamp), {}};
  if (config.initial_point) {
    const auto domains = setup.domains();
    if (config.initial_point->dims() != setup.dimensions()) throw ShapeError("initial point has the wrong shape");
    for (std::size_t i = 0; i < domains.size(); ++i) {
      if (!contains(domains[i], config.initial_point->block(i))) {
        throw std::invalid_argument("initial point block " + std::to_string(i) + " is infeasible");
      }
    }
    p.z0 = *config.initial_point;
  } else {
    p.z0 = center_point(setup.domains());
  }
  return p;
}

BlockVector negated(BlockVector v) {
  for (auto& x : v.flat()) x = -x;
  return v;
}

OuterIterate make_step(std::size_t t, const ProximalSetup& setup, JointPoint played, JointPoint anchor,
                       const BlockVector& operator_value, std::size_t prox_evals) {
  OuterIterate it;
  it.t = t;
  it.residual = primal_norm(setup, played - anchor);
  it.inner_residuals = {it.residual};
  it.w = std::move(played);
  it.z = std::move(anchor);
  it.utility_gradient = negated(operator_value);
  it.inner_iterations = prox_evals;
  it.prox_evaluations = prox_evals;
  return it;
}

}  // namespace

RunTrace run_mwu(const ProximalSetup& setup, const GameSpec& spec, const BaselineConfig& config) {
  const Prepared p = prepare(setup, spec, config, false);
  const double eta = p.step.effective;
  RunTrace trace("mwu", setup.domains(), p.z0, p.step.requested, eta);
  JointPoint z = p.z0;
  for (std::size_t t = 1; t <= config.horizon; ++t) {
    const BlockVector f = operator_F(spec, z);
    JointPoint next = prox(setup, z, f, eta);
    trace.append(make_step(t, setup, z, next, f, 1));
    z = std::move(next);
  }
  return trace;
}

RunTrace run_optimistic_mwu(const ProximalSetup& setup, const GameSpec& spec, const BaselineConfig& config) {
  const Prepared p = prepare(setup, spec, config, false);
  const double eta = p.step.effective;
  RunTrace trace("omwu", setup.domains(), p.z0, p.step.requested, eta);
  JointPoint y = p.z0;
  BlockVector prediction = BlockVector::zeros(setup.dimensions());
  for (std::size_t t = 1; t <= config.horizon; ++t) {
    JointPoint x = prox(setup, y, prediction, eta);
    BlockVector f = operator_F(spec, x);
    JointPoint next = prox(setup, y, f, eta);
    trace.append(make_step(t, setup, x, next, f, 2));
    y = std::move(next);
    prediction = std::move(f);
  }
  return trace;
}

RunTrace run_mirror_prox(const ProximalSetup& setup, const GameSpec& spec, const BaselineConfig& config) {
  const Prepared p = prepare(setup, spec, config, true);
  const double eta = p.step.effective;
  RunTrace trace("mirror-prox", setup.domains(), p.z0, p.step.requested, eta);
  JointPoint z = p.z0;
  for (std::size_t t = 1; t <= config.horizon; ++t) {
    JointPoint w = prox(setup, z, operator_F(spec, z), eta);
    BlockVector f = operator_F(spec, w);
    JointPoint next = prox(setup, z, f, eta);
    trace.append(make_step(t, setup, w, next, f, 2));
    z = std::move(next);
  }
  return trace;
}

RunTrace run_baseline(const ProximalSetup& setup, const GameSpec& spec, const BaselineConfig& config) {
  switch (config.learner) {
    case LearnerKind::mwu:
      return run_mwu(setup, spec, config);
    case LearnerKind::optimistic_mwu:
      return run_optimistic_mwu(setup, spec, config);
    case LearnerKind::mirror_prox:
      return run_mirror_prox(setup, spec, config);
  }
  throw std::invalid_argument("unknown learner");
}

}  // namespace cpm
