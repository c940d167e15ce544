#include "cpm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cpm {

namespace {

constexpr double kProbabilityFloor = 1e-300;

double checked_tolerance(const ToleranceSchedule& schedule, std::size_t t) {
  const double eps = schedule(t);
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument("tolerance schedule must be positive and finite; got " + std::to_string(eps) +
                                " at t = " + std::to_string(t));
  }
  return eps;
}

void check_compatible(const ProximalSetup& setup, const GameSpec& spec) {
  if (setup.dimensions() != spec.dimensions()) {
    throw ShapeError("proximal setup and game have different player dimensions");
  }
  if (!spec.gradient) throw std::invalid_argument("game spec has no gradient oracle");
  if (!(spec.lipschitz > 0.0)) throw std::invalid_argument("game spec must report L > 0");
}

JointPoint initial_point(const ProximalSetup& setup, const SolverConfig& config) {
  const auto domains = setup.domains();
  if (!config.initial_point) return center_point(domains);
  const JointPoint& z0 = *config.initial_point;
  if (z0.dims() != setup.dimensions()) throw ShapeError("initial point has the wrong shape");
  for (std::size_t i = 0; i < domains.size(); ++i) {
    if (!contains(domains[i], z0.block(i))) {
      throw std::invalid_argument("initial point block " + std::to_string(i) + " is infeasible");
    }
    if (setup.regularizer(i).kind == RegularizerKind::negative_entropy) {
      for (double v : z0.block(i)) {
        if (!(v > 0.0)) throw std::invalid_argument("entropy players need an interior initial point");
      }
    }
  }
  return z0;
}

BlockVector negated(BlockVector v) {
  for (auto& x : v.flat()) x = -x;
  return v;
}

std::size_t budget_for(const ProximalSetup& setup, const SolverConfig& config, double eps) {
  if (config.forced_inner_budget) {
    if (*config.forced_inner_budget == 0) throw std::invalid_argument("forced inner budget must be >= 1");
    return *config.forced_inner_budget;
  }
  return compute_inner_budget(setup, eps);
}

[[noreturn]] void rethrow_with_trace(const ConvergenceError& e, std::size_t t, RunTrace trace) {
  trace.set_error(e.what());
  throw e.with_context(t, std::make_shared<const RunTrace>(std::move(trace)));
}

using BlockUpdate =
    std::function<Vector(std::size_t player, std::span<const double> center, std::span<const double> grad, double eta)>;

// Synchronous per-player rounds; shared by the decentralized prox method and
// the closed-form Clairvoyant MWU.
RunTrace run_unrolled(const ProximalSetup& setup, const GameSpec& spec, const SolverConfig& config,
                      std::string name, const BlockUpdate& update) {
  check_compatible(setup, spec);
  const StepSize step = resolve_step_size(config.eta, spec.lipschitz, config.clamp_eta);
  const double eta = step.effective;
  JointPoint z = initial_point(setup, config);
  RunTrace trace(std::move(name), setup.domains(), z, step.requested, eta);
  const std::size_t n = spec.num_players();

  for (std::size_t t = 1; t <= config.outer_iterations; ++t) {
    const double eps = checked_tolerance(config.tolerance, t);
    const std::size_t rounds = budget_for(setup, config, eps);

    OuterIterate it;
    it.t = t;
    it.epsilon = eps;
    it.inner_iterations = rounds;
    it.prox_evaluations = rounds;
    JointPoint w = z;
    for (std::size_t k = 1; k <= rounds; ++k) {
      // Every player reads the same profile w from the previous round.
      BlockVector grads = BlockVector::zeros(spec.dimensions());
      for (std::size_t i = 0; i < n; ++i) grads.set_block(i, player_gradient(spec, i, w));
      JointPoint next = w;
      for (std::size_t i = 0; i < n; ++i) next.set_block(i, update(i, z.block(i), grads.block(i), eta));
      it.inner_residuals.push_back(primal_norm(setup, w - next));
      if (k == rounds) {
        it.w = w;
        it.z = next;
        it.utility_gradient = std::move(grads);
        it.residual = it.inner_residuals.back();
      }
      w = std::move(next);
    }
    z = it.z;
    trace.append(std::move(it));
  }
  return trace;
}

}  // namespace

ToleranceSchedule inverse_square_schedule() {
  return [](std::size_t t) { return 1.0 / (double(t) * double(t)); };
}

ToleranceSchedule constant_schedule(double value) {
  return [value](std::size_t) { return value; };
}

StepSize resolve_step_size(std::optional<double> eta, double lipschitz, bool clamp) {
  if (!(lipschitz > 0.0)) throw std::invalid_argument("L must be positive");
  const double cap = 1.0 / (2.0 * lipschitz);
  StepSize s;
  s.requested = eta.value_or(cap);
  if (!(s.requested > 0.0) || !std::isfinite(s.requested)) {
    throw std::invalid_argument("eta must be positive and finite");
  }
  s.effective = clamp ? std::min(s.requested, cap) : s.requested;
  return s;
}

ConvergenceError ConvergenceError::with_context(std::size_t outer_iteration,
                                                std::shared_ptr<const RunTrace> partial) const {
  ConvergenceError e(std::string("outer iteration ") + std::to_string(outer_iteration) + ": " + what(), best_,
                     best_residual_, iterations_);
  e.outer_iteration_ = outer_iteration;
  e.partial_ = std::move(partial);
  return e;
}

InnerResult inner_fixed_point(const ProximalSetup& setup, const GameSpec& spec, const JointPoint& z_prev,
                              double eta, double epsilon, std::size_t max_inner) {
  check_compatible(setup, spec);
  if (!(epsilon > 0.0)) throw std::invalid_argument("inner_fixed_point: epsilon must be positive");
  if (max_inner == 0) throw std::invalid_argument("inner_fixed_point: max_inner must be >= 1");

  InnerResult r;
  r.w = z_prev;
  r.operator_value = operator_F(spec, r.w);
  r.image = prox(setup, z_prev, r.operator_value, eta);
  r.iterations = 1;
  r.residual = primal_norm(setup, r.w - r.image);
  r.residuals.push_back(r.residual);

  JointPoint best = r.w;
  double best_residual = r.residual;
  while (r.residual > epsilon) {
    if (r.iterations >= max_inner) {
      throw ConvergenceError("fixed-point iteration did not reach residual " + std::to_string(epsilon) +
                                 " within " + std::to_string(max_inner) + " map applications (best residual " +
                                 std::to_string(best_residual) + "); eta may be too large or L underestimated",
                             best, best_residual, r.iterations);
    }
    r.w = std::move(r.image);
    r.operator_value = operator_F(spec, r.w);
    r.image = prox(setup, z_prev, r.operator_value, eta);
    ++r.iterations;
    r.residual = primal_norm(setup, r.w - r.image);
    r.residuals.push_back(r.residual);
    if (r.residual < best_residual) {
      best = r.w;
      best_residual = r.residual;
    }
  }
  return r;
}

InnerResult inner_fixed_budget(const ProximalSetup& setup, const GameSpec& spec, const JointPoint& z_prev,
                               double eta, std::size_t applications) {
  check_compatible(setup, spec);
  if (applications == 0) throw std::invalid_argument("inner_fixed_budget: need at least one application");
  InnerResult r;
  r.w = z_prev;
  for (std::size_t k = 1; k <= applications; ++k) {
    r.operator_value = operator_F(spec, r.w);
    r.image = prox(setup, z_prev, r.operator_value, eta);
    r.residuals.push_back(primal_norm(setup, r.w - r.image));
    if (k < applications) r.w = r.image;
  }
  r.iterations = applications;
  r.residual = r.residuals.back();
  return r;
}

std::size_t compute_inner_budget(const ProximalSetup& setup, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("compute_inner_budget: epsilon must be positive");
  const double diameter = domain_diameter(setup);
  if (!(diameter > 0.0)) return 1;
  const double n = 1.0 + std::log2(diameter) + std::log2(1.0 / epsilon);
  // Shave rounding noise so exact integers are not bumped up by one.
  const double rounded = std::ceil(n - 1e-12);
  return rounded < 1.0 ? 1 : std::size_t(rounded);
}

RunTrace run_centralized(const ProximalSetup& setup, const GameSpec& spec, const SolverConfig& config) {
  check_compatible(setup, spec);
  const StepSize step = resolve_step_size(config.eta, spec.lipschitz, config.clamp_eta);
  const double eta = step.effective;
  JointPoint z = initial_point(setup, config);
  const char* name = config.inner_mode == InnerMode::residual_check ? "cpm" : "cpm-budget";
  RunTrace trace(name, setup.domains(), z, step.requested, eta);

  for (std::size_t t = 1; t <= config.outer_iterations; ++t) {
    const double eps = checked_tolerance(config.tolerance, t);
    InnerResult r;
    if (config.inner_mode == InnerMode::residual_check) {
      const std::size_t cap = config.max_inner.value_or(10 * compute_inner_budget(setup, eps));
      try {
        r = inner_fixed_point(setup, spec, z, eta, eps, cap);
      } catch (const ConvergenceError& e) {
        rethrow_with_trace(e, t, std::move(trace));
      }
    } else {
      r = inner_fixed_budget(setup, spec, z, eta, budget_for(setup, config, eps));
    }

    OuterIterate it;
    it.t = t;
    it.z = std::move(r.image);
    it.w = std::move(r.w);
    it.utility_gradient = negated(std::move(r.operator_value));
    it.inner_iterations = r.iterations;
    it.prox_evaluations = r.iterations;
    it.residual = r.residual;
    it.inner_residuals = std::move(r.residuals);
    it.epsilon = eps;
    z = it.z;
    trace.append(std::move(it));
  }
  return trace;
}

RunTrace run_decentralized(const ProximalSetup& setup, const GameSpec& spec, const SolverConfig& config) {
  return run_unrolled(setup, spec, config, "cpm-decentralized",
                      [&setup](std::size_t i, std::span<const double> center, std::span<const double> grad,
                               double eta) {
                        Vector g(grad.size());
                        for (std::size_t a = 0; a < g.size(); ++a) g[a] = -grad[a];
                        return prox(setup.regularizer(i), center, g, eta);
                      });
}

Vector clairvoyant_mwu_update(std::span<const double> center, std::span<const double> utility_gradient,
                              double eta) {
  if (center.size() != utility_gradient.size()) throw ShapeError("clairvoyant_mwu_update: length mismatch");
  Vector w(center.size());
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < w.size(); ++a) {
    if (!(center[a] > 0.0)) throw std::domain_error("clairvoyant_mwu_update: center must be interior");
    if (!std::isfinite(utility_gradient[a])) throw std::invalid_argument("clairvoyant_mwu_update: non-finite gradient");
    w[a] = std::log(std::max(center[a], kProbabilityFloor)) + eta * utility_gradient[a];
    top = std::max(top, w[a]);
  }
  double sum = 0.0;
  for (auto& v : w) sum += (v = std::exp(v - top));
  for (auto& v : w) v = std::max(v / sum, kProbabilityFloor);
  return w;
}

RunTrace run_cmwu(const NormalFormGame& game, const SolverConfig& config) {
  const GameSpec spec = make_normal_form_spec(game);
  const ProximalSetup setup = ProximalSetup::for_spec(spec);
  return run_unrolled(setup, spec, config, "cmwu",
                      [](std::size_t, std::span<const double> center, std::span<const double> grad, double eta) {
                        return clairvoyant_mwu_update(center, grad, eta);
                      });
}

}  // namespace cpm
