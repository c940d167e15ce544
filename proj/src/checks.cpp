#include "cpm/checks.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cpm {

namespace {

void record(CheckResult& r, double margin) {
  ++r.samples;
  r.worst = std::max(r.worst, margin);
  if (margin > 0.0) r.passed = false;
}

std::string summarize(const CheckResult& r) {
  std::ostringstream os;
  os.precision(3);
  os << r.samples << " samples, worst margin " << std::scientific << r.worst;
  return os.str();
}

CheckResult finish(CheckResult r) {
  if (r.detail.empty()) r.detail = summarize(r);
  return r;
}

// Random point, with a quarter of the draws on extreme points.
JointPoint mixed_sample(const std::vector<Domain>& domains, std::mt19937_64& rng) {
  std::bernoulli_distribution extreme(0.25);
  std::vector<Vector> blocks;
  for (const auto& d : domains) blocks.push_back(extreme(rng) ? sample_extreme_point(d, rng) : sample_point(d, rng));
  return JointPoint(blocks);
}

BlockVector random_direction(const std::vector<std::size_t>& dims, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> exponent(-2.0, 1.0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double scale = std::pow(10.0, exponent(rng));
  BlockVector g = BlockVector::zeros(dims);
  for (auto& v : g.flat()) v = scale * unit(rng);
  return g;
}

double sum_tolerances(const RunTrace& trace, std::size_t horizon) {
  double s = 0.0;
  for (std::size_t t = 1; t <= horizon; ++t) s += trace.step(t).epsilon;
  return s;
}

}  // namespace

CheckResult check_gradient_bound(const ProximalSetup& setup, const GameSpec& spec, std::size_t samples,
                                 std::mt19937_64& rng, double tol) {
  CheckResult r;
  r.name = "gradient bound B";
  const auto domains = setup.domains();
  for (std::size_t s = 0; s < samples; ++s) {
    const JointPoint z = mixed_sample(domains, rng);
    record(r, dual_norm(setup, operator_F(spec, z)) - spec.gradient_bound - tol);
  }
  return finish(r);
}

CheckResult check_lipschitz_bound(const ProximalSetup& setup, const GameSpec& spec, std::size_t samples,
                                  std::mt19937_64& rng, double tol) {
  CheckResult r;
  r.name = "Lipschitz bound L";
  const auto domains = setup.domains();
  for (std::size_t s = 0; s < samples; ++s) {
    const JointPoint z = mixed_sample(domains, rng);
    const JointPoint zp = mixed_sample(domains, rng);
    const double dz = primal_norm(setup, z - zp);
    if (dz <= 1e-12) continue;
    const double df = dual_norm(setup, operator_F(spec, z) - operator_F(spec, zp));
    record(r, df - spec.lipschitz * dz - tol);
  }
  return finish(r);
}

CheckResult check_prox_lipschitz(const ProximalSetup& setup, std::size_t samples, std::mt19937_64& rng,
                                 double tol) {
  CheckResult r;
  r.name = "prox 1-Lipschitz";
  const auto domains = setup.domains();
  const auto dims = setup.dimensions();
  std::uniform_real_distribution<double> step(0.1, 2.0);
  for (std::size_t s = 0; s < samples; ++s) {
    const JointPoint z = sample_point(domains, rng);
    const BlockVector g = random_direction(dims, rng);
    const BlockVector gp = random_direction(dims, rng);
    const double eta = step(rng);
    const double lhs = primal_norm(setup, prox(setup, z, g, eta) - prox(setup, z, gp, eta));
    const double rhs = dual_norm(setup, eta * (g - gp));
    record(r, lhs - rhs - tol);
  }
  return finish(r);
}

CheckResult check_three_point(const ProximalSetup& setup, std::size_t samples, std::mt19937_64& rng, double tol) {
  CheckResult r;
  r.name = "three-point inequality";
  const auto domains = setup.domains();
  const auto dims = setup.dimensions();
  std::uniform_real_distribution<double> step(0.1, 2.0);
  for (std::size_t s = 0; s < samples; ++s) {
    const JointPoint z = sample_point(domains, rng);
    const BlockVector g = random_direction(dims, rng);
    const double eta = step(rng);
    const JointPoint p = prox(setup, z, g, eta);
    const JointPoint x = mixed_sample(domains, rng);
    const double lhs = divergence(setup, x, p) - divergence(setup, x, z) + divergence(setup, p, z);
    const double rhs = eta * dot(g, x - p);
    record(r, lhs - rhs - tol);
  }
  return finish(r);
}

CheckResult check_strong_convexity(const ProximalSetup& setup, std::size_t samples, std::mt19937_64& rng,
                                   double tol) {
  CheckResult r;
  r.name = "1-strong convexity";
  for (std::size_t s = 0; s < samples; ++s) {
    for (const auto& reg : setup.regularizers()) {
      std::bernoulli_distribution extreme(0.25);
      const Vector x = extreme(rng) ? sample_extreme_point(reg.domain, rng) : sample_point(reg.domain, rng);
      const Vector c = sample_point(reg.domain, rng);
      Vector diff(x.size());
      for (std::size_t a = 0; a < x.size(); ++a) diff[a] = x[a] - c[a];
      const double nrm = block_norm(reg, diff);
      record(r, 0.5 * nrm * nrm - divergence(reg, x, c) - tol);
    }
  }
  return finish(r);
}

CheckResult check_map_contraction(const ProximalSetup& setup, const GameSpec& spec, double eta,
                                  std::size_t samples, std::mt19937_64& rng, double tol) {
  CheckResult r;
  r.name = "fixed-point map contraction (sampled)";
  const auto domains = setup.domains();
  const double modulus = eta * spec.lipschitz;
  double worst_ratio = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const JointPoint z = sample_point(domains, rng);
    const JointPoint w = sample_point(domains, rng);
    const JointPoint wp = sample_point(domains, rng);
    const double dw = primal_norm(setup, w - wp);
    if (dw <= 1e-12) continue;
    const double dmap =
        primal_norm(setup, prox(setup, z, operator_F(spec, w), eta) - prox(setup, z, operator_F(spec, wp), eta));
    const double ratio = dmap / dw;
    worst_ratio = std::max(worst_ratio, ratio);
    record(r, std::max(ratio - modulus - tol, ratio - 1.0 + 1e-12));
  }
  std::ostringstream os;
  os << r.samples << " pairs, eta*L = " << modulus << ", worst ratio " << worst_ratio;
  r.detail = os.str();
  return finish(r);
}

CheckResult check_residual_contraction(const RunTrace& trace, double modulus, double tol, double floor) {
  CheckResult r;
  r.name = "inner residual contraction";
  double worst_ratio = 0.0;
  for (const auto& step : trace.steps()) {
    const auto& res = step.inner_residuals;
    for (std::size_t k = 0; k + 1 < res.size(); ++k) {
      if (res[k] <= floor) continue;
      worst_ratio = std::max(worst_ratio, res[k + 1] / res[k]);
      record(r, res[k + 1] - modulus * res[k] - tol);
    }
  }
  std::ostringstream os;
  os << r.samples << " consecutive pairs, modulus " << modulus << ", worst ratio " << worst_ratio;
  r.detail = os.str();
  if (!(modulus < 1.0)) {
    r.passed = false;
    r.detail += "; eta*L >= 1 so the map is not guaranteed to contract";
  }
  return finish(r);
}

CheckResult check_inner_budget(const RunTrace& trace, const ProximalSetup& setup) {
  CheckResult r;
  r.name = "inner iteration count";
  const double diameter = domain_diameter(setup);
  for (const auto& step : trace.steps()) {
    const double allowed =
        (diameter > 0.0 ? std::log2(diameter) : 0.0) + std::log2(1.0 / step.epsilon) + 1.0;
    record(r, double(step.inner_iterations) - std::max(allowed, 1.0));
  }
  return finish(r);
}

CheckResult check_residual_tolerance(const RunTrace& trace, double tol) {
  CheckResult r;
  r.name = "residual within tolerance";
  for (const auto& step : trace.steps()) record(r, step.residual - step.epsilon - tol);
  return finish(r);
}

CheckResult check_per_iteration_inequality(const RunTrace& trace, const ProximalSetup& setup,
                                           double gradient_bound, std::size_t comparators,
                                           std::mt19937_64& rng, double tol) {
  CheckResult r;
  r.name = "per-iteration inequality";
  const double eta = trace.eta();
  const JointPoint* prev = &trace.initial_point();
  for (const auto& step : trace.steps()) {
    for (std::size_t i = 0; i < setup.num_players(); ++i) {
      const auto& reg = setup.regularizer(i);
      const auto zi = step.z.block(i);
      const auto zprev = prev->block(i);
      const auto wi = step.w.block(i);
      const auto gi = step.utility_gradient.block(i);
      const double anchor_move = divergence(reg, zi, zprev);
      for (std::size_t c = 0; c < comparators; ++c) {
        const Vector x = c % 2 == 0 ? sample_extreme_point(reg.domain, rng) : sample_point(reg.domain, rng);
        double lin = 0.0;
        for (std::size_t a = 0; a < x.size(); ++a) lin += gi[a] * (x[a] - wi[a]);
        const double rhs = -divergence(reg, x, zi) + divergence(reg, x, zprev) - anchor_move +
                           eta * gradient_bound * step.epsilon;
        record(r, eta * lin - rhs - tol);
      }
    }
    prev = &step.z;
  }
  return finish(r);
}

double regret_bound(const RunTrace& trace, const ProximalSetup& setup, double gradient_bound,
                    std::size_t player, std::size_t horizon) {
  const double range = divergence_range(setup.regularizer(player), trace.initial_point().block(player));
  return range / trace.eta() + gradient_bound * sum_tolerances(trace, horizon);
}

CheckResult check_regret_bound(const RunTrace& trace, const ProximalSetup& setup, double gradient_bound,
                               double tol) {
  CheckResult r;
  r.name = "telescoped regret bound";
  std::vector<double> ranges;
  for (std::size_t i = 0; i < setup.num_players(); ++i) {
    ranges.push_back(divergence_range(setup.regularizer(i), trace.initial_point().block(i)));
  }
  double eps_sum = 0.0;
  for (std::size_t t = 1; t <= trace.size(); ++t) {
    eps_sum += trace.step(t).epsilon;
    for (std::size_t i = 0; i < setup.num_players(); ++i) {
      const double reg_value =
          support(trace.domains()[i], trace.cumulative_gradient(i, t)) - trace.cumulative_value(i, t);
      record(r, reg_value - (ranges[i] / trace.eta() + gradient_bound * eps_sum) - tol);
    }
  }
  return finish(r);
}

}  // namespace cpm
