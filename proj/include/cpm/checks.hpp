#pragma once

#include <cstddef>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "cpm/games.hpp"
#include "cpm/proximal.hpp"
#include "cpm/trace.hpp"

namespace cpm {

/// Outcome of one numeric property check. `worst` is the largest observed
/// violation margin (observed minus allowed); negative means slack.
struct CheckResult {
  std::string name;
  bool passed = true;
  double worst = -std::numeric_limits<double>::infinity();
  std::size_t samples = 0;
  std::string detail;
};

/// Sampled ||F(z)||_* <= B and ||F(z) - F(z')||_* <= L ||z - z'||.
CheckResult check_gradient_bound(const ProximalSetup& setup, const GameSpec& spec, std::size_t samples,
                                 std::mt19937_64& rng, double tol = 1e-9);
CheckResult check_lipschitz_bound(const ProximalSetup& setup, const GameSpec& spec, std::size_t samples,
                                  std::mt19937_64& rng, double tol = 1e-9);

/// ||prox(z, g) - prox(z, g')|| <= ||eta (g - g')||_* on random tuples.
CheckResult check_prox_lipschitz(const ProximalSetup& setup, std::size_t samples, std::mt19937_64& rng,
                                 double tol = 1e-9);

/// D(x||p) - D(x||z) + D(p||z) <= <eta g, x - p> with p = prox(z, eta g).
CheckResult check_three_point(const ProximalSetup& setup, std::size_t samples, std::mt19937_64& rng,
                              double tol = 1e-9);

/// D(x||x') >= 1/2 ||x - x'||^2 in each block norm.
CheckResult check_strong_convexity(const ProximalSetup& setup, std::size_t samples, std::mt19937_64& rng,
                                   double tol = 1e-9);

/// The map w -> prox(z, eta F(w)) has sampled Lipschitz ratio <= eta L and
/// strictly below 1.
CheckResult check_map_contraction(const ProximalSetup& setup, const GameSpec& spec, double eta,
                                  std::size_t samples, std::mt19937_64& rng, double tol = 1e-9);

/// Consecutive inner residuals satisfy r_{k+1} <= modulus * r_k + tol
/// whenever r_k > floor. Fails outright if modulus >= 1.
CheckResult check_residual_contraction(const RunTrace& trace, double modulus, double tol = 1e-9,
                                       double floor = 0.0);

/// Inner iterations never exceed log2(diameter) + log2(1/eps^t) + 1.
CheckResult check_inner_budget(const RunTrace& trace, const ProximalSetup& setup);

/// Every step's residual is within its tolerance eps^t.
CheckResult check_residual_tolerance(const RunTrace& trace, double tol = 0.0);

/// Per-player one-step inequality
///   eta <grad_i u_i(w^t), x - w_i^t> <= -D_i(x||z_i^t) + D_i(x||z_i^{t-1})
///                                       - D_i(z_i^t||z_i^{t-1}) + eta B eps^t
/// for random comparators x (half of them extreme points).
CheckResult check_per_iteration_inequality(const RunTrace& trace, const ProximalSetup& setup,
                                           double gradient_bound, std::size_t comparators,
                                           std::mt19937_64& rng, double tol = 1e-7);

/// Reg_i^T <= (1/eta) max_x D_i(x||z_i^0) + B sum_{t<=T} eps^t at every horizon.
CheckResult check_regret_bound(const RunTrace& trace, const ProximalSetup& setup, double gradient_bound,
                               double tol = 1e-6);

/// The bound used by check_regret_bound for one player at one horizon.
double regret_bound(const RunTrace& trace, const ProximalSetup& setup, double gradient_bound,
                    std::size_t player, std::size_t horizon);

}  // namespace cpm
