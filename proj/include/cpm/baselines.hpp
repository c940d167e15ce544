#pragma once

#include <cstddef>
#include <optional>

#include "cpm/games.hpp"
#include "cpm/proximal.hpp"
#include "cpm/trace.hpp"

namespace cpm {

enum class LearnerKind { mwu, optimistic_mwu, mirror_prox };

struct BaselineConfig {
  LearnerKind learner = LearnerKind::mwu;
  /// Defaults to 1/(2L). Mirror Prox clamps to 1/(2L); the others accept any
  /// positive value.
  std::optional<double> eta;
  std::size_t horizon = 100;
  std::optional<JointPoint> initial_point;
};

/// Online mirror descent (MWU on simplices): play z^{t-1}, then
/// z^t = prox(z^{t-1}, eta F(z^{t-1})).
RunTrace run_mwu(const ProximalSetup& setup, const GameSpec& spec, const BaselineConfig& config);

/// Optimistic OMD with the previous gradient as prediction:
///   x^t = prox(y^{t-1}, eta m^t),  y^t = prox(y^{t-1}, eta F(x^t)),
/// with m^1 = 0 and m^{t+1} = F(x^t). x^t is played.
RunTrace run_optimistic_mwu(const ProximalSetup& setup, const GameSpec& spec, const BaselineConfig& config);

/// w^t = prox(z^{t-1}, eta F(z^{t-1})), z^t = prox(z^{t-1}, eta F(w^t)).
RunTrace run_mirror_prox(const ProximalSetup& setup, const GameSpec& spec, const BaselineConfig& config);

RunTrace run_baseline(const ProximalSetup& setup, const GameSpec& spec, const BaselineConfig& config);

}  // namespace cpm
