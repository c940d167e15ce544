#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cpm/block_vector.hpp"
#include "cpm/domain.hpp"
#include "cpm/games.hpp"

namespace cpm {

enum class RegularizerKind {
  negative_entropy,   // simplex, 1-strongly convex w.r.t. l1
  squared_euclidean,  // ball or box, 1-strongly convex w.r.t. l2
};

/// Product norm pairing over the joint space.
enum class NormKind {
  mixed_l1_linf,  // ||z|| = sqrt(sum ||z_i||_1^2), ||g||_* = sqrt(sum ||g_i||_inf^2)
  euclidean,      // l2 / l2
};

struct Regularizer {
  RegularizerKind kind;
  Domain domain;

  std::size_t dimension() const { return cpm::dimension(domain); }
};

/// Entropy on simplex players, squared Euclidean on ball/box players. Mixing
/// the two kinds in one game is rejected: no single norm pair makes both
/// regularizers 1-strongly convex.
class ProximalSetup {
 public:
  explicit ProximalSetup(std::vector<Regularizer> per_player);
  static ProximalSetup for_domains(std::span<const Domain> domains);
  static ProximalSetup for_spec(const GameSpec& spec) { return for_domains(spec.domains); }

  std::size_t num_players() const { return per_player_.size(); }
  const Regularizer& regularizer(std::size_t i) const { return per_player_.at(i); }
  const std::vector<Regularizer>& regularizers() const { return per_player_; }
  NormKind norm_kind() const { return norm_; }
  std::vector<std::size_t> dimensions() const;
  std::vector<Domain> domains() const;

 private:
  std::vector<Regularizer> per_player_;
  NormKind norm_;
};

/// D_i(x || center). KL divergence for entropy (0 log 0 = 0), half squared
/// distance for Euclidean. Throws std::domain_error if an entropy center has a
/// zero entry where x does not.
double divergence(const Regularizer& reg, std::span<const double> x, std::span<const double> center);
double divergence(const ProximalSetup& setup, const JointPoint& z, const JointPoint& center);

/// argmin_{x in X_i} <eta g, x> + D_i(x || center).
Vector prox(const Regularizer& reg, std::span<const double> center, std::span<const double> g,
            double eta);
JointPoint prox(const ProximalSetup& setup, const JointPoint& center, const BlockVector& g, double eta);

double block_norm(const Regularizer& reg, std::span<const double> x);
double block_dual_norm(const Regularizer& reg, std::span<const double> g);

double primal_norm(const ProximalSetup& setup, const BlockVector& z);
double dual_norm(const ProximalSetup& setup, const BlockVector& g);

/// max_{z, z'} ||z - z'|| in the setup's primal norm.
double domain_diameter(const ProximalSetup& setup);

/// max_{x in X_i} D_i(x || center).
double divergence_range(const Regularizer& reg, std::span<const double> center);

}  // namespace cpm
