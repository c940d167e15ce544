#include "cpm/proximal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cpm {

namespace {

constexpr double kProbabilityFloor = 1e-300;

void check_lengths(const Regularizer& reg, std::span<const double> a, std::span<const double> b,
                   const char* what) {
  if (a.size() != reg.dimension() || b.size() != reg.dimension()) {
    throw ShapeError(std::string(what) + ": expected blocks of length " +
                     std::to_string(reg.dimension()));
  }
}

double norm1(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += std::abs(v);
  return s;
}

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double norm_inf(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s = std::max(s, std::abs(v));
  return s;
}

}  // namespace

ProximalSetup::ProximalSetup(std::vector<Regularizer> per_player) : per_player_(std::move(per_player)) {
  if (per_player_.empty()) throw std::invalid_argument("proximal setup needs at least one player");
  const auto kind = per_player_.front().kind;
  for (const auto& reg : per_player_) {
    validate(reg.domain);
    if (reg.kind != kind) {
      throw std::invalid_argument(
          "mixed entropy/Euclidean setups are unsupported: no common norm pair");
    }
    if (reg.kind == RegularizerKind::negative_entropy && !is_simplex(reg.domain)) {
      throw std::invalid_argument("negative entropy requires a simplex domain");
    }
    if (reg.kind == RegularizerKind::squared_euclidean && is_simplex(reg.domain)) {
      throw std::invalid_argument("squared Euclidean regularizer is only provided for balls and boxes");
    }
  }
  norm_ = kind == RegularizerKind::negative_entropy ? NormKind::mixed_l1_linf : NormKind::euclidean;
}

ProximalSetup ProximalSetup::for_domains(std::span<const Domain> domains) {
  std::vector<Regularizer> regs;
  regs.reserve(domains.size());
  for (const auto& d : domains) {
    regs.push_back({is_simplex(d) ? RegularizerKind::negative_entropy : RegularizerKind::squared_euclidean, d});
  }
  return ProximalSetup(std::move(regs));
}

std::vector<std::size_t> ProximalSetup::dimensions() const {
  std::vector<std::size_t> dims;
  dims.reserve(per_player_.size());
  for (const auto& r : per_player_) dims.push_back(r.dimension());
  return dims;
}

std::vector<Domain> ProximalSetup::domains() const {
  std::vector<Domain> out;
  out.reserve(per_player_.size());
  for (const auto& r : per_player_) out.push_back(r.domain);
  return out;
}

double divergence(const Regularizer& reg, std::span<const double> x, std::span<const double> center) {
  check_lengths(reg, x, center, "divergence");
  double s = 0.0;
  if (reg.kind == RegularizerKind::negative_entropy) {
    // Generalized KL: each term x log(x/c) - x + c is nonnegative and the sum
    // equals KL(x || c) on the simplex.
    for (std::size_t a = 0; a < x.size(); ++a) {
      if (!(center[a] > 0.0)) {
        throw std::domain_error("entropy divergence: center has a non-positive entry at index " +
                                std::to_string(a));
      }
      const double c = std::max(center[a], kProbabilityFloor);
      const double p = x[a];
      if (p > 0.0) {
        s += p * std::log(std::max(p, kProbabilityFloor) / c) - p + c;
      } else {
        s += c;
      }
    }
  } else {
    for (std::size_t a = 0; a < x.size(); ++a) {
      const double diff = x[a] - center[a];
      s += 0.5 * diff * diff;
    }
  }
  return std::max(s, 0.0);
}

double divergence(const ProximalSetup& setup, const JointPoint& z, const JointPoint& center) {
  require_same_shape(z, center, "divergence");
  if (z.num_blocks() != setup.num_players()) throw ShapeError("divergence: wrong number of blocks");
  double s = 0.0;
  for (std::size_t i = 0; i < setup.num_players(); ++i) {
    s += divergence(setup.regularizer(i), z.block(i), center.block(i));
  }
  return s;
}

Vector prox(const Regularizer& reg, std::span<const double> center, std::span<const double> g,
            double eta) {
  check_lengths(reg, center, g, "prox");
  if (!(eta > 0.0) || !std::isfinite(eta)) throw std::invalid_argument("prox: eta must be positive and finite");
  for (double v : g) {
    if (!std::isfinite(v)) throw std::invalid_argument("prox: non-finite gradient entry");
  }
  const std::size_t d = center.size();
  if (std::all_of(g.begin(), g.end(), [](double v) { return v == 0.0; })) {
    if (reg.kind == RegularizerKind::negative_entropy) {
      for (double c : center) {
        if (!(c > 0.0)) throw std::domain_error("entropy prox: center has a non-positive entry");
      }
    }
    return Vector(center.begin(), center.end());
  }
  Vector x(d);
  if (reg.kind == RegularizerKind::negative_entropy) {
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < d; ++a) {
      if (!(center[a] > 0.0)) {
        throw std::domain_error("entropy prox: center has a non-positive entry at index " +
                                std::to_string(a));
      }
      x[a] = std::log(std::max(center[a], kProbabilityFloor)) - eta * g[a];
      top = std::max(top, x[a]);
    }
    double sum = 0.0;
    for (auto& v : x) sum += (v = std::exp(v - top));
    // Keep every entry positive so the result stays a valid prox center.
    for (auto& v : x) v = std::max(v / sum, kProbabilityFloor);
  } else {
    for (std::size_t a = 0; a < d; ++a) x[a] = center[a] - eta * g[a];
    x = project_euclidean(reg.domain, x);
  }
  return x;
}

JointPoint prox(const ProximalSetup& setup, const JointPoint& center, const BlockVector& g, double eta) {
  require_same_shape(center, g, "prox");
  if (center.num_blocks() != setup.num_players()) throw ShapeError("prox: wrong number of blocks");
  JointPoint out = center;
  for (std::size_t i = 0; i < setup.num_players(); ++i) {
    out.set_block(i, prox(setup.regularizer(i), center.block(i), g.block(i), eta));
  }
  return out;
}

double block_norm(const Regularizer& reg, std::span<const double> x) {
  return reg.kind == RegularizerKind::negative_entropy ? norm1(x) : norm2(x);
}

double block_dual_norm(const Regularizer& reg, std::span<const double> g) {
  return reg.kind == RegularizerKind::negative_entropy ? norm_inf(g) : norm2(g);
}

double primal_norm(const ProximalSetup& setup, const BlockVector& z) {
  if (z.num_blocks() != setup.num_players()) throw ShapeError("primal_norm: wrong number of blocks");
  double s = 0.0;
  for (std::size_t i = 0; i < setup.num_players(); ++i) {
    const double b = block_norm(setup.regularizer(i), z.block(i));
    s += b * b;
  }
  return std::sqrt(s);
}

double dual_norm(const ProximalSetup& setup, const BlockVector& g) {
  if (g.num_blocks() != setup.num_players()) throw ShapeError("dual_norm: wrong number of blocks");
  double s = 0.0;
  for (std::size_t i = 0; i < setup.num_players(); ++i) {
    const double b = block_dual_norm(setup.regularizer(i), g.block(i));
    s += b * b;
  }
  return std::sqrt(s);
}

double domain_diameter(const ProximalSetup& setup) {
  double s = 0.0;
  for (const auto& reg : setup.regularizers()) {
    double d = 0.0;
    if (const auto* ball = std::get_if<Ball>(&reg.domain)) {
      d = 2.0 * ball->radius;
    } else if (const auto* box = std::get_if<Box>(&reg.domain)) {
      double sq = 0.0;
      for (std::size_t k = 0; k < box->lower.size(); ++k) {
        const double w = box->upper[k] - box->lower[k];
        sq += w * w;
      }
      d = std::sqrt(sq);
    } else {
      // Two distinct vertices are at l1 distance 2; a single action has no spread.
      d = std::get<Simplex>(reg.domain).dim > 1 ? 2.0 : 0.0;
    }
    s += d * d;
  }
  return std::sqrt(s);
}

double divergence_range(const Regularizer& reg, std::span<const double> center) {
  if (center.size() != reg.dimension()) throw ShapeError("divergence_range: wrong center length");
  if (reg.kind == RegularizerKind::negative_entropy) {
    double smallest = *std::min_element(center.begin(), center.end());
    if (!(smallest > 0.0)) throw std::domain_error("divergence_range: center not in the interior");
    return -std::log(std::max(smallest, kProbabilityFloor));
  }
  if (const auto* ball = std::get_if<Ball>(&reg.domain)) {
    const double r = ball->radius + norm2(center);
    return 0.5 * r * r;
  }
  const auto& box = std::get<Box>(reg.domain);
  double s = 0.0;
  for (std::size_t k = 0; k < center.size(); ++k) {
    const double far = std::max(center[k] - box.lower[k], box.upper[k] - center[k]);
    s += 0.5 * far * far;
  }
  return s;
}

}  // namespace cpm
