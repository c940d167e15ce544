#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <variant>

#include "cpm/block_vector.hpp"

namespace cpm {

/// Probability simplex over `dim` actions.
struct Simplex {
  std::size_t dim = 1;
};

/// Euclidean ball of the given radius centered at the origin.
struct Ball {
  std::size_t dim = 1;
  double radius = 1.0;
};

/// Axis-aligned box [lower, upper].
struct Box {
  Vector lower;
  Vector upper;
};

/// Feasible set X_i of one player.
using Domain = std::variant<Simplex, Ball, Box>;

std::size_t dimension(const Domain& domain);

/// Throws std::invalid_argument on a malformed description (zero dimension,
/// non-positive radius, inverted box).
void validate(const Domain& domain);

bool is_simplex(const Domain& domain);

/// Uniform strategy for simplices, the origin for balls, the midpoint for boxes.
Vector center_point(const Domain& domain);

/// max_{x in X} <g, x>.
double support(const Domain& domain, std::span<const double> g);

/// A maximizer of <g, x> over X (a vertex for simplices and boxes).
Vector support_argmax(const Domain& domain, std::span<const double> g);

/// Euclidean projection onto balls and boxes. Not defined for simplices.
Vector project_euclidean(const Domain& domain, std::span<const double> y);

bool contains(const Domain& domain, std::span<const double> x, double tol = 1e-9);

/// Random feasible point: flat Dirichlet on simplices, uniform on balls and
/// boxes.
Vector sample_point(const Domain& domain, std::mt19937_64& rng);

/// Random vertex/extreme point (a pure action, a point on the sphere, a box corner).
Vector sample_extreme_point(const Domain& domain, std::mt19937_64& rng);

JointPoint center_point(std::span<const Domain> domains);
JointPoint sample_point(std::span<const Domain> domains, std::mt19937_64& rng);

}  // namespace cpm
