#include "cpm/domain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cpm {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

void check_length(const Domain& domain, std::span<const double> x, const char* what) {
  if (x.size() != dimension(domain)) {
    throw ShapeError(std::string(what) + ": expected length " + std::to_string(dimension(domain)) +
                     ", got " + std::to_string(x.size()));
  }
}

}  // namespace

std::size_t dimension(const Domain& domain) {
  return std::visit(Overloaded{[](const Simplex& s) { return s.dim; },
                               [](const Ball& b) { return b.dim; },
                               [](const Box& b) { return b.lower.size(); }},
                    domain);
}

void validate(const Domain& domain) {
  std::visit(Overloaded{[](const Simplex& s) {
                          if (s.dim == 0) throw std::invalid_argument("simplex of dimension 0");
                        },
                        [](const Ball& b) {
                          if (b.dim == 0) throw std::invalid_argument("ball of dimension 0");
                          if (!(b.radius > 0.0) || !std::isfinite(b.radius)) {
                            throw std::invalid_argument("ball radius must be positive and finite");
                          }
                        },
                        [](const Box& b) {
                          if (b.lower.empty() || b.lower.size() != b.upper.size()) {
                            throw std::invalid_argument("box bounds must be nonempty and of equal length");
                          }
                          for (std::size_t k = 0; k < b.lower.size(); ++k) {
                            if (!(b.lower[k] <= b.upper[k]) || !std::isfinite(b.lower[k]) ||
                                !std::isfinite(b.upper[k])) {
                              throw std::invalid_argument("box bounds must be finite with lower <= upper");
                            }
                          }
                        }},
             domain);
}

bool is_simplex(const Domain& domain) { return std::holds_alternative<Simplex>(domain); }

Vector center_point(const Domain& domain) {
  return std::visit(Overloaded{[](const Simplex& s) { return Vector(s.dim, 1.0 / double(s.dim)); },
                               [](const Ball& b) { return Vector(b.dim, 0.0); },
                               [](const Box& b) {
                                 Vector c(b.lower.size());
                                 for (std::size_t k = 0; k < c.size(); ++k) {
                                   c[k] = 0.5 * (b.lower[k] + b.upper[k]);
                                 }
                                 return c;
                               }},
                    domain);
}

double support(const Domain& domain, std::span<const double> g) {
  check_length(domain, g, "support");
  return std::visit(Overloaded{[&](const Simplex&) { return *std::max_element(g.begin(), g.end()); },
                               [&](const Ball& b) { return b.radius * norm2(g); },
                               [&](const Box& b) {
                                 double s = 0.0;
                                 for (std::size_t k = 0; k < g.size(); ++k) {
                                   s += std::max(g[k] * b.lower[k], g[k] * b.upper[k]);
                                 }
                                 return s;
                               }},
                    domain);
}

Vector support_argmax(const Domain& domain, std::span<const double> g) {
  check_length(domain, g, "support_argmax");
  return std::visit(Overloaded{[&](const Simplex& s) {
                                 Vector x(s.dim, 0.0);
                                 x[std::size_t(std::max_element(g.begin(), g.end()) - g.begin())] = 1.0;
                                 return x;
                               },
                               [&](const Ball& b) {
                                 Vector x(b.dim, 0.0);
                                 const double n = norm2(g);
                                 if (n > 0.0) {
                                   for (std::size_t k = 0; k < x.size(); ++k) x[k] = b.radius * g[k] / n;
                                 }
                                 return x;
                               },
                               [&](const Box& b) {
                                 Vector x(b.lower.size());
                                 for (std::size_t k = 0; k < x.size(); ++k) {
                                   x[k] = g[k] >= 0.0 ? b.upper[k] : b.lower[k];
                                 }
                                 return x;
                               }},
                    domain);
}

Vector project_euclidean(const Domain& domain, std::span<const double> y) {
  check_length(domain, y, "project_euclidean");
  return std::visit(Overloaded{[&](const Simplex&) -> Vector {
                                 throw std::invalid_argument("Euclidean projection onto a simplex is not provided");
                               },
                               [&](const Ball& b) {
                                 Vector x(y.begin(), y.end());
                                 const double n = norm2(y);
                                 if (n > b.radius) {
                                   for (auto& v : x) v *= b.radius / n;
                                 }
                                 return x;
                               },
                               [&](const Box& b) {
                                 Vector x(y.size());
                                 for (std::size_t k = 0; k < x.size(); ++k) {
                                   x[k] = std::clamp(y[k], b.lower[k], b.upper[k]);
                                 }
                                 return x;
                               }},
                    domain);
}

bool contains(const Domain& domain, std::span<const double> x, double tol) {
  if (x.size() != dimension(domain)) return false;
  return std::visit(Overloaded{[&](const Simplex&) {
                                 double sum = 0.0;
                                 for (double v : x) {
                                   if (!(v >= -tol)) return false;
                                   sum += v;
                                 }
                                 return std::abs(sum - 1.0) <= tol;
                               },
                               [&](const Ball& b) { return norm2(x) <= b.radius + tol; },
                               [&](const Box& b) {
                                 for (std::size_t k = 0; k < x.size(); ++k) {
                                   if (x[k] < b.lower[k] - tol || x[k] > b.upper[k] + tol) return false;
                                 }
                                 return true;
                               }},
                    domain);
}

Vector sample_point(const Domain& domain, std::mt19937_64& rng) {
  return std::visit(Overloaded{[&](const Simplex& s) {
                                 std::exponential_distribution<double> expo(1.0);
                                 Vector x(s.dim);
                                 double sum = 0.0;
                                 for (auto& v : x) sum += (v = expo(rng));
                                 for (auto& v : x) v /= sum;
                                 return x;
                               },
                               [&](const Ball& b) {
                                 std::normal_distribution<double> normal;
                                 std::uniform_real_distribution<double> unif(0.0, 1.0);
                                 Vector x(b.dim);
                                 for (auto& v : x) v = normal(rng);
                                 const double n = norm2(x);
                                 const double r = b.radius * std::pow(unif(rng), 1.0 / double(b.dim));
                                 for (auto& v : x) v = n > 0.0 ? v * r / n : 0.0;
                                 return x;
                               },
                               [&](const Box& b) {
                                 Vector x(b.lower.size());
                                 for (std::size_t k = 0; k < x.size(); ++k) {
                                   std::uniform_real_distribution<double> unif(b.lower[k], b.upper[k]);
                                   x[k] = unif(rng);
                                 }
                                 return x;
                               }},
                    domain);
}

Vector sample_extreme_point(const Domain& domain, std::mt19937_64& rng) {
  return std::visit(Overloaded{[&](const Simplex& s) {
                                 std::uniform_int_distribution<std::size_t> pick(0, s.dim - 1);
                                 Vector x(s.dim, 0.0);
                                 x[pick(rng)] = 1.0;
                                 return x;
                               },
                               [&](const Ball& b) {
                                 std::normal_distribution<double> normal;
                                 Vector x(b.dim);
                                 for (auto& v : x) v = normal(rng);
                                 const double n = norm2(x);
                                 for (auto& v : x) v *= b.radius / n;
                                 return x;
                               },
                               [&](const Box& b) {
                                 std::bernoulli_distribution coin(0.5);
                                 Vector x(b.lower.size());
                                 for (std::size_t k = 0; k < x.size(); ++k) {
                                   x[k] = coin(rng) ? b.upper[k] : b.lower[k];
                                 }
                                 return x;
                               }},
                    domain);
}

JointPoint center_point(std::span<const Domain> domains) {
  std::vector<Vector> blocks;
  blocks.reserve(domains.size());
  for (const auto& d : domains) blocks.push_back(center_point(d));
  return JointPoint(blocks);
}

JointPoint sample_point(std::span<const Domain> domains, std::mt19937_64& rng) {
  std::vector<Vector> blocks;
  blocks.reserve(domains.size());
  for (const auto& d : domains) blocks.push_back(sample_point(d, rng));
  return JointPoint(blocks);
}

}  // namespace cpm
