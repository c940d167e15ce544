#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cpm {

using Vector = std::vector<double>;

/// Raised when vector or tensor dimensions do not line up.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A vector in R^{d_1} x ... x R^{d_n}, stored contiguously with per-player
/// offsets. Used both for joint strategy profiles and for stacked gradients.
class BlockVector {
 public:
  BlockVector() = default;
  explicit BlockVector(const std::vector<Vector>& blocks);

  static BlockVector zeros(std::span<const std::size_t> dims);

  std::size_t num_blocks() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t size() const { return data_.size(); }
  std::size_t block_size(std::size_t i) const { return offsets_.at(i + 1) - offsets_[i]; }
  std::vector<std::size_t> dims() const;

  std::span<const double> block(std::size_t i) const {
    return {data_.data() + offsets_.at(i), block_size(i)};
  }
  std::span<double> block(std::size_t i) {
    return {data_.data() + offsets_.at(i), block_size(i)};
  }
  void set_block(std::size_t i, std::span<const double> values);

  std::span<const double> flat() const { return data_; }
  std::span<double> flat() { return data_; }

  /// True when both vectors have the same block layout.
  bool same_shape(const BlockVector& other) const { return offsets_ == other.offsets_; }

  BlockVector& operator+=(const BlockVector& other);
  BlockVector& operator-=(const BlockVector& other);
  BlockVector& operator*=(double scale);

  friend bool operator==(const BlockVector&, const BlockVector&) = default;

 private:
  std::vector<double> data_;
  std::vector<std::size_t> offsets_;
};

/// A point of the joint strategy space Z = X_1 x ... x X_n.
using JointPoint = BlockVector;

BlockVector operator+(BlockVector lhs, const BlockVector& rhs);
BlockVector operator-(BlockVector lhs, const BlockVector& rhs);
BlockVector operator*(double scale, BlockVector v);

double dot(std::span<const double> a, std::span<const double> b);
double dot(const BlockVector& a, const BlockVector& b);

void require_same_shape(const BlockVector& a, const BlockVector& b, const char* what);

}  // namespace cpm
