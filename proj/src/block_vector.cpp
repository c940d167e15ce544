#include "cpm/block_vector.hpp"

#include <algorithm>
#include <numeric>

namespace cpm {

BlockVector::BlockVector(const std::vector<Vector>& blocks) {
  offsets_.reserve(blocks.size() + 1);
  offsets_.push_back(0);
  for (const auto& b : blocks) {
    data_.insert(data_.end(), b.begin(), b.end());
    offsets_.push_back(data_.size());
  }
}

BlockVector BlockVector::zeros(std::span<const std::size_t> dims) {
  BlockVector v;
  v.offsets_.reserve(dims.size() + 1);
  v.offsets_.push_back(0);
  std::size_t total = 0;
  for (auto d : dims) {
    total += d;
    v.offsets_.push_back(total);
  }
  v.data_.assign(total, 0.0);
  return v;
}

std::vector<std::size_t> BlockVector::dims() const {
  std::vector<std::size_t> out(num_blocks());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = block_size(i);
  return out;
}

void BlockVector::set_block(std::size_t i, std::span<const double> values) {
  auto dst = block(i);
  if (values.size() != dst.size()) {
    throw ShapeError("block " + std::to_string(i) + ": expected length " +
                     std::to_string(dst.size()) + ", got " + std::to_string(values.size()));
  }
  std::copy(values.begin(), values.end(), dst.begin());
}

void require_same_shape(const BlockVector& a, const BlockVector& b, const char* what) {
  if (!a.same_shape(b)) throw ShapeError(std::string(what) + ": block layouts differ");
}

BlockVector& BlockVector::operator+=(const BlockVector& other) {
  require_same_shape(*this, other, "operator+=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

BlockVector& BlockVector::operator-=(const BlockVector& other) {
  require_same_shape(*this, other, "operator-=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

BlockVector& BlockVector::operator*=(double scale) {
  for (auto& x : data_) x *= scale;
  return *this;
}

BlockVector operator+(BlockVector lhs, const BlockVector& rhs) { return lhs += rhs; }
BlockVector operator-(BlockVector lhs, const BlockVector& rhs) { return lhs -= rhs; }
BlockVector operator*(double scale, BlockVector v) { return v *= scale; }

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ShapeError("dot: length mismatch");
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double dot(const BlockVector& a, const BlockVector& b) {
  require_same_shape(a, b, "dot");
  return dot(a.flat(), b.flat());
}

}  // namespace cpm
