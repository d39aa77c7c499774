#pragma once

#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "magicmps/common.hpp"

namespace magicmps {

using MatC = Eigen::Matrix<cx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using VecR = Eigen::VectorXd;

/// Dense complex tensor with a fixed row-major layout. Immutable by
/// convention after construction: operations return new tensors.
class DenseTensor {
 public:
  DenseTensor() = default;

  explicit DenseTensor(std::vector<std::size_t> shape);
  DenseTensor(std::vector<std::size_t> shape, std::vector<cx> data);

  static DenseTensor identity(std::size_t n);
  static DenseTensor from_matrix(const MatC& m);

  std::size_t rank() const { return shape_.size(); }
  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t dim(std::size_t i) const { return shape_.at(i); }
  std::size_t size() const { return data_.size(); }

  const std::vector<cx>& data() const { return data_; }
  std::vector<cx>& data() { return data_; }

  cx& at(std::initializer_list<std::size_t> idx) { return data_[offset(idx)]; }
  cx at(std::initializer_list<std::size_t> idx) const { return data_[offset(idx)]; }

  /// Row-major reinterpretation; element count must match.
  DenseTensor reshaped(std::vector<std::size_t> new_shape) const;

  /// New tensor with axes reordered so that axis k of the result is
  /// axis perm[k] of the input.
  DenseTensor permuted(const std::vector<std::size_t>& perm) const;

  DenseTensor conjugated() const;
  DenseTensor scaled(cx factor) const;

  double norm() const;

  /// View as a rows x cols matrix where rows = product of the first
  /// `row_axes` dimensions.
  Eigen::Map<const MatC> as_matrix(std::size_t row_axes) const;
  Eigen::Map<MatC> as_matrix(std::size_t row_axes);

 private:
  std::size_t offset(std::initializer_list<std::size_t> idx) const;

  std::vector<std::size_t> shape_;
  std::vector<cx> data_;
};

/// Contracts the index pairs (axis of a, axis of b); the result carries
/// the unpaired indices of a followed by the unpaired indices of b.
DenseTensor contract(const DenseTensor& a, const DenseTensor& b,
                     const std::vector<std::pair<std::size_t, std::size_t>>& pairs);

/// Kronecker product of two matrices given as rank-2 tensors.
MatC kron(const MatC& a, const MatC& b);

}  // namespace magicmps
