#include "magicmps/dense_tensor.hpp"

#include <algorithm>
#include <numeric>

namespace magicmps {

namespace {

std::size_t product(const std::vector<std::size_t>& v) {
  std::size_t p = 1;
  for (std::size_t d : v) p *= d;
  return p;
}

std::vector<std::size_t> row_major_strides(const std::vector<std::size_t>& shape) {
  std::vector<std::size_t> strides(shape.size(), 1);
  for (std::size_t i = shape.size(); i-- > 1;) strides[i - 1] = strides[i] * shape[i];
  return strides;
}

}  // namespace

DenseTensor::DenseTensor(std::vector<std::size_t> shape)
    : shape_(std::move(shape)), data_(product(shape_), cx(0.0, 0.0)) {
  for (std::size_t d : shape_)
    if (d < 1) throw ConfigError("DenseTensor: all dimensions must be >= 1");
}

DenseTensor::DenseTensor(std::vector<std::size_t> shape, std::vector<cx> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  for (std::size_t d : shape_)
    if (d < 1) throw ConfigError("DenseTensor: all dimensions must be >= 1");
  if (product(shape_) != data_.size())
    throw ConfigError("DenseTensor: data size does not match shape");
}

DenseTensor DenseTensor::identity(std::size_t n) {
  DenseTensor t({n, n});
  for (std::size_t i = 0; i < n; ++i) t.data_[i * n + i] = 1.0;
  return t;
}

DenseTensor DenseTensor::from_matrix(const MatC& m) {
  DenseTensor t({static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())});
  Eigen::Map<MatC>(t.data_.data(), m.rows(), m.cols()) = m;
  return t;
}

std::size_t DenseTensor::offset(std::initializer_list<std::size_t> idx) const {
  if (idx.size() != shape_.size()) throw ConfigError("DenseTensor: wrong index rank");
  std::size_t off = 0;
  std::size_t axis = 0;
  for (std::size_t i : idx) {
    off = off * shape_[axis] + i;
    ++axis;
  }
  return off;
}

DenseTensor DenseTensor::reshaped(std::vector<std::size_t> new_shape) const {
  if (product(new_shape) != data_.size())
    throw ConfigError("DenseTensor::reshaped: element count mismatch");
  DenseTensor t;
  t.shape_ = std::move(new_shape);
  t.data_ = data_;
  return t;
}

DenseTensor DenseTensor::permuted(const std::vector<std::size_t>& perm) const {
  if (perm.size() != shape_.size()) throw ConfigError("DenseTensor::permuted: bad permutation");
  std::vector<std::size_t> new_shape(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) new_shape[k] = shape_[perm[k]];

  DenseTensor out(new_shape);
  const auto in_strides = row_major_strides(shape_);
  std::vector<std::size_t> out_strides_in(perm.size());  // stride in input per output axis
  for (std::size_t k = 0; k < perm.size(); ++k) out_strides_in[k] = in_strides[perm[k]];

  const std::size_t n = data_.size();
  const std::size_t r = new_shape.size();
  std::vector<std::size_t> idx(r, 0);
  std::size_t in_off = 0;
  for (std::size_t o = 0; o < n; ++o) {
    out.data_[o] = data_[in_off];
    // advance multi-index in output order, tracking the input offset
    for (std::size_t k = r; k-- > 0;) {
      ++idx[k];
      in_off += out_strides_in[k];
      if (idx[k] < new_shape[k]) break;
      in_off -= out_strides_in[k] * new_shape[k];
      idx[k] = 0;
    }
  }
  return out;
}

DenseTensor DenseTensor::conjugated() const {
  DenseTensor t = *this;
  for (cx& v : t.data_) v = std::conj(v);
  return t;
}

DenseTensor DenseTensor::scaled(cx factor) const {
  DenseTensor t = *this;
  for (cx& v : t.data_) v *= factor;
  return t;
}

double DenseTensor::norm() const {
  double s = 0.0;
  for (const cx& v : data_) s += std::norm(v);
  return std::sqrt(s);
}

Eigen::Map<const MatC> DenseTensor::as_matrix(std::size_t row_axes) const {
  std::size_t rows = 1, cols = 1;
  for (std::size_t i = 0; i < shape_.size(); ++i) (i < row_axes ? rows : cols) *= shape_[i];
  return {data_.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols)};
}

Eigen::Map<MatC> DenseTensor::as_matrix(std::size_t row_axes) {
  std::size_t rows = 1, cols = 1;
  for (std::size_t i = 0; i < shape_.size(); ++i) (i < row_axes ? rows : cols) *= shape_[i];
  return {data_.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols)};
}

DenseTensor contract(const DenseTensor& a, const DenseTensor& b,
                     const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  std::vector<bool> a_contracted(a.rank(), false), b_contracted(b.rank(), false);
  std::size_t k = 1;
  for (auto [ia, ib] : pairs) {
    if (ia >= a.rank() || ib >= b.rank()) throw ConfigError("contract: axis out of range");
    if (a_contracted[ia] || b_contracted[ib]) throw ConfigError("contract: repeated axis");
    if (a.dim(ia) != b.dim(ib)) throw ConfigError("contract: paired dimensions differ");
    a_contracted[ia] = true;
    b_contracted[ib] = true;
    k *= a.dim(ia);
  }

  std::vector<std::size_t> a_perm, b_perm, out_shape;
  for (std::size_t i = 0; i < a.rank(); ++i)
    if (!a_contracted[i]) {
      a_perm.push_back(i);
      out_shape.push_back(a.dim(i));
    }
  for (auto [ia, ib] : pairs) a_perm.push_back(ia);
  for (auto [ia, ib] : pairs) b_perm.push_back(ib);
  for (std::size_t i = 0; i < b.rank(); ++i)
    if (!b_contracted[i]) {
      b_perm.push_back(i);
      out_shape.push_back(b.dim(i));
    }

  DenseTensor ap = a.permuted(a_perm);
  DenseTensor bp = b.permuted(b_perm);
  const std::size_t m = a.size() / k;
  const std::size_t n = b.size() / k;

  if (out_shape.empty()) {
    // full contraction to a scalar, kept as a rank-1 singleton
    cx value = (ap.as_matrix(a.rank() - pairs.size()) * bp.as_matrix(pairs.size()))(0, 0);
    return DenseTensor({1}, {value});
  }
  DenseTensor out(out_shape);
  Eigen::Map<MatC>(out.data().data(), m, n) =
      ap.as_matrix(a.rank() - pairs.size()) * bp.as_matrix(pairs.size());
  return out;
}

MatC kron(const MatC& a, const MatC& b) {
  MatC out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace magicmps
