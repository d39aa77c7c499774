#pragma once

#include <optional>
#include <vector>

#include "magicmps/decomp.hpp"
#include "magicmps/dense_tensor.hpp"

namespace magicmps {

/// Open-boundary matrix product state. Site tensors are rank-3
/// (left bond, physical, right bond); boundary bonds have dimension 1.
/// Value semantics: operations return new states.
class MatrixProductState {
 public:
  MatrixProductState() = default;
  explicit MatrixProductState(std::vector<DenseTensor> sites);

  /// chi = 1 state from per-site vectors.
  static MatrixProductState product_state(const std::vector<std::vector<cx>>& site_vectors);

  /// Haar-ish random state: iid complex Gaussian site tensors, then
  /// right-canonicalized and normalized. Bonds are capped by chi and by
  /// the dense dimension on both sides.
  static MatrixProductState random(std::size_t n, std::size_t phys_dim, std::size_t chi, Rng& rng);

  std::size_t n_sites() const { return sites_.size(); }
  std::size_t phys_dim(std::size_t i) const { return sites_.at(i).dim(1); }
  const DenseTensor& site(std::size_t i) const { return sites_.at(i); }
  void set_site(std::size_t i, DenseTensor t);

  /// Bond dimension to the left of site i; bond 0 and bond n_sites() are 1.
  std::size_t bond_dim(std::size_t i) const;
  std::size_t max_bond() const;

  std::optional<std::size_t> ortho_center() const { return center_; }
  void set_ortho_center(std::optional<std::size_t> c) { center_ = c; }

  void check_consistent() const;

 private:
  std::vector<DenseTensor> sites_;
  std::optional<std::size_t> center_;
};

/// Open-boundary matrix product operator; rank-4 site tensors
/// (left bond, physical out, physical in, right bond).
class MatrixProductOperator {
 public:
  MatrixProductOperator() = default;
  explicit MatrixProductOperator(std::vector<DenseTensor> sites);

  static MatrixProductOperator identity(std::size_t n, std::size_t phys_dim);
  /// chi_W = 1 operator from per-site matrices.
  static MatrixProductOperator product_operator(const std::vector<MatC>& site_matrices);

  std::size_t n_sites() const { return sites_.size(); }
  std::size_t phys_dim_out(std::size_t i) const { return sites_.at(i).dim(1); }
  std::size_t phys_dim_in(std::size_t i) const { return sites_.at(i).dim(2); }
  const DenseTensor& site(std::size_t i) const { return sites_.at(i); }
  void set_site(std::size_t i, DenseTensor t);
  std::size_t bond_dim(std::size_t i) const;
  std::size_t max_bond() const;

  void check_consistent() const;

 private:
  std::vector<DenseTensor> sites_;
};

struct EntanglementSpectrum {
  std::size_t cut = 0;         // bond between sites cut-1 and cut, in [1, N-1]
  std::vector<double> values;  // nonincreasing, sum of squares = 1
};

/// Gauge the state so every site left of `center` is a left isometry and
/// every site right of it a right isometry. The represented vector is
/// unchanged; the norm stays in the center tensor. The in-place form
/// touches only the segment between the old and new centers.
void canonicalize_inplace(MatrixProductState& psi, std::size_t center);
MatrixProductState canonicalize(const MatrixProductState& psi, std::size_t center);

void scale_inplace(MatrixProductState& psi, cx factor);

/// <a|b> (a enters conjugated).
cx inner_product(const MatrixProductState& a, const MatrixProductState& b);

double norm(const MatrixProductState& psi);
MatrixProductState normalized(const MatrixProductState& psi);

/// Schmidt values across the given bond, normalized to unit square sum.
EntanglementSpectrum entanglement_spectrum(const MatrixProductState& psi, std::size_t cut);

/// -sum p log p with p the squared Schmidt values (natural log).
double von_neumann_entropy(const EntanglementSpectrum& spec);

/// Multiply one site tensor by a scalar (rescales the whole state).
MatrixProductState scaled(const MatrixProductState& psi, cx factor);

}  // namespace magicmps
