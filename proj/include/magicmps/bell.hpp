#pragma once

#include "magicmps/pauli_vector.hpp"

namespace magicmps {

struct BellOptions {
  TruncationPolicy pauli_policy;  // Pauli vector build
  TruncationPolicy p2_policy;     // order-2 replica
  TruncationPolicy q_policy;      // XOR self-convolution
  SvdBackend backend = SvdBackend::Auto;
};

struct BellResult {
  double b_additive = 0.0;
  double b = 0.0;
  double contraction_value = 0.0;  // <Q| Lambda^N |Q>
  double build_error = 0.0;
  double p2_error = 0.0;
  double q_error = 0.0;
  std::size_t max_bond = 1;
};

/// Additive Bell magic: XOR self-convolution of the order-2 replica,
/// contracted against the per-site commutation sign matrix.
BellResult bell_magic(const MatrixProductState& psi, const BellOptions& opt);
BellResult bell_magic_from_vector(const PauliVector& pv, const BellOptions& opt);

/// The convolution vector |Q> itself (amplitudes sum the products of
/// replica amplitudes over all XOR decompositions of each code).
CompressResult xor_self_convolution(const MatrixProductState& p2, const TruncationPolicy& policy,
                                    SvdBackend backend = SvdBackend::Auto);

}  // namespace magicmps
