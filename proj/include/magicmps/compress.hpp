#pragma once

#include "magicmps/mps.hpp"

namespace magicmps {

struct CompressResult {
  MatrixProductState psi;
  double truncation_error = 0.0;  // accumulated relative discarded weight
};

/// One-sided SVD truncation sweeps. Preconditions on the orthogonality
/// center are enforced by canonicalizing if needed.
double sweep_truncate_left_to_right(MatrixProductState& psi, const TruncationPolicy& policy,
                                    SvdBackend backend = SvdBackend::Accurate);
double sweep_truncate_right_to_left(MatrixProductState& psi, const TruncationPolicy& policy,
                                    SvdBackend backend = SvdBackend::Accurate);

/// SVD compression: right-canonicalize, then truncate bonds while moving
/// the center to the right end.
CompressResult compress_svd(const MatrixProductState& psi, const TruncationPolicy& policy);

/// Density-matrix compression: projects each block onto the dominant
/// eigenvectors of the block density matrix built with the exact
/// environment of the input state.
CompressResult compress_density_matrix(const MatrixProductState& psi,
                                       const TruncationPolicy& policy);

enum class ApplyMethod {
  ZipUp,           // truncate while contracting, then one opposite sweep
  ZipUpThenDM,     // near-exact zip-up followed by density-matrix compression
};

/// W|psi> with compression; the reported error accumulates all truncations.
CompressResult apply_mpo(const MatrixProductOperator& w, const MatrixProductState& psi,
                         const TruncationPolicy& policy,
                         ApplyMethod method = ApplyMethod::ZipUp,
                         SvdBackend backend = SvdBackend::Accurate);

}  // namespace magicmps
