#pragma once

#include "magicmps/compress.hpp"
#include "magicmps/mps.hpp"
#include "magicmps/pauli_string.hpp"

namespace magicmps {

/// Pauli-basis MPS of a pure qubit state: physical dimension 4, one index
/// value per Pauli code, amplitude <psi|P_code|psi> / sqrt(2^N). Real
/// amplitudes, unit norm when built from a normalized state.
struct PauliVector {
  MatrixProductState mps;
  std::size_t source_n = 0;
  double build_truncation_error = 0.0;
};

/// Replica vector: amplitudes are the n-th powers of the Pauli
/// expectations over sqrt(2^{Nn}); order 1 is the Pauli vector itself.
struct ReplicaVector {
  MatrixProductState mps;
  std::size_t order_n = 1;
};

/// Builds the Pauli vector by folding each site tensor with its conjugate
/// against the four Pauli matrices, truncating on the fly. The input must
/// be normalized; the exact construction has bond chi^2 and stays
/// right-normalized, so the fused truncation sweep is globally optimal.
PauliVector build_pauli_vector(const MatrixProductState& psi, const TruncationPolicy& policy,
                               SvdBackend backend = SvdBackend::Auto);

/// <code|v> for a physical-dimension-4 MPS.
cx pauli_amplitude(const MatrixProductState& v, const PauliString& code);

/// <psi|P_code|psi> recovered from the Pauli vector.
double pauli_expectation(const PauliVector& pv, const PauliString& code);

/// Diagonal operator in the Pauli basis whose diagonal is the given
/// vector's amplitudes.
MatrixProductOperator build_diagonal_w(const PauliVector& p);

/// Applies diag(w) to target without materializing the rank-4 tensors:
/// zip-up with per-site truncation, then an opposite compression sweep
/// (or a density-matrix compression when dm_compress is set). Result has
/// its orthogonality center at site 0 unless dm_compress.
CompressResult apply_diagonal_vector(const MatrixProductState& w,
                                     const MatrixProductState& target,
                                     const TruncationPolicy& policy,
                                     SvdBackend backend = SvdBackend::Auto,
                                     bool dm_compress = false);

struct SreOptions {
  TruncationPolicy pauli_policy;    // bond cap for the Pauli vector build
  TruncationPolicy replica_policy;  // bond cap for the replica chain
  double abort_error = std::numeric_limits<double>::infinity();
  SvdBackend backend = SvdBackend::Auto;
};

struct SreResult {
  double m_n = 0.0;
  double build_error = 0.0;
  std::vector<double> apply_errors;  // one entry per W application
  std::size_t max_bond = 1;
};

/// Stabilizer Renyi entropy M_n (bits) for integer n >= 2 through n-1
/// sequential applications of the diagonal operator followed by a norm.
SreResult replica_sre(const MatrixProductState& psi, std::size_t n, const SreOptions& opt);

/// Same, starting from an already-built Pauli vector.
SreResult replica_sre_from_vector(const PauliVector& pv, std::size_t n, const SreOptions& opt);

/// a * ca + b * cb as an MPS direct sum (bond is the sum of bonds).
MatrixProductState mps_add(const MatrixProductState& a, const MatrixProductState& b, cx ca,
                           cx cb);

}  // namespace magicmps
