#pragma once

#include "magicmps/pauli_vector.hpp"
#include "magicmps/sample.hpp"

namespace magicmps {

struct NullityOptions {
  TruncationPolicy pauli_policy;  // Pauli vector build cap
  TruncationPolicy iter_policy;   // iterate cap
  double epsilon = 1e-8;          // norm-ratio convergence threshold
  std::size_t max_iter = 50;
  bool density_matrix = true;     // compression backend inside the iteration
  SvdBackend backend = SvdBackend::Auto;
};

struct NullityIter {
  std::size_t k = 0;
  double t_k = 0.0;   // norm of the k-th iterate, recorded before rescaling
  double nu_k = 0.0;  // N + 2 log2 t_k, a lower bound to the nullity
  std::size_t max_bond = 1;
};

struct NullityTrace {
  std::vector<NullityIter> iters;
  bool converged = false;
  std::size_t converged_at = 0;  // iteration where the norm-ratio test fired
  double build_error = 0.0;
  double residual = 0.0;     // |W g - t g| at the fixed point
  bool residual_ok = false;  // residual <= 10 * epsilon
};

struct NullityResult {
  double nu = 0.0;
  long nu_rounded = 0;
  double rounding_gap = 0.0;  // |nu - nu_rounded|, a confidence indicator
  NullityTrace trace;
  MatrixProductState fixed_point;  // normalized
  PauliVector pauli;               // the order-1 vector, for sign reads
};

/// Squaring iteration on the Pauli vector: repeatedly applies the diagonal
/// operator rebuilt from the current normalized iterate and tracks the
/// norm, whose limit encodes the stabilizer group size.
NullityResult nullity(const MatrixProductState& psi, const NullityOptions& opt);

/// Same iteration started from an arbitrary physical-dim-4 vector (used by
/// the magic gap and the spectrum-learning loops). The nu field reflects
/// the limiting norm and is only meaningful when p0 is a full Pauli vector.
NullityResult nullity_from_vector(const MatrixProductState& p0, std::size_t n_qubits,
                                  const NullityOptions& opt);

struct ExtractOptions {
  std::size_t max_samples = 0;  // 0: automatic budget
  double amplitude_tol = 0.5;   // accept sampled amplitudes within [tol, 2-tol] of ideal
};

/// Learns the stabilizer group from the converged fixed point: samples
/// codes, accumulates a GF(2) basis, reads generator signs off the Pauli
/// vector amplitudes.
StabilizerGroup extract_stabilizer_group(const NullityResult& res, std::uint64_t seed,
                                         const ExtractOptions& opt = {});

struct MagicGapResult {
  double value = 1.0;
  bool stabilizer_flagged = false;
  double nu = 0.0;
  PauliString witness;  // code attaining the largest non-unit expectation
  MagicGapResult() : witness(0) {}
};

/// 1 - |<P>| of the largest Pauli expectation strictly below one,
/// obtained by projecting the stabilizer component out of the Pauli
/// vector and rerunning the squaring iteration on the remainder.
MagicGapResult magic_gap(const MatrixProductState& psi, const NullityOptions& opt,
                         std::uint64_t seed);

struct SpectrumStratum {
  std::size_t level = 0;    // 1 = stabilizer group
  double magnitude = 0.0;   // |<P>| shared by the stratum
  MatrixProductState fixed_point;
  std::vector<PauliString> representatives;  // signed coset representatives
};

struct StrataOptions {
  NullityOptions nullity;
  std::size_t max_strata = 16;
  std::size_t representatives_per_stratum = 8;
};

/// Peels the Pauli spectrum magnitude by magnitude: each stratum is the
/// fixed point of the iteration after all larger strata were projected
/// out. Stops when the residual norm drops below epsilon.
std::vector<SpectrumStratum> learn_spectrum_strata(const MatrixProductState& psi,
                                                   const StrataOptions& opt, double epsilon,
                                                   std::uint64_t seed);

struct SampledM1 {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::size_t n_samples = 0;
};

/// Monte Carlo estimator of M_1 by perfect sampling of the Pauli vector.
SampledM1 sampled_m1(const PauliVector& pv, std::size_t n_samples, std::uint64_t seed);

/// Lower bounds nu_k for k = 1..k_max from the iteration norms.
std::vector<double> nk_lower_bounds(const MatrixProductState& psi, const NullityOptions& opt,
                                    std::size_t k_max);

}  // namespace magicmps
