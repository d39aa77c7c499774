#pragma once

#include "magicmps/mps.hpp"
#include "magicmps/pauli_string.hpp"

namespace magicmps {

/// Dense statevector for small systems (N <= 14). Site 0 is the most
/// significant bit of the basis index.
struct DenseState {
  std::size_t n = 0;
  std::vector<cx> amps;
};

DenseState mps_to_dense(const MatrixProductState& psi);
std::vector<cx> mpo_to_dense(const MatrixProductOperator& w);  // row-major 2^N x 2^N

/// All 4^N signed Pauli expectations of a pure state, indexed by the
/// packed code (site 0 in the most significant 2 bits). xi[c] is the
/// characteristic function <P_c>^2 / 2^N.
struct PauliSpectrum {
  std::size_t n = 0;
  std::vector<double> expectation;  // <psi|P_c|psi>
  std::vector<double> xi;
};

PauliSpectrum exact_pauli_spectrum(const DenseState& s);

/// Packed code for a PauliString (site 0 most significant).
std::size_t pack_code(const PauliString& p);
PauliString unpack_code(std::size_t code, std::size_t n);

/// Renyi-n stabilizer entropy in bits; supports the n = 1 limit.
double exact_sre(const PauliSpectrum& spec, double n);

struct BellMagicValue {
  double b = 0.0;           // Bell magic
  double b_additive = 0.0;  // -log2(1 - b)
};

/// Via the XOR self-convolution of the characteristic function.
BellMagicValue exact_bell_magic(const PauliSpectrum& spec);

/// Literal quadruple sum over 4^{4N} terms; cross-check for N <= 3.
BellMagicValue exact_bell_magic_quadruple_sum(const PauliSpectrum& spec);

struct ExactNullity {
  double nu = 0.0;
  std::vector<PauliString> generators;  // signed, independent
};

/// Collects codes with |<P>| >= 1 - tol, verifies group closure, and
/// returns an independent signed generating set.
ExactNullity exact_nullity(const PauliSpectrum& spec, double tol = 1e-9);

struct MagicGapValue {
  double value = 1.0;
  bool stabilizer_flagged = false;  // no expectation strictly inside (0, 1)
};

MagicGapValue exact_magic_gap(const PauliSpectrum& spec, double tol = 1e-9);

/// Open-chain transverse-field Ising ground energy from the free-fermion
/// single-particle spectrum.
double ising_free_fermion_energy(std::size_t n, double h);

}  // namespace magicmps
