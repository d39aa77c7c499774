#pragma once

#include "magicmps/gates.hpp"

namespace magicmps {

/// A circuit as ordered layers of gates; gates inside a layer are applied
/// in listed order.
struct CircuitSpec {
  std::size_t n = 0;
  std::vector<std::vector<GateOp>> layers;
  std::string family = "explicit";
  std::uint64_t seed = 0;

  std::size_t gate_count() const;
};

/// Random nearest-neighbor Clifford brickwork. Each layer is, with equal
/// probability, either single-qubit gates (uniform over {S, H}) on every
/// site, or two-qubit gates (uniform over {CNOT, CZ}, random orientation
/// for CNOT) on a maximal non-overlapping bond matching with a random
/// parity offset. Deterministic for a given seed.
CircuitSpec random_clifford_circuit(std::size_t n, std::size_t depth, std::uint64_t seed);

/// Per step: a brickwork layer of two-site gates drawn from
/// {identity, left-controlled CNOT, right-controlled CNOT} with the parity
/// alternating between steps, then one T gate on a uniformly random site.
/// Meant to act on the y-polarized product state.
CircuitSpec t_doped_random_circuit(std::size_t n, std::size_t steps, std::uint64_t seed);

/// Scrambling-circuit family: blocks of random two-qubit Clifford layers
/// interleaved with a configurable number of CCZ gates on random
/// contiguous triples. A stand-in layout; explicit layer files are the
/// supported path for reproducing specific hardware circuits.
CircuitSpec scrambling_circuit(std::size_t n, std::size_t n_ccz, std::uint64_t seed);

struct CircuitApplyResult {
  MatrixProductState psi;
  double truncation_error = 0.0;
};

CircuitApplyResult apply_circuit(const MatrixProductState& psi, const CircuitSpec& circuit,
                                 const TruncationPolicy& policy);

// Text format: header "N=<n>", then one gate per line "GATE site [site2
// [site3]]"; blank lines separate layers. A JSON form with the same
// content is accepted on load.
std::string circuit_to_text(const CircuitSpec& c);
CircuitSpec circuit_from_text(const std::string& text);
std::string circuit_to_json(const CircuitSpec& c);
CircuitSpec circuit_from_json(const std::string& json_text);
CircuitSpec load_circuit_file(const std::string& path);

}  // namespace magicmps
