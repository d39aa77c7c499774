#pragma once

#include <optional>

#include "magicmps/compress.hpp"
#include "magicmps/mps.hpp"

namespace magicmps {

/// Open-boundary spin-1/2 chains.
///   ising: H = -sum sx_i sx_{i+1} - h sum sz_i
///   xxz:   H = -sum [sx sx + sy sy + Delta sz sz]
struct SpinChainModel {
  enum class Kind { Ising, XXZ };
  Kind kind = Kind::Ising;
  std::size_t n = 2;
  double parameter = 1.0;  // h for ising, Delta for xxz

  static SpinChainModel ising(std::size_t n, double h) { return {Kind::Ising, n, h}; }
  static SpinChainModel xxz(std::size_t n, double delta) { return {Kind::XXZ, n, delta}; }
};

/// Bond dimension 3 (ising) or 5 (xxz).
MatrixProductOperator hamiltonian_mpo(const SpinChainModel& model);

/// <psi|W|psi>.
cx mpo_expectation(const MatrixProductOperator& w, const MatrixProductState& psi);

struct DmrgConfig {
  std::size_t max_chi = 40;
  std::size_t max_sweeps = 24;
  double energy_tol = 1e-10;       // full-sweep energy change
  double trunc_threshold = 1e-12;  // bond truncation threshold
  std::size_t lanczos_max = 80;
  double lanczos_tol = 1e-12;
  std::uint64_t seed = 7;
};

struct DmrgResult {
  MatrixProductState psi;  // normalized, right-canonical
  double energy = 0.0;
  std::vector<double> half_sweep_energies;
  bool converged = false;
};

DmrgResult dmrg_ground_state(const MatrixProductOperator& h, const DmrgConfig& config,
                             const std::optional<MatrixProductState>& warm_start = std::nullopt);
DmrgResult dmrg_ground_state(const SpinChainModel& model, const DmrgConfig& config,
                             const std::optional<MatrixProductState>& warm_start = std::nullopt);

}  // namespace magicmps
