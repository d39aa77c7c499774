#pragma once

#include <string>

#include "magicmps/compress.hpp"
#include "magicmps/mps.hpp"

namespace magicmps {

enum class GateKind { H, S, CNOT, CZ, T, CCZ, Swap, Custom };

std::string gate_name(GateKind k);
GateKind gate_kind_from_name(const std::string& name);

/// Gate on 1..3 sites. The matrix acts on the listed targets with
/// targets[0] as the most significant qubit of the row index.
struct GateOp {
  GateKind kind = GateKind::Custom;
  std::vector<std::size_t> targets;
  MatC matrix;

  static GateOp make(GateKind kind, std::vector<std::size_t> targets);
  /// Custom unitary; checked against u u^dag = 1 to 1e-12.
  static GateOp custom(MatC matrix, std::vector<std::size_t> targets);
};

/// Builtin matrix for a non-custom kind.
MatC gate_matrix(GateKind kind);

struct GateApplyResult {
  MatrixProductState psi;
  double truncation_error = 0.0;
};

/// Applies the gate, swap-routing non-contiguous targets when enabled.
/// Truncation happens only at multi-site splits. The in-place form avoids
/// copying untouched site tensors.
double apply_gate_inplace(MatrixProductState& psi, const GateOp& g,
                          const TruncationPolicy& policy, bool swap_routing = true);
GateApplyResult apply_gate(const MatrixProductState& psi, const GateOp& g,
                           const TruncationPolicy& policy, bool swap_routing = true);

// common product states
MatrixProductState zero_state(std::size_t n);
MatrixProductState plus_state(std::size_t n);
MatrixProductState y_polarized_state(std::size_t n);
/// |+>^(n - n_t) |T>^(n_t), the T block on the right end.
MatrixProductState build_t_doped_state(std::size_t n, std::size_t n_t);

}  // namespace magicmps
