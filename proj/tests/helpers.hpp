#pragma once

// Shared test fixtures plus small independent oracles (dense gate
// application, loop-based contraction) used to cross-check the library.

#include <vector>

#include "magicmps/circuits.hpp"
#include "magicmps/exact.hpp"
#include "magicmps/gates.hpp"
#include "magicmps/mps.hpp"

namespace testutil {

using namespace magicmps;

// independent dense gate application: matrix on listed targets,
// targets[0] most significant, site 0 = most significant state bit
inline void dense_apply_gate(std::vector<cx>& amps, std::size_t n, const MatC& u,
                             const std::vector<std::size_t>& targets) {
  const std::size_t k = targets.size();
  const std::size_t du = std::size_t(1) << k;
  std::vector<cx> next(amps.size(), cx(0, 0));
  for (std::size_t b = 0; b < amps.size(); ++b) {
    // bits of b on the target sites
    std::size_t in = 0;
    for (std::size_t j = 0; j < k; ++j) in = (in << 1) | ((b >> (n - 1 - targets[j])) & 1u);
    for (std::size_t out = 0; out < du; ++out) {
      cx coef = u(out, in);
      if (coef == cx(0, 0)) continue;
      std::size_t b2 = b;
      for (std::size_t j = 0; j < k; ++j) {
        std::size_t bit = (out >> (k - 1 - j)) & 1u;
        std::size_t pos = n - 1 - targets[j];
        b2 = (b2 & ~(std::size_t(1) << pos)) | (bit << pos);
      }
      next[b2] += coef * amps[b];
    }
  }
  amps = std::move(next);
}

inline std::vector<cx> dense_apply_circuit(std::vector<cx> amps, const CircuitSpec& c) {
  for (const auto& layer : c.layers)
    for (const auto& g : layer) dense_apply_gate(amps, c.n, g.matrix, g.targets);
  return amps;
}

inline std::vector<cx> dense_zero_state(std::size_t n) {
  std::vector<cx> v(std::size_t(1) << n, cx(0, 0));
  v[0] = 1.0;
  return v;
}

inline cx dense_inner(const std::vector<cx>& a, const std::vector<cx>& b) {
  cx acc(0, 0);
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

inline double fidelity(const std::vector<cx>& a, const std::vector<cx>& b) {
  double na = std::abs(dense_inner(a, a).real());
  double nb = std::abs(dense_inner(b, b).real());
  return std::norm(dense_inner(a, b)) / (na * nb);
}

inline MatrixProductState ghz_state(std::size_t n) {
  MatrixProductState psi = zero_state(n);
  TruncationPolicy exact = TruncationPolicy::exact();
  psi = apply_gate(psi, GateOp::make(GateKind::H, {0}), exact).psi;
  for (std::size_t i = 0; i + 1 < n; ++i)
    psi = apply_gate(psi, GateOp::make(GateKind::CNOT, {i, i + 1}), exact).psi;
  return psi;
}

inline MatrixProductState cluster_state(std::size_t n) {
  MatrixProductState psi = plus_state(n);
  TruncationPolicy exact = TruncationPolicy::exact();
  for (std::size_t i = 0; i + 1 < n; ++i)
    psi = apply_gate(psi, GateOp::make(GateKind::CZ, {i, i + 1}), exact).psi;
  return psi;
}

inline MatrixProductState t_state() {
  const double isq = 1.0 / std::sqrt(2.0);
  return MatrixProductState::product_state({{cx(isq, 0), std::polar(isq, M_PI / 4.0)}});
}

}  // namespace testutil
