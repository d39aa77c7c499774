#include "magicmps/gates.hpp"

#include <cmath>

namespace magicmps {

std::string gate_name(GateKind k) {
  switch (k) {
    case GateKind::H: return "H";
    case GateKind::S: return "S";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CZ: return "CZ";
    case GateKind::T: return "T";
    case GateKind::CCZ: return "CCZ";
    case GateKind::Swap: return "SWAP";
    case GateKind::Custom: return "CUSTOM";
  }
  return "?";
}

GateKind gate_kind_from_name(const std::string& name) {
  if (name == "H") return GateKind::H;
  if (name == "S") return GateKind::S;
  if (name == "CNOT") return GateKind::CNOT;
  if (name == "CZ") return GateKind::CZ;
  if (name == "T") return GateKind::T;
  if (name == "CCZ") return GateKind::CCZ;
  if (name == "SWAP") return GateKind::Swap;
  throw ConfigError("unknown gate name: " + name);
}

MatC gate_matrix(GateKind kind) {
  const double isq = 1.0 / std::sqrt(2.0);
  switch (kind) {
    case GateKind::H: {
      MatC m(2, 2);
      m << isq, isq, isq, -isq;
      return m;
    }
    case GateKind::S: {
      MatC m = MatC::Zero(2, 2);
      m(0, 0) = 1;
      m(1, 1) = cx(0, 1);
      return m;
    }
    case GateKind::T: {
      MatC m = MatC::Zero(2, 2);
      m(0, 0) = 1;
      m(1, 1) = std::polar(1.0, M_PI / 4.0);
      return m;
    }
    case GateKind::CNOT: {
      MatC m = MatC::Zero(4, 4);
      m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
      return m;
    }
    case GateKind::CZ: {
      MatC m = MatC::Identity(4, 4);
      m(3, 3) = -1;
      return m;
    }
    case GateKind::Swap: {
      MatC m = MatC::Zero(4, 4);
      m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1;
      return m;
    }
    case GateKind::CCZ: {
      MatC m = MatC::Identity(8, 8);
      m(7, 7) = -1;
      return m;
    }
    case GateKind::Custom:
      throw ConfigError("gate_matrix: custom gates carry their own matrix");
  }
  throw ConfigError("gate_matrix: bad kind");
}

namespace {

std::size_t arity(GateKind k) {
  switch (k) {
    case GateKind::H:
    case GateKind::S:
    case GateKind::T:
      return 1;
    case GateKind::CNOT:
    case GateKind::CZ:
    case GateKind::Swap:
      return 2;
    case GateKind::CCZ:
      return 3;
    case GateKind::Custom:
      return 0;
  }
  return 0;
}

void check_unitary(const MatC& m) {
  if (m.rows() != m.cols()) throw ConfigError("gate matrix must be square");
  double err = (m * m.adjoint() - MatC::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
  if (err > 1e-12) throw ConfigError("gate matrix is not unitary (error " + std::to_string(err) + ")");
}

}  // namespace

GateOp GateOp::make(GateKind kind, std::vector<std::size_t> targets) {
  if (kind == GateKind::Custom) throw ConfigError("GateOp::make: use GateOp::custom");
  if (targets.size() != arity(kind)) throw ConfigError("GateOp::make: wrong target count");
  GateOp g;
  g.kind = kind;
  g.targets = std::move(targets);
  g.matrix = gate_matrix(kind);
  return g;
}

GateOp GateOp::custom(MatC matrix, std::vector<std::size_t> targets) {
  check_unitary(matrix);
  std::size_t dim = 1;
  for (std::size_t i = 0; i < targets.size(); ++i) dim *= 2;
  if (static_cast<std::size_t>(matrix.rows()) != dim)
    throw ConfigError("GateOp::custom: matrix size does not match target count");
  GateOp g;
  g.kind = GateKind::Custom;
  g.targets = std::move(targets);
  g.matrix = std::move(matrix);
  return g;
}

namespace {

// Gate on k contiguous sites starting at `first`; merges, multiplies, splits.
double apply_contiguous(MatrixProductState& psi, const MatC& u, std::size_t first,
                        std::size_t k, const TruncationPolicy& policy) {
  for (std::size_t j = 0; j < k; ++j)
    if (psi.phys_dim(first + j) != 2) throw ConfigError("apply_gate: qubit sites only");
  canonicalize_inplace(psi, first);
  // merge
  DenseTensor theta = psi.site(first);
  for (std::size_t j = 1; j < k; ++j) {
    DenseTensor merged = contract(theta, psi.site(first + j), {{theta.rank() - 1, 0}});
    theta = std::move(merged);
  }
  // theta: (l, s_1..s_k, r); apply u over the fused physical index
  const std::size_t l = theta.dim(0), r = theta.dim(theta.rank() - 1);
  std::size_t d = 1;
  for (std::size_t j = 0; j < k; ++j) d *= theta.dim(1 + j);
  DenseTensor tp = theta.reshaped({l, d, r}).permuted({1, 0, 2});  // (d, l, r)
  DenseTensor out({d, l, r});
  out.as_matrix(1) = u * tp.as_matrix(1);
  theta = out.permuted({1, 0, 2});  // (l, d, r)

  // split back
  double err = 0.0;
  DenseTensor rest = theta.reshaped([&] {
    std::vector<std::size_t> s{l};
    for (std::size_t j = 0; j < k; ++j) s.push_back(2);
    s.push_back(r);
    return s;
  }());
  for (std::size_t j = 0; j + 1 < k; ++j) {
    MatSvd svd = svd_matrix_truncated(rest.as_matrix(2), policy);
    err += svd.truncation_error;
    const std::size_t keep = static_cast<std::size_t>(svd.s.size());
    DenseTensor site({rest.dim(0), 2, keep});
    Eigen::Map<MatC>(site.data().data(), rest.dim(0) * 2, keep) = svd.u;
    psi.set_site(first + j, std::move(site));

    MatC carry = svd.u.adjoint() * rest.as_matrix(2);
    std::vector<std::size_t> nshape{keep};
    for (std::size_t t = j + 1; t < k; ++t) nshape.push_back(2);
    nshape.push_back(r);
    DenseTensor next(nshape);
    Eigen::Map<MatC>(next.data().data(), carry.rows(), carry.cols()) = carry;
    rest = std::move(next);
  }
  psi.set_site(first + k - 1, rest.reshaped({rest.dim(0), 2, r}));
  psi.set_ortho_center(first + k - 1);
  return err;
}

}  // namespace

double apply_gate_inplace(MatrixProductState& psi, const GateOp& g,
                          const TruncationPolicy& policy, bool swap_routing) {
  for (std::size_t t : g.targets)
    if (t >= psi.n_sites()) throw ConfigError("apply_gate: target out of range");
  for (std::size_t a = 0; a < g.targets.size(); ++a)
    for (std::size_t b = a + 1; b < g.targets.size(); ++b)
      if (g.targets[a] == g.targets[b]) throw ConfigError("apply_gate: repeated target");

  const std::size_t k = g.targets.size();
  double err = 0.0;

  if (k == 1) {
    const std::size_t site_idx = g.targets[0];
    if (psi.phys_dim(site_idx) != 2) throw ConfigError("apply_gate: qubit sites only");
    DenseTensor tp = psi.site(site_idx).permuted({1, 0, 2});
    DenseTensor res({tp.dim(0), tp.dim(1), tp.dim(2)});
    res.as_matrix(1) = g.matrix * tp.as_matrix(1);
    psi.set_site(site_idx, res.permuted({1, 0, 2}));
    return 0.0;
  }

  // route targets to a contiguous block in listed order
  std::vector<std::size_t> pos = g.targets;
  std::vector<std::size_t> undo;
  bool contiguous = true;
  for (std::size_t j = 1; j < k; ++j)
    if (pos[j] != pos[j - 1] + 1) contiguous = false;
  if (!contiguous && !swap_routing)
    throw ConfigError("apply_gate: non-adjacent targets and routing disabled");

  const MatC swap = gate_matrix(GateKind::Swap);
  if (!contiguous) {
    // bubble each target next to the previous one; a swap can displace
    // other targets, so positions and the goal are re-read every step
    for (std::size_t j = 1; j < k; ++j) {
      while (pos[j] != pos[j - 1] + 1) {
        std::size_t cur = pos[j];
        std::size_t a = (cur > pos[j - 1] + 1) ? cur - 1 : cur;  // swap (a, a+1)
        err += apply_contiguous(psi, swap, a, 2, policy);
        undo.push_back(a);
        for (std::size_t m = 0; m < k; ++m) {
          if (pos[m] == a)
            pos[m] = a + 1;
          else if (pos[m] == a + 1)
            pos[m] = a;
        }
      }
    }
  }

  err += apply_contiguous(psi, g.matrix, pos[0], k, policy);

  for (auto it = undo.rbegin(); it != undo.rend(); ++it)
    err += apply_contiguous(psi, swap, *it, 2, policy);
  return err;
}

GateApplyResult apply_gate(const MatrixProductState& psi, const GateOp& g,
                           const TruncationPolicy& policy, bool swap_routing) {
  GateApplyResult out;
  out.psi = psi;
  out.truncation_error = apply_gate_inplace(out.psi, g, policy, swap_routing);
  return out;
}

MatrixProductState zero_state(std::size_t n) {
  return MatrixProductState::product_state(std::vector<std::vector<cx>>(n, {1.0, 0.0}));
}

MatrixProductState plus_state(std::size_t n) {
  const double isq = 1.0 / std::sqrt(2.0);
  return MatrixProductState::product_state(std::vector<std::vector<cx>>(n, {isq, isq}));
}

MatrixProductState y_polarized_state(std::size_t n) {
  const double isq = 1.0 / std::sqrt(2.0);
  return MatrixProductState::product_state(
      std::vector<std::vector<cx>>(n, {cx(isq, 0), cx(0, isq)}));
}

MatrixProductState build_t_doped_state(std::size_t n, std::size_t n_t) {
  if (n_t > n) throw ConfigError("build_t_doped_state: n_t exceeds n");
  const double isq = 1.0 / std::sqrt(2.0);
  std::vector<std::vector<cx>> sites;
  sites.reserve(n);
  for (std::size_t i = 0; i < n - n_t; ++i) sites.push_back({isq, isq});
  const cx tphase = std::polar(isq, M_PI / 4.0);
  for (std::size_t i = 0; i < n_t; ++i) sites.push_back({cx(isq, 0), tphase});
  return MatrixProductState::product_state(sites);
}

}  // namespace magicmps
