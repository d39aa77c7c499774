#include "magicmps/bell.hpp"

namespace magicmps {

namespace {

// per-site commutation signs in code order I, X, Z, Y
const Eigen::Matrix4d& lambda_matrix() {
  static const Eigen::Matrix4d m = [] {
    Eigen::Matrix4d lm;
    lm << 1, 1, 1, 1,
          1, 1, -1, -1,
          1, -1, 1, -1,
          1, -1, -1, 1;
    return lm;
  }();
  return m;
}

}  // namespace

CompressResult xor_self_convolution(const MatrixProductState& p2, const TruncationPolicy& policy,
                                    SvdBackend backend) {
  const std::size_t n = p2.n_sites();
  std::vector<DenseTensor> out_sites(n);
  MatC carry = MatC::Ones(1, 1);  // (k, (b bond, c bond))
  double err = 0.0;

  for (std::size_t i = 0; i < n; ++i) {
    if (p2.phys_dim(i) != 4) throw ConfigError("xor_self_convolution: physical dim must be 4");
    DenseTensor b = p2.site(i).permuted({1, 0, 2});  // (4, l, r)
    const std::size_t l = b.dim(1), r = b.dim(2);
    const std::size_t k = static_cast<std::size_t>(carry.rows());

    // carry as (k, bl, cl) -> (k*cl, bl)
    MatC cperm(k * l, l);
    for (std::size_t kk = 0; kk < k; ++kk)
      for (std::size_t cc = 0; cc < l; ++cc)
        for (std::size_t bb = 0; bb < l; ++bb)
          cperm(kk * l + cc, bb) = carry(kk, bb * l + cc);

    MatC theta = MatC::Zero(k * 4, r * r);
    for (std::size_t beta = 0; beta < 4; ++beta) {
      Eigen::Map<const MatC> bb(b.data().data() + beta * l * r, l, r);
      MatC t1 = cperm * bb;  // (k*cl, br)
      MatC t1r(k * r, l);    // regroup to (k*br, cl)
      for (std::size_t kk = 0; kk < k; ++kk)
        for (std::size_t cc = 0; cc < l; ++cc)
          for (std::size_t rr = 0; rr < r; ++rr)
            t1r(kk * r + rr, cc) = t1(kk * l + cc, rr);
      for (std::size_t alpha = 0; alpha < 4; ++alpha) {
        const std::size_t gamma = alpha ^ beta;
        Eigen::Map<const MatC> bg(b.data().data() + gamma * l * r, l, r);
        MatC t2 = t1r * bg;  // (k*br, cr)
        for (std::size_t kk = 0; kk < k; ++kk)
          for (std::size_t rr = 0; rr < r; ++rr)
            theta.row(kk * 4 + alpha).segment(rr * r, r) += t2.row(kk * r + rr);
      }
    }

    if (i + 1 == n) {
      DenseTensor t({k, 4, 1});
      Eigen::Map<MatC>(t.data().data(), k * 4, 1) = theta;
      out_sites[i] = std::move(t);
      break;
    }
    MatSvd svd = svd_matrix_truncated(theta, policy, backend);
    err += svd.truncation_error;
    const std::size_t kk = static_cast<std::size_t>(svd.s.size());
    DenseTensor t({k, 4, kk});
    Eigen::Map<MatC>(t.data().data(), k * 4, kk) = svd.u;
    out_sites[i] = std::move(t);
    carry = svd.u.adjoint() * theta;
  }

  CompressResult out;
  out.psi = MatrixProductState(std::move(out_sites));
  out.psi.set_ortho_center(n - 1);
  out.truncation_error = err + sweep_truncate_right_to_left(out.psi, policy, backend);
  return out;
}

BellResult bell_magic_from_vector(const PauliVector& pv, const BellOptions& opt) {
  BellResult out;
  out.build_error = pv.build_truncation_error;

  CompressResult p2 = apply_diagonal_vector(pv.mps, pv.mps, opt.p2_policy, opt.backend);
  out.p2_error = p2.truncation_error;
  out.max_bond = std::max(pv.mps.max_bond(), p2.psi.max_bond());

  CompressResult q = xor_self_convolution(p2.psi, opt.q_policy, opt.backend);
  out.q_error = q.truncation_error;
  out.max_bond = std::max(out.max_bond, q.psi.max_bond());

  // <Q| Lambda ⊗ ... ⊗ Lambda |Q>
  const MatrixProductState& qq = q.psi;
  MatC env = MatC::Ones(1, 1);
  const auto& lm = lambda_matrix();
  for (std::size_t i = 0; i < qq.n_sites(); ++i) {
    const DenseTensor& t = qq.site(i);
    const std::size_t l = t.dim(0), r = t.dim(2);
    Eigen::Map<const MatC> m(t.data().data(), l, 4 * r);
    MatC next = MatC::Zero(r, r);
    for (std::size_t alpha = 0; alpha < 4; ++alpha) {
      MatC g = MatC::Zero(l, r);  // sum_alpha' Lambda[alpha', alpha] Q^{alpha'}
      for (std::size_t ap = 0; ap < 4; ++ap)
        if (lm(ap, alpha) != 0.0) g += lm(ap, alpha) * m.middleCols(ap * r, r);
      next += g.adjoint() * env * m.middleCols(alpha * r, r);
    }
    env = std::move(next);
  }
  cx value = env(0, 0);
  if (std::abs(value.imag()) > 1e-8 * std::max(1.0, std::abs(value.real())))
    throw NumericalError("bell_magic: contraction is not real");
  out.contraction_value = value.real();
  if (out.contraction_value <= 0.0)
    throw NumericalError("bell_magic: <Q|L|Q> <= 0 signals excessive truncation");
  out.b_additive = -std::log2(out.contraction_value);
  out.b = 1.0 - out.contraction_value;
  return out;
}

BellResult bell_magic(const MatrixProductState& psi, const BellOptions& opt) {
  PauliVector pv = build_pauli_vector(psi, opt.pauli_policy, opt.backend);
  return bell_magic_from_vector(pv, opt);
}

}  // namespace magicmps
