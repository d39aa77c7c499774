#include "magicmps/compress.hpp"

#include <Eigen/Eigenvalues>

namespace magicmps {

double sweep_truncate_left_to_right(MatrixProductState& psi, const TruncationPolicy& policy,
                                    SvdBackend backend) {
  if (!psi.ortho_center() || *psi.ortho_center() != 0) canonicalize_inplace(psi, 0);
  const std::size_t n = psi.n_sites();
  double err = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const DenseTensor& t = psi.site(i);
    const std::size_t l = t.dim(0), d = t.dim(1), r = t.dim(2);
    MatSvd svd = svd_matrix_truncated(t.as_matrix(2), policy, backend);
    err += svd.truncation_error;
    const std::size_t k = static_cast<std::size_t>(svd.s.size());
    DenseTensor u({l, d, k});
    Eigen::Map<MatC>(u.data().data(), l * d, k) = svd.u;

    // carry the projection rather than s * vdag; exact regardless of how
    // poorly tiny singular directions are resolved
    MatC sv = svd.u.adjoint() * t.as_matrix(2);  // (k, r)
    psi.set_site(i, std::move(u));
    const DenseTensor& nxt = psi.site(i + 1);
    DenseTensor merged({k, nxt.dim(1), nxt.dim(2)});
    Eigen::Map<MatC>(merged.data().data(), k, nxt.dim(1) * nxt.dim(2)) = sv * nxt.as_matrix(1);
    psi.set_site(i + 1, std::move(merged));
    (void)r;
  }
  psi.set_ortho_center(n - 1);
  return err;
}

double sweep_truncate_right_to_left(MatrixProductState& psi, const TruncationPolicy& policy,
                                    SvdBackend backend) {
  const std::size_t n = psi.n_sites();
  if (!psi.ortho_center() || *psi.ortho_center() != n - 1) canonicalize_inplace(psi, n - 1);
  double err = 0.0;
  for (std::size_t i = n - 1; i > 0; --i) {
    const DenseTensor& t = psi.site(i);
    const std::size_t l = t.dim(0), d = t.dim(1), r = t.dim(2);
    MatSvd svd = svd_matrix_truncated(t.as_matrix(1), policy, backend);
    err += svd.truncation_error;
    const std::size_t k = static_cast<std::size_t>(svd.s.size());
    DenseTensor v({k, d, r});
    Eigen::Map<MatC>(v.data().data(), k, d * r) = svd.vdag;

    MatC us = t.as_matrix(1) * svd.vdag.adjoint();  // (l, k), projection carry
    psi.set_site(i, std::move(v));
    const DenseTensor& prv = psi.site(i - 1);
    DenseTensor merged({prv.dim(0), prv.dim(1), k});
    Eigen::Map<MatC>(merged.data().data(), prv.dim(0) * prv.dim(1), k) = prv.as_matrix(2) * us;
    psi.set_site(i - 1, std::move(merged));
  }
  psi.set_ortho_center(0);
  return err;
}

CompressResult compress_svd(const MatrixProductState& psi, const TruncationPolicy& policy) {
  CompressResult out;
  out.psi = psi;
  out.truncation_error = sweep_truncate_left_to_right(out.psi, policy);
  return out;
}

CompressResult compress_density_matrix(const MatrixProductState& psi,
                                       const TruncationPolicy& policy) {
  const std::size_t n = psi.n_sites();
  CompressResult out;
  if (n == 1) {
    out.psi = psi;
    return out;
  }

  // right environments of <psi|psi>
  std::vector<MatC> renv(n + 1);
  renv[n] = MatC::Ones(1, 1);
  for (std::size_t i = n; i-- > 1;) {
    const DenseTensor& t = psi.site(i);
    const std::size_t l = t.dim(0), d = t.dim(1), r = t.dim(2);
    MatC tmp(l * d, r);
    tmp = t.as_matrix(2) * renv[i + 1];                     // (l*d, r)
    Eigen::Map<const MatC> tm(tmp.data(), l, d * r);        // regroup rows
    renv[i] = tm * t.as_matrix(1).adjoint();                // (l, l)
  }

  std::vector<DenseTensor> new_sites(n);
  DenseTensor carry = psi.site(0);  // (kept_{i-1}, d, chi_i)
  double err = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::size_t kd = carry.dim(0) * carry.dim(1), chi = carry.dim(2);
    Eigen::Map<const MatC> theta(carry.data().data(), kd, chi);
    MatC rho = theta * renv[i + 1] * theta.adjoint();  // (kd, kd), Hermitian PSD

    Eigen::SelfAdjointEigenSolver<MatC> eig(rho);
    if (eig.info() != Eigen::Success)
      throw NumericalError("compress_density_matrix: eigensolver failed");
    const Eigen::Index m = rho.rows();
    Eigen::VectorXd s(m);
    for (Eigen::Index j = 0; j < m; ++j) s(j) = std::sqrt(std::max(eig.eigenvalues()(m - 1 - j), 0.0));
    auto [k, step_err] = truncation_rank(s, policy);
    err += step_err;

    MatC u(m, static_cast<Eigen::Index>(k));
    for (std::size_t j = 0; j < k; ++j) u.col(j) = eig.eigenvectors().col(m - 1 - j);

    DenseTensor ut({carry.dim(0), carry.dim(1), k});
    Eigen::Map<MatC>(ut.data().data(), kd, k) = u;
    new_sites[i] = std::move(ut);

    MatC proj = u.adjoint() * theta;  // (k, chi)
    const DenseTensor& nxt = psi.site(i + 1);
    DenseTensor merged({k, nxt.dim(1), nxt.dim(2)});
    Eigen::Map<MatC>(merged.data().data(), k, nxt.dim(1) * nxt.dim(2)) = proj * nxt.as_matrix(1);
    carry = std::move(merged);
  }
  new_sites[n - 1] = std::move(carry);
  out.psi = MatrixProductState(std::move(new_sites));
  out.psi.set_ortho_center(n - 1);
  out.truncation_error = err;
  return out;
}

namespace {

CompressResult apply_mpo_zipup(const MatrixProductOperator& w, const MatrixProductState& psi,
                               const TruncationPolicy& policy, SvdBackend backend,
                               const TruncationPolicy& zip_policy) {
  const std::size_t n = psi.n_sites();
  std::vector<DenseTensor> new_sites(n);
  // carry has indices (kept, w bond, psi bond)
  DenseTensor carry({1, 1, 1});
  carry.data()[0] = 1.0;
  double err = 0.0;

  for (std::size_t i = 0; i < n; ++i) {
    if (w.phys_dim_in(i) != psi.phys_dim(i))
      throw ConfigError("apply_mpo: physical dimension mismatch");
    // theta[(kept, out), (wr, pr)]
    DenseTensor t1 = contract(carry, psi.site(i), {{2, 0}});      // (kept, wl, d_in, pr)
    DenseTensor t2 = contract(t1, w.site(i), {{1, 0}, {2, 2}});   // (kept, pr, out, wr)
    DenseTensor theta = t2.permuted({0, 2, 3, 1});                // (kept, out, wr, pr)

    const std::size_t kept = theta.dim(0), dout = theta.dim(1);
    const std::size_t wr = theta.dim(2), pr = theta.dim(3);
    if (i + 1 == n) {
      new_sites[i] = theta.reshaped({kept, dout, wr * pr});  // wr*pr == 1
      break;
    }
    MatSvd svd = svd_matrix_truncated(theta.as_matrix(2), zip_policy, backend);
    err += svd.truncation_error;
    const std::size_t k = static_cast<std::size_t>(svd.s.size());
    DenseTensor u({kept, dout, k});
    Eigen::Map<MatC>(u.data().data(), kept * dout, k) = svd.u;
    new_sites[i] = std::move(u);

    carry = DenseTensor({k, wr, pr});
    Eigen::Map<MatC>(carry.data().data(), k, wr * pr) = svd.u.adjoint() * theta.as_matrix(2);
  }

  CompressResult out;
  out.psi = MatrixProductState(std::move(new_sites));
  out.psi.set_ortho_center(n - 1);
  out.truncation_error = err;
  (void)policy;
  return out;
}

}  // namespace

CompressResult apply_mpo(const MatrixProductOperator& w, const MatrixProductState& psi,
                         const TruncationPolicy& policy, ApplyMethod method, SvdBackend backend) {
  if (w.n_sites() != psi.n_sites()) throw ConfigError("apply_mpo: length mismatch");

  if (method == ApplyMethod::ZipUp) {
    CompressResult out = apply_mpo_zipup(w, psi, policy, backend, policy);
    out.truncation_error += sweep_truncate_right_to_left(out.psi, policy, backend);
    return out;
  }

  // near-exact zip-up, then the density-matrix step enforces the policy
  TruncationPolicy loose;
  constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
  loose.max_rank = policy.max_rank > kMax / 4 ? kMax : policy.max_rank * 4;
  loose.error_threshold = policy.error_threshold * 1e-3;
  CompressResult stage1 = apply_mpo_zipup(w, psi, policy, backend, loose);
  CompressResult stage2 = compress_density_matrix(stage1.psi, policy);
  stage2.truncation_error += stage1.truncation_error;
  return stage2;
}

}  // namespace magicmps
