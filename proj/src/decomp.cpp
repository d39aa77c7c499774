#include "magicmps/decomp.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace magicmps {

std::pair<std::size_t, double> truncation_rank(const Eigen::VectorXd& s,
                                               const TruncationPolicy& policy) {
  const std::size_t n = static_cast<std::size_t>(s.size());
  if (n == 0) throw NumericalError("truncation_rank: empty spectrum");
  const double total = s.squaredNorm();
  if (total <= 0.0) return {1, 0.0};

  // tail[r] = discarded squared weight when keeping r values; values at
  // numerical-noise level count as exact zeros for the threshold test
  const double floor = 1e-14 * s[0];
  std::vector<double> tail(n + 1, 0.0), tail_eff(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    tail[i] = tail[i + 1] + s[i] * s[i];
    tail_eff[i] = tail_eff[i + 1] + (s[i] < floor ? 0.0 : s[i] * s[i]);
  }

  std::size_t r = n;
  for (std::size_t cand = 1; cand <= n; ++cand) {
    if (tail_eff[cand] <= policy.error_threshold * total) {
      r = cand;
      break;
    }
  }
  r = std::min(r, policy.max_rank);
  r = std::max<std::size_t>(r, 1);

  // keep degenerate values together at the cut, still capped; never
  // extend into the numerical-noise tail
  const double tie = 1e-12 * s[0];
  while (r < n && r < policy.max_rank && s[r] >= floor && s[r - 1] - s[r] <= tie) ++r;

  return {r, tail[r] / total};
}

namespace {

MatSvd svd_accurate(const MatC& m, const TruncationPolicy& policy) {
  MatSvd out;
  if (std::min(m.rows(), m.cols()) <= 32) {
    Eigen::JacobiSVD<MatC> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.u = svd.matrixU();
    out.s = svd.singularValues();
    out.vdag = svd.matrixV().adjoint();
  } else {
    Eigen::BDCSVD<MatC> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.u = svd.matrixU();
    out.s = svd.singularValues();
    out.vdag = svd.matrixV().adjoint();
  }
  auto [r, err] = truncation_rank(out.s, policy);
  out.u = out.u.leftCols(r).eval();
  out.s = out.s.head(r).eval();
  out.vdag = out.vdag.topRows(r).eval();
  out.truncation_error = err;
  return out;
}

// SVD through the Gram matrix on the smaller side. Values below
// ~1e-8 * s_max come out with reduced relative accuracy, which is fine
// for the compression thresholds used in the iteration hot paths.
MatSvd svd_gram(const MatC& m, const TruncationPolicy& policy) {
  const bool rows_small = m.rows() <= m.cols();
  MatC g = rows_small ? MatC(m * m.adjoint()) : MatC(m.adjoint() * m);
  Eigen::SelfAdjointEigenSolver<MatC> eig(g);
  if (eig.info() != Eigen::Success) {
    bool has_nan = !g.allFinite();
    throw NumericalError("svd_gram: eigensolver failed on a " + std::to_string(g.rows()) + "x" +
                         std::to_string(g.cols()) + " gram matrix" +
                         (has_nan ? " containing non-finite entries" : " (no convergence)"));
  }

  const Eigen::Index k = g.rows();
  Eigen::VectorXd s(k);
  MatC w(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {  // eigenvalues come ascending
    double lam = std::max(eig.eigenvalues()(k - 1 - i), 0.0);
    s(i) = std::sqrt(lam);
    w.col(i) = eig.eigenvectors().col(k - 1 - i);
  }
  auto [r, err] = truncation_rank(s, policy);
  // kept values at noise level produce meaningless directions; the floor
  // keeps their rows finite and of harmless magnitude
  const double floor = 1e-14 * s(0) + 1e-300;

  MatSvd out;
  out.truncation_error = err;
  out.s = s.head(r);
  if (rows_small) {
    out.u = w.leftCols(r);
    out.vdag.resize(r, m.cols());
    MatC proj = out.u.adjoint() * m;  // = diag(s) * vdag
    for (std::size_t i = 0; i < r; ++i) out.vdag.row(i) = proj.row(i) / std::max(s(i), floor);
  } else {
    out.vdag = w.leftCols(r).adjoint();
    MatC proj = m * w.leftCols(r);  // = u * diag(s)
    out.u.resize(m.rows(), r);
    for (std::size_t i = 0; i < r; ++i) out.u.col(i) = proj.col(i) / std::max(s(i), floor);
  }
  return out;
}

}  // namespace

MatSvd svd_matrix_truncated(const MatC& m, const TruncationPolicy& policy, SvdBackend backend) {
  if (m.size() == 0) throw NumericalError("svd_matrix_truncated: empty matrix");
  if (backend == SvdBackend::Auto) {
    const Eigen::Index lo = std::min(m.rows(), m.cols());
    const Eigen::Index hi = std::max(m.rows(), m.cols());
    backend = ((lo >= 48 && hi >= 4 * lo) || lo >= 768) ? SvdBackend::Gram : SvdBackend::Accurate;
  }
  return backend == SvdBackend::Accurate ? svd_accurate(m, policy) : svd_gram(m, policy);
}

SvdResult svd_truncated(const DenseTensor& t, const std::vector<std::size_t>& row_axes,
                        const TruncationPolicy& policy) {
  if (row_axes.empty() || row_axes.size() >= t.rank())
    throw ConfigError("svd_truncated: both index groups must be nonempty");

  std::vector<bool> in_rows(t.rank(), false);
  for (std::size_t a : row_axes) {
    if (a >= t.rank() || in_rows[a]) throw ConfigError("svd_truncated: bad row axis");
    in_rows[a] = true;
  }
  std::vector<std::size_t> perm = row_axes;
  std::vector<std::size_t> row_dims, col_dims;
  for (std::size_t a : row_axes) row_dims.push_back(t.dim(a));
  for (std::size_t a = 0; a < t.rank(); ++a)
    if (!in_rows[a]) {
      perm.push_back(a);
      col_dims.push_back(t.dim(a));
    }

  DenseTensor tp = t.permuted(perm);
  MatSvd ms = svd_matrix_truncated(tp.as_matrix(row_axes.size()), policy);

  SvdResult out;
  out.truncation_error = ms.truncation_error;
  out.singular_values.assign(ms.s.data(), ms.s.data() + ms.s.size());
  const std::size_t k = static_cast<std::size_t>(ms.s.size());

  std::vector<std::size_t> u_shape = row_dims;
  u_shape.push_back(k);
  out.u = DenseTensor(u_shape);
  Eigen::Map<MatC>(out.u.data().data(), ms.u.rows(), ms.u.cols()) = ms.u;

  std::vector<std::size_t> v_shape{k};
  for (std::size_t d : col_dims) v_shape.push_back(d);
  out.vdag = DenseTensor(v_shape);
  Eigen::Map<MatC>(out.vdag.data().data(), ms.vdag.rows(), ms.vdag.cols()) = ms.vdag;
  return out;
}

std::pair<MatC, MatC> thin_qr(const MatC& m) {
  Eigen::HouseholderQR<MatC> qr(m);
  const Eigen::Index k = std::min(m.rows(), m.cols());
  MatC q = qr.householderQ() * MatC::Identity(m.rows(), k);
  MatC r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  return {std::move(q), std::move(r)};
}

std::pair<MatC, MatC> thin_rq(const MatC& m) {
  // m = L Q from the QR of the adjoint: m† = Q~ R~  =>  m = R~† Q~†
  auto [qt, rt] = thin_qr(m.adjoint());
  return {rt.adjoint(), qt.adjoint()};
}

}  // namespace magicmps
