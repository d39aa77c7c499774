#include "magicmps/pauli_vector.hpp"

#include <cmath>

namespace magicmps {

namespace {

// Pauli matrices in code order I, X, Z, Y.
const MatC& pauli_matrix(std::size_t code) {
  static const std::array<MatC, 4> mats = [] {
    std::array<MatC, 4> m;
    for (auto& x : m) x = MatC::Zero(2, 2);
    m[0](0, 0) = 1;
    m[0](1, 1) = 1;
    m[1](0, 1) = 1;
    m[1](1, 0) = 1;
    m[2](0, 0) = 1;
    m[2](1, 1) = -1;
    m[3](0, 1) = cx(0, -1);
    m[3](1, 0) = cx(0, 1);
    return m;
  }();
  return mats[code];
}

// site tensor slice per physical value: returns (4, l, r)-ordered copy
DenseTensor phys_major(const DenseTensor& site) {
  return site.permuted({1, 0, 2});
}

}  // namespace

PauliVector build_pauli_vector(const MatrixProductState& psi, const TruncationPolicy& policy,
                               SvdBackend backend) {
  const std::size_t n = psi.n_sites();
  for (std::size_t i = 0; i < n; ++i)
    if (psi.phys_dim(i) != 2) throw ConfigError("build_pauli_vector: qubit states only");
  {
    double nn = norm(psi);
    if (std::abs(nn - 1.0) > 1e-8)
      throw NumericalError("build_pauli_vector: state must be normalized, norm = " +
                           std::to_string(nn));
  }
  MatrixProductState src =
      (psi.ortho_center() && *psi.ortho_center() == 0) ? psi : canonicalize(psi, 0);

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<DenseTensor> out_sites(n);
  // carry T[k, (l, l')] projects the already-truncated doubled bond
  MatC carry = MatC::Ones(1, 1);
  double err = 0.0;

  for (std::size_t i = 0; i < n; ++i) {
    const DenseTensor& a = src.site(i);
    const std::size_t l = a.dim(0), r = a.dim(2);
    const std::size_t k = static_cast<std::size_t>(carry.rows());
    Eigen::Map<const MatC> amat(a.data().data(), l, 2 * r);
    const MatC a0 = amat.middleCols(0, r);
    const MatC a1 = amat.middleCols(r, r);
    const MatC* as[2] = {&a0, &a1};

    // u_s[k, l', r] = sum_l T[k, (l,l')] A^s[l, r]
    // v_{s,s'}[k, r, r'] = sum_{l'} u_s[k, l', r] conj(A^{s'}[l', r'])
    std::array<std::array<MatC, 2>, 2> v;  // (k*r, r')
    for (std::size_t s = 0; s < 2; ++s) {
      // carry viewed as (k*l, l') after regrouping? carry is (k, l*l')
      // row-major: index (k, l, l'); want sum over l with A^s.
      // Build u_s as (k*l', r): permute carry to (k, l', l) first.
      MatC cperm(k * l, l);  // rows (k, l'), cols l
      for (std::size_t kk = 0; kk < k; ++kk)
        for (std::size_t lp = 0; lp < l; ++lp)
          for (std::size_t ll = 0; ll < l; ++ll)
            cperm(kk * l + lp, ll) = carry(kk, ll * l + lp);
      MatC u = cperm * (*as[s]);  // (k*l', r)
      for (std::size_t sp = 0; sp < 2; ++sp) {
        // regroup u to (k*r, l') then multiply conj(A^{s'}) -> (k*r, r')
        MatC ur(k * r, l);
        for (std::size_t kk = 0; kk < k; ++kk)
          for (std::size_t rr = 0; rr < r; ++rr)
            for (std::size_t lp = 0; lp < l; ++lp)
              ur(kk * r + rr, lp) = u(kk * l + lp, rr);
        v[s][sp] = ur * as[sp]->conjugate();
      }
    }

    // theta rows (k, alpha), cols (r, r')
    MatC theta(k * 4, r * r);
    for (std::size_t alpha = 0; alpha < 4; ++alpha) {
      const MatC& pm = pauli_matrix(alpha);
      MatC combo = MatC::Zero(k * r, r);
      // the ket slice pairs with the column index, the bra slice with the
      // row index; this is what makes the amplitude <psi|P|psi>, not its
      // transpose (the two differ by the sign of every odd-Y code)
      for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t sp = 0; sp < 2; ++sp)
          if (pm(sp, s) != cx(0, 0)) combo += pm(sp, s) * v[s][sp];
      combo *= inv_sqrt2;
      for (std::size_t kk = 0; kk < k; ++kk)
        for (std::size_t rr = 0; rr < r; ++rr)
          theta.row(kk * 4 + alpha).segment(rr * r, r) = combo.row(kk * r + rr);
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
    carry = svd.u.adjoint() * theta;  // (kk, r*r)
  }

  PauliVector out;
  out.mps = MatrixProductState(std::move(out_sites));
  out.mps.set_ortho_center(n - 1);
  out.source_n = n;
  out.build_truncation_error = err;
  // leave it right-canonical so downstream zip-ups see isometric remainders
  canonicalize_inplace(out.mps, 0);
  return out;
}

cx pauli_amplitude(const MatrixProductState& v, const PauliString& code) {
  if (v.n_sites() != code.n()) throw ConfigError("pauli_amplitude: length mismatch");
  Eigen::RowVectorXcd env = Eigen::RowVectorXcd::Ones(1);
  for (std::size_t i = 0; i < v.n_sites(); ++i) {
    const DenseTensor& t = v.site(i);
    const std::size_t l = t.dim(0), d = t.dim(1), r = t.dim(2);
    if (d != 4) throw ConfigError("pauli_amplitude: physical dimension must be 4");
    Eigen::Map<const MatC> m(t.data().data(), l, d * r);
    env = env * m.middleCols(code.code(i) * r, r);
  }
  return env(0);
}

double pauli_expectation(const PauliVector& pv, const PauliString& code) {
  cx amp = pauli_amplitude(pv.mps, code);
  return amp.real() * std::pow(2.0, 0.5 * static_cast<double>(pv.source_n));
}

MatrixProductOperator build_diagonal_w(const PauliVector& p) {
  std::vector<DenseTensor> sites;
  sites.reserve(p.mps.n_sites());
  for (std::size_t i = 0; i < p.mps.n_sites(); ++i) {
    const DenseTensor& b = p.mps.site(i);
    const std::size_t l = b.dim(0), r = b.dim(2);
    DenseTensor w({l, 4, 4, r});
    for (std::size_t ll = 0; ll < l; ++ll)
      for (std::size_t alpha = 0; alpha < 4; ++alpha)
        for (std::size_t rr = 0; rr < r; ++rr)
          w.at({ll, alpha, alpha, rr}) = b.at({ll, alpha, rr});
    sites.push_back(std::move(w));
  }
  return MatrixProductOperator(std::move(sites));
}

CompressResult apply_diagonal_vector(const MatrixProductState& w,
                                     const MatrixProductState& target,
                                     const TruncationPolicy& policy, SvdBackend backend,
                                     bool dm_compress) {
  const std::size_t n = target.n_sites();
  if (w.n_sites() != n) throw ConfigError("apply_diagonal_vector: length mismatch");

  TruncationPolicy zip = policy;
  if (dm_compress) {
    constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
    zip.max_rank = policy.max_rank > kMax / 4 ? kMax : policy.max_rank * 4;
    zip.error_threshold = policy.error_threshold * 1e-3;
  }

  std::vector<DenseTensor> out_sites(n);
  // carry C[k, (w bond, p bond)]
  MatC carry = MatC::Ones(1, 1);
  double err = 0.0;

  for (std::size_t i = 0; i < n; ++i) {
    if (w.phys_dim(i) != 4 || target.phys_dim(i) != 4)
      throw ConfigError("apply_diagonal_vector: physical dimension must be 4");
    DenseTensor bw = phys_major(w.site(i));   // (4, wl, wr)
    DenseTensor bp = phys_major(target.site(i));  // (4, pl, pr)
    const std::size_t wl = bw.dim(1), wr = bw.dim(2);
    const std::size_t pl = bp.dim(1), pr = bp.dim(2);
    const std::size_t k = static_cast<std::size_t>(carry.rows());

    // carry as (k, wl, pl) -> permuted copy (k*pl, wl)
    MatC cperm(k * pl, wl);
    for (std::size_t kk = 0; kk < k; ++kk)
      for (std::size_t pp = 0; pp < pl; ++pp)
        for (std::size_t ww = 0; ww < wl; ++ww)
          cperm(kk * pl + pp, ww) = carry(kk, ww * pl + pp);

    MatC theta(k * 4, wr * pr);
    for (std::size_t alpha = 0; alpha < 4; ++alpha) {
      Eigen::Map<const MatC> bwa(bw.data().data() + alpha * wl * wr, wl, wr);
      Eigen::Map<const MatC> bpa(bp.data().data() + alpha * pl * pr, pl, pr);
      MatC t1 = cperm * bwa;  // (k*pl, wr)
      // regroup to (k*wr, pl)
      MatC t1r(k * wr, pl);
      for (std::size_t kk = 0; kk < k; ++kk)
        for (std::size_t pp = 0; pp < pl; ++pp)
          for (std::size_t ww = 0; ww < wr; ++ww)
            t1r(kk * wr + ww, pp) = t1(kk * pl + pp, ww);
      MatC t2 = t1r * bpa;  // (k*wr, pr)
      for (std::size_t kk = 0; kk < k; ++kk)
        for (std::size_t ww = 0; ww < wr; ++ww)
          theta.row(kk * 4 + alpha).segment(ww * pr, pr) = t2.row(kk * wr + ww);
    }

    if (i + 1 == n) {
      DenseTensor t({k, 4, 1});
      Eigen::Map<MatC>(t.data().data(), k * 4, 1) = theta;
      out_sites[i] = std::move(t);
      break;
    }
    MatSvd svd = svd_matrix_truncated(theta, zip, backend);
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
  out.truncation_error = err;
  if (dm_compress) {
    CompressResult c = compress_density_matrix(out.psi, policy);
    c.truncation_error += out.truncation_error;
    return c;
  }
  out.truncation_error += sweep_truncate_right_to_left(out.psi, policy, backend);
  return out;
}

SreResult replica_sre_from_vector(const PauliVector& pv, std::size_t n, const SreOptions& opt) {
  if (n < 2) throw ConfigError("replica_sre: n must be >= 2");
  SreResult out;
  out.build_error = pv.build_truncation_error;
  out.max_bond = pv.mps.max_bond();

  MatrixProductState cur = pv.mps;
  for (std::size_t j = 2; j <= n; ++j) {
    CompressResult step = apply_diagonal_vector(pv.mps, cur, opt.replica_policy, opt.backend);
    out.apply_errors.push_back(step.truncation_error);
    if (step.truncation_error > opt.abort_error)
      throw NumericalError("replica_sre: truncation error above the abort threshold");
    cur = std::move(step.psi);
    out.max_bond = std::max(out.max_bond, cur.max_bond());
  }
  double nn = norm(cur);
  const double log2_norm2 = 2.0 * std::log2(nn);
  out.m_n = log2_norm2 / (1.0 - static_cast<double>(n)) - static_cast<double>(pv.source_n);
  return out;
}

SreResult replica_sre(const MatrixProductState& psi, std::size_t n, const SreOptions& opt) {
  PauliVector pv = build_pauli_vector(psi, opt.pauli_policy, opt.backend);
  return replica_sre_from_vector(pv, n, opt);
}

MatrixProductState mps_add(const MatrixProductState& a, const MatrixProductState& b, cx ca,
                           cx cb) {
  const std::size_t n = a.n_sites();
  if (b.n_sites() != n) throw ConfigError("mps_add: length mismatch");
  if (n == 1) {
    DenseTensor t = a.site(0).scaled(ca);
    const DenseTensor& tb = b.site(0);
    if (tb.dim(1) != t.dim(1)) throw ConfigError("mps_add: physical dimension mismatch");
    for (std::size_t j = 0; j < t.size(); ++j) t.data()[j] += cb * tb.data()[j];
    MatrixProductState out(std::vector<DenseTensor>{std::move(t)});
    out.set_ortho_center(0);
    return out;
  }

  std::vector<DenseTensor> sites(n);
  for (std::size_t i = 0; i < n; ++i) {
    const DenseTensor& ta = a.site(i);
    const DenseTensor& tb = b.site(i);
    if (ta.dim(1) != tb.dim(1)) throw ConfigError("mps_add: physical dimension mismatch");
    const std::size_t d = ta.dim(1);
    const std::size_t la = ta.dim(0), ra = ta.dim(2);
    const std::size_t lb = tb.dim(0), rb = tb.dim(2);
    const bool first = (i == 0), last = (i + 1 == n);
    const std::size_t l = first ? 1 : la + lb;
    const std::size_t r = last ? 1 : ra + rb;
    DenseTensor t({l, d, r});
    cx fa = first ? ca : cx(1, 0);  // scale once at the left boundary
    for (std::size_t s = 0; s < d; ++s) {
      for (std::size_t x = 0; x < la; ++x)
        for (std::size_t y = 0; y < ra; ++y)
          t.at({first ? 0 : x, s, last ? 0 : y}) += fa * ta.at({x, s, y});
      cx fb = first ? cb : cx(1, 0);
      for (std::size_t x = 0; x < lb; ++x)
        for (std::size_t y = 0; y < rb; ++y)
          t.at({first ? 0 : la + x, s, last ? 0 : ra + y}) += fb * tb.at({x, s, y});
    }
    sites[i] = std::move(t);
  }
  return MatrixProductState(std::move(sites));
}

}  // namespace magicmps
