#include "magicmps/dmrg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace magicmps {

namespace {

MatC sigma(char which) {
  MatC m = MatC::Zero(2, 2);
  switch (which) {
    case 'x': m(0, 1) = 1; m(1, 0) = 1; break;
    case 'y': m(0, 1) = cx(0, -1); m(1, 0) = cx(0, 1); break;
    case 'z': m(0, 0) = 1; m(1, 1) = -1; break;
    case 'i': m(0, 0) = 1; m(1, 1) = 1; break;
    default: throw ConfigError("sigma: bad label");
  }
  return m;
}

void put_block(DenseTensor& w, std::size_t a, std::size_t b, const MatC& m) {
  for (std::size_t s = 0; s < 2; ++s)
    for (std::size_t t = 0; t < 2; ++t) w.at({a, s, t, b}) = m(s, t);
}

}  // namespace

MatrixProductOperator hamiltonian_mpo(const SpinChainModel& model) {
  if (model.n < 2) throw ConfigError("hamiltonian_mpo: need n >= 2");
  const MatC id = sigma('i'), sx = sigma('x'), sy = sigma('y'), sz = sigma('z');

  std::size_t chi = model.kind == SpinChainModel::Kind::Ising ? 3 : 5;
  DenseTensor bulk({chi, 2, 2, chi});
  if (model.kind == SpinChainModel::Kind::Ising) {
    const double h = model.parameter;
    put_block(bulk, 0, 0, id);
    put_block(bulk, 1, 0, sx);
    put_block(bulk, 2, 0, -h * sz);
    put_block(bulk, 2, 1, -1.0 * sx);
    put_block(bulk, 2, 2, id);
  } else {
    const double delta = model.parameter;
    put_block(bulk, 0, 0, id);
    put_block(bulk, 1, 0, sx);
    put_block(bulk, 2, 0, sy);
    put_block(bulk, 3, 0, sz);
    put_block(bulk, 4, 1, -1.0 * sx);
    put_block(bulk, 4, 2, -1.0 * sy);
    put_block(bulk, 4, 3, -delta * sz);
    put_block(bulk, 4, 4, id);
  }

  std::vector<DenseTensor> sites(model.n, bulk);
  // boundaries: first site is the last row, last site the first column
  DenseTensor first({1, 2, 2, chi});
  for (std::size_t b = 0; b < chi; ++b)
    for (std::size_t s = 0; s < 2; ++s)
      for (std::size_t t = 0; t < 2; ++t) first.at({0, s, t, b}) = bulk.at({chi - 1, s, t, b});
  DenseTensor last({chi, 2, 2, 1});
  for (std::size_t a = 0; a < chi; ++a)
    for (std::size_t s = 0; s < 2; ++s)
      for (std::size_t t = 0; t < 2; ++t) last.at({a, s, t, 0}) = bulk.at({a, s, t, 0});
  sites.front() = std::move(first);
  sites.back() = std::move(last);
  return MatrixProductOperator(std::move(sites));
}

cx mpo_expectation(const MatrixProductOperator& w, const MatrixProductState& psi) {
  if (w.n_sites() != psi.n_sites()) throw ConfigError("mpo_expectation: length mismatch");
  // env (bra bond, w bond, ket bond)
  DenseTensor env({1, 1, 1});
  env.data()[0] = 1.0;
  for (std::size_t i = 0; i < psi.n_sites(); ++i) {
    DenseTensor t1 = contract(env, psi.site(i).conjugated(), {{0, 0}});  // (w, k, d_out, rb)
    DenseTensor t2 = contract(t1, w.site(i), {{0, 0}, {2, 1}});          // (k, rb, d_in, wr)
    DenseTensor t3 = contract(t2, psi.site(i), {{0, 0}, {2, 1}});        // (rb, wr, rk)
    env = std::move(t3);
  }
  return env.data()[0];
}

namespace {

struct Envs {
  std::vector<DenseTensor> left;   // left[i]: everything before site i, (bra, w, ket)
  std::vector<DenseTensor> right;  // right[i]: everything after site i-1... right[i] covers sites >= i
};

DenseTensor boundary_env() {
  DenseTensor e({1, 1, 1});
  e.data()[0] = 1.0;
  return e;
}

DenseTensor grow_left(const DenseTensor& env, const DenseTensor& wsite, const DenseTensor& asite) {
  DenseTensor t1 = contract(env, asite.conjugated(), {{0, 0}});  // (w, k, d_out, rb)
  DenseTensor t2 = contract(t1, wsite, {{0, 0}, {2, 1}});        // (k, rb, d_in, wr)
  DenseTensor t3 = contract(t2, asite, {{0, 0}, {2, 1}});        // (rb, wr, rk)
  return t3;
}

DenseTensor grow_right(const DenseTensor& env, const DenseTensor& wsite,
                       const DenseTensor& asite) {
  // env (bra, w, ket) attached to the right of the site
  DenseTensor t1 = contract(asite.conjugated(), env, {{2, 0}});  // (lb, d_out, w, ket)
  DenseTensor t2 = contract(t1, wsite, {{1, 1}, {2, 3}});        // (lb, ket, wl, d_in)
  DenseTensor t3 = contract(t2, asite, {{1, 2}, {3, 1}});        // (lb, wl, lk)
  return t3;
}

// effective two-site matvec: theta (lk, d, d, rk) -> (lb, d, d, rb)
DenseTensor heff_apply(const DenseTensor& lenv, const DenseTensor& w1, const DenseTensor& w2,
                       const DenseTensor& renv, const DenseTensor& theta) {
  DenseTensor t1 = contract(lenv, theta, {{2, 0}});       // (lb, wl, d1, d2, rk)
  DenseTensor t2 = contract(t1, w1, {{1, 0}, {2, 2}});    // (lb, d2, rk, o1, wm)
  DenseTensor t3 = contract(t2, w2, {{4, 0}, {1, 2}});    // (lb, rk, o1, o2, wr)
  DenseTensor t4 = contract(t3, renv, {{1, 2}, {4, 1}});  // (lb, o1, o2, rb)
  return t4;
}

double lanczos_ground(const DenseTensor& lenv, const DenseTensor& w1, const DenseTensor& w2,
                      const DenseTensor& renv, DenseTensor& theta, std::size_t max_iter,
                      double tol) {
  const std::size_t dim = theta.size();
  max_iter = std::min(max_iter, dim);

  auto dot = [](const DenseTensor& a, const DenseTensor& b) {
    cx acc(0, 0);
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a.data()[i]) * b.data()[i];
    return acc;
  };
  auto axpy = [](DenseTensor& y, cx alpha, const DenseTensor& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y.data()[i] += alpha * x.data()[i];
  };

  std::vector<DenseTensor> basis;
  std::vector<double> alpha, beta;

  double nrm = theta.norm();
  if (nrm <= 0) throw NumericalError("lanczos: zero start vector");
  basis.push_back(theta.scaled(1.0 / nrm));

  double prev_ev = 1e300;
  double ground = 0.0;
  Eigen::VectorXd ground_vec;

  for (std::size_t it = 0; it < max_iter; ++it) {
    DenseTensor hv = heff_apply(lenv, w1, w2, renv, basis[it]);
    double a = dot(basis[it], hv).real();
    alpha.push_back(a);
    axpy(hv, -cx(a, 0), basis[it]);
    if (it > 0) axpy(hv, -cx(beta[it - 1], 0), basis[it - 1]);
    // full reorthogonalization; the subspaces here are small
    for (const auto& v : basis) axpy(hv, -dot(v, hv), v);

    // tridiagonal ground state
    const std::size_t m = alpha.size();
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
    for (std::size_t i = 0; i < m; ++i) {
      tri(i, i) = alpha[i];
      if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(tri);
    ground = eig.eigenvalues()(0);
    ground_vec = eig.eigenvectors().col(0);

    double b = hv.norm();
    if (std::abs(ground - prev_ev) < tol * std::max(1.0, std::abs(ground)) || b < 1e-14 ||
        it + 1 == max_iter) {
      DenseTensor res(theta.shape());
      for (std::size_t i = 0; i < m; ++i) axpy(res, cx(ground_vec(i), 0), basis[i]);
      double rn = res.norm();
      if (rn <= 0) throw NumericalError("lanczos: collapsed eigenvector");
      theta = res.scaled(1.0 / rn);
      return ground;
    }
    prev_ev = ground;
    beta.push_back(b);
    basis.push_back(hv.scaled(1.0 / b));
  }
  return ground;
}

}  // namespace

DmrgResult dmrg_ground_state(const MatrixProductOperator& h, const DmrgConfig& config,
                             const std::optional<MatrixProductState>& warm_start) {
  const std::size_t n = h.n_sites();
  if (n < 2) throw ConfigError("dmrg: need at least two sites");

  MatrixProductState psi;
  if (warm_start) {
    psi = normalized(canonicalize(*warm_start, 0));
  } else {
    Rng rng(config.seed);
    psi = MatrixProductState::random(n, 2, std::min<std::size_t>(config.max_chi, 8), rng);
  }

  TruncationPolicy policy{config.max_chi, config.trunc_threshold};

  std::vector<DenseTensor> left(n + 1), right(n + 1);
  left[0] = boundary_env();
  right[n] = boundary_env();
  for (std::size_t i = n; i-- > 1;) right[i] = grow_right(right[i + 1], h.site(i), psi.site(i));

  DmrgResult out;
  double last_sweep_energy = 1e300;
  double energy = 0.0;

  for (std::size_t sweep = 0; sweep < config.max_sweeps; ++sweep) {
    // left-to-right
    for (std::size_t i = 0; i + 1 < n; ++i) {
      DenseTensor theta = contract(psi.site(i), psi.site(i + 1), {{2, 0}});  // (l,d,d,r)
      energy = lanczos_ground(left[i], h.site(i), h.site(i + 1), right[i + 2], theta,
                              config.lanczos_max, config.lanczos_tol);
      const std::size_t l = theta.dim(0), r = theta.dim(3);
      MatSvd svd = svd_matrix_truncated(theta.as_matrix(2), policy);
      const std::size_t k = static_cast<std::size_t>(svd.s.size());
      DenseTensor a({l, 2, k});
      Eigen::Map<MatC>(a.data().data(), l * 2, k) = svd.u;
      MatC carry = svd.u.adjoint() * theta.as_matrix(2);
      DenseTensor b({k, 2, r});
      Eigen::Map<MatC>(b.data().data(), k, 2 * r) = carry;
      psi.set_site(i, std::move(a));
      psi.set_site(i + 1, std::move(b));
      psi.set_ortho_center(i + 1);
      left[i + 1] = grow_left(left[i], h.site(i), psi.site(i));
    }
    out.half_sweep_energies.push_back(energy);

    // right-to-left
    for (std::size_t i = n - 1; i-- > 0;) {
      DenseTensor theta = contract(psi.site(i), psi.site(i + 1), {{2, 0}});
      energy = lanczos_ground(left[i], h.site(i), h.site(i + 1), right[i + 2], theta,
                              config.lanczos_max, config.lanczos_tol);
      const std::size_t l = theta.dim(0), r = theta.dim(3);
      MatSvd svd = svd_matrix_truncated(theta.as_matrix(2), policy);
      const std::size_t k = static_cast<std::size_t>(svd.s.size());
      DenseTensor b({k, 2, r});
      Eigen::Map<MatC>(b.data().data(), k, 2 * r) = svd.vdag;
      MatC carry = theta.as_matrix(2) * svd.vdag.adjoint();
      DenseTensor a({l, 2, k});
      Eigen::Map<MatC>(a.data().data(), l * 2, k) = carry;
      psi.set_site(i, std::move(a));
      psi.set_site(i + 1, std::move(b));
      psi.set_ortho_center(i);
      right[i + 1] = grow_right(right[i + 2], h.site(i + 1), psi.site(i + 1));
    }
    out.half_sweep_energies.push_back(energy);

    if (std::abs(energy - last_sweep_energy) < config.energy_tol) {
      out.converged = true;
      break;
    }
    last_sweep_energy = energy;
  }

  out.psi = normalized(canonicalize(psi, 0));
  out.energy = energy;
  return out;
}

DmrgResult dmrg_ground_state(const SpinChainModel& model, const DmrgConfig& config,
                             const std::optional<MatrixProductState>& warm_start) {
  return dmrg_ground_state(hamiltonian_mpo(model), config, warm_start);
}

}  // namespace magicmps
