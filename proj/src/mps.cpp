#include "magicmps/mps.hpp"

#include <algorithm>
#include <cmath>

namespace magicmps {

MatrixProductState::MatrixProductState(std::vector<DenseTensor> sites) : sites_(std::move(sites)) {
  check_consistent();
}

void MatrixProductState::set_site(std::size_t i, DenseTensor t) {
  if (t.rank() != 3) throw ConfigError("MPS site tensors must be rank 3");
  sites_.at(i) = std::move(t);
}

std::size_t MatrixProductState::bond_dim(std::size_t i) const {
  if (i == 0 || sites_.empty()) return 1;
  if (i >= sites_.size()) return 1;
  return sites_[i].dim(0);
}

std::size_t MatrixProductState::max_bond() const {
  std::size_t m = 1;
  for (const auto& s : sites_) m = std::max(m, s.dim(2));
  return m;
}

void MatrixProductState::check_consistent() const {
  if (sites_.empty()) return;
  for (const auto& s : sites_)
    if (s.rank() != 3) throw ConfigError("MPS site tensors must be rank 3");
  if (sites_.front().dim(0) != 1 || sites_.back().dim(2) != 1)
    throw ConfigError("MPS boundary bonds must have dimension 1");
  for (std::size_t i = 0; i + 1 < sites_.size(); ++i)
    if (sites_[i].dim(2) != sites_[i + 1].dim(0))
      throw ConfigError("MPS adjacent bond dimensions do not match");
}

MatrixProductState MatrixProductState::product_state(
    const std::vector<std::vector<cx>>& site_vectors) {
  std::vector<DenseTensor> sites;
  sites.reserve(site_vectors.size());
  for (const auto& v : site_vectors) sites.emplace_back(std::vector<std::size_t>{1, v.size(), 1}, v);
  MatrixProductState psi(std::move(sites));
  psi.set_ortho_center(0);
  return psi;
}

MatrixProductState MatrixProductState::random(std::size_t n, std::size_t phys_dim,
                                              std::size_t chi, Rng& rng) {
  if (n == 0) throw ConfigError("random MPS needs at least one site");
  auto capped = [&](std::size_t i) {  // bond left of site i
    double left = std::pow(static_cast<double>(phys_dim), static_cast<double>(i));
    double right = std::pow(static_cast<double>(phys_dim), static_cast<double>(n - i));
    double cap = std::min({static_cast<double>(chi), left, right, 1e9});
    return static_cast<std::size_t>(std::max(1.0, cap));
  };
  std::vector<DenseTensor> sites;
  for (std::size_t i = 0; i < n; ++i) {
    DenseTensor t({capped(i), phys_dim, capped(i + 1)});
    for (cx& v : t.data()) v = rng.complex_normal();
    sites.push_back(std::move(t));
  }
  MatrixProductState psi(std::move(sites));
  return normalized(canonicalize(psi, 0));
}

MatrixProductOperator::MatrixProductOperator(std::vector<DenseTensor> sites)
    : sites_(std::move(sites)) {
  check_consistent();
}

void MatrixProductOperator::set_site(std::size_t i, DenseTensor t) {
  if (t.rank() != 4) throw ConfigError("MPO site tensors must be rank 4");
  sites_.at(i) = std::move(t);
}

std::size_t MatrixProductOperator::bond_dim(std::size_t i) const {
  if (i == 0 || sites_.empty() || i >= sites_.size()) return 1;
  return sites_[i].dim(0);
}

std::size_t MatrixProductOperator::max_bond() const {
  std::size_t m = 1;
  for (const auto& s : sites_) m = std::max(m, s.dim(3));
  return m;
}

void MatrixProductOperator::check_consistent() const {
  if (sites_.empty()) return;
  for (const auto& s : sites_)
    if (s.rank() != 4) throw ConfigError("MPO site tensors must be rank 4");
  if (sites_.front().dim(0) != 1 || sites_.back().dim(3) != 1)
    throw ConfigError("MPO boundary bonds must have dimension 1");
  for (std::size_t i = 0; i + 1 < sites_.size(); ++i)
    if (sites_[i].dim(3) != sites_[i + 1].dim(0))
      throw ConfigError("MPO adjacent bond dimensions do not match");
}

MatrixProductOperator MatrixProductOperator::identity(std::size_t n, std::size_t phys_dim) {
  std::vector<MatC> mats(n, MatC::Identity(phys_dim, phys_dim));
  return product_operator(mats);
}

MatrixProductOperator MatrixProductOperator::product_operator(
    const std::vector<MatC>& site_matrices) {
  std::vector<DenseTensor> sites;
  for (const MatC& m : site_matrices) {
    DenseTensor t({1, static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()), 1});
    Eigen::Map<MatC>(t.data().data(), m.rows(), m.cols()) = m;
    sites.push_back(std::move(t));
  }
  return MatrixProductOperator(std::move(sites));
}

namespace {

// QR-push the gauge one site to the right: site i becomes a left isometry,
// the factor is absorbed into site i+1.
void push_right(MatrixProductState& psi, std::size_t i) {
  const DenseTensor& t = psi.site(i);
  const std::size_t l = t.dim(0), d = t.dim(1);
  auto [q, rm] = thin_qr(t.as_matrix(2));
  const std::size_t k = static_cast<std::size_t>(q.cols());
  DenseTensor qt({l, d, k});
  Eigen::Map<MatC>(qt.data().data(), l * d, k) = q;

  const DenseTensor& nxt = psi.site(i + 1);
  const std::size_t d2 = nxt.dim(1), r2 = nxt.dim(2);
  DenseTensor merged({k, d2, r2});
  Eigen::Map<MatC>(merged.data().data(), k, d2 * r2) = rm * nxt.as_matrix(1);
  psi.set_site(i, std::move(qt));
  psi.set_site(i + 1, std::move(merged));
}

// Mirror: site i becomes a right isometry, factor absorbed into site i-1.
void push_left(MatrixProductState& psi, std::size_t i) {
  const DenseTensor& t = psi.site(i);
  const std::size_t d = t.dim(1), r = t.dim(2);
  auto [lm, q] = thin_rq(t.as_matrix(1));
  const std::size_t k = static_cast<std::size_t>(q.rows());
  DenseTensor qt({k, d, r});
  Eigen::Map<MatC>(qt.data().data(), k, d * r) = q;

  const DenseTensor& prv = psi.site(i - 1);
  const std::size_t l2 = prv.dim(0), d2 = prv.dim(1);
  DenseTensor merged({l2, d2, k});
  Eigen::Map<MatC>(merged.data().data(), l2 * d2, k) = prv.as_matrix(2) * lm;
  psi.set_site(i, std::move(qt));
  psi.set_site(i - 1, std::move(merged));
}

}  // namespace

void canonicalize_inplace(MatrixProductState& psi, std::size_t center) {
  const std::size_t n = psi.n_sites();
  if (center >= n) throw ConfigError("canonicalize: center out of range");

  std::size_t lo = 0, hi = n - 1;
  if (psi.ortho_center()) {
    std::size_t c = *psi.ortho_center();
    lo = std::min(c, center);
    hi = std::max(c, center);
  }
  for (std::size_t i = lo; i < center; ++i) push_right(psi, i);
  for (std::size_t i = hi; i > center; --i) push_left(psi, i);
  psi.set_ortho_center(center);
}

MatrixProductState canonicalize(const MatrixProductState& psi, std::size_t center) {
  MatrixProductState out = psi;
  canonicalize_inplace(out, center);
  return out;
}

void scale_inplace(MatrixProductState& psi, cx factor) {
  std::size_t c = psi.ortho_center().value_or(0);
  DenseTensor t = psi.site(c);
  for (cx& v : t.data()) v *= factor;
  psi.set_site(c, std::move(t));
}

cx inner_product(const MatrixProductState& a, const MatrixProductState& b) {
  if (a.n_sites() != b.n_sites()) throw ConfigError("inner_product: length mismatch");
  const std::size_t n = a.n_sites();
  MatC env = MatC::Ones(1, 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (a.phys_dim(i) != b.phys_dim(i))
      throw ConfigError("inner_product: physical dimension mismatch");
    const DenseTensor& ta = a.site(i);
    const DenseTensor& tb = b.site(i);
    const std::size_t la = ta.dim(0), d = ta.dim(1), ra = ta.dim(2);
    const std::size_t lb = tb.dim(0), rb = tb.dim(2);
    if (static_cast<std::size_t>(env.rows()) != la || static_cast<std::size_t>(env.cols()) != lb)
      throw ConfigError("inner_product: bond mismatch");
    // env' = sum_s A^s(dag) env B^s
    MatC tmp = env * tb.as_matrix(1);                    // (la, d*rb)
    Eigen::Map<const MatC> tmap(tmp.data(), la * d, rb); // row-major regroup
    env = ta.as_matrix(2).adjoint() * tmap;              // (ra, rb)
    (void)ra;
  }
  return env(0, 0);
}

double norm(const MatrixProductState& psi) {
  if (psi.ortho_center()) return psi.site(*psi.ortho_center()).norm();
  return std::sqrt(std::abs(inner_product(psi, psi).real()));
}

MatrixProductState normalized(const MatrixProductState& psi) {
  double nn = norm(psi);
  if (nn <= 0.0) throw NumericalError("normalized: zero state");
  std::size_t c = psi.ortho_center().value_or(0);
  MatrixProductState out = psi;
  out.set_site(c, psi.site(c).scaled(1.0 / nn));
  return out;
}

MatrixProductState scaled(const MatrixProductState& psi, cx factor) {
  std::size_t c = psi.ortho_center().value_or(0);
  MatrixProductState out = psi;
  out.set_site(c, psi.site(c).scaled(factor));
  return out;
}

EntanglementSpectrum entanglement_spectrum(const MatrixProductState& psi, std::size_t cut) {
  if (cut == 0 || cut >= psi.n_sites())
    throw ConfigError("entanglement_spectrum: cut must be an interior bond");
  MatrixProductState c = canonicalize(psi, cut - 1);
  const DenseTensor& t = c.site(cut - 1);
  MatSvd svd = svd_matrix_truncated(t.as_matrix(2), TruncationPolicy::exact());
  EntanglementSpectrum out;
  out.cut = cut;
  double total = svd.s.norm();
  if (total <= 0.0) throw NumericalError("entanglement_spectrum: zero state");
  out.values.reserve(svd.s.size());
  for (Eigen::Index i = 0; i < svd.s.size(); ++i) out.values.push_back(svd.s(i) / total);
  return out;
}

double von_neumann_entropy(const EntanglementSpectrum& spec) {
  double s = 0.0;
  for (double lam : spec.values) {
    double p = lam * lam;
    if (p > 1e-300) s -= p * std::log(p);
  }
  return s;
}

}  // namespace magicmps
