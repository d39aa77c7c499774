#include "magicmps/exact.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace magicmps {

DenseState mps_to_dense(const MatrixProductState& psi) {
  const std::size_t n = psi.n_sites();
  if (n > 14) throw ConfigError("mps_to_dense: N <= 14 enforced");
  for (std::size_t i = 0; i < n; ++i)
    if (psi.phys_dim(i) != 2) throw ConfigError("mps_to_dense: qubit states only");

  // accumulate left to right; rows enumerate the configurations seen so far
  MatC acc = MatC::Ones(1, 1);
  for (std::size_t i = 0; i < n; ++i) {
    const DenseTensor& t = psi.site(i);
    const std::size_t l = t.dim(0), d = t.dim(1), r = t.dim(2);
    MatC next(acc.rows() * d, r);
    Eigen::Map<const MatC> m(t.data().data(), l, d * r);
    for (std::size_t s = 0; s < d; ++s)
      next.middleRows(acc.rows() * s, acc.rows()) = acc * m.middleCols(s * r, r);
    // row order must keep site 0 most significant: configurations are
    // built with the new site as the fastest-varying index, so reorder
    MatC reordered(next.rows(), r);
    for (std::size_t s = 0; s < d; ++s)
      for (Eigen::Index c = 0; c < acc.rows(); ++c)
        reordered.row(c * d + s) = next.row(s * acc.rows() + c);
    acc = std::move(reordered);
  }
  DenseState out;
  out.n = n;
  out.amps.assign(acc.data(), acc.data() + acc.rows());
  return out;
}

std::vector<cx> mpo_to_dense(const MatrixProductOperator& w) {
  const std::size_t n = w.n_sites();
  if (n > 8) throw ConfigError("mpo_to_dense: too large");
  for (std::size_t i = 0; i < n; ++i)
    if (w.phys_dim_out(i) != 2 || w.phys_dim_in(i) != 2)
      throw ConfigError("mpo_to_dense: qubit operators only");
  std::size_t dim = 1;
  for (std::size_t i = 0; i < n; ++i) dim *= w.phys_dim_out(i);

  // acc[(row, col), bond]
  MatC acc = MatC::Ones(1, 1);
  std::size_t rows = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const DenseTensor& t = w.site(i);
    const std::size_t l = t.dim(0), dout = t.dim(1), din = t.dim(2), r = t.dim(3);
    MatC next(rows * dout * din, r);
    for (std::size_t a = 0; a < dout; ++a)
      for (std::size_t b = 0; b < din; ++b) {
        MatC block(l, r);
        for (std::size_t x = 0; x < l; ++x)
          for (std::size_t y = 0; y < r; ++y) block(x, y) = t.at({x, a, b, y});
        next.middleRows((a * din + b) * rows, rows) = acc * block;
      }
    // reorder so existing (row,col) pairs stay most significant
    MatC reordered(next.rows(), r);
    for (std::size_t a = 0; a < dout; ++a)
      for (std::size_t b = 0; b < din; ++b)
        for (std::size_t p = 0; p < rows; ++p)
          reordered.row((p * dout + a) * din + b) = next.row((a * din + b) * rows + p);
    acc = std::move(reordered);
    rows *= dout * din;
  }
  // acc rows enumerate interleaved (row_bits, col_bits) per site; unpack
  std::vector<cx> dense(dim * dim, cx(0, 0));
  for (std::size_t packed = 0; packed < rows; ++packed) {
    std::size_t row = 0, col = 0, tmp = packed;
    std::vector<std::size_t> digits(2 * n);
    for (std::size_t k = 2 * n; k-- > 0;) {
      digits[k] = tmp % 2;
      tmp /= 2;
    }
    for (std::size_t i = 0; i < n; ++i) {
      row = row * 2 + digits[2 * i];
      col = col * 2 + digits[2 * i + 1];
    }
    dense[row * dim + col] = acc(packed, 0);
  }
  return dense;
}

std::size_t pack_code(const PauliString& p) {
  std::size_t c = 0;
  for (std::size_t j = 0; j < p.n(); ++j) c = (c << 2) | p.code(j);
  return c;
}

PauliString unpack_code(std::size_t code, std::size_t n) {
  std::vector<std::uint8_t> codes(n);
  for (std::size_t j = n; j-- > 0;) {
    codes[j] = code & 3u;
    code >>= 2;
  }
  return PauliString(std::move(codes));
}

PauliSpectrum exact_pauli_spectrum(const DenseState& s) {
  const std::size_t n = s.n;
  if (n > 10) throw ConfigError("exact_pauli_spectrum: N <= 10 enforced");
  const std::size_t dim = s.amps.size();
  const std::size_t n_codes = std::size_t(1) << (2 * n);

  PauliSpectrum out;
  out.n = n;
  out.expectation.resize(n_codes);
  out.xi.resize(n_codes);
  const double inv2n = 1.0 / static_cast<double>(dim);

  for (std::size_t code = 0; code < n_codes; ++code) {
    // per-site masks over the basis-index bits (site 0 = msb)
    std::size_t xmask = 0, zmask = 0;
    std::size_t ny = 0;
    for (std::size_t j = 0; j < n; ++j) {
      std::uint8_t c = (code >> (2 * (n - 1 - j))) & 3u;
      std::size_t bit = std::size_t(1) << (n - 1 - j);
      if (c & 1u) xmask |= bit;
      if (c & 2u) zmask |= bit;
      if (c == 3u) ++ny;
    }
    // P|b> = i^{ny} (-1)^{popcount(b & zmask)} |b ^ xmask>
    cx acc(0, 0);
    for (std::size_t b = 0; b < dim; ++b) {
      double sgn = (__builtin_popcountll(b & zmask) & 1) ? -1.0 : 1.0;
      acc += std::conj(s.amps[b ^ xmask]) * sgn * s.amps[b];
    }
    static const cx kI[4] = {cx(1, 0), cx(0, 1), cx(-1, 0), cx(0, -1)};
    cx val = kI[ny & 3] * acc;
    out.expectation[code] = val.real();
    out.xi[code] = val.real() * val.real() * inv2n;
  }
  return out;
}

double exact_sre(const PauliSpectrum& spec, double n) {
  const double inv2n = 1.0 / static_cast<double>(std::size_t(1) << spec.n);
  if (std::abs(n - 1.0) < 1e-12) {
    double s = 0.0;
    for (double e : spec.expectation) {
      double p2 = e * e;
      if (p2 > 1e-300) s -= inv2n * p2 * std::log2(p2);
    }
    return s;
  }
  double sum = 0.0;
  for (double e : spec.expectation) sum += std::pow(e * e, n) * inv2n;
  return std::log2(sum) / (1.0 - n);
}

BellMagicValue exact_bell_magic(const PauliSpectrum& spec) {
  if (spec.n > 6) throw ConfigError("exact_bell_magic: N <= 6 enforced");
  const std::size_t n_codes = spec.xi.size();

  // eta(a) = sum_alpha Xi(alpha) Xi(alpha ^ a)
  std::vector<double> eta(n_codes, 0.0);
  for (std::size_t a = 0; a < n_codes; ++a) {
    double acc = 0.0;
    for (std::size_t al = 0; al < n_codes; ++al) acc += spec.xi[al] * spec.xi[al ^ a];
    eta[a] = acc;
  }
  // <Q|Lambda|Q> = sum_{a,b} eta(a) eta(b) (-1)^{symplectic(a,b)}
  double commuting = 0.0;
  const std::size_t n = spec.n;
  for (std::size_t a = 0; a < n_codes; ++a) {
    for (std::size_t b = 0; b < n_codes; ++b) {
      unsigned sym = 0;
      for (std::size_t j = 0; j < n; ++j) {
        std::uint8_t ca = (a >> (2 * j)) & 3u, cb = (b >> (2 * j)) & 3u;
        sym ^= (ca & 1u) & (cb >> 1);
        sym ^= (ca >> 1) & (cb & 1u);
      }
      commuting += (sym ? -1.0 : 1.0) * eta[a] * eta[b];
    }
  }
  BellMagicValue out;
  out.b = 1.0 - commuting;
  if (out.b >= 1.0) throw NumericalError("exact_bell_magic: B >= 1 signals corrupted input");
  out.b_additive = -std::log2(1.0 - out.b);
  return out;
}

BellMagicValue exact_bell_magic_quadruple_sum(const PauliSpectrum& spec) {
  if (spec.n > 3) throw ConfigError("exact_bell_magic_quadruple_sum: N <= 3 enforced");
  const std::size_t n_codes = spec.xi.size();
  const std::size_t n = spec.n;
  auto anticommute = [n](std::size_t a, std::size_t b) {
    unsigned sym = 0;
    for (std::size_t j = 0; j < n; ++j) {
      std::uint8_t ca = (a >> (2 * j)) & 3u, cb = (b >> (2 * j)) & 3u;
      sym ^= (ca & 1u) & (cb >> 1);
      sym ^= (ca >> 1) & (cb & 1u);
    }
    return sym != 0;
  };
  double b = 0.0;
  for (std::size_t al = 0; al < n_codes; ++al)
    for (std::size_t alp = 0; alp < n_codes; ++alp)
      for (std::size_t be = 0; be < n_codes; ++be)
        for (std::size_t bep = 0; bep < n_codes; ++bep)
          if (anticommute(al ^ alp, be ^ bep))
            b += 2.0 * spec.xi[al] * spec.xi[alp] * spec.xi[be] * spec.xi[bep];
  BellMagicValue out;
  out.b = b;
  if (out.b >= 1.0) throw NumericalError("exact_bell_magic_quadruple_sum: B >= 1");
  out.b_additive = -std::log2(1.0 - out.b);
  return out;
}

ExactNullity exact_nullity(const PauliSpectrum& spec, double tol) {
  const std::size_t n = spec.n;
  std::vector<std::size_t> members;
  for (std::size_t code = 0; code < spec.expectation.size(); ++code)
    if (std::abs(spec.expectation[code]) >= 1.0 - tol) members.push_back(code);

  // group closure over GF(2)
  for (std::size_t a : members)
    for (std::size_t b : members) {
      std::size_t c = a ^ b;
      if (std::abs(spec.expectation[c]) < 1.0 - tol)
        throw NumericalError("exact_nullity: collected codes are not closed under XOR");
    }

  double k = std::log2(static_cast<double>(members.size()));
  ExactNullity out;
  out.nu = static_cast<double>(n) - k;

  Gf2Basis basis(2 * n);
  for (std::size_t code : members) {
    if (code == 0) continue;
    PauliString p = unpack_code(code, n);
    if (basis.insert(p.to_bits())) {
      p.set_sign(spec.expectation[code] > 0 ? +1 : -1);
      out.generators.push_back(std::move(p));
    }
  }
  return out;
}

MagicGapValue exact_magic_gap(const PauliSpectrum& spec, double tol) {
  double best = 0.0;
  for (double e : spec.expectation) {
    double a = std::abs(e);
    if (a < 1.0 - tol && a > best) best = a;
  }
  MagicGapValue out;
  if (best <= tol) {
    out.value = 1.0;
    out.stabilizer_flagged = true;
    return out;
  }
  out.value = 1.0 - best;
  return out;
}

double ising_free_fermion_energy(std::size_t n, double h) {
  // H = -sum sx sx - h sum sz maps to free fermions; the ground energy is
  // -1/2 the sum of singular values of A - B with A the hopping+field
  // matrix and B the pairing matrix.
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 2.0 * h;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    // A off-diagonal -1 both ways; B_{i,i+1} = -1, B_{i+1,i} = +1
    m(i, i + 1) = -1.0 - (-1.0);  // A - B
    m(i + 1, i) = -1.0 - (+1.0);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return -0.5 * svd.singularValues().sum();
}

}  // namespace magicmps
