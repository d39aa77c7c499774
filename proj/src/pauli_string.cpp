#include "magicmps/pauli_string.hpp"

#include <algorithm>

namespace magicmps {

namespace {
constexpr char kSymbols[4] = {'I', 'X', 'Z', 'Y'};

// exponent e of i in P_a P_b = i^e P_{a xor b}
constexpr int kPhaseExp[4][4] = {
    {0, 0, 0, 0},  // I.
    {0, 0, 3, 1},  // X. : XZ=-iY, XY=iZ
    {0, 1, 0, 3},  // Z. : ZX=iY,  ZY=-iX
    {0, 3, 1, 0},  // Y. : YX=-iZ, YZ=iX
};
}  // namespace

PauliString::PauliString(std::vector<std::uint8_t> codes, int sign)
    : codes_(std::move(codes)), sign_(sign) {
  for (std::uint8_t c : codes_)
    if (c > 3) throw ConfigError("PauliString: codes must be in {0,1,2,3}");
  set_sign(sign);
}

void PauliString::set_code(std::size_t site, std::uint8_t c) {
  if (c > 3) throw ConfigError("PauliString: codes must be in {0,1,2,3}");
  codes_.at(site) = c;
}

void PauliString::set_sign(int s) {
  if (s != 1 && s != -1) throw ConfigError("PauliString: sign must be +1 or -1");
  sign_ = s;
}

PauliString PauliString::from_text(const std::string& text) {
  if (text.size() < 2 || (text[0] != '+' && text[0] != '-'))
    throw ConfigError("PauliString: text must start with a sign: " + text);
  std::vector<std::uint8_t> codes;
  codes.reserve(text.size() - 1);
  for (std::size_t i = 1; i < text.size(); ++i) {
    switch (text[i]) {
      case 'I': codes.push_back(0); break;
      case 'X': codes.push_back(1); break;
      case 'Z': codes.push_back(2); break;
      case 'Y': codes.push_back(3); break;
      default: throw ConfigError(std::string("PauliString: bad symbol '") + text[i] + "'");
    }
  }
  return PauliString(std::move(codes), text[0] == '+' ? +1 : -1);
}

std::string PauliString::text() const {
  std::string s(1, sign_ > 0 ? '+' : '-');
  s.reserve(1 + codes_.size());
  for (std::uint8_t c : codes_) s.push_back(kSymbols[c]);
  return s;
}

bool PauliString::is_identity() const {
  return std::all_of(codes_.begin(), codes_.end(), [](std::uint8_t c) { return c == 0; });
}

bool PauliString::commutes_with(const PauliString& other) const {
  if (n() != other.n()) throw ConfigError("commutes_with: length mismatch");
  unsigned acc = 0;
  for (std::size_t j = 0; j < codes_.size(); ++j) {
    acc ^= (codes_[j] & 1u) & ((other.codes_[j] >> 1) & 1u);
    acc ^= ((codes_[j] >> 1) & 1u) & (other.codes_[j] & 1u);
  }
  return acc == 0;
}

PauliString PauliString::xor_codes(const PauliString& other) const {
  if (n() != other.n()) throw ConfigError("xor_codes: length mismatch");
  std::vector<std::uint8_t> out(codes_.size());
  for (std::size_t j = 0; j < codes_.size(); ++j) out[j] = codes_[j] ^ other.codes_[j];
  return PauliString(std::move(out), +1);
}

std::vector<std::uint64_t> PauliString::to_bits() const {
  const std::size_t nb = 2 * codes_.size();
  std::vector<std::uint64_t> bits((nb + 63) / 64, 0);
  for (std::size_t j = 0; j < codes_.size(); ++j) {
    if (codes_[j] & 1u) bits[(2 * j) / 64] |= 1ull << ((2 * j) % 64);
    if (codes_[j] & 2u) bits[(2 * j + 1) / 64] |= 1ull << ((2 * j + 1) % 64);
  }
  return bits;
}

PauliString PauliString::from_bits(const std::vector<std::uint64_t>& bits, std::size_t n,
                                   int sign) {
  std::vector<std::uint8_t> codes(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    std::uint8_t x = (bits[(2 * j) / 64] >> ((2 * j) % 64)) & 1u;
    std::uint8_t z = (bits[(2 * j + 1) / 64] >> ((2 * j + 1) % 64)) & 1u;
    codes[j] = static_cast<std::uint8_t>(x | (z << 1));
  }
  return PauliString(std::move(codes), sign);
}

PauliProduct multiply(const PauliString& a, const PauliString& b) {
  if (a.n() != b.n()) throw ConfigError("multiply: length mismatch");
  int exp = 0;
  std::vector<std::uint8_t> codes(a.n());
  for (std::size_t j = 0; j < a.n(); ++j) {
    exp = (exp + kPhaseExp[a.code(j)][b.code(j)]) & 3;
    codes[j] = a.code(j) ^ b.code(j);
  }
  static const cx kI[4] = {cx(1, 0), cx(0, 1), cx(-1, 0), cx(0, -1)};
  PauliProduct out{PauliString(std::move(codes), +1),
                   kI[exp] * static_cast<double>(a.sign() * b.sign())};
  return out;
}

Gf2Basis::Gf2Basis(std::size_t n_bits) : n_bits_(n_bits), words_((n_bits + 63) / 64) {}

namespace {
std::size_t leading_bit(const std::vector<std::uint64_t>& v, std::size_t n_bits) {
  for (std::size_t w = (n_bits + 63) / 64; w-- > 0;) {
    if (v[w] == 0) continue;
    return w * 64 + (63 - static_cast<std::size_t>(__builtin_clzll(v[w])));
  }
  return static_cast<std::size_t>(-1);  // zero vector
}
}  // namespace

std::vector<std::uint64_t> Gf2Basis::reduce(const std::vector<std::uint64_t>& v) const {
  std::vector<std::uint64_t> r = v;
  r.resize(words_, 0);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    std::size_t p = pivots_[i];
    if ((r[p / 64] >> (p % 64)) & 1ull)
      for (std::size_t w = 0; w < words_; ++w) r[w] ^= rows_[i][w];
  }
  return r;
}

bool Gf2Basis::in_span(const std::vector<std::uint64_t>& v) const {
  auto r = reduce(v);
  return std::all_of(r.begin(), r.end(), [](std::uint64_t w) { return w == 0; });
}

bool Gf2Basis::insert(const std::vector<std::uint64_t>& v) {
  auto r = reduce(v);
  std::size_t p = leading_bit(r, n_bits_);
  if (p == static_cast<std::size_t>(-1)) return false;
  // keep echelon order by pivot, and back-substitute into existing rows
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if ((rows_[i][p / 64] >> (p % 64)) & 1ull)
      for (std::size_t w = 0; w < words_; ++w) rows_[i][w] ^= r[w];
  }
  std::size_t pos = 0;
  while (pos < pivots_.size() && pivots_[pos] > p) ++pos;
  rows_.insert(rows_.begin() + pos, r);
  pivots_.insert(pivots_.begin() + pos, p);
  return true;
}

bool group_contains(const std::vector<PauliString>& generators, const PauliString& p) {
  if (generators.empty()) return p.is_identity() && p.sign() == 1;
  const std::size_t n = generators.front().n();
  const std::size_t nb = 2 * n;

  // solve for the subset of generators whose codes XOR to p's code
  Gf2Basis basis(nb);
  std::vector<std::size_t> order;
  std::vector<std::vector<std::uint64_t>> rows;
  std::vector<std::vector<bool>> combo;  // which original generators built each row
  for (std::size_t g = 0; g < generators.size(); ++g) {
    auto bits = generators[g].to_bits();
    // manual elimination with combination tracking
    std::vector<bool> c(generators.size(), false);
    c[g] = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      std::size_t p2 = leading_bit(rows[i], nb);
      if ((bits[p2 / 64] >> (p2 % 64)) & 1ull) {
        for (std::size_t w = 0; w < bits.size(); ++w) bits[w] ^= rows[i][w];
        for (std::size_t j = 0; j < c.size(); ++j) c[j] = c[j] != combo[i][j];
      }
    }
    if (leading_bit(bits, nb) != static_cast<std::size_t>(-1)) {
      rows.push_back(bits);
      combo.push_back(c);
    }
  }
  auto target = p.to_bits();
  std::vector<bool> pick(generators.size(), false);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::size_t p2 = leading_bit(rows[i], nb);
    if ((target[p2 / 64] >> (p2 % 64)) & 1ull) {
      for (std::size_t w = 0; w < target.size(); ++w) target[w] ^= rows[i][w];
      for (std::size_t j = 0; j < pick.size(); ++j) pick[j] = pick[j] != combo[i][j];
    }
  }
  if (leading_bit(target, nb) != static_cast<std::size_t>(-1)) return false;  // not in span

  // multiply the chosen signed generators; the product phase must match
  PauliString acc(n);
  cx phase(1, 0);
  for (std::size_t g = 0; g < generators.size(); ++g) {
    if (!pick[g]) continue;
    PauliProduct pr = multiply(acc, generators[g]);
    acc = pr.result;
    phase *= pr.phase;
  }
  if (std::abs(phase.imag()) > 1e-12) return false;  // not Hermitian: not a stabilizer element
  return (phase.real() > 0 ? +1 : -1) == p.sign();
}

bool groups_equal(const std::vector<PauliString>& a, const std::vector<PauliString>& b) {
  for (const auto& g : b)
    if (!group_contains(a, g)) return false;
  for (const auto& g : a)
    if (!group_contains(b, g)) return false;
  return true;
}

}  // namespace magicmps
