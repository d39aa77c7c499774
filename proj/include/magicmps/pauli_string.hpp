#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "magicmps/common.hpp"

namespace magicmps {

/// Signed N-site Pauli string. Per-site 2-bit code: bit0 = x, bit1 = z,
/// so 0 = I, 1 = X, 2 = Z, 3 = Y. The code value doubles as the physical
/// index of Pauli-basis MPS tensors.
class PauliString {
 public:
  explicit PauliString(std::size_t n) : codes_(n, 0), sign_(+1) {}
  PauliString(std::vector<std::uint8_t> codes, int sign = +1);

  /// Text form: sign then symbols, e.g. "+XZIY".
  static PauliString from_text(const std::string& text);
  std::string text() const;

  std::size_t n() const { return codes_.size(); }
  std::uint8_t code(std::size_t site) const { return codes_[site]; }
  void set_code(std::size_t site, std::uint8_t c);
  const std::vector<std::uint8_t>& codes() const { return codes_; }

  int sign() const { return sign_; }
  void set_sign(int s);

  bool x_bit(std::size_t site) const { return codes_[site] & 1u; }
  bool z_bit(std::size_t site) const { return (codes_[site] >> 1) & 1u; }

  bool is_identity() const;

  /// Symplectic form: true when the two strings commute.
  bool commutes_with(const PauliString& other) const;

  /// Code-wise XOR; the sign of the result is +1 (phases are not tracked
  /// here, see multiply()).
  PauliString xor_codes(const PauliString& other) const;

  /// Packed (x,z) bits, two per site, for GF(2) linear algebra.
  std::vector<std::uint64_t> to_bits() const;
  static PauliString from_bits(const std::vector<std::uint64_t>& bits, std::size_t n,
                               int sign = +1);

  bool operator==(const PauliString& o) const { return codes_ == o.codes_ && sign_ == o.sign_; }

 private:
  std::vector<std::uint8_t> codes_;
  int sign_;
};

/// Full product including signs and the i-phases of single-site products.
struct PauliProduct {
  PauliString result;  // carries sign +1; the phase is reported separately
  cx phase;            // in {1, -1, i, -i}, includes both input signs
};
PauliProduct multiply(const PauliString& a, const PauliString& b);

/// Incremental GF(2) row-echelon basis over fixed-width bit vectors.
class Gf2Basis {
 public:
  explicit Gf2Basis(std::size_t n_bits);

  /// Adds v if independent of the current span; returns whether it was added.
  bool insert(const std::vector<std::uint64_t>& v);
  bool in_span(const std::vector<std::uint64_t>& v) const;
  std::size_t rank() const { return rows_.size(); }

  /// Residual of v after elimination against the basis.
  std::vector<std::uint64_t> reduce(const std::vector<std::uint64_t>& v) const;

 private:
  std::size_t n_bits_;
  std::size_t words_;
  std::vector<std::vector<std::uint64_t>> rows_;  // kept in echelon order
  std::vector<std::size_t> pivots_;
};

struct StabilizerGroup {
  std::vector<PauliString> generators;  // independent, signed
  std::size_t nullity = 0;              // N - number of generators
};

/// Membership with sign: decides whether `p` (signed) is generated by the
/// signed generator set.
bool group_contains(const std::vector<PauliString>& generators, const PauliString& p);

/// Two signed generating sets span the same group.
bool groups_equal(const std::vector<PauliString>& a, const std::vector<PauliString>& b);

}  // namespace magicmps
