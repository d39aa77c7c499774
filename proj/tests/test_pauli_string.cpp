#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "magicmps/pauli_string.hpp"

using namespace magicmps;

TEST_CASE("text form round trip") {
  PauliString p = PauliString::from_text("+XZIY");
  CHECK(p.n() == 4);
  CHECK(p.code(0) == 1);
  CHECK(p.code(1) == 2);
  CHECK(p.code(2) == 0);
  CHECK(p.code(3) == 3);
  CHECK(p.sign() == 1);
  CHECK(p.text() == "+XZIY");
  CHECK(PauliString::from_text("-IZ").text() == "-IZ");
  CHECK_THROWS_AS(PauliString::from_text("XZ"), ConfigError);
  CHECK_THROWS_AS(PauliString::from_text("+AB"), ConfigError);
}

TEST_CASE("commutation via the symplectic form") {
  auto c = [](const char* a, const char* b) {
    return PauliString::from_text(a).commutes_with(PauliString::from_text(b));
  };
  CHECK_FALSE(c("+X", "+Z"));
  CHECK_FALSE(c("+X", "+Y"));
  CHECK_FALSE(c("+Z", "+Y"));
  CHECK(c("+X", "+X"));
  CHECK(c("+I", "+Y"));
  CHECK(c("+XX", "+ZZ"));
  CHECK_FALSE(c("+XI", "+ZZ"));
  CHECK(c("+XZ", "+ZX"));
}

TEST_CASE("multiplication tracks the phase") {
  PauliProduct r = multiply(PauliString::from_text("+X"), PauliString::from_text("+Z"));
  CHECK(r.result.text() == "+Y");
  CHECK(std::abs(r.phase - cx(0, -1)) < 1e-15);  // XZ = -iY

  r = multiply(PauliString::from_text("+Z"), PauliString::from_text("+X"));
  CHECK(std::abs(r.phase - cx(0, 1)) < 1e-15);

  r = multiply(PauliString::from_text("-Z"), PauliString::from_text("+Z"));
  CHECK(r.result.is_identity());
  CHECK(std::abs(r.phase - cx(-1, 0)) < 1e-15);

  // (+XY)(+YX) = (X.Y)(Y.X) = (iZ)(-iZ) on the two sites => +ZZ... times
  // phases i * -i = 1
  r = multiply(PauliString::from_text("+XY"), PauliString::from_text("+YX"));
  CHECK(r.result.text() == "+ZZ");
  CHECK(std::abs(r.phase - cx(1, 0)) < 1e-15);
}

TEST_CASE("bit packing round trip") {
  PauliString p = PauliString::from_text("-XZIYYIZX");
  PauliString q = PauliString::from_bits(p.to_bits(), p.n(), p.sign());
  CHECK(p == q);
}

TEST_CASE("gf2 basis: rank and span") {
  Gf2Basis basis(8);
  auto bits = [](const char* t) { return PauliString::from_text(t).to_bits(); };
  CHECK(basis.insert(bits("+ZIII")));
  CHECK(basis.insert(bits("+IZII")));
  CHECK_FALSE(basis.insert(bits("+ZZII")));  // dependent
  CHECK(basis.rank() == 2);
  CHECK(basis.in_span(bits("+ZZII")));
  CHECK_FALSE(basis.in_span(bits("+XIII")));
  CHECK(basis.insert(bits("+XXII")));
  CHECK(basis.rank() == 3);
}

TEST_CASE("group membership with signs") {
  std::vector<PauliString> gens = {PauliString::from_text("+ZI"), PauliString::from_text("+IZ")};
  CHECK(group_contains(gens, PauliString::from_text("+ZZ")));
  CHECK_FALSE(group_contains(gens, PauliString::from_text("-ZZ")));
  CHECK_FALSE(group_contains(gens, PauliString::from_text("+XX")));
  CHECK(group_contains(gens, PauliString::from_text("+II")));

  std::vector<PauliString> gens2 = {PauliString::from_text("-ZI"), PauliString::from_text("+IZ")};
  CHECK(group_contains(gens2, PauliString::from_text("-ZZ")));
  CHECK_FALSE(group_contains(gens2, PauliString::from_text("+ZZ")));
}

TEST_CASE("group equality up to generating set") {
  std::vector<PauliString> a = {PauliString::from_text("+ZI"), PauliString::from_text("+IZ")};
  std::vector<PauliString> b = {PauliString::from_text("+ZZ"), PauliString::from_text("+IZ")};
  std::vector<PauliString> c = {PauliString::from_text("+ZI"), PauliString::from_text("-IZ")};
  CHECK(groups_equal(a, b));
  CHECK_FALSE(groups_equal(a, c));
}

TEST_CASE("bell-pair stabilizer group contains -YY") {
  // {+XX, +ZZ} generates the Phi+ group; the product is (X.Z)(X.Z) = (-iY)(-iY) = -YY
  std::vector<PauliString> gens = {PauliString::from_text("+XX"), PauliString::from_text("+ZZ")};
  CHECK(group_contains(gens, PauliString::from_text("-YY")));
  CHECK_FALSE(group_contains(gens, PauliString::from_text("+YY")));
}
