#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "magicmps/bell.hpp"
#include "magicmps/nullity.hpp"
#include "magicmps/pauli_vector.hpp"

using namespace magicmps;
using namespace testutil;

TEST_CASE("single-qubit gates") {
  TruncationPolicy exact = TruncationPolicy::exact();
  MatrixProductState psi = apply_gate(zero_state(1), GateOp::make(GateKind::H, {0}), exact).psi;
  auto d = mps_to_dense(psi);
  CHECK(std::abs(d.amps[0] - cx(1 / std::sqrt(2.0), 0)) < 1e-12);
  CHECK(std::abs(d.amps[1] - cx(1 / std::sqrt(2.0), 0)) < 1e-12);

  // T on |+> gives |T>, whose order-2 entropy is log2(4/3)
  MatrixProductState t = apply_gate(plus_state(1), GateOp::make(GateKind::T, {0}), exact).psi;
  SreOptions sre;
  CHECK(replica_sre(t, 2, sre).m_n == doctest::Approx(std::log2(4.0 / 3.0)).epsilon(1e-10));
}

TEST_CASE("cnot on |+0> makes a bell pair") {
  TruncationPolicy exact = TruncationPolicy::exact();
  MatrixProductState psi = zero_state(2);
  psi = apply_gate(psi, GateOp::make(GateKind::H, {0}), exact).psi;
  psi = apply_gate(psi, GateOp::make(GateKind::CNOT, {0, 1}), exact).psi;
  EntanglementSpectrum s = entanglement_spectrum(psi, 1);
  REQUIRE(s.values.size() == 2);
  CHECK(s.values[0] == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(norm(psi) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("gate application matches the dense oracle, including routing") {
  Rng rng(501);
  TruncationPolicy exact = TruncationPolicy::exact();
  const std::size_t n = 6;

  std::vector<GateOp> gates = {
      GateOp::make(GateKind::H, {2}),
      GateOp::make(GateKind::CNOT, {1, 2}),
      GateOp::make(GateKind::CNOT, {4, 1}),   // reversed, non-adjacent
      GateOp::make(GateKind::CZ, {0, 5}),     // far pair
      GateOp::make(GateKind::CCZ, {0, 2, 4}), // non-contiguous triple
      GateOp::make(GateKind::T, {3}),
      GateOp::make(GateKind::S, {0}),
  };
  MatrixProductState psi = MatrixProductState::random(n, 2, 3, rng);
  std::vector<cx> dense = mps_to_dense(psi).amps;
  for (const auto& g : gates) {
    GateApplyResult r = apply_gate(psi, g, exact);
    psi = r.psi;
    CHECK(r.truncation_error == doctest::Approx(0.0).epsilon(1e-12));
    dense_apply_gate(dense, n, g.matrix, g.targets);
    CHECK(norm(psi) == doctest::Approx(1.0).epsilon(1e-10));
  }
  auto got = mps_to_dense(psi);
  for (std::size_t i = 0; i < dense.size(); ++i) CHECK(std::abs(got.amps[i] - dense[i]) < 1e-9);
}

TEST_CASE("routing can be disabled") {
  CHECK_THROWS_AS(apply_gate(zero_state(4), GateOp::make(GateKind::CNOT, {0, 2}),
                             TruncationPolicy::exact(), false),
                  ConfigError);
}

TEST_CASE("custom gates must be unitary") {
  MatC bad = MatC::Zero(2, 2);
  bad(0, 0) = 2.0;
  CHECK_THROWS_AS(GateOp::custom(bad, {0}), ConfigError);
}

TEST_CASE("random clifford circuits: determinism and the empty case") {
  CircuitSpec a = random_clifford_circuit(8, 5, 42);
  CircuitSpec b = random_clifford_circuit(8, 5, 42);
  CHECK(circuit_to_text(a) == circuit_to_text(b));
  CircuitSpec c = random_clifford_circuit(8, 5, 43);
  CHECK(circuit_to_text(a) != circuit_to_text(c));

  CircuitSpec empty = random_clifford_circuit(4, 0, 1);
  CHECK(empty.gate_count() == 0);
  MatrixProductState psi = apply_circuit(zero_state(4), empty, TruncationPolicy::exact()).psi;
  CHECK(std::abs(mps_to_dense(psi).amps[0] - cx(1, 0)) < 1e-14);
}

TEST_CASE("clifford circuits on basis states carry no magic") {
  const std::size_t n = 12;
  CircuitSpec c = random_clifford_circuit(n, 3, 7);
  MatrixProductState psi = apply_circuit(zero_state(n), c, TruncationPolicy::exact()).psi;

  SreOptions sre;
  CHECK(replica_sre(psi, 2, sre).m_n == doctest::Approx(0.0).epsilon(1e-8));
  BellOptions bell;
  CHECK(bell_magic(psi, bell).b_additive == doctest::Approx(0.0).epsilon(1e-8));
  NullityOptions nul;
  nul.density_matrix = false;
  NullityResult r = nullity(psi, nul);
  CHECK(r.nu_rounded == 0);
  CHECK(std::abs(r.nu) < 1e-8);
}

TEST_CASE("applying a circuit preserves nullity of t-doped states") {
  const std::size_t n = 8, n_t = 4;
  MatrixProductState base = build_t_doped_state(n, n_t);
  NullityOptions opt;
  opt.density_matrix = false;
  NullityResult before = nullity(base, opt);
  CHECK(before.nu_rounded == static_cast<long>(n_t));
  CircuitSpec c = random_clifford_circuit(n, 2, 3);
  MatrixProductState psi = apply_circuit(base, c, TruncationPolicy::exact()).psi;
  NullityResult after = nullity(psi, opt);
  CHECK(after.nu_rounded == static_cast<long>(n_t));
}

TEST_CASE("t-doped random circuits") {
  CircuitSpec c0 = t_doped_random_circuit(6, 0, 1);
  CHECK(c0.gate_count() == 0);
  BellOptions bell;
  CHECK(bell_magic(y_polarized_state(6), bell).b_additive == doctest::Approx(0.0).epsilon(1e-8));

  // one step carries exactly one T gate: nullity 1
  CircuitSpec c1 = t_doped_random_circuit(6, 1, 2);
  std::size_t t_count = 0;
  for (const auto& layer : c1.layers)
    for (const auto& g : layer) t_count += g.kind == GateKind::T;
  CHECK(t_count == 1);
  MatrixProductState psi = apply_circuit(y_polarized_state(6), c1, TruncationPolicy::exact()).psi;
  NullityOptions opt;
  opt.density_matrix = false;
  CHECK(nullity(psi, opt).nu_rounded == 1);
  ExactNullity en = exact_nullity(exact_pauli_spectrum(mps_to_dense(psi)));
  CHECK(en.nu == doctest::Approx(1.0));
}

TEST_CASE("bell magic grows with t-doping steps on average") {
  // short-time growth, averaged over a few seeds
  const std::size_t n = 6;
  BellOptions bell;
  double sum1 = 0, sum3 = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    for (std::size_t steps : {std::size_t(1), std::size_t(3)}) {
      CircuitSpec c = t_doped_random_circuit(n, steps, seed);
      MatrixProductState psi =
          apply_circuit(y_polarized_state(n), c, TruncationPolicy::exact()).psi;
      (steps == 1 ? sum1 : sum3) += bell_magic(psi, bell).b_additive;
    }
  }
  CHECK(sum3 > sum1);
  CHECK(sum1 > 0.0);
}

TEST_CASE("scrambling circuits") {
  BellOptions bell;
  CircuitSpec c0 = scrambling_circuit(6, 0, 11);
  MatrixProductState s0 = apply_circuit(plus_state(6), c0, TruncationPolicy::exact()).psi;
  CHECK(bell_magic(s0, bell).b_additive == doctest::Approx(0.0).epsilon(1e-8));

  double prev = 0.0;
  for (std::size_t n_ccz : {std::size_t(1), std::size_t(2)}) {
    CircuitSpec c = scrambling_circuit(6, n_ccz, 11);
    MatrixProductState s = apply_circuit(plus_state(6), c, TruncationPolicy::exact()).psi;
    double ba = bell_magic(s, bell).b_additive;
    CHECK(ba >= prev - 1e-8);
    prev = ba;
  }

  // one CCZ on |+++> against the exact oracle
  CircuitSpec one;
  one.n = 3;
  one.layers = {{GateOp::make(GateKind::CCZ, {0, 1, 2})}};
  MatrixProductState ccz = apply_circuit(plus_state(3), one, TruncationPolicy::exact()).psi;
  BellResult got = bell_magic(ccz, bell);
  BellMagicValue want = exact_bell_magic(exact_pauli_spectrum(mps_to_dense(ccz)));
  CHECK(got.b_additive == doctest::Approx(want.b_additive).epsilon(1e-8));
  CHECK(got.b_additive > 0.1);
}

TEST_CASE("circuit text and json round trips") {
  CircuitSpec c = random_clifford_circuit(5, 4, 77);
  c.layers.push_back({GateOp::make(GateKind::CCZ, {1, 2, 3})});

  CircuitSpec t = circuit_from_text(circuit_to_text(c));
  CHECK(t.n == c.n);
  CHECK(circuit_to_text(t) == circuit_to_text(c));

  CircuitSpec j = circuit_from_json(circuit_to_json(c));
  CHECK(j.n == c.n);
  CHECK(circuit_to_text(j) == circuit_to_text(c));

  CHECK_THROWS_AS(circuit_from_text("H 0\n"), ConfigError);          // missing header
  CHECK_THROWS_AS(circuit_from_text("N=2\nH 5\n"), ConfigError);     // out of range
  CHECK_THROWS_AS(circuit_from_text("N=2\nFOO 0\n"), ConfigError);   // unknown gate
}

TEST_CASE("circuit file loader accepts both formats") {
  CircuitSpec c = random_clifford_circuit(4, 2, 5);
  {
    std::ofstream f("/tmp/magicmps_circ.txt");
    f << circuit_to_text(c);
  }
  {
    std::ofstream f("/tmp/magicmps_circ.json");
    f << circuit_to_json(c);
  }
  CHECK(circuit_to_text(load_circuit_file("/tmp/magicmps_circ.txt")) == circuit_to_text(c));
  CHECK(circuit_to_text(load_circuit_file("/tmp/magicmps_circ.json")) == circuit_to_text(c));
  std::remove("/tmp/magicmps_circ.txt");
  std::remove("/tmp/magicmps_circ.json");
}
