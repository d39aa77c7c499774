#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "magicmps/pauli_vector.hpp"
#include "magicmps/sample.hpp"

using namespace magicmps;
using namespace testutil;

namespace {

double amp_at(const PauliVector& pv, const char* text) {
  return pauli_amplitude(pv.mps, PauliString::from_text(text)).real();
}

}  // namespace

TEST_CASE("pauli vector of |0>") {
  PauliVector pv = build_pauli_vector(zero_state(1), TruncationPolicy::exact());
  const double isq = 1.0 / std::sqrt(2.0);
  CHECK(amp_at(pv, "+I") == doctest::Approx(isq).epsilon(1e-12));
  CHECK(amp_at(pv, "+X") == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(amp_at(pv, "+Y") == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(amp_at(pv, "+Z") == doctest::Approx(isq).epsilon(1e-12));
}

TEST_CASE("pauli vector of |T>") {
  PauliVector pv = build_pauli_vector(t_state(), TruncationPolicy::exact());
  const double isq = 1.0 / std::sqrt(2.0);
  CHECK(amp_at(pv, "+I") == doctest::Approx(isq).epsilon(1e-12));
  CHECK(amp_at(pv, "+X") == doctest::Approx(isq * isq).epsilon(1e-12));
  CHECK(amp_at(pv, "+Y") == doctest::Approx(isq * isq).epsilon(1e-12));
  CHECK(amp_at(pv, "+Z") == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("pauli vector matches the dense expectation oracle everywhere") {
  Rng rng(201);
  const std::size_t n = 5;
  MatrixProductState psi = MatrixProductState::random(n, 2, 4, rng);
  PauliVector pv = build_pauli_vector(psi, TruncationPolicy::exact());
  PauliSpectrum spec = exact_pauli_spectrum(mps_to_dense(psi));
  const double scale = std::pow(2.0, -0.5 * n);
  for (std::size_t code = 0; code < spec.expectation.size(); ++code) {
    cx amp = pauli_amplitude(pv.mps, unpack_code(code, n));
    CHECK(std::abs(amp.imag()) < 1e-10);
    CHECK(std::abs(amp.real() - spec.expectation[code] * scale) < 1e-10);
  }
}

TEST_CASE("pauli vector is normalized; requires a normalized input") {
  Rng rng(202);
  MatrixProductState psi = MatrixProductState::random(6, 2, 4, rng);
  PauliVector pv = build_pauli_vector(psi, TruncationPolicy::exact());
  CHECK(norm(pv.mps) == doctest::Approx(1.0).epsilon(1e-10));

  MatrixProductState bad = scaled(psi, 2.0);
  CHECK_THROWS_AS(build_pauli_vector(bad, TruncationPolicy::exact()), NumericalError);
}

TEST_CASE("pauli vector build with compression reports its error") {
  Rng rng(203);
  MatrixProductState psi = MatrixProductState::random(8, 2, 8, rng);
  PauliVector exact = build_pauli_vector(psi, TruncationPolicy::exact());
  PauliVector trunc = build_pauli_vector(psi, TruncationPolicy{6, 0.0});
  CHECK(trunc.build_truncation_error > 0.0);
  CHECK(trunc.mps.max_bond() <= 6);
  double f = std::norm(inner_product(trunc.mps, exact.mps)) /
             std::norm(inner_product(trunc.mps, trunc.mps).real());
  CHECK(f >= 1.0 - 1.1 * trunc.build_truncation_error);
}

TEST_CASE("diagonal operator reproduces the vector on the uniform input") {
  PauliVector pv = build_pauli_vector(zero_state(1), TruncationPolicy::exact());
  MatrixProductOperator w = build_diagonal_w(pv);
  // all-equal-weight vector in the Pauli basis
  MatrixProductState ones = MatrixProductState::product_state({{1.0, 1.0, 1.0, 1.0}});
  CompressResult r = apply_mpo(w, ones, TruncationPolicy::exact());
  for (const char* t : {"+I", "+X", "+Y", "+Z"})
    CHECK(pauli_amplitude(r.psi, PauliString::from_text(t)).real() ==
          doctest::Approx(amp_at(pv, t)).epsilon(1e-12));
}

TEST_CASE("diagonal apply squares the expectations") {
  Rng rng(204);
  const std::size_t n = 4;
  MatrixProductState psi = MatrixProductState::random(n, 2, 3, rng);
  PauliVector pv = build_pauli_vector(psi, TruncationPolicy::exact());
  CompressResult p2 = apply_diagonal_vector(pv.mps, pv.mps, TruncationPolicy::exact());
  PauliSpectrum spec = exact_pauli_spectrum(mps_to_dense(psi));
  const double scale = 1.0 / std::pow(2.0, n);
  for (std::size_t code = 0; code < spec.expectation.size(); ++code) {
    double want = spec.expectation[code] * spec.expectation[code] * scale;
    cx got = pauli_amplitude(p2.psi, unpack_code(code, n));
    CHECK(std::abs(got - cx(want, 0)) < 1e-10);
  }
}

TEST_CASE("specialized diagonal apply agrees with the generic mpo path") {
  Rng rng(205);
  MatrixProductState psi = MatrixProductState::random(4, 2, 3, rng);
  PauliVector pv = build_pauli_vector(psi, TruncationPolicy::exact());
  MatrixProductOperator w = build_diagonal_w(pv);
  CompressResult generic = apply_mpo(w, pv.mps, TruncationPolicy::exact());
  CompressResult fast = apply_diagonal_vector(pv.mps, pv.mps, TruncationPolicy::exact());
  CHECK(std::abs(inner_product(generic.psi, fast.psi) -
                 inner_product(generic.psi, generic.psi)) < 1e-10);
  CHECK(norm(fast.psi) == doctest::Approx(norm(generic.psi)).epsilon(1e-10));
}

TEST_CASE("density-matrix variant of the diagonal apply") {
  Rng rng(206);
  MatrixProductState psi = MatrixProductState::random(5, 2, 4, rng);
  PauliVector pv = build_pauli_vector(psi, TruncationPolicy::exact());
  CompressResult a = apply_diagonal_vector(pv.mps, pv.mps, TruncationPolicy::exact());
  CompressResult b =
      apply_diagonal_vector(pv.mps, pv.mps, TruncationPolicy::exact(), SvdBackend::Auto, true);
  CHECK(std::abs(inner_product(a.psi, b.psi).real() - norm(a.psi) * norm(a.psi)) < 1e-9);
}

TEST_CASE("replica sre: stabilizer states vanish") {
  SreOptions opt;
  for (std::size_t n : {std::size_t(2), std::size_t(3), std::size_t(4)}) {
    CHECK(replica_sre(zero_state(4), n, opt).m_n == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(replica_sre(ghz_state(4), n, opt).m_n == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(replica_sre(cluster_state(4), n, opt).m_n == doctest::Approx(0.0).epsilon(1e-8));
  }
}

TEST_CASE("replica sre: |T> and additivity") {
  SreOptions opt;
  const double m2_t = std::log2(4.0 / 3.0);
  CHECK(replica_sre(t_state(), 2, opt).m_n == doctest::Approx(m2_t).epsilon(1e-10));
  for (std::size_t k : {std::size_t(2), std::size_t(4), std::size_t(6)}) {
    MatrixProductState psi = build_t_doped_state(k, k);  // |T>^{⊗k}
    CHECK(replica_sre(psi, 2, opt).m_n == doctest::Approx(k * m2_t).epsilon(1e-8));
  }
}

TEST_CASE("replica sre matches the exact oracle on random states") {
  Rng rng(207);
  SreOptions opt;
  for (int rep = 0; rep < 3; ++rep) {
    MatrixProductState psi = MatrixProductState::random(4, 2, 4, rng);
    PauliSpectrum spec = exact_pauli_spectrum(mps_to_dense(psi));
    for (std::size_t n : {std::size_t(2), std::size_t(3)}) {
      SreResult r = replica_sre(psi, n, opt);
      CHECK(r.m_n == doctest::Approx(exact_sre(spec, n)).epsilon(1e-8));
    }
  }
}

TEST_CASE("replica sre: truncation abort fires") {
  Rng rng(208);
  MatrixProductState psi = MatrixProductState::random(8, 2, 8, rng);
  SreOptions opt;
  opt.replica_policy = TruncationPolicy{2, 0.0};
  opt.abort_error = 1e-12;
  CHECK_THROWS_AS(replica_sre(psi, 2, opt), NumericalError);
}

TEST_CASE("pauli basis doubles the entanglement") {
  Rng rng(209);
  MatrixProductState psi = MatrixProductState::random(6, 2, 4, rng);
  PauliVector pv = build_pauli_vector(psi, TruncationPolicy::exact());
  const std::size_t cut = 3;
  EntanglementSpectrum s = entanglement_spectrum(psi, cut);
  EntanglementSpectrum sp = entanglement_spectrum(pv.mps, cut);

  std::vector<double> outer;
  for (double a : s.values)
    for (double b : s.values) outer.push_back(a * b);
  std::sort(outer.begin(), outer.end(), std::greater<double>());
  REQUIRE(sp.values.size() <= outer.size());
  for (std::size_t i = 0; i < sp.values.size(); ++i)
    CHECK(std::abs(sp.values[i] - outer[i]) < 1e-8);

  CHECK(von_neumann_entropy(sp) == doctest::Approx(2.0 * von_neumann_entropy(s)).epsilon(1e-6));
}

TEST_CASE("sampling the pauli vector of |T> reproduces the characteristic function") {
  PauliVector pv = build_pauli_vector(t_state(), TruncationPolicy::exact());
  PerfectSampler sampler(pv.mps);
  Rng rng(210);
  const std::size_t n_draws = 40000;
  std::array<std::size_t, 4> counts{0, 0, 0, 0};
  for (std::size_t i = 0; i < n_draws; ++i) counts[sampler.sample(rng).configuration[0]]++;
  // code order I, X, Z, Y; expected (1/2, 1/4, 0, 1/4)
  const std::array<double, 4> p{0.5, 0.25, 0.0, 0.25};
  for (std::size_t c = 0; c < 4; ++c) {
    double sigma = std::sqrt(p[c] * (1 - p[c]) * n_draws);
    CHECK(std::abs(static_cast<double>(counts[c]) - p[c] * n_draws) <= std::max(3.0 * sigma, 1.0));
  }
}

TEST_CASE("mps_add forms linear combinations") {
  Rng rng(211);
  MatrixProductState a = MatrixProductState::random(5, 2, 3, rng);
  MatrixProductState b = MatrixProductState::random(5, 2, 3, rng);
  MatrixProductState sum = mps_add(a, b, cx(0.5, 0), cx(0, -2.0));
  auto da = mps_to_dense(a), db = mps_to_dense(b), ds = mps_to_dense(sum);
  for (std::size_t i = 0; i < ds.amps.size(); ++i)
    CHECK(std::abs(ds.amps[i] - (cx(0.5, 0) * da.amps[i] + cx(0, -2.0) * db.amps[i])) < 1e-10);
}
