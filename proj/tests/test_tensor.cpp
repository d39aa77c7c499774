#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "magicmps/decomp.hpp"
#include "magicmps/dense_tensor.hpp"

using namespace magicmps;

namespace {

// triple-loop contraction oracle for a (i,j,k) x b (l,m,k) over the last axes
DenseTensor loop_contract_last(const DenseTensor& a, const DenseTensor& b) {
  const auto& sa = a.shape();
  const auto& sb = b.shape();
  DenseTensor out({sa[0], sa[1], sb[0], sb[1]});
  for (std::size_t i = 0; i < sa[0]; ++i)
    for (std::size_t j = 0; j < sa[1]; ++j)
      for (std::size_t l = 0; l < sb[0]; ++l)
        for (std::size_t m = 0; m < sb[1]; ++m) {
          cx acc(0, 0);
          for (std::size_t k = 0; k < sa[2]; ++k)
            acc += a.at({i, j, k}) * b.at({l, m, k});
          out.at({i, j, l, m}) = acc;
        }
  return out;
}

DenseTensor random_tensor(std::vector<std::size_t> shape, Rng& rng) {
  DenseTensor t(std::move(shape));
  for (cx& v : t.data()) v = rng.complex_normal();
  return t;
}

}  // namespace

TEST_CASE("contract: identity acts trivially") {
  DenseTensor id = DenseTensor::identity(2);
  DenseTensor v({2}, {cx(1, 0), cx(2, 0)});
  DenseTensor r = contract(id, v, {{1, 0}});
  CHECK(r.shape() == std::vector<std::size_t>{2});
  CHECK(r.at({0}) == cx(1, 0));
  CHECK(r.at({1}) == cx(2, 0));
}

TEST_CASE("contract: pauli-x permutes a basis vector") {
  DenseTensor x({2, 2}, {cx(0, 0), cx(1, 0), cx(1, 0), cx(0, 0)});
  DenseTensor v({2}, {cx(1, 0), cx(0, 0)});
  DenseTensor r = contract(x, v, {{1, 0}});
  CHECK(r.at({0}) == cx(0, 0));
  CHECK(r.at({1}) == cx(1, 0));
}

TEST_CASE("contract: random 3x4x5 pair against the loop oracle") {
  Rng rng(11);
  DenseTensor a = random_tensor({3, 4, 5}, rng);
  DenseTensor b = random_tensor({3, 4, 5}, rng);
  DenseTensor got = contract(a, b, {{2, 2}});
  DenseTensor want = loop_contract_last(a, b);
  REQUIRE(got.shape() == want.shape());
  for (std::size_t i = 0; i < got.size(); ++i)
    CHECK(std::abs(got.data()[i] - want.data()[i]) < 1e-12);
}

TEST_CASE("contract: dimension mismatch raises") {
  Rng rng(3);
  DenseTensor a = random_tensor({3, 4}, rng);
  DenseTensor b = random_tensor({5, 2}, rng);
  CHECK_THROWS_AS(contract(a, b, {{1, 0}}), ConfigError);
}

TEST_CASE("contract: associativity against the fused order") {
  Rng rng(17);
  DenseTensor a = random_tensor({2, 3, 4}, rng);
  DenseTensor b = random_tensor({4, 5}, rng);
  DenseTensor c = random_tensor({5, 6}, rng);
  DenseTensor nested = contract(a, contract(b, c, {{1, 0}}), {{2, 0}});
  DenseTensor fused = contract(contract(a, b, {{2, 0}}), c, {{2, 0}});
  double scale = fused.norm();
  for (std::size_t i = 0; i < fused.size(); ++i)
    CHECK(std::abs(nested.data()[i] - fused.data()[i]) < 1e-10 * scale);
}

TEST_CASE("svd: exact low rank keeps rank 1 with zero error") {
  Rng rng(5);
  Eigen::VectorXcd u(6), v(8);
  for (int i = 0; i < 6; ++i) u(i) = rng.complex_normal();
  for (int i = 0; i < 8; ++i) v(i) = rng.complex_normal();
  MatC m = u * v.transpose();
  DenseTensor t = DenseTensor::from_matrix(m);
  for (double eps : {0.0, 1e-12, 1e-3}) {
    SvdResult r = svd_truncated(t, {0}, TruncationPolicy{1000, eps});
    CHECK(r.singular_values.size() == 1);
    CHECK(r.truncation_error == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("svd: identity with rank cap 1 discards half the weight") {
  DenseTensor t = DenseTensor::identity(2);
  SvdResult r = svd_truncated(t, {0}, TruncationPolicy{1, 0.0});
  CHECK(r.singular_values.size() == 1);
  CHECK(r.truncation_error == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("svd: discarded-weight threshold on diag(1, 1e-8)") {
  // keeping rank 1 discards squared weight 1e-16 <= 1e-12, so the
  // threshold rule truncates to rank 1
  DenseTensor t({2, 2}, {cx(1, 0), cx(0, 0), cx(0, 0), cx(1e-8, 0)});
  SvdResult r = svd_truncated(t, {0}, TruncationPolicy{1000, 1e-12});
  CHECK(r.singular_values.size() == 1);
  CHECK(r.truncation_error == doctest::Approx(1e-16).epsilon(1e-3));
  // with a threshold below the discarded weight both values survive
  SvdResult r2 = svd_truncated(t, {0}, TruncationPolicy{1000, 1e-17});
  CHECK(r2.singular_values.size() == 2);
}

TEST_CASE("svd: degenerate values at the cut are kept together") {
  DenseTensor t = DenseTensor::identity(2);
  SvdResult r = svd_truncated(t, {0}, TruncationPolicy{1000, 0.6});
  CHECK(r.singular_values.size() == 2);  // the threshold alone would keep 1
}

TEST_CASE("svd: reconstruction and isometry invariants") {
  Rng rng(23);
  DenseTensor t = random_tensor({6, 4, 8}, rng);
  for (auto policy : {TruncationPolicy::exact(), TruncationPolicy{5, 0.0},
                      TruncationPolicy{1000, 1e-2}}) {
    SvdResult r = svd_truncated(t, {0, 1}, policy);
    const std::size_t k = r.singular_values.size();

    for (std::size_t i = 1; i < k; ++i)
      CHECK(r.singular_values[i] <= r.singular_values[i - 1] + 1e-15);

    MatC um = Eigen::Map<const MatC>(r.u.data().data(), 24, k);
    MatC vm = Eigen::Map<const MatC>(r.vdag.data().data(), k, 8);
    CHECK((um.adjoint() * um - MatC::Identity(k, k)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((vm * vm.adjoint() - MatC::Identity(k, k)).cwiseAbs().maxCoeff() < 1e-12);

    Eigen::VectorXd s(k);
    for (std::size_t i = 0; i < k; ++i) s(i) = r.singular_values[i];
    MatC rec = um * s.asDiagonal() * vm;
    double rel = (rec - t.as_matrix(2)).norm() / t.as_matrix(2).norm();
    CHECK(rel <= std::sqrt(r.truncation_error) + 1e-10);
  }
}

TEST_CASE("svd: a unitary has unit singular values") {
  Rng rng(29);
  DenseTensor t = random_tensor({8, 8}, rng);
  auto [q, rm] = thin_qr(t.as_matrix(1));
  SvdResult r = svd_truncated(DenseTensor::from_matrix(q), {0}, TruncationPolicy::exact());
  REQUIRE(r.singular_values.size() == 8);
  for (double s : r.singular_values) CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("svd: gram backend agrees with the accurate one") {
  Rng rng(31);
  DenseTensor t = random_tensor({48, 600}, rng);
  TruncationPolicy policy{20, 0.0};
  MatSvd acc = svd_matrix_truncated(t.as_matrix(1), policy, SvdBackend::Accurate);
  MatSvd gram = svd_matrix_truncated(t.as_matrix(1), policy, SvdBackend::Gram);
  REQUIRE(acc.s.size() == gram.s.size());
  for (Eigen::Index i = 0; i < acc.s.size(); ++i)
    CHECK(gram.s(i) == doctest::Approx(acc.s(i)).epsilon(1e-9));
  CHECK(gram.truncation_error == doctest::Approx(acc.truncation_error).epsilon(1e-6));
  // both factorizations project onto the same dominant subspace
  MatC pa = acc.u * acc.u.adjoint();
  MatC pg = gram.u * gram.u.adjoint();
  CHECK((pa - pg).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("rq factorization") {
  Rng rng(37);
  DenseTensor t = random_tensor({5, 9}, rng);
  auto [l, q] = thin_rq(t.as_matrix(1));
  CHECK((q * q.adjoint() - MatC::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((l * q - t.as_matrix(1)).cwiseAbs().maxCoeff() < 1e-12);
}
