#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "gimag/errors.hpp"
#include "gimag/linalg.hpp"
#include "oracles.hpp"

using namespace gimag;

namespace {

RealMatrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  RealMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

}  // namespace

TEST_CASE("symplectic form") {
  CHECK(symplectic_form(1) == mat({{0, 1}, {-1, 0}}));
  const RealMatrix d2 = symplectic_form(2);
  RealMatrix expect = RealMatrix::Zero(4, 4);
  expect.block(0, 0, 2, 2) = symplectic_form(1);
  expect.block(2, 2, 2, 2) = symplectic_form(1);
  CHECK(d2 == expect);
  for (int n = 1; n <= 8; ++n) {
    const RealMatrix d = symplectic_form(n);
    const RealMatrix id = RealMatrix::Identity(2 * n, 2 * n);
    CHECK((d.transpose() + d).norm() == 0.0);
    CHECK((d * d + id).norm() < 1e-12);
    CHECK((d * d.transpose() - id).norm() < 1e-12);
  }
  CHECK_THROWS_AS(symplectic_form(0), InvalidDimension);
  CHECK_THROWS_AS(symplectic_form(kMaxModes + 1), InvalidDimension);
}

TEST_CASE("reflection form") {
  CHECK(reflection_form(1) == mat({{1, 0}, {0, -1}}));
  const RealMatrix s = reflection_form(3);
  CHECK((s * s - RealMatrix::Identity(6, 6)).norm() == 0.0);
}

TEST_CASE("mode permutation") {
  CHECK(mode_permutation(1) == RealMatrix::Identity(2, 2));
  const RealMatrix p2 = mode_permutation(2);
  const int rows[4] = {0, 2, 1, 3};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) CHECK(p2(r, c) == (c == rows[r] ? 1.0 : 0.0));
  }
  for (int n = 1; n <= 8; ++n) {
    const RealMatrix p = mode_permutation(n);
    CHECK((p * p.transpose() - RealMatrix::Identity(2 * n, 2 * n)).norm() < 1e-12);
    RealVector v(2 * n);
    for (int i = 0; i < 2 * n; ++i) v(i) = i + 1;
    const RealVector pv = p * v;
    for (int k = 0; k < n; ++k) {
      CHECK(pv(k) == 2 * k + 1);
      CHECK(pv(n + k) == 2 * k + 2);
    }
  }
  CHECK_THROWS_AS(mode_permutation(0), InvalidDimension);
}

TEST_CASE("selectors") {
  const auto [q1, qp1] = selectors(1);
  CHECK(q1 == mat({{1, 0}}));
  CHECK(qp1 == mat({{0, 1}}));
  for (int n = 1; n <= 5; ++n) {
    const auto [q, qp] = selectors(n);
    CHECK(q.rows() == n);
    CHECK(q.cols() == 2 * n);
    CHECK((q * q.transpose() - RealMatrix::Identity(n, n)).norm() == 0.0);
    CHECK((qp * qp.transpose() - RealMatrix::Identity(n, n)).norm() == 0.0);
    CHECK((q * qp.transpose()).norm() == 0.0);
  }
  CHECK_THROWS_AS(selectors(0), InvalidDimension);
}

TEST_CASE("block split and join") {
  std::mt19937_64 rng(11);
  for (int n = 1; n <= 4; ++n) {
    const RealMatrix m = oracle::gaussian_matrix(rng, 2 * n, 2 * n);
    const BlockSplit b = split_blocks(m);
    // b21 holds momentum rows and position columns of the interleaved matrix.
    for (int k = 0; k < n; ++k) {
      for (int l = 0; l < n; ++l) {
        CHECK(b.b11(k, l) == m(2 * k, 2 * l));
        CHECK(b.b12(k, l) == m(2 * k, 2 * l + 1));
        CHECK(b.b21(k, l) == m(2 * k + 1, 2 * l));
        CHECK(b.b22(k, l) == m(2 * k + 1, 2 * l + 1));
      }
    }
    const RealMatrix p = mode_permutation(n);
    const RealMatrix pm = p * m * p.transpose();
    CHECK((pm.block(n, 0, n, n) - b.b21).norm() < 1e-15);
    CHECK(join_blocks(b.b11, b.b12, b.b21, b.b22) == m);

    const RealVector v = oracle::gaussian_vector(rng, 2 * n);
    const auto [odd, even] = split_vector(v);
    for (int k = 0; k < n; ++k) {
      CHECK(odd(k) == v(2 * k));
      CHECK(even(k) == v(2 * k + 1));
    }
  }
  CHECK_THROWS_AS(split_blocks(RealMatrix::Zero(3, 3)), InvalidDimension);
  CHECK_THROWS_AS(split_blocks(RealMatrix::Zero(2, 4)), InvalidDimension);
}

TEST_CASE("trace and spectral norms") {
  CHECK(trace_norm(RealMatrix::Identity(2, 2)) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(trace_norm(mat({{3, 0}, {0, -4}})) == doctest::Approx(7.0).epsilon(1e-15));
  CHECK(spectral_norm(RealMatrix::Identity(6, 6)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(spectral_norm(mat({{3, 0}, {0, -4}})) == doctest::Approx(4.0).epsilon(1e-15));

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int r = 1 + trial % 4, c = 1 + (trial / 4) % 4;
    const RealMatrix m = oracle::gaussian_matrix(rng, r, c);
    const RealVector s = singular_values(m);
    const RealVector ref = oracle::singular_values_gram(m);
    REQUIRE(s.size() == ref.size());
    CHECK(trace_norm(m) == doctest::Approx(ref.sum()).epsilon(1e-9));
    CHECK(spectral_norm(m) == doctest::Approx(ref(0)).epsilon(1e-9));
    CHECK(spectral_norm(m) <= trace_norm(m) + 1e-12);
  }
  // Unitary invariance.
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 5;
    const RealMatrix m = oracle::gaussian_matrix(rng, n, n);
    const RealMatrix u = oracle::orthogonal(rng, n), v = oracle::orthogonal(rng, n);
    CHECK(trace_norm(u * m * v) == doctest::Approx(trace_norm(m)).epsilon(1e-9));
  }
  RealMatrix bad = RealMatrix::Identity(2, 2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(trace_norm(bad), InvalidInput);
  bad(0, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(spectral_norm(bad), InvalidInput);
  CHECK_FALSE(all_finite(bad));
  CHECK(max_abs(mat({{1, -5}, {2, 3}})) == 5.0);
}

TEST_CASE("hermitian form construction") {
  CHECK_NOTHROW(HermitianForm(RealMatrix::Identity(2, 2), symplectic_form(1)));
  CHECK_THROWS_AS(HermitianForm(mat({{1, 2}, {0, 1}}), RealMatrix::Zero(2, 2)), InvalidInput);
  CHECK_THROWS_AS(HermitianForm(RealMatrix::Identity(2, 2), mat({{0, 1}, {1, 0}})), InvalidInput);
  CHECK_THROWS_AS(HermitianForm(RealMatrix::Identity(2, 2), RealMatrix::Zero(4, 4)), InvalidInput);
  const HermitianForm h(RealMatrix::Identity(2, 2), symplectic_form(1));
  const RealMatrix e = h.real_embedding();
  CHECK(e.rows() == 4);
  CHECK((e - e.transpose()).norm() == 0.0);
}

TEST_CASE("psd test") {
  CHECK(is_psd(HermitianForm(RealMatrix::Identity(2, 2), symplectic_form(1))));
  CHECK(min_eigenvalue(HermitianForm(RealMatrix::Identity(2, 2), symplectic_form(1))) ==
        doctest::Approx(0.0).epsilon(1e-15));
  const HermitianForm half(0.5 * RealMatrix::Identity(2, 2), symplectic_form(1));
  CHECK_FALSE(is_psd(half));
  CHECK(min_eigenvalue(half) == doctest::Approx(-0.5).epsilon(1e-14));

  // Against a complex Hermitian eigensolve.
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> shift(-1.0, 3.0);
  int agreements = 0, compared = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int m = trial < 50 ? 2 : 4;
    const RealMatrix g = oracle::gaussian_matrix(rng, m, m);
    const RealMatrix a = oracle::gaussian_matrix(rng, m, m);
    RealMatrix re = g * g.transpose() * 0.5 + shift(rng) * RealMatrix::Identity(m, m) -
                    RealMatrix::Identity(m, m);
    re = 0.5 * (re + re.transpose()).eval();
    const RealMatrix im = 0.5 * (a - a.transpose());
    const double ref = oracle::min_eig_hermitian(re, im);
    const HermitianForm h(re, im);
    CHECK(min_eigenvalue(h) == doctest::Approx(ref).epsilon(1e-10).scale(1.0));
    if (std::abs(ref) > 1e-6) {
      ++compared;
      agreements += is_psd(h) == (ref >= 0.0);
    }
  }
  CHECK(compared > 50);
  CHECK(agreements == compared);

  // Tolerance is relative to max(1, scale).
  RealMatrix big = 1e6 * RealMatrix::Identity(2, 2);
  big(1, 1) = -1e-4;
  CHECK(is_psd(HermitianForm(big, RealMatrix::Zero(2, 2))));
  big(1, 1) = -1e-2;
  CHECK_FALSE(is_psd(HermitianForm(big, RealMatrix::Zero(2, 2))));
}
