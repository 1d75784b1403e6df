#include "gimag/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gimag/errors.hpp"

namespace gimag {

namespace {

void require_finite(const RealMatrix& m, const char* what) {
  if (!all_finite(m)) throw InvalidInput(std::string(what) + ": non-finite entries");
}

int modes_of(Eigen::Index dim) {
  if (dim <= 0 || dim % 2 != 0) {
    throw InvalidDimension("expected an even positive dimension, got " + std::to_string(dim));
  }
  const int n = static_cast<int>(dim / 2);
  check_mode_count(n);
  return n;
}

}  // namespace

HermitianForm::HermitianForm(RealMatrix real_part, RealMatrix imag_part, double tol)
    : real_(std::move(real_part)), imag_(std::move(imag_part)) {
  if (real_.rows() != real_.cols() || imag_.rows() != imag_.cols() ||
      real_.rows() != imag_.rows() || real_.rows() == 0) {
    throw InvalidInput("hermitian form: parts must be square and of equal size");
  }
  require_finite(real_, "hermitian form real part");
  require_finite(imag_, "hermitian form imaginary part");
  const double scale = std::max({1.0, max_abs(real_), max_abs(imag_)});
  if (max_abs(real_ - real_.transpose()) > tol * scale) {
    throw InvalidInput("hermitian form: real part is not symmetric");
  }
  if (max_abs(imag_ + imag_.transpose()) > tol * scale) {
    throw InvalidInput("hermitian form: imaginary part is not antisymmetric");
  }
}

RealMatrix HermitianForm::real_embedding() const {
  const Eigen::Index m = size();
  RealMatrix e(2 * m, 2 * m);
  e.topLeftCorner(m, m) = real_;
  e.topRightCorner(m, m) = -imag_;
  e.bottomLeftCorner(m, m) = imag_;
  e.bottomRightCorner(m, m) = real_;
  return e;
}

void check_mode_count(int n) {
  if (n < 1 || n > kMaxModes) {
    throw InvalidDimension("mode count must be in [1, " + std::to_string(kMaxModes) +
                           "], got " + std::to_string(n));
  }
}

RealMatrix symplectic_form(int n) {
  check_mode_count(n);
  RealMatrix d = RealMatrix::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    d(2 * k, 2 * k + 1) = 1.0;
    d(2 * k + 1, 2 * k) = -1.0;
  }
  return d;
}

RealMatrix reflection_form(int n) {
  check_mode_count(n);
  RealVector diag(2 * n);
  for (int k = 0; k < n; ++k) {
    diag(2 * k) = 1.0;
    diag(2 * k + 1) = -1.0;
  }
  return diag.asDiagonal();
}

RealMatrix mode_permutation(int n) {
  check_mode_count(n);
  RealMatrix p = RealMatrix::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    p(k, 2 * k) = 1.0;
    p(n + k, 2 * k + 1) = 1.0;
  }
  return p;
}

std::pair<RealMatrix, RealMatrix> selectors(int n) {
  check_mode_count(n);
  RealMatrix q = RealMatrix::Zero(n, 2 * n);
  RealMatrix qp = RealMatrix::Zero(n, 2 * n);
  q.leftCols(n).setIdentity();
  qp.rightCols(n).setIdentity();
  return {q, qp};
}

// Permutation-based block extraction is exact (no arithmetic).
BlockSplit split_blocks(const RealMatrix& m) {
  if (m.rows() != m.cols()) throw InvalidDimension("split_blocks: matrix must be square");
  const int n = modes_of(m.rows());
  BlockSplit out{RealMatrix(n, n), RealMatrix(n, n), RealMatrix(n, n), RealMatrix(n, n)};
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      out.b11(k, l) = m(2 * k, 2 * l);
      out.b12(k, l) = m(2 * k, 2 * l + 1);
      out.b21(k, l) = m(2 * k + 1, 2 * l);
      out.b22(k, l) = m(2 * k + 1, 2 * l + 1);
    }
  }
  return out;
}

RealMatrix join_blocks(const RealMatrix& b11, const RealMatrix& b12, const RealMatrix& b21,
                       const RealMatrix& b22) {
  const Eigen::Index n = b11.rows();
  for (const RealMatrix* b : {&b11, &b12, &b21, &b22}) {
    if (b->rows() != n || b->cols() != n) throw InvalidDimension("join_blocks: block size mismatch");
  }
  check_mode_count(static_cast<int>(n));
  RealMatrix m(2 * n, 2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = 0; l < n; ++l) {
      m(2 * k, 2 * l) = b11(k, l);
      m(2 * k, 2 * l + 1) = b12(k, l);
      m(2 * k + 1, 2 * l) = b21(k, l);
      m(2 * k + 1, 2 * l + 1) = b22(k, l);
    }
  }
  return m;
}

std::pair<RealVector, RealVector> split_vector(const RealVector& v) {
  const int n = modes_of(v.size());
  RealVector odd(n), even(n);
  for (int k = 0; k < n; ++k) {
    odd(k) = v(2 * k);
    even(k) = v(2 * k + 1);
  }
  return {odd, even};
}

RealVector singular_values(const RealMatrix& m) {
  require_finite(m, "singular_values");
  if (m.size() == 0) return RealVector();
  // Jacobi SVD keeps small singular values accurate; sorted descending.
  Eigen::JacobiSVD<RealMatrix> svd(m);
  return svd.singularValues();
}

double trace_norm(const RealMatrix& m) { return singular_values(m).sum(); }

double spectral_norm(const RealMatrix& m) {
  const RealVector s = singular_values(m);
  return s.size() == 0 ? 0.0 : s(0);
}

double max_abs(const RealMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool all_finite(const RealMatrix& m) { return m.allFinite(); }

double min_eigenvalue(const HermitianForm& h) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(h.real_embedding(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool is_psd(const HermitianForm& h, double tol) {
  const double scale = std::max(1.0, spectral_norm(h.real_part()));
  return min_eigenvalue(h) >= -tol * scale;
}

}  // namespace gimag
