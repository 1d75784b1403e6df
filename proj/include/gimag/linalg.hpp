#pragma once

// Small dense real matrix helpers shared by the Gaussian-channel code.
//
// Mode ordering is the interleaved (q1, p1, ..., qn, pn) convention; the
// mode permutation P_n regroups it as (q1..qn, p1..pn).

#include <Eigen/Dense>

#include <utility>

namespace gimag {

using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr int kMaxModes = 64;
inline constexpr double kDefaultPsdTolerance = 1e-9;

// Hermitian matrix stored as real + i * imag.
class HermitianForm {
 public:
  // Throws InvalidInput unless real is symmetric and imag antisymmetric
  // (both square, same size, finite) within tol relative to their scale.
  HermitianForm(RealMatrix real_part, RealMatrix imag_part, double tol = 1e-9);

  const RealMatrix& real_part() const noexcept { return real_; }
  const RealMatrix& imag_part() const noexcept { return imag_; }
  Eigen::Index size() const noexcept { return real_.rows(); }

  // [[X, -Y], [Y, X]]; every eigenvalue of X + iY appears twice.
  RealMatrix real_embedding() const;

 private:
  RealMatrix real_;
  RealMatrix imag_;
};

// Throws InvalidDimension for n outside [1, kMaxModes].
void check_mode_count(int n);

// Delta_n = Delta ⊕ ... ⊕ Delta with Delta = [[0, 1], [-1, 0]].
RealMatrix symplectic_form(int n);

// Sigma_n = diag(1, -1) ⊕ ... ⊕ diag(1, -1).
RealMatrix reflection_form(int n);

// P_n with p_{k,2k-1} = p_{n+k,2k} = 1 (1-based).
RealMatrix mode_permutation(int n);

// (Q_n, Q'_n): n x 2n selectors of the first / last n coordinates.
std::pair<RealMatrix, RealMatrix> selectors(int n);

// Blocks of P_n M P_n^T, each n x n: {11, 12, 21, 22}.
struct BlockSplit {
  RealMatrix b11, b12, b21, b22;
};
BlockSplit split_blocks(const RealMatrix& m);

// Inverse of split_blocks: P_n^T [[b11, b12], [b21, b22]] P_n.
RealMatrix join_blocks(const RealMatrix& b11, const RealMatrix& b12,
                       const RealMatrix& b21, const RealMatrix& b22);

// (odd coordinates, even coordinates) of v in 1-based numbering, i.e. P_n v.
std::pair<RealVector, RealVector> split_vector(const RealVector& v);

RealVector singular_values(const RealMatrix& m);
double trace_norm(const RealMatrix& m);
double spectral_norm(const RealMatrix& m);

double max_abs(const RealMatrix& m);
bool all_finite(const RealMatrix& m);

double min_eigenvalue(const HermitianForm& h);

// min eigenvalue >= -tol * max(1, spectral_norm(real part)).
bool is_psd(const HermitianForm& h, double tol = kDefaultPsdTolerance);

}  // namespace gimag
