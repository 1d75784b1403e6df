#include "gimag/sampling.hpp"

#include <cmath>
#include <complex>

#include "gimag/errors.hpp"

namespace gimag {

namespace {

using ComplexMatrix = Eigen::MatrixXcd;

constexpr int kMaxAttempts = 100;

RealMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  RealMatrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = g(rng);
  return m;
}

RealVector gaussian_vector(Eigen::Index size, std::mt19937_64& rng) {
  return gaussian_matrix(size, 1, rng).col(0);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Unitary from the QR factor of a complex Gaussian, with the phase fix that
// makes it Haar distributed.
bool haar_unitary(int n, std::mt19937_64& rng, bool real_only, ComplexMatrix& out) {
  const RealMatrix re = gaussian_matrix(n, n, rng);
  const RealMatrix im = real_only ? RealMatrix::Zero(n, n) : gaussian_matrix(n, n, rng);
  ComplexMatrix z(n, n);
  z.real() = re;
  z.imag() = im;
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  ComplexMatrix q = qr.householderQ();
  for (int k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    if (!(mag > 1e-12)) return false;
    q.col(k) *= r(k, k) / mag;
  }
  const double err = (q * q.adjoint() - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (!(err < 1e-12)) return false;
  out = q;
  return true;
}

void zero_momentum(RealVector& v) {
  for (Eigen::Index k = 1; k < v.size(); k += 2) v(k) = 0.0;
}

void zero_momentum_rows(RealMatrix& m) {
  for (Eigen::Index r = 1; r < m.rows(); r += 2) m.row(r).setZero();
}

void zero_cross_blocks(RealMatrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      if ((r % 2) != (c % 2)) m(r, c) = 0.0;
}

RealMatrix random_psd(int dim, std::mt19937_64& rng) {
  const RealMatrix g = gaussian_matrix(dim, dim, rng);
  return g * g.transpose() / static_cast<double>(dim);
}

void rescale_spectral(RealMatrix& m, double target) {
  const double s = spectral_norm(m);
  if (s > 0.0) m *= target / s;
}

// Lift X + iY to the interleaved real form.
RealMatrix realify(const ComplexMatrix& u) {
  const RealMatrix x = u.real();
  const RealMatrix y = u.imag();
  return join_blocks(x, -y, y, x);
}

// Smallest c with N + c I + iK >= 0 for antisymmetric K is ||K||_2.
RealMatrix compensate(RealMatrix noise, const RealMatrix& k) {
  const double need = spectral_norm(k);
  const double scale = std::max(1.0, need);
  noise += (need + kSamplerMargin * scale) * RealMatrix::Identity(noise.rows(), noise.cols());
  return 0.5 * (noise + noise.transpose());
}

}  // namespace

RealMatrix sample_passive_orthogonal(int n, std::mt19937_64& rng, bool covariant) {
  check_mode_count(n);
  ComplexMatrix u;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    if (haar_unitary(n, rng, covariant, u)) return realify(u);
  }
  throw SamplingError("orthogonal sampler failed after " + std::to_string(kMaxAttempts) +
                      " attempts");
}

GaussianState sample_random_state(int n, std::uint64_t seed, bool real) {
  check_mode_count(n);
  std::mt19937_64 rng(seed);
  const RealMatrix o1 = sample_passive_orthogonal(n, rng, real);
  const RealMatrix o2 = sample_passive_orthogonal(n, rng, real);
  RealVector squeeze(2 * n), thermal(2 * n);
  for (int k = 0; k < n; ++k) {
    const double r = uniform(rng, -1.0, 1.0);
    squeeze(2 * k) = std::exp(r);
    squeeze(2 * k + 1) = std::exp(-r);
    const double t = 1.0 + uniform(rng, 0.0, 2.0);
    thermal(2 * k) = t;
    thermal(2 * k + 1) = t;
  }
  const RealMatrix s = o1 * squeeze.asDiagonal() * o2;
  RealMatrix nu = s * thermal.asDiagonal() * s.transpose();
  nu = 0.5 * (nu + nu.transpose());
  RealVector d = gaussian_vector(2 * n, rng);
  if (real) {
    zero_momentum(d);
    zero_cross_blocks(nu);
  }
  return GaussianState(std::move(d), std::move(nu));
}

GaussianChannel sample_random_channel(int n, std::uint64_t seed, ChannelClass cls) {
  check_mode_count(n);
  std::mt19937_64 rng(seed);
  const int dim = 2 * n;
  const RealMatrix delta = symplectic_form(n);

  RealMatrix t = gaussian_matrix(dim, dim, rng);
  if (cls == ChannelClass::completely_real) zero_momentum_rows(t);
  if (cls == ChannelClass::covariant_real) zero_cross_blocks(t);
  rescale_spectral(t, uniform(rng, 0.2, 1.5));

  RealMatrix noise = random_psd(dim, rng) * uniform(rng, 0.0, 1.0);
  RealVector d = gaussian_vector(dim, rng);
  if (cls != ChannelClass::any) {
    zero_cross_blocks(noise);
    zero_momentum(d);
  }
  RealMatrix nmat = compensate(std::move(noise), delta - t * delta * t.transpose());
  return GaussianChannel(std::move(t), std::move(nmat), std::move(d));
}

GaussianSuperchannel sample_random_superchannel(int n, std::uint64_t seed, SuperchannelClass cls,
                                                SuperchannelOptions opts) {
  check_mode_count(n);
  std::mt19937_64 rng(seed);
  const int dim = 2 * n;
  const RealMatrix delta = symplectic_form(n);

  RealMatrix o = sample_passive_orthogonal(n, rng, cls == SuperchannelClass::real_blocks);

  RealMatrix a = gaussian_matrix(dim, dim, rng);
  if (cls == SuperchannelClass::real_rows || cls == SuperchannelClass::breaking) {
    zero_momentum_rows(a);
  }
  if (cls == SuperchannelClass::real_blocks) zero_cross_blocks(a);
  rescale_spectral(a, opts.unit_norm_a ? 1.0 : uniform(rng, 0.2, 1.5));

  RealMatrix noise = random_psd(dim, rng) * uniform(rng, 0.0, 1.0);
  RealVector dbar = gaussian_vector(dim, rng);
  if (cls != SuperchannelClass::any) {
    zero_cross_blocks(noise);
    zero_momentum(dbar);
  }
  RealMatrix y = compensate(std::move(noise), delta - a * delta * a.transpose());
  return GaussianSuperchannel(std::move(a), std::move(o), std::move(y), std::move(dbar));
}

}  // namespace gimag
