#pragma once

// Gaussian states rho(d0, nu), channels phi(T, N, d) and superchannels
// Phi(A, O, Y, dbar) in the interleaved (q1, p1, ..., qn, pn) convention,
// together with the realness / imaginarity-breaking structure tests.
//
// Constructors check shapes and finiteness only. Physical validity (the
// uncertainty-type PSD constraints) is a separate, tolerance-dependent
// question answered by the validate_* / check_* functions.

#include <string>
#include <utility>
#include <vector>

#include "gimag/linalg.hpp"

namespace gimag {

inline constexpr double kDefaultRealnessTolerance = 1e-10;

class GaussianState {
 public:
  GaussianState(RealVector displacement, RealMatrix covariance);

  static GaussianState vacuum(int n);

  int modes() const noexcept { return modes_; }
  const RealVector& displacement() const noexcept { return displacement_; }
  const RealMatrix& covariance() const noexcept { return covariance_; }

 private:
  int modes_;
  RealVector displacement_;
  RealMatrix covariance_;
};

class GaussianChannel {
 public:
  GaussianChannel(RealMatrix t, RealMatrix n, RealVector d);

  static GaussianChannel identity(int n);
  // T = sqrt(tau) I, N = (tau - 1)(2 nth + 1) I.
  static GaussianChannel amplifier(int n, double tau, double nth, RealVector d);

  int modes() const noexcept { return modes_; }
  const RealMatrix& t() const noexcept { return t_; }
  const RealMatrix& n() const noexcept { return n_; }
  const RealVector& d() const noexcept { return d_; }

 private:
  int modes_;
  RealMatrix t_;
  RealMatrix n_;
  RealVector d_;
};

class GaussianSuperchannel {
 public:
  GaussianSuperchannel(RealMatrix a, RealMatrix o, RealMatrix y, RealVector dbar);

  static GaussianSuperchannel identity(int n);

  int modes() const noexcept { return modes_; }
  const RealMatrix& a() const noexcept { return a_; }
  const RealMatrix& o() const noexcept { return o_; }
  const RealMatrix& y() const noexcept { return y_; }
  const RealVector& dbar() const noexcept { return dbar_; }

 private:
  int modes_;
  RealMatrix a_;
  RealMatrix o_;
  RealMatrix y_;
  RealVector dbar_;
};

// Which physical constraints failed, by name ("nu+iDelta", "N+iDelta-iTDeltaT^T", ...).
struct ValidityReport {
  bool valid = true;
  std::vector<std::string> violations;
};

ValidityReport check_state(const GaussianState& s, double tol = kDefaultPsdTolerance);
ValidityReport check_channel(const GaussianChannel& c, double tol = kDefaultPsdTolerance);
ValidityReport check_superchannel(const GaussianSuperchannel& s, double tol = kDefaultPsdTolerance);

bool validate_state(const GaussianState& s, double tol = kDefaultPsdTolerance);
bool validate_channel(const GaussianChannel& c, double tol = kDefaultPsdTolerance);
bool validate_superchannel(const GaussianSuperchannel& s, double tol = kDefaultPsdTolerance);

GaussianState apply_channel(const GaussianChannel& c, const GaussianState& s);

// d' = A d + dbar, T' = A T Sigma O^T Sigma, N' = A N A^T + Y.
GaussianChannel apply_superchannel(const GaussianSuperchannel& s, const GaussianChannel& c);

// (phi1, phi2) with Phi(phi) = phi2 o phi o phi1. Throws InvalidInput if s is invalid.
std::pair<GaussianChannel, GaussianChannel> decompose_superchannel(const GaussianSuperchannel& s);

// outer o inner.
GaussianChannel compose(const GaussianChannel& outer, const GaussianChannel& inner);

// One failed sparsity condition. Indices are 1-based as in the (q, p)
// interleaved numbering; col is 0 for vector entries.
struct Violation {
  std::string condition;
  int row = 0;
  int col = 0;
  double magnitude = 0.0;
};

struct RealnessReport {
  bool is_real = false;
  bool is_completely_real = false;
  bool is_covariant_real = false;
  // Empty iff is_real.
  std::vector<Violation> violations;
};

RealnessReport channel_realness(const GaussianChannel& c, double tol = kDefaultRealnessTolerance);

// Position-only displacement and nu_{2k-1,2l} = 0.
bool state_realness(const GaussianState& s, double tol = kDefaultRealnessTolerance);

// Per-condition view of a superchannel.
//   noise_pattern:     dbar has no momentum entries, Y has no q-p cross block
//   breaking_pattern:  even (momentum) rows of A vanish
//   covariant_pattern: A and O are block-diagonal in the (q..., p...) grouping
struct SuperchannelStructure {
  bool noise_pattern = false;
  bool breaking_pattern = false;
  bool covariant_pattern = false;
  std::vector<Violation> violations;

  bool is_real() const noexcept { return noise_pattern && (breaking_pattern || covariant_pattern); }
  bool is_imaginarity_breaking() const noexcept { return noise_pattern && breaking_pattern; }
};

SuperchannelStructure superchannel_structure(const GaussianSuperchannel& s,
                                             double tol = kDefaultRealnessTolerance);
bool superchannel_is_real(const GaussianSuperchannel& s, double tol = kDefaultRealnessTolerance);
bool superchannel_is_imaginarity_breaking(const GaussianSuperchannel& s,
                                          double tol = kDefaultRealnessTolerance);

}  // namespace gimag
