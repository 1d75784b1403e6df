#include "gimag/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gimag/errors.hpp"

namespace gimag {

namespace {

constexpr double kSymmetryTolerance = 1e-9;

int modes_for(Eigen::Index dim, const char* what) {
  if (dim <= 0 || dim % 2 != 0) {
    throw InvalidInput(std::string(what) + ": dimension must be 2n with n >= 1, got " +
                       std::to_string(dim));
  }
  const int n = static_cast<int>(dim / 2);
  check_mode_count(n);
  return n;
}

void require_square(const RealMatrix& m, Eigen::Index dim, const char* what) {
  if (m.rows() != dim || m.cols() != dim) {
    throw InvalidInput(std::string(what) + ": expected " + std::to_string(dim) + "x" +
                       std::to_string(dim) + ", got " + std::to_string(m.rows()) + "x" +
                       std::to_string(m.cols()));
  }
  if (!m.allFinite()) throw InvalidInput(std::string(what) + ": non-finite entries");
}

void require_vector(const RealVector& v, Eigen::Index dim, const char* what) {
  if (v.size() != dim) {
    throw InvalidInput(std::string(what) + ": expected length " + std::to_string(dim) + ", got " +
                       std::to_string(v.size()));
  }
  if (!v.allFinite()) throw InvalidInput(std::string(what) + ": non-finite entries");
}

void require_same_modes(int a, int b, const char* what) {
  if (a != b) {
    throw InvalidInput(std::string(what) + ": mode mismatch (" + std::to_string(a) + " vs " +
                       std::to_string(b) + ")");
  }
}

bool symmetric(const RealMatrix& m, double tol) {
  return max_abs(m - m.transpose()) <= tol * std::max(1.0, max_abs(m));
}

// Hermitian PSD check that tolerates a slightly non-antisymmetric imaginary
// part coming from round-off (it is antisymmetrised first).
bool psd(const RealMatrix& re, const RealMatrix& im, double tol) {
  const RealMatrix re_s = 0.5 * (re + re.transpose());
  const RealMatrix im_a = 0.5 * (im - im.transpose());
  return is_psd(HermitianForm(re_s, im_a), tol);
}

class PatternCheck {
 public:
  PatternCheck(double tol, std::vector<Violation>* sink) : tol_(tol), sink_(sink) {}

  // Entries (r, c) of m, 0-based, that must vanish. Returns true if all do.
  template <typename Pred>
  bool matrix_zero(const RealMatrix& m, const char* condition, Pred selected) {
    const double thr = tol_ * max_abs(m);
    bool ok = true;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        if (!selected(r, c)) continue;
        const double v = std::abs(m(r, c));
        if (v > thr) {
          ok = false;
          if (sink_) {
            sink_->push_back({condition, static_cast<int>(r) + 1, static_cast<int>(c) + 1, v});
          }
        }
      }
    }
    return ok;
  }

  // Momentum (odd 0-based) entries of v must vanish.
  bool momentum_zero(const RealVector& v, const char* condition) {
    const double thr = tol_ * max_abs(v);
    bool ok = true;
    for (Eigen::Index k = 1; k < v.size(); k += 2) {
      const double a = std::abs(v(k));
      if (a > thr) {
        ok = false;
        if (sink_) sink_->push_back({condition, static_cast<int>(k) + 1, 0, a});
      }
    }
    return ok;
  }

 private:
  double tol_;
  std::vector<Violation>* sink_;
};

// 0-based index parity: even index = q, odd index = p.
bool is_q(Eigen::Index i) { return i % 2 == 0; }

auto q_row_p_col = [](Eigen::Index r, Eigen::Index c) { return is_q(r) && !is_q(c); };
auto p_row = [](Eigen::Index r, Eigen::Index) { return !is_q(r); };
auto off_block = [](Eigen::Index r, Eigen::Index c) { return is_q(r) != is_q(c); };

}  // namespace

GaussianState::GaussianState(RealVector displacement, RealMatrix covariance)
    : displacement_(std::move(displacement)), covariance_(std::move(covariance)) {
  modes_ = modes_for(covariance_.rows(), "state covariance");
  require_square(covariance_, 2 * modes_, "state covariance");
  require_vector(displacement_, 2 * modes_, "state displacement");
}

GaussianState GaussianState::vacuum(int n) {
  check_mode_count(n);
  return GaussianState(RealVector::Zero(2 * n), RealMatrix::Identity(2 * n, 2 * n));
}

GaussianChannel::GaussianChannel(RealMatrix t, RealMatrix n, RealVector d)
    : t_(std::move(t)), n_(std::move(n)), d_(std::move(d)) {
  modes_ = modes_for(t_.rows(), "channel T");
  require_square(t_, 2 * modes_, "channel T");
  require_square(n_, 2 * modes_, "channel N");
  require_vector(d_, 2 * modes_, "channel d");
}

GaussianChannel GaussianChannel::identity(int n) {
  check_mode_count(n);
  return GaussianChannel(RealMatrix::Identity(2 * n, 2 * n), RealMatrix::Zero(2 * n, 2 * n),
                         RealVector::Zero(2 * n));
}

GaussianChannel GaussianChannel::amplifier(int n, double tau, double nth, RealVector d) {
  check_mode_count(n);
  if (!(tau >= 1.0) || !(nth >= 0.0) || !std::isfinite(tau) || !std::isfinite(nth)) {
    throw InvalidInput("amplifier: need tau >= 1 and nth >= 0");
  }
  const RealMatrix id = RealMatrix::Identity(2 * n, 2 * n);
  return GaussianChannel(std::sqrt(tau) * id, (tau - 1.0) * (2.0 * nth + 1.0) * id, std::move(d));
}

GaussianSuperchannel::GaussianSuperchannel(RealMatrix a, RealMatrix o, RealMatrix y,
                                           RealVector dbar)
    : a_(std::move(a)), o_(std::move(o)), y_(std::move(y)), dbar_(std::move(dbar)) {
  modes_ = modes_for(a_.rows(), "superchannel A");
  require_square(a_, 2 * modes_, "superchannel A");
  require_square(o_, 2 * modes_, "superchannel O");
  require_square(y_, 2 * modes_, "superchannel Y");
  require_vector(dbar_, 2 * modes_, "superchannel dbar");
}

GaussianSuperchannel GaussianSuperchannel::identity(int n) {
  check_mode_count(n);
  const RealMatrix id = RealMatrix::Identity(2 * n, 2 * n);
  return GaussianSuperchannel(id, id, RealMatrix::Zero(2 * n, 2 * n), RealVector::Zero(2 * n));
}

ValidityReport check_state(const GaussianState& s, double tol) {
  ValidityReport r;
  const RealMatrix& nu = s.covariance();
  if (!symmetric(nu, kSymmetryTolerance)) r.violations.push_back("nu symmetric");
  else if (!psd(nu, symplectic_form(s.modes()), tol)) r.violations.push_back("nu+iDelta");
  r.valid = r.violations.empty();
  return r;
}

ValidityReport check_channel(const GaussianChannel& c, double tol) {
  ValidityReport r;
  const RealMatrix delta = symplectic_form(c.modes());
  const RealMatrix& n = c.n();
  if (!symmetric(n, kSymmetryTolerance)) {
    r.violations.push_back("N symmetric");
  } else {
    const RealMatrix zero = RealMatrix::Zero(n.rows(), n.cols());
    if (!psd(n, zero, tol)) r.violations.push_back("N");
    if (!psd(n, delta - c.t() * delta * c.t().transpose(), tol)) {
      r.violations.push_back("N+iDelta-iTDeltaT^T");
    }
  }
  r.valid = r.violations.empty();
  return r;
}

ValidityReport check_superchannel(const GaussianSuperchannel& s, double tol) {
  ValidityReport r;
  const int n = s.modes();
  const RealMatrix delta = symplectic_form(n);
  const RealMatrix id = RealMatrix::Identity(2 * n, 2 * n);
  const RealMatrix zero = RealMatrix::Zero(2 * n, 2 * n);
  if (max_abs(s.o() * s.o().transpose() - id) > kSymmetryTolerance) {
    r.violations.push_back("OO^T=I");
  }
  if (!symmetric(s.y(), kSymmetryTolerance)) {
    r.violations.push_back("Y symmetric");
  } else if (!psd(s.y(), delta - s.a() * delta * s.a().transpose(), tol)) {
    r.violations.push_back("Y+iDelta-iADeltaA^T");
  }
  if (!psd(zero, delta - s.o() * delta * s.o().transpose(), tol)) {
    r.violations.push_back("iDelta-iODeltaO^T");
  }
  r.valid = r.violations.empty();
  return r;
}

bool validate_state(const GaussianState& s, double tol) { return check_state(s, tol).valid; }
bool validate_channel(const GaussianChannel& c, double tol) { return check_channel(c, tol).valid; }
bool validate_superchannel(const GaussianSuperchannel& s, double tol) {
  return check_superchannel(s, tol).valid;
}

GaussianState apply_channel(const GaussianChannel& c, const GaussianState& s) {
  require_same_modes(c.modes(), s.modes(), "apply_channel");
  RealMatrix nu = c.t() * s.covariance() * c.t().transpose() + c.n();
  nu = 0.5 * (nu + nu.transpose());
  return GaussianState(c.t() * s.displacement() + c.d(), std::move(nu));
}

GaussianChannel apply_superchannel(const GaussianSuperchannel& s, const GaussianChannel& c) {
  require_same_modes(s.modes(), c.modes(), "apply_superchannel");
  const RealMatrix sigma = reflection_form(s.modes());
  RealMatrix t = s.a() * c.t() * sigma * s.o().transpose() * sigma;
  RealMatrix n = s.a() * c.n() * s.a().transpose() + s.y();
  n = 0.5 * (n + n.transpose());
  return GaussianChannel(std::move(t), std::move(n), s.a() * c.d() + s.dbar());
}

std::pair<GaussianChannel, GaussianChannel> decompose_superchannel(const GaussianSuperchannel& s) {
  const ValidityReport v = check_superchannel(s);
  if (!v.valid) throw InvalidInput("decompose_superchannel: invalid superchannel (" + v.violations.front() + ")");
  const int n = s.modes();
  const RealMatrix sigma = reflection_form(n);
  GaussianChannel first(sigma * s.o().transpose() * sigma, RealMatrix::Zero(2 * n, 2 * n),
                        RealVector::Zero(2 * n));
  GaussianChannel second(s.a(), s.y(), s.dbar());
  return {std::move(first), std::move(second)};
}

GaussianChannel compose(const GaussianChannel& outer, const GaussianChannel& inner) {
  require_same_modes(outer.modes(), inner.modes(), "compose");
  RealMatrix n = outer.t() * inner.n() * outer.t().transpose() + outer.n();
  n = 0.5 * (n + n.transpose());
  return GaussianChannel(outer.t() * inner.t(), std::move(n), outer.t() * inner.d() + outer.d());
}

RealnessReport channel_realness(const GaussianChannel& c, double tol) {
  std::vector<Violation> base, complete, covariant;
  PatternCheck b(tol, &base), cr(tol, &complete), cv(tol, &covariant);
  const bool noise = b.momentum_zero(c.d(), "d momentum") &
                     b.matrix_zero(c.n(), "N q-p block", q_row_p_col);
  const bool rows = cr.matrix_zero(c.t(), "T momentum rows", p_row);
  const bool blocks = cv.matrix_zero(c.t(), "T q-p blocks", off_block);

  RealnessReport r;
  r.is_completely_real = noise && rows;
  r.is_covariant_real = noise && blocks;
  r.is_real = r.is_completely_real || r.is_covariant_real;
  if (!r.is_real) {
    r.violations = std::move(base);
    if (!rows && !blocks) {
      r.violations.insert(r.violations.end(), complete.begin(), complete.end());
      r.violations.insert(r.violations.end(), covariant.begin(), covariant.end());
    }
  }
  return r;
}

bool state_realness(const GaussianState& s, double tol) {
  PatternCheck chk(tol, nullptr);
  return chk.momentum_zero(s.displacement(), "") &&
         chk.matrix_zero(s.covariance(), "", q_row_p_col);
}

SuperchannelStructure superchannel_structure(const GaussianSuperchannel& s, double tol) {
  SuperchannelStructure out;
  PatternCheck chk(tol, &out.violations);
  out.noise_pattern = chk.momentum_zero(s.dbar(), "dbar momentum") &
                      chk.matrix_zero(s.y(), "Y q-p block", q_row_p_col);
  out.breaking_pattern = chk.matrix_zero(s.a(), "A momentum rows", p_row);
  out.covariant_pattern = chk.matrix_zero(s.a(), "A q-p blocks", off_block) &
                          chk.matrix_zero(s.o(), "O q-p blocks", off_block);
  return out;
}

bool superchannel_is_real(const GaussianSuperchannel& s, double tol) {
  return superchannel_structure(s, tol).is_real();
}

bool superchannel_is_imaginarity_breaking(const GaussianSuperchannel& s, double tol) {
  return superchannel_structure(s, tol).is_imaginarity_breaking();
}

}  // namespace gimag
