#include "gimag/qbm.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "gimag/errors.hpp"
#include "gimag/measures.hpp"

namespace gimag {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kResidueTolerance = 1e-8;
const ComplexNumber kI(0.0, 1.0);

// Sum of complex terms that must come out real.
class RealSum {
 public:
  explicit RealSum(const char* what) : what_(what) {}
  void add(ComplexNumber v) {
    sum_ += v;
    scale_ += std::abs(v);
  }
  double value() const {
    if (!std::isfinite(sum_.real()) || !std::isfinite(sum_.imag())) {
      throw ClosedFormInconsistency(std::string(what_) + ": non-finite closed-form value");
    }
    if (std::abs(sum_.imag()) > kResidueTolerance * scale_) {
      std::ostringstream msg;
      msg << what_ << ": imaginary residue " << sum_.imag() << " against term scale " << scale_;
      throw ClosedFormInconsistency(msg.str());
    }
    return sum_.real();
  }

 private:
  const char* what_;
  ComplexNumber sum_ = 0.0;
  double scale_ = 0.0;
};

void check_tau(double tau) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw InvalidInput("tau must be finite and >= 0");
}

// Ei at the four arguments a(1 - i tau), a(1 + i tau), a(i tau - 1), -a(1 + i tau).
struct EiQuad {
  ComplexNumber e1, e2, e3, e4;
  EiQuad(double a, double tau)
      : e1(expint_Ei(ComplexNumber(a, -a * tau))),
        e2(expint_Ei(ComplexNumber(a, a * tau))),
        e3(expint_Ei(ComplexNumber(-a, a * tau))),
        e4(expint_Ei(ComplexNumber(-a, -a * tau))) {}
};

double low_b(const QbmConfig& cfg) { return 1.0 + 1.0 / cfg.theta; }

// Frequency-integrated kernels, u = w / wc, sigma in tau units.
double kernel_sin(double s) { return 2.0 * s / ((1.0 + s * s) * (1.0 + s * s)); }
double kernel_high(double s) { return 2.0 / (1.0 + s * s); }
double kernel_low(double s, double b) {
  const double p = 1.0 + s * s, q = b * b + s * s;
  return (1.0 - s * s) / (p * p) + 2.0 * (b * b - s * s) / (q * q);
}

double weight(const QbmConfig& cfg, double s) {
  return cfg.regime == Regime::high ? cfg.theta * kernel_high(s) : kernel_low(s, low_b(cfg));
}

double outer(const QbmConfig& cfg, double tau, const std::function<double(double)>& f) {
  if (tau == 0.0) return 0.0;
  return integrate_adaptive(f, 0.0, tau, cfg.quad).value;
}

// 2P(w)+1 surrogate times the Ohmic u factor, without e^{-u}.
double spectral_weight(const QbmConfig& cfg, double u) {
  if (cfg.regime == Regime::high) return 2.0 * cfg.theta;
  return u * (1.0 + 2.0 * std::exp(-u / cfg.theta));
}

double spectral_envelope(const QbmConfig& cfg) {
  const double l = cfg.quad.tail_cut;
  return cfg.regime == Regime::high ? 2.0 * cfg.theta : 3.0 * (l + 1.0);
}

double inner(const QbmConfig& cfg, const std::function<double(double)>& g, double envelope) {
  return integrate_ohmic(g, envelope, cfg.quad).value;
}

// Running integral e^{-G_i} int_0^{tau_i} e^{G(s)} F(s) ds on a uniform grid.
// Even nodes: composite Simpson. Odd nodes i >= 3: Simpson to i - 3 plus the
// 3/8 rule. Node 1: the cubic through nodes 0..3 integrated over [0, h].
// All rules are exact for cubics. With g = 0 this is the plain integral.
template <typename V>
std::vector<V> accumulate_weighted(const std::vector<V>& f, const std::vector<double>& g, double h,
                                   const V& zero) {
  const std::size_t n = f.size();
  std::vector<V> out(n, zero);
  auto w = [&](std::size_t k, std::size_t i) { return std::exp(g[k] - g[i]); };
  for (std::size_t i = 1; i < n; ++i) {
    if (i % 2 == 0) {
      out[i] = w(i - 2, i) * out[i - 2] +
               h / 3.0 * (w(i - 2, i) * f[i - 2] + 4.0 * w(i - 1, i) * f[i - 1] + f[i]);
    } else if (i >= 3) {
      out[i] = w(i - 3, i) * out[i - 3] +
               3.0 * h / 8.0 *
                   (w(i - 3, i) * f[i - 3] + 3.0 * w(i - 2, i) * f[i - 2] + 3.0 * w(i - 1, i) * f[i - 1] +
                    f[i]);
    } else if (n >= 4) {
      out[1] = h / 24.0 * (9.0 * w(0, 1) * f[0] + 19.0 * f[1] - 5.0 * w(2, 1) * f[2] + w(3, 1) * f[3]);
    } else if (n == 3) {
      out[1] = h / 12.0 * (5.0 * w(0, 1) * f[0] + 8.0 * f[1] - w(2, 1) * f[2]);
    } else {
      out[1] = 0.5 * h * (w(0, 1) * f[0] + f[1]);
    }
  }
  return out;
}

void accumulate(std::vector<double>& out, const std::vector<double>& f, double h) {
  out = accumulate_weighted(f, std::vector<double>(f.size(), 0.0), h, 0.0);
}

Eigen::Matrix2d rotation(double angle) {
  Eigen::Matrix2d r;
  const double c = std::cos(angle), s = std::sin(angle);
  r << c, s, -s, c;
  return r;
}

std::string fixed12(double v) {
  if (v == 0.0) return "0";
  const int mag = static_cast<int>(std::floor(std::log10(std::abs(v))));
  const int decimals = std::clamp(11 - mag, 0, 340);
  std::ostringstream s;
  s << std::fixed << std::setprecision(decimals) << v;
  return s.str();
}

}  // namespace

std::string to_string(Regime r) { return r == Regime::high ? "high" : "low"; }

Regime parse_regime(const std::string& s) {
  if (s == "high") return Regime::high;
  if (s == "low") return Regime::low;
  throw InvalidInput("regime must be 'high' or 'low', got '" + s + "'");
}

void check_config(const QbmConfig& cfg) {
  if (!(cfg.alpha >= 0.0) || !std::isfinite(cfg.alpha)) throw InvalidInput("alpha must be >= 0");
  if (!(cfg.x > 0.0) || !std::isfinite(cfg.x)) throw InvalidInput("x must be > 0");
  if (!(cfg.theta > 0.0) || !std::isfinite(cfg.theta)) throw InvalidInput("theta must be > 0");
  check_quadrature_spec(cfg.quad);
}

double coeff_gamma_quadrature(const QbmConfig& cfg, double tau) {
  check_config(cfg);
  check_tau(tau);
  const double a = 1.0 / cfg.x;
  return cfg.alpha * cfg.alpha *
         outer(cfg, tau, [&](double s) { return kernel_sin(s) * std::sin(a * s); });
}

double coeff_delta_quadrature(const QbmConfig& cfg, double tau) {
  check_config(cfg);
  check_tau(tau);
  const double a = 1.0 / cfg.x;
  return cfg.alpha * cfg.alpha *
         outer(cfg, tau, [&](double s) { return weight(cfg, s) * std::cos(a * s); });
}

double coeff_pi_quadrature(const QbmConfig& cfg, double tau) {
  check_config(cfg);
  check_tau(tau);
  const double a = 1.0 / cfg.x;
  return cfg.alpha * cfg.alpha *
         outer(cfg, tau, [&](double s) { return weight(cfg, s) * std::sin(a * s); });
}

double coeff_gamma_double_quadrature(const QbmConfig& cfg, double tau) {
  check_config(cfg);
  check_tau(tau);
  const double a = 1.0 / cfg.x;
  const double env = cfg.quad.tail_cut + 1.0;
  return cfg.alpha * cfg.alpha * outer(cfg, tau, [&](double s) {
           return std::sin(a * s) * inner(cfg, [&](double u) { return u * std::sin(u * s); }, env);
         });
}

double coeff_delta_double_quadrature(const QbmConfig& cfg, double tau) {
  check_config(cfg);
  check_tau(tau);
  const double a = 1.0 / cfg.x;
  const double env = spectral_envelope(cfg);
  return cfg.alpha * cfg.alpha * outer(cfg, tau, [&](double s) {
           return std::cos(a * s) *
                  inner(cfg, [&](double u) { return spectral_weight(cfg, u) * std::cos(u * s); }, env);
         });
}

double coeff_pi_double_quadrature(const QbmConfig& cfg, double tau) {
  check_config(cfg);
  check_tau(tau);
  const double a = 1.0 / cfg.x;
  const double env = spectral_envelope(cfg);
  return cfg.alpha * cfg.alpha * outer(cfg, tau, [&](double s) {
           return std::sin(a * s) *
                  inner(cfg, [&](double u) { return spectral_weight(cfg, u) * std::cos(u * s); }, env);
         });
}

double coeff_gamma_closed(const QbmConfig& cfg, double tau) {
  check_config(cfg);
  check_tau(tau);
  if (tau == 0.0 || cfg.alpha == 0.0) return 0.0;
  const double x = cfg.x, a = 1.0 / x;
  const double pref = cfg.alpha * cfg.alpha / (4.0 * x);
  const EiQuad e(a, tau);
  RealSum sum("gamma closed form");
  sum.add(pref * kI * std::exp(-a) * (e.e1 - e.e2));
  sum.add(pref * std::exp(a) * (2.0 * kPi + kI * e.e3 - kI * e.e4));
  sum.add(-pref * 4.0 * x * std::sin(tau / x) / (1.0 + tau * tau));
  return sum.value();
}

double coeff_delta_closed(const QbmConfig& cfg, double tau) {
  check_config(cfg);
  check_tau(tau);
  if (tau == 0.0 || cfg.alpha == 0.0) return 0.0;
  const double x = cfg.x, a = 1.0 / x, al2 = cfg.alpha * cfg.alpha;
  const EiQuad e(a, tau);
  if (cfg.regime == Regime::high) {
    const double pref = al2 * cfg.theta * std::exp(-a) / 2.0;
    RealSum sum("Delta high-T closed form");
    sum.add(pref * kI * (e.e1 - e.e2));
    sum.add(pref * std::exp(2.0 * a) * (2.0 * kPi + kI * e.e3 - kI * e.e4));
    return sum.value();
  }
  const double b = low_b(cfg);
  const double pref = al2 / (4.0 * x);
  const ComplexNumber wm(tau / x, -b / x), wp(tau / x, b / x);
  RealSum sum("Delta low-T closed form");
  sum.add(pref * 4.0 * x * tau * std::cos(tau / x) / (1.0 + tau * tau));
  sum.add(pref * kI * std::exp(-a) * (e.e1 - e.e2));
  sum.add(-pref * std::exp(a) * (2.0 * kPi + kI * e.e3 - kI * e.e4));
  sum.add(2.0 * al2 * tau * std::cos(tau / x) / (tau * tau + b * b));
  sum.add(al2 / x * std::sinh(b / x) * (kI * cosint_Ci(wm) - kI * cosint_Ci(wp) - kPi));
  sum.add(al2 / x * std::cosh(b / x) * (sinint_Si(wm) + sinint_Si(wp)));
  return sum.value();
}

double coeff_pi_closed(const QbmConfig& cfg, double tau) {
  check_config(cfg);
  check_tau(tau);
  if (tau == 0.0 || cfg.alpha == 0.0) return 0.0;
  const double x = cfg.x, a = 1.0 / x, al2 = cfg.alpha * cfg.alpha;
  const EiQuad e(a, tau);
  const double ei_pos = expint_Ei(a), ei_neg = expint_Ei(-a);
  if (cfg.regime == Regime::high) {
    const double pref = al2 * cfg.theta * std::exp(-a) / 2.0;
    RealSum sum("Pi high-T closed form");
    sum.add(pref * (-e.e1 - e.e2 + 2.0 * ei_pos));
    sum.add(pref * std::exp(2.0 * a) * (-2.0 * ei_neg + e.e3 + e.e4));
    return sum.value();
  }
  const double b = low_b(cfg);
  const double pref = al2 / (4.0 * x);
  const ComplexNumber wm(tau / x, -b / x), wp(tau / x, b / x);
  const ComplexNumber ib(0.0, b / x);
  RealSum sum("Pi low-T closed form");
  sum.add(pref * 4.0 * x * tau * std::sin(tau / x) / (1.0 + tau * tau));
  sum.add(-pref * std::exp(-a) * (e.e1 + e.e2 - 2.0 * ei_pos));
  sum.add(pref * std::exp(a) * (2.0 * ei_neg - e.e3 - e.e4));
  sum.add(2.0 * al2 * tau * std::sin(tau / x) / (tau * tau + b * b));
  sum.add(al2 / x * std::cosh(b / x) *
          (cosint_Ci(-ib) + cosint_Ci(ib) - cosint_Ci(wm) - cosint_Ci(wp)));
  sum.add(al2 / x * std::sinh(b / x) *
          (-2.0 * sinhint_Shi(ComplexNumber(b / x, 0.0)) + kI * sinint_Si(wm) - kI * sinint_Si(wp)));
  return sum.value();
}

CoefficientFunctions closed_form_coefficients(const QbmConfig& cfg) {
  check_config(cfg);
  return {[cfg](double t) { return coeff_gamma_closed(cfg, t); },
          [cfg](double t) { return coeff_delta_closed(cfg, t); },
          [cfg](double t) { return coeff_pi_closed(cfg, t); }};
}

CoefficientFunctions quadrature_coefficients(const QbmConfig& cfg) {
  check_config(cfg);
  return {[cfg](double t) { return coeff_gamma_quadrature(cfg, t); },
          [cfg](double t) { return coeff_delta_quadrature(cfg, t); },
          [cfg](double t) { return coeff_pi_quadrature(cfg, t); }};
}

RealMatrix rotation_R(const QbmConfig& cfg, double tau) {
  check_config(cfg);
  check_tau(tau);
  return rotation(tau / cfg.x);
}

GammaAccumulator::GammaAccumulator(double step, std::vector<double> gamma_samples) : step_(step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidInput("step must be > 0");
  if (gamma_samples.empty()) throw InvalidInput("gamma accumulator needs at least one sample");
  for (double& g : gamma_samples) g *= 2.0;
  accumulate(values_, gamma_samples, step_);
}

double GammaAccumulator::at(double tau) const {
  check_tau(tau);
  const double pos = tau / step_;
  const std::size_t last = values_.size() - 1;
  if (pos > static_cast<double>(last) + 1e-9) throw InvalidInput("tau beyond the accumulator grid");
  const std::size_t i = std::min(static_cast<std::size_t>(pos), last);
  if (i == last) return values_[last];
  const double f = pos - static_cast<double>(i);
  return (1.0 - f) * values_[i] + f * values_[i + 1];
}

std::size_t grid_size(double horizon, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidInput("step must be > 0");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InvalidInput("horizon must be > 0");
  auto intervals = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
  intervals = std::max<std::size_t>(intervals, 2);
  if (intervals % 2 == 1) ++intervals;
  return intervals + 1;
}

GammaAccumulator gamma_capital(const QbmConfig& cfg, double horizon, double step) {
  check_config(cfg);
  const std::size_t n = grid_size(horizon, step);
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = coeff_gamma_closed(cfg, step * static_cast<double>(i));
  return GammaAccumulator(step, std::move(g));
}

QbmGrid::QbmGrid(const QbmConfig& cfg, double horizon, double step,
                 const CoefficientFunctions& coeffs)
    : cfg_(cfg), big_gamma_(step, {0.0}) {
  check_config(cfg_);
  const std::size_t n = grid_size(horizon, step);
  gamma_.resize(n);
  delta_.resize(n);
  pi_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = step * static_cast<double>(i);
    gamma_[i] = coeffs.gamma(t);
    delta_[i] = coeffs.delta(t);
    pi_[i] = coeffs.pi(t);
  }
  build();
}

QbmGrid::QbmGrid(const QbmConfig& cfg, double horizon, double step)
    : QbmGrid(cfg, horizon, step, closed_form_coefficients(cfg)) {}

void QbmGrid::build() {
  const double h = big_gamma_.step();
  big_gamma_ = GammaAccumulator(h, gamma_);
  const std::vector<double>& g = big_gamma_.values();
  const std::size_t n = gamma_.size();

  std::vector<Eigen::Matrix2d> f(n);
  std::vector<Eigen::Vector4d> parts(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = h * static_cast<double>(i);
    const Eigen::Matrix2d r = rotation(t / cfg_.x);
    Eigen::Matrix2d m;
    m << delta_[i], -0.5 * pi_[i], -0.5 * pi_[i], 0.0;
    f[i] = r.transpose() * m * r;
    const double c2 = std::cos(2.0 * t / cfg_.x), s2 = std::sin(2.0 * t / cfg_.x);
    parts[i] << delta_[i] * s2, delta_[i] * c2, pi_[i] * c2, pi_[i] * s2;
  }
  wbar_inner_ = accumulate_weighted(f, g, h, Eigen::Matrix2d::Zero().eval());
  n12_parts_ = accumulate_weighted(parts, g, h, Eigen::Vector4d::Zero().eval());
}

std::size_t QbmGrid::node(double tau) const {
  check_tau(tau);
  const double pos = tau / step();
  const double r = std::round(pos);
  if (std::abs(pos - r) > 1e-6 || r > static_cast<double>(size() - 1)) {
    throw InvalidInput("tau is not a node of the QBM grid");
  }
  return static_cast<std::size_t>(r);
}

RealMatrix QbmGrid::noise_Wbar(std::size_t i) const {
  const Eigen::Matrix2d r = rotation(tau(i) / cfg_.x);
  Eigen::Matrix2d w = r * wbar_inner_.at(i) * r.transpose();
  const double asym = std::abs(w(0, 1) - w(1, 0));
  if (asym > 1e-8 * std::max(w.cwiseAbs().maxCoeff(), 1e-300)) {
    throw IntegrationResolutionError("noise matrix asymmetry above 1e-8");
  }
  w = 0.5 * (w + w.transpose()).eval();
  return w;
}

GaussianChannel QbmGrid::channel(std::size_t i) const {
  const double t = tau(i);
  RealMatrix tm = std::exp(-0.5 * big_gamma_[i]) * rotation(t / cfg_.x);
  return GaussianChannel(std::move(tm), 2.0 * noise_Wbar(i), RealVector::Zero(2));
}

double QbmGrid::n12_scalar(std::size_t i) const {
  const double t = tau(i);
  const double c2 = std::cos(2.0 * t / cfg_.x), s2 = std::sin(2.0 * t / cfg_.x);
  const Eigen::Vector4d& c = n12_parts_.at(i);
  return c2 * c(0) - s2 * c(1) - (c2 * c(2) + s2 * c(3));
}

RealMatrix noise_Wbar(const QbmGrid& grid, double tau) { return grid.noise_Wbar(grid.node(tau)); }

GaussianChannel qbm_channel(const QbmGrid& grid, double tau) { return grid.channel(grid.node(tau)); }

Trajectory imaginarity_trajectory(const QbmGrid& grid, double horizon) {
  if (!(horizon > 0.0) || horizon > grid.tau(grid.size() - 1) + 1e-9 * grid.step()) {
    throw InvalidInput("trajectory horizon must be in (0, grid horizon]");
  }
  Trajectory out;
  out.config = grid.config();
  out.step = grid.step();
  const double x = grid.config().x;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid.tau(i);
    if (t > horizon + 1e-9 * grid.step()) break;
    const GaussianChannel ch = grid.channel(i);
    const MeasureReport rep = channel_measure_Ic(ch);
    const double g = grid.gamma_capital()[i];
    const double direct = std::exp(-0.5 * g) * std::abs(std::sin(t / x)) +
                          0.5 * std::exp(-g) * std::abs(std::sin(2.0 * t / x)) +
                          std::abs(grid.n12_scalar(i));
    if (std::abs(rep.value - direct) > kTrajectoryCrossCheck) {
      std::ostringstream msg;
      msg << "I_c cross-check failed at tau=" << t << ": measure " << rep.value << ", formula "
          << direct;
      throw FormulaInconsistency(msg.str());
    }
    out.rows.push_back({t, rep.value, g, ch.n()(0, 1), rep.breakdown[0].value,
                        rep.breakdown[1].value});
  }
  return out;
}

Trajectory imaginarity_trajectory(const QbmConfig& cfg, double horizon, double step) {
  return imaginarity_trajectory(QbmGrid(cfg, horizon, step), horizon);
}

std::vector<SweepEntry> sweep(const std::vector<QbmConfig>& configs, double horizon, double step) {
  if (configs.empty()) throw InvalidInput("sweep needs at least one configuration");
  std::vector<SweepEntry> out;
  out.reserve(configs.size());
  for (const QbmConfig& cfg : configs) {
    SweepEntry e{cfg, std::nullopt, {}};
    try {
      e.trajectory = imaginarity_trajectory(cfg, horizon, step);
    } catch (const Error& err) {
      e.error = err.what();
    }
    out.push_back(std::move(e));
  }
  return out;
}

double window_mean(const Trajectory& t, double from, double length) {
  const double slack = 1e-9 * std::max(1.0, t.step);
  double sum = 0.0;
  std::size_t count = 0;
  for (const TrajectoryRow& r : t.rows) {
    if (r.tau >= from - slack && r.tau <= from + length + slack) {
      sum += r.ic;
      ++count;
    }
  }
  if (count == 0) throw InvalidInput("window contains no trajectory samples");
  return sum / static_cast<double>(count);
}

double max_ic(const Trajectory& t, double from, double to) {
  double best = -1.0;
  for (const TrajectoryRow& r : t.rows) {
    if (r.tau >= from && r.tau <= to) best = std::max(best, r.ic);
  }
  if (best < 0.0) throw InvalidInput("range contains no trajectory samples");
  return best;
}

void write_trajectory_csv(const Trajectory& t, std::ostream& out) {
  out << "tau,Ic,Gamma,N12,term_T21,term_T12T22\n";
  for (const TrajectoryRow& r : t.rows) {
    out << fixed12(r.tau) << ',' << fixed12(r.ic) << ',' << fixed12(r.gamma_capital) << ','
        << fixed12(r.n12) << ',' << fixed12(r.term_t21) << ',' << fixed12(r.term_t12t22) << '\n';
  }
}

}  // namespace gimag
