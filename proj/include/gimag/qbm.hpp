#pragma once

// One-mode quantum Brownian motion channel with an Ohmic bath,
// J(w) = (w/wc) e^{-w/wc}, in dimensionless units: tau = wc t,
// x = wc/w0 and theta = kB T / (hbar wc).
//
// High temperature replaces 2P(w)+1 by 2 theta / u (u = w/wc); low
// temperature by 1 + 2 e^{-u/theta}.

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gimag/gaussian.hpp"
#include "gimag/specfun.hpp"

namespace gimag {

enum class Regime { high, low };

std::string to_string(Regime r);
Regime parse_regime(const std::string& s);

struct QbmConfig {
  double alpha = 0.03;
  double x = 0.5;
  double theta = 100.0;
  Regime regime = Regime::high;
  QuadratureSpec quad{1e-13, 1e-11, 4000, 40.0};
};

// alpha >= 0 (0 is allowed as a no-coupling probe), x > 0, theta > 0.
void check_config(const QbmConfig& cfg);

// Damping gamma(tau).
double coeff_gamma_quadrature(const QbmConfig& cfg, double tau);
double coeff_gamma_closed(const QbmConfig& cfg, double tau);

// Diffusion Delta(tau) and anomalous diffusion Pi(tau) for cfg.regime.
double coeff_delta_quadrature(const QbmConfig& cfg, double tau);
double coeff_delta_closed(const QbmConfig& cfg, double tau);
double coeff_pi_quadrature(const QbmConfig& cfg, double tau);
double coeff_pi_closed(const QbmConfig& cfg, double tau);

// Same coefficients with the frequency integral done numerically too
// (e^{-u}-weighted, cut at quad.tail_cut). Slow; used as a second oracle.
double coeff_gamma_double_quadrature(const QbmConfig& cfg, double tau);
double coeff_delta_double_quadrature(const QbmConfig& cfg, double tau);
double coeff_pi_double_quadrature(const QbmConfig& cfg, double tau);

struct CoefficientFunctions {
  std::function<double(double)> gamma;
  std::function<double(double)> delta;
  std::function<double(double)> pi;
};

CoefficientFunctions closed_form_coefficients(const QbmConfig& cfg);
CoefficientFunctions quadrature_coefficients(const QbmConfig& cfg);

// [[cos(tau/x), sin(tau/x)], [-sin(tau/x), cos(tau/x)]].
RealMatrix rotation_R(const QbmConfig& cfg, double tau);

// Gamma(tau) = 2 int_0^tau gamma on a uniform grid: composite Simpson at
// even nodes, Simpson plus a 3/8 panel at odd nodes (all exact for cubics).
// Between nodes, linear interpolation.
class GammaAccumulator {
 public:
  GammaAccumulator(double step, std::vector<double> gamma_samples);

  double step() const noexcept { return step_; }
  std::size_t size() const noexcept { return values_.size(); }
  double tau(std::size_t i) const noexcept { return step_ * static_cast<double>(i); }
  double horizon() const noexcept { return tau(values_.size() - 1); }
  const std::vector<double>& values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_.at(i); }
  double at(double tau) const;

 private:
  double step_;
  std::vector<double> values_;
};

// Node count covering [0, horizon] with an even number of intervals.
std::size_t grid_size(double horizon, double step);

GammaAccumulator gamma_capital(const QbmConfig& cfg, double horizon, double step);

// Coefficients sampled once on the grid plus the running integrals that
// give Gamma, the noise matrix and the scalar N12 cross-check.
class QbmGrid {
 public:
  QbmGrid(const QbmConfig& cfg, double horizon, double step, const CoefficientFunctions& coeffs);
  QbmGrid(const QbmConfig& cfg, double horizon, double step);

  const QbmConfig& config() const noexcept { return cfg_; }
  const GammaAccumulator& gamma_capital() const noexcept { return big_gamma_; }
  std::size_t size() const noexcept { return big_gamma_.size(); }
  double tau(std::size_t i) const noexcept { return big_gamma_.tau(i); }
  double step() const noexcept { return big_gamma_.step(); }
  // Grid node index of tau; throws InvalidInput if tau is not on the grid.
  std::size_t node(double tau) const;

  double gamma(std::size_t i) const { return gamma_.at(i); }
  double delta(std::size_t i) const { return delta_.at(i); }
  double pi(std::size_t i) const { return pi_.at(i); }

  // R(tau) [e^{-Gamma(tau)} int_0^tau e^{Gamma(s)} R^T M R ds] R(tau)^T,
  // M = [[Delta, -Pi/2], [-Pi/2, 0]]. Symmetrised; throws
  // IntegrationResolutionError if the asymmetry exceeds 1e-8.
  RealMatrix noise_Wbar(std::size_t i) const;

  // T = e^{-Gamma/2} R, N = 2 Wbar, d = 0.
  GaussianChannel channel(std::size_t i) const;

  // e^{-Gamma} int e^{Gamma(s)} [Delta sin(2(s-tau)/x) - Pi cos(2(s-tau)/x)] ds.
  double n12_scalar(std::size_t i) const;

 private:
  void build();

  QbmConfig cfg_;
  std::vector<double> gamma_, delta_, pi_;
  GammaAccumulator big_gamma_;
  // e^{-Gamma_i} int_0^{tau_i} e^{Gamma} (...) ds, rescaled per node.
  std::vector<Eigen::Matrix2d> wbar_inner_;
  std::vector<Eigen::Vector4d> n12_parts_;
};

RealMatrix noise_Wbar(const QbmGrid& grid, double tau);
GaussianChannel qbm_channel(const QbmGrid& grid, double tau);

struct TrajectoryRow {
  double tau = 0.0;
  double ic = 0.0;
  double gamma_capital = 0.0;
  double n12 = 0.0;
  double term_t21 = 0.0;
  double term_t12t22 = 0.0;
};

struct Trajectory {
  QbmConfig config;
  double step = 0.0;
  std::vector<TrajectoryRow> rows;
};

// Tolerance between the generic measure and the one-mode formula.
inline constexpr double kTrajectoryCrossCheck = 1e-8;

// Every node of the grid up to horizon. I_c is computed from the channel
// matrices and from the one-mode formula with the scalar N12 integral;
// a disagreement beyond kTrajectoryCrossCheck throws FormulaInconsistency.
Trajectory imaginarity_trajectory(const QbmGrid& grid, double horizon);
Trajectory imaginarity_trajectory(const QbmConfig& cfg, double horizon, double step);

struct SweepEntry {
  QbmConfig config;
  std::optional<Trajectory> trajectory;
  std::string error;
};

std::vector<SweepEntry> sweep(const std::vector<QbmConfig>& configs, double horizon, double step);

// Arithmetic mean of I_c over the grid nodes in [from, from + length].
double window_mean(const Trajectory& t, double from, double length);
double max_ic(const Trajectory& t, double from, double to);

void write_trajectory_csv(const Trajectory& t, std::ostream& out);

}  // namespace gimag
