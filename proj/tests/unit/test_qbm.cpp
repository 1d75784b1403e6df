#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "gimag/errors.hpp"
#include "gimag/measures.hpp"
#include "gimag/qbm.hpp"

using namespace gimag;

namespace {

QbmConfig config(Regime r, double alpha = 0.03, double x = 0.5) {
  QbmConfig c;
  c.alpha = alpha;
  c.x = x;
  c.regime = r;
  c.theta = r == Regime::high ? 100.0 : 10.0;
  return c;
}

void close(double got, double ref, double rel) {
  CHECK(std::abs(got - ref) <= rel * std::max(std::abs(ref), 1e-12));
}

}  // namespace

TEST_CASE("config and regime parsing") {
  CHECK(parse_regime("high") == Regime::high);
  CHECK(parse_regime("low") == Regime::low);
  CHECK_THROWS_AS(parse_regime("mid"), InvalidInput);
  CHECK(to_string(Regime::low) == "low");
  QbmConfig c;
  CHECK_NOTHROW(check_config(c));
  c.x = 0.0;
  CHECK_THROWS_AS(check_config(c), InvalidInput);
  c = {};
  c.theta = -1.0;
  CHECK_THROWS_AS(check_config(c), InvalidInput);
  c = {};
  c.alpha = -0.1;
  CHECK_THROWS_AS(check_config(c), InvalidInput);
  c = {};
  c.alpha = 0.0;
  CHECK_NOTHROW(check_config(c));
  c.quad.tail_cut = 5.0;
  CHECK_THROWS_AS(check_config(c), InvalidInput);
}

TEST_CASE("coefficients vanish at zero and agree across routes") {
  for (Regime r : {Regime::high, Regime::low}) {
    const QbmConfig c = config(r);
    CHECK(coeff_gamma_closed(c, 0.0) == 0.0);
    CHECK(coeff_delta_closed(c, 0.0) == 0.0);
    CHECK(coeff_pi_closed(c, 0.0) == 0.0);
    CHECK(coeff_gamma_quadrature(c, 0.0) == 0.0);
    CHECK_THROWS_AS(coeff_gamma_closed(c, -1.0), InvalidInput);
    for (int k = 1; k <= 20; ++k) {
      const double tau = 0.37 * k * k;
      INFO("regime " << to_string(r) << " tau " << tau);
      close(coeff_gamma_closed(c, tau), coeff_gamma_quadrature(c, tau), 1e-8);
      close(coeff_delta_closed(c, tau), coeff_delta_quadrature(c, tau), 1e-8);
      close(coeff_pi_closed(c, tau), coeff_pi_quadrature(c, tau), 1e-8);
    }
    // Small tau: the integrand is ~ 2 s^2 / x, so gamma ~ 2 alpha^2 tau^3 / (3x).
    QbmConfig fine = c;
    fine.quad.abs_tol = 1e-30;
    const double r3 = coeff_gamma_quadrature(fine, 1e-3) / 1e-9;
    const double r4 = coeff_gamma_quadrature(fine, 1e-4) / 1e-12;
    CHECK(r3 == doctest::Approx(r4).epsilon(1e-5));
    CHECK(r4 == doctest::Approx(2.0 * c.alpha * c.alpha / (3.0 * c.x)).epsilon(1e-6));
    CHECK(coeff_gamma_quadrature(fine, 1e-4) / 1e-8 < 2e-3 * coeff_gamma_quadrature(fine, 1e-1) / 1e-2);
    // The closed forms cancel to O(tau^2) from O(1) terms; still within 1e-5.
    for (double tau : {1e-3, 1e-2, 0.1}) {
      INFO("small tau " << tau);
      close(coeff_gamma_closed(c, tau), coeff_gamma_quadrature(fine, tau), 1e-5);
      close(coeff_delta_closed(c, tau), coeff_delta_quadrature(fine, tau), 1e-5);
      close(coeff_pi_closed(c, tau), coeff_pi_quadrature(fine, tau), 1e-5);
    }
  }
}

TEST_CASE("double quadrature spot checks") {
  for (Regime r : {Regime::high, Regime::low}) {
    const QbmConfig c = config(r, 0.05, 0.7);
    for (double tau : {0.5, 3.0, 11.0}) {
      INFO("regime " << to_string(r) << " tau " << tau);
      close(coeff_gamma_double_quadrature(c, tau), coeff_gamma_closed(c, tau), 1e-7);
      close(coeff_delta_double_quadrature(c, tau), coeff_delta_closed(c, tau), 1e-7);
      close(coeff_pi_double_quadrature(c, tau), coeff_pi_closed(c, tau), 1e-7);
    }
  }
}

TEST_CASE("closed forms stay real over a range of arguments") {
  for (Regime r : {Regime::high, Regime::low}) {
    for (double x : {0.3, 0.5, 0.9, 2.0}) {
      const QbmConfig c = config(r, 0.03, x);
      for (int k = 1; k <= 50; ++k) {
        const double tau = 0.2 * k + 0.013 * k * k;
        CHECK_NOTHROW(coeff_gamma_closed(c, tau));
        CHECK_NOTHROW(coeff_delta_closed(c, tau));
        CHECK_NOTHROW(coeff_pi_closed(c, tau));
      }
    }
  }
}

TEST_CASE("rotation") {
  const QbmConfig c = config(Regime::high);
  CHECK((rotation_R(c, 0.0) - RealMatrix::Identity(2, 2)).norm() == 0.0);
  RealMatrix quarter(2, 2);
  quarter << 0, 1, -1, 0;
  CHECK((rotation_R(c, std::numbers::pi * c.x / 2) - quarter).norm() < 1e-15);
  for (double a : {0.3, 1.7, 12.0}) {
    for (double b : {0.1, 4.4}) {
      CHECK((rotation_R(c, a) * rotation_R(c, b) - rotation_R(c, a + b)).norm() < 1e-13);
    }
    CHECK((rotation_R(c, a) * rotation_R(c, a).transpose() - RealMatrix::Identity(2, 2)).norm() < 1e-15);
  }
}

TEST_CASE("Gamma accumulator") {
  const double h = 0.05;
  std::vector<double> cubic, constant;
  for (int i = 0; i <= 41; ++i) {
    const double s = h * i;
    cubic.push_back(1.0 + s - 2.0 * s * s + 0.5 * s * s * s);
    constant.push_back(0.7);
  }
  const GammaAccumulator g(h, cubic), k(h, constant);
  CHECK(g.size() == 42);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double t = g.tau(i);
    const double exact = 2.0 * (t + t * t / 2 - 2.0 * t * t * t / 3 + 0.125 * t * t * t * t);
    CHECK(std::abs(g[i] - exact) < 1e-12);
    CHECK(std::abs(k[i] - 1.4 * t) < 1e-12);
  }
  CHECK(k.at(0.125) == doctest::Approx(1.4 * 0.125).epsilon(1e-12));
  CHECK_THROWS_AS(k.at(k.horizon() + 1.0), InvalidInput);
  CHECK_THROWS_AS(GammaAccumulator(0.0, constant), InvalidInput);
  CHECK_THROWS_AS(GammaAccumulator(h, {}), InvalidInput);

  CHECK(grid_size(1.0, 0.01) == 101);
  CHECK(grid_size(1.005, 0.01) == 103);
  CHECK(grid_size(0.01, 0.01) == 3);
  CHECK_THROWS_AS(grid_size(0.0, 0.01), InvalidInput);

  QbmConfig off = config(Regime::high, 0.0);
  const GammaAccumulator zero = gamma_capital(off, 10.0, 0.01);
  for (double v : zero.values()) CHECK(v == 0.0);

  const QbmConfig c = config(Regime::high);
  const GammaAccumulator coarse = gamma_capital(c, 50.0, 0.02);
  const GammaAccumulator fine = gamma_capital(c, 50.0, 0.01);
  for (double v : coarse.values()) CHECK(v >= 0.0);
  for (std::size_t i = 1; i < fine.size(); ++i) CHECK(fine[i] >= fine[i - 1]);
  for (std::size_t i = 1; i < coarse.size(); ++i) {
    CHECK(std::abs(coarse[i] - fine[2 * i]) <= std::max(1e-6 * fine[2 * i], 1e-10));
  }
}

TEST_CASE("grid channels") {
  for (Regime r : {Regime::high, Regime::low}) {
    const QbmConfig c = config(r);
    const QbmGrid grid(c, 20.0, 0.01);
    CHECK(grid.node(1.0) == 100);
    CHECK_THROWS_AS(grid.node(0.005), InvalidInput);
    CHECK(grid.noise_Wbar(0).norm() == 0.0);
    for (double tau : {1.0, 5.0, 20.0}) {
      INFO("regime " << to_string(r) << " tau " << tau);
      const std::size_t i = grid.node(tau);
      const GaussianChannel ch = grid.channel(i);
      const double G = grid.gamma_capital()[i];
      CHECK((ch.t().transpose() * ch.t() - std::exp(-G) * RealMatrix::Identity(2, 2)).norm() < 1e-12);
      CHECK(ch.d().norm() == 0.0);
      CHECK((ch.n() - 2.0 * grid.noise_Wbar(i)).norm() == 0.0);
      CHECK((ch.n() - ch.n().transpose()).norm() == 0.0);
      CHECK(validate_channel(ch));
      CHECK((qbm_channel(grid, tau).n() - ch.n()).norm() == 0.0);
    }
    const QbmGrid half(c, 10.0, 0.005);
    const RealMatrix a = noise_Wbar(grid, 10.0), b = noise_Wbar(half, 10.0);
    CHECK((a - b).norm() <= 1e-6 * b.norm());
  }
}

TEST_CASE("trajectory, csv and sweep") {
  const QbmConfig c = config(Regime::high);
  const Trajectory t = imaginarity_trajectory(c, 5.0, 0.01);
  REQUIRE(t.rows.size() == 501);
  CHECK(t.rows.front().tau == 0.0);
  CHECK(t.rows.front().ic == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    CHECK(t.rows[i].ic >= 0.0);
    if (i > 0) CHECK(t.rows[i].tau > t.rows[i - 1].tau);
    const auto& row = t.rows[i];
    CHECK(row.ic == doctest::Approx(row.term_t21 + row.term_t12t22 + std::abs(row.n12)).epsilon(1e-8));
  }
  CHECK(window_mean(t, 0.0, 5.0) > 0.0);
  CHECK(max_ic(t, 0.0, 5.0) >= window_mean(t, 0.0, 5.0));
  CHECK_THROWS_AS(window_mean(t, 10.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(max_ic(t, 10.0, 11.0), InvalidInput);
  CHECK_THROWS_AS(imaginarity_trajectory(QbmGrid(c, 5.0, 0.01), 6.0), InvalidInput);

  std::ostringstream csv;
  write_trajectory_csv(t, csv);
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "tau,Ic,Gamma,N12,term_T21,term_T12T22");
  std::size_t lines = 0;
  while (std::getline(in, line)) {
    ++lines;
    CHECK(std::count(line.begin(), line.end(), ',') == 5);
    CHECK(line.find('e') == std::string::npos);
  }
  CHECK(lines == t.rows.size());

  QbmConfig bad = c;
  bad.x = -1.0;
  const auto entries = sweep({c, bad, config(Regime::low)}, 2.0, 0.01);
  REQUIRE(entries.size() == 3);
  CHECK(entries[0].trajectory.has_value());
  CHECK_FALSE(entries[1].trajectory.has_value());
  CHECK_FALSE(entries[1].error.empty());
  CHECK(entries[2].trajectory.has_value());
  CHECK(entries[2].config.regime == Regime::low);
  const Trajectory direct = imaginarity_trajectory(c, 2.0, 0.01);
  REQUIRE(entries[0].trajectory->rows.size() == direct.rows.size());
  for (std::size_t i = 0; i < direct.rows.size(); ++i) CHECK(entries[0].trajectory->rows[i].ic == direct.rows[i].ic);
  CHECK_THROWS_AS(sweep({}, 1.0, 0.01), InvalidInput);
}
