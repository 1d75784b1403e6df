#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "gimag/errors.hpp"
#include "gimag/specfun.hpp"
#include "oracles.hpp"

using namespace gimag;

namespace {

ComplexNumber eval(int fn, ComplexNumber z) {
  switch (fn) {
    case 0: return expint_E1(z);
    case 1: return expint_Ei(z);
    case 2: return cosint_Ci(z);
    case 3: return sinint_Si(z);
    default: return sinhint_Shi(z);
  }
}

double rel_err(ComplexNumber got, ComplexNumber ref) {
  return std::abs(got - ref) / std::max(std::abs(ref), 1e-300);
}

const double kPi = std::numbers::pi;

}  // namespace

TEST_CASE("agrees with the frozen mpmath table") {
  const auto table = oracle::specfun_reference();
  REQUIRE(table.size() > 2000);
  double worst[5] = {0, 0, 0, 0, 0};
  for (const auto& p : table) {
    const double e = rel_err(eval(p.fn, p.z), p.value);
    worst[p.fn] = std::max(worst[p.fn], e);
    if (e > 1e-10) {
      INFO("fn " << p.fn << " z " << p.z);
      CHECK(e <= 1e-10);
    }
  }
  for (int fn = 0; fn < 5; ++fn) {
    INFO("fn " << fn);
    CHECK(worst[fn] <= 1e-10);
  }
}

TEST_CASE("Ei against the multiprecision series") {
  CHECK(expint_Ei(ComplexNumber(1.0, 0.0)).real() == doctest::Approx(1.8951178163559368).epsilon(1e-14));
  CHECK(expint_Ei(1.0) == doctest::Approx(1.8951178163559368).epsilon(1e-14));
  CHECK(std::abs(expint_Ei(1e-8) - (std::log(1e-8) + kEulerGamma)) < 1e-7);

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> r(0.01, 40.0), phi(-3.1, 3.1);
  for (int trial = 0; trial < 300; ++trial) {
    const ComplexNumber z = std::polar(r(rng), phi(rng));
    INFO("z " << z);
    CHECK(rel_err(expint_Ei(z), oracle::ei_series(z)) <= 1e-10);
  }
  // Negative real axis: both signs of zero land on the upper side.
  for (double x : {0.2, 1.0, 3.5, 12.0}) {
    const ComplexNumber up = expint_Ei(ComplexNumber(-x, 0.0));
    const ComplexNumber down = expint_Ei(ComplexNumber(-x, -0.0));
    CHECK(up == down);
    CHECK(up.imag() == doctest::Approx(kPi).epsilon(1e-14));
    CHECK(up.real() == doctest::Approx(-expint_E1(ComplexNumber(x, 0.0)).real()).epsilon(1e-13));
    CHECK(expint_Ei(-x) == doctest::Approx(up.real()).epsilon(1e-14));
  }
  CHECK(expint_Ei(-1.0) == doctest::Approx(-0.21938393439552027).epsilon(1e-13));
}

TEST_CASE("conjugate symmetry off the cut") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int trial = 0; trial < 100; ++trial) {
    ComplexNumber z(u(rng), u(rng));
    if (std::abs(z.imag()) < 1e-3) z.imag(1.0);
    for (int fn = 0; fn < 5; ++fn) {
      INFO("fn " << fn << " z " << z);
      CHECK(rel_err(eval(fn, std::conj(z)), std::conj(eval(fn, z))) <= 1e-13);
    }
  }
}

TEST_CASE("poles and bad arguments") {
  CHECK_THROWS_AS(expint_E1(ComplexNumber(0.0, 0.0)), PoleError);
  CHECK_THROWS_AS(expint_Ei(ComplexNumber(0.0, 0.0)), PoleError);
  CHECK_THROWS_AS(expint_Ei(0.0), PoleError);
  CHECK_THROWS_AS(cosint_Ci(ComplexNumber(0.0, 0.0)), PoleError);
  CHECK(sinint_Si(ComplexNumber(0.0, 0.0)) == ComplexNumber(0.0, 0.0));
  CHECK(sinhint_Shi(ComplexNumber(0.0, 0.0)) == ComplexNumber(0.0, 0.0));
  CHECK_THROWS_AS(expint_Ei(std::nan("")), InvalidInput);
  CHECK_THROWS_AS(sinint_Si(ComplexNumber(INFINITY, 0.0)), InvalidInput);
}

TEST_CASE("sine and cosine integral identities") {
  const double si50 = sinint_Si(ComplexNumber(50.0, 0.0)).real();
  CHECK(std::abs(si50 - kPi / 2) < 2e-2);
  CHECK(std::abs(si50 - kPi / 2) <= 1.0 / 50.0);

  // Ci(z) - gamma - log z is an even entire series.
  const double z = 0.3;
  double series = 0.0, term = 1.0;
  for (int k = 1; k < 20; ++k) {
    term *= -z * z / ((2.0 * k - 1) * (2.0 * k));
    series += term / (2.0 * k);
  }
  CHECK(cosint_Ci(ComplexNumber(z, 0.0)).real() ==
        doctest::Approx(kEulerGamma + std::log(z) + series).epsilon(1e-14));

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> y(0.05, 40.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double v = y(rng);
    const ComplexNumber shi = sinhint_Shi(ComplexNumber(0.0, v));
    const ComplexNumber expect = ComplexNumber(0.0, 1.0) * sinint_Si(ComplexNumber(v, 0.0));
    CHECK(std::abs(shi - expect) <= 1e-12 * std::max(1.0, std::abs(expect)));
  }
  for (int trial = 0; trial < 30; ++trial) {
    const double v = y(rng);
    const ComplexNumber ei = expint_Ei(ComplexNumber(0.0, v));
    const ComplexNumber expect(cosint_Ci(ComplexNumber(v, 0.0)).real(),
                               sinint_Si(ComplexNumber(v, 0.0)).real() + kPi / 2);
    INFO("y " << v);
    CHECK(std::abs(ei - expect) <= 1e-9);
  }
}

TEST_CASE("real axis against the defining integrals") {
  QuadratureSpec spec;
  spec.abs_tol = 1e-13;
  spec.rel_tol = 1e-12;
  auto sinc = [](double u) { return u == 0.0 ? 1.0 : std::sin(u) / u; };
  auto shc = [](double u) { return u == 0.0 ? 1.0 : std::sinh(u) / u; };
  auto cosm = [](double u) { return u == 0.0 ? 0.0 : (std::cos(u) - 1.0) / u; };
  auto expm = [](double u) { return u == 0.0 ? 1.0 : std::expm1(u) / u; };
  for (int k = 1; k <= 50; ++k) {
    const double x = 0.6 * k - 0.05;
    INFO("x " << x);
    const ComplexNumber zx(x, 0.0);
    const double si = integrate_adaptive(sinc, 0.0, x, spec).value;
    const double shi = integrate_adaptive(shc, 0.0, x, spec).value;
    const double ci = kEulerGamma + std::log(x) + integrate_adaptive(cosm, 0.0, x, spec).value;
    const double ei = kEulerGamma + std::log(x) + integrate_adaptive(expm, 0.0, x, spec).value;
    CHECK(std::abs(sinint_Si(zx).real() - si) <= 1e-8 * std::abs(si));
    CHECK(std::abs(sinhint_Shi(zx).real() - shi) <= 1e-8 * std::abs(shi));
    CHECK(std::abs(cosint_Ci(zx).real() - ci) <= 1e-8 * std::abs(ci));
    CHECK(std::abs(expint_Ei(x) - ei) <= 1e-8 * std::abs(ei));
    CHECK(sinint_Si(zx).imag() == 0.0);
  }
}
