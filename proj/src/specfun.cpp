#include "gimag/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "gimag/errors.hpp"

namespace gimag {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxTerms = 2000;

// -0 imaginary parts are read as +0 so the cut is approached from above.
ComplexNumber upper(ComplexNumber z) {
  if (z.imag() == 0.0) return {z.real(), 0.0};
  return z;
}

void require_finite(ComplexNumber z, const char* what) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw InvalidInput(std::string(what) + ": non-finite argument");
  }
}

// -gamma - ln w - sum (-w)^k / (k k!)
ComplexNumber e1_series(ComplexNumber w) {
  ComplexNumber term = 1.0, sum = 0.0;
  const double r = std::abs(w);
  for (int k = 1; k < kMaxTerms; ++k) {
    term *= -w / static_cast<double>(k);
    const ComplexNumber add = term / static_cast<double>(k);
    sum += add;
    if (k > r && std::abs(add) <= kEps * std::abs(sum)) break;
  }
  return -kEulerGamma - std::log(w) - sum;
}

// Modified Lentz on the even contraction of the E1 continued fraction.
ComplexNumber e1_continued_fraction(ComplexNumber w) {
  constexpr double tiny = 1e-300;
  ComplexNumber b = w + 1.0;
  ComplexNumber c = 1.0 / tiny;
  ComplexNumber d = 1.0 / b;
  ComplexNumber h = d;
  for (int i = 1; i < 20 * kMaxTerms; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const ComplexNumber del = c * d;
    h *= del;
    if (std::abs(del - 1.0) <= kEps) return h * std::exp(-w);
  }
  throw ConvergenceError("E1 continued fraction did not converge", std::abs(h * std::exp(-w)),
                         std::numeric_limits<double>::infinity());
}

// e^{-w}/w sum (-1)^k k!/w^k, truncated at the smallest term.
ComplexNumber e1_asymptotic(ComplexNumber w) {
  ComplexNumber term = 1.0, sum = 1.0;
  double last = 1.0;
  for (int k = 1; k < kMaxTerms; ++k) {
    const ComplexNumber next = term * (-static_cast<double>(k)) / w;
    const double mag = std::abs(next);
    if (mag >= last) break;
    term = next;
    sum += term;
    last = mag;
    if (mag <= kEps * std::abs(sum)) break;
  }
  return std::exp(-w) / w * sum;
}

double ei_positive(double x) {
  if (x <= 40.0) {
    double term = 1.0, sum = 0.0;
    for (int k = 1; k < kMaxTerms; ++k) {
      term *= x / k;
      const double add = term / k;
      sum += add;
      if (k > x && add <= kEps * sum) break;
    }
    return kEulerGamma + std::log(x) + sum;
  }
  double term = 1.0, sum = 1.0, last = 1.0;
  for (int k = 1; k < kMaxTerms; ++k) {
    const double next = term * k / x;
    if (next >= last) break;
    term = next;
    sum += term;
    last = next;
    if (next <= kEps * sum) break;
  }
  return std::exp(x) / x * sum;
}

ComplexNumber ci_series(ComplexNumber z) {
  const ComplexNumber z2 = z * z;
  ComplexNumber term = 1.0, sum = 0.0;
  for (int k = 1; k < kMaxTerms; ++k) {
    term *= -z2 / static_cast<double>((2 * k - 1) * (2 * k));
    const ComplexNumber add = term / static_cast<double>(2 * k);
    sum += add;
    if (2 * k > std::abs(z) && std::abs(add) <= kEps * std::abs(sum)) break;
  }
  return kEulerGamma + std::log(z) + sum;
}

ComplexNumber si_series(ComplexNumber z) {
  const ComplexNumber z2 = z * z;
  ComplexNumber term = z, sum = z;
  for (int k = 1; k < kMaxTerms; ++k) {
    term *= -z2 / static_cast<double>((2 * k) * (2 * k + 1));
    const ComplexNumber add = term / static_cast<double>(2 * k + 1);
    sum += add;
    if (2 * k > std::abs(z) && std::abs(add) <= kEps * std::abs(sum)) break;
  }
  return sum;
}

constexpr double kSeriesRadius = 8.0;

}  // namespace

ComplexNumber expint_E1(ComplexNumber w) {
  require_finite(w, "E1");
  w = upper(w);
  if (w == 0.0) throw PoleError("E1 has a logarithmic singularity at 0");
  const double r = std::abs(w);
  const double phase = std::abs(std::arg(w));
  if (r <= 2.0) return e1_series(w);
  if (phase > 0.75 * kPi) {
    if (r <= 40.0) return e1_series(w);
    const double side = w.imag() >= 0.0 ? 1.0 : -1.0;
    return e1_asymptotic(w) - ComplexNumber(0.0, side * kPi);
  }
  if (w.real() < 0.0 && r <= kSeriesRadius) return e1_series(w);
  return e1_continued_fraction(w);
}

double expint_Ei(double x) {
  if (!std::isfinite(x)) throw InvalidInput("Ei: non-finite argument");
  if (x == 0.0) throw PoleError("Ei has a logarithmic singularity at 0");
  if (x > 0.0) return ei_positive(x);
  return -expint_E1(ComplexNumber(-x, 0.0)).real();
}

ComplexNumber expint_Ei(ComplexNumber z) {
  require_finite(z, "Ei");
  z = upper(z);
  if (z == 0.0) throw PoleError("Ei has a logarithmic singularity at 0");
  if (z.imag() == 0.0 && z.real() > 0.0) return ei_positive(z.real());
  const double side = z.imag() >= 0.0 ? 1.0 : -1.0;
  return -expint_E1(-z) + ComplexNumber(0.0, side * kPi);
}

ComplexNumber cosint_Ci(ComplexNumber z) {
  require_finite(z, "Ci");
  z = upper(z);
  if (z == 0.0) throw PoleError("Ci has a logarithmic singularity at 0");
  if (std::abs(z) <= kSeriesRadius) return ci_series(z);
  const ComplexNumber zr = z.real() >= 0.0 ? z : -z;
  const ComplexNumber iz(-zr.imag(), zr.real());
  const ComplexNumber ci_right = -0.5 * (expint_E1(iz) + expint_E1(-iz));
  if (zr == z) return ci_right;
  // Ci(z) - gamma - ln z is even.
  const ComplexNumber cin = kEulerGamma + std::log(zr) - ci_right;
  return kEulerGamma + std::log(z) - cin;
}

ComplexNumber sinint_Si(ComplexNumber z) {
  require_finite(z, "Si");
  if (std::abs(z) <= kSeriesRadius) return si_series(z);
  if (z.real() < 0.0) return -sinint_Si(-z);
  const ComplexNumber iz(-z.imag(), z.real());
  return 0.5 * kPi + ComplexNumber(0.0, 0.5) * (expint_E1(-iz) - expint_E1(iz));
}

ComplexNumber sinhint_Shi(ComplexNumber z) {
  const ComplexNumber iz(-z.imag(), z.real());
  return ComplexNumber(0.0, -1.0) * sinint_Si(iz);
}

}  // namespace gimag
