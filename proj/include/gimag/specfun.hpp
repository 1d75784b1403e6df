#pragma once

// Exponential, cosine, sine and hyperbolic sine integrals of complex
// argument, plus adaptive Gauss-Kronrod quadrature.
//
// Branches: Ei and Ci take the principal logarithm, cut along the negative
// real axis. Points on the cut (including a -0 imaginary part) are taken
// from the upper half-plane, so Ei(-x) = -E1(x) + i pi.

#include <complex>
#include <functional>

namespace gimag {

using ComplexNumber = std::complex<double>;

ComplexNumber expint_E1(ComplexNumber z);
ComplexNumber expint_Ei(ComplexNumber z);
// Real Cauchy principal value, finite for x != 0.
double expint_Ei(double x);

ComplexNumber cosint_Ci(ComplexNumber z);
ComplexNumber sinint_Si(ComplexNumber z);
ComplexNumber sinhint_Shi(ComplexNumber z);

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

struct QuadratureSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_subdivisions = 4000;
  // Upper limit standing in for +infinity on e^{-w}-weighted integrands.
  double tail_cut = 40.0;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
  // Bound on the neglected [tail_cut, inf) contribution; 0 for finite ranges.
  double truncation_bound = 0.0;
};

void check_quadrature_spec(const QuadratureSpec& spec);

// Stops once the summed error estimate is <= max(abs_tol, rel_tol |value|).
// Throws ConvergenceError past max_subdivisions.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureSpec& spec = {});

// int_0^inf g(w) e^{-w} dw over [0, tail_cut], for |g| <= envelope.
QuadratureResult integrate_ohmic(const std::function<double(double)>& g, double envelope,
                                 const QuadratureSpec& spec = {});

}  // namespace gimag
