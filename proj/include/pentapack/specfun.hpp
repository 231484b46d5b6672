#pragma once

#include <boost/math/quadrature/gauss.hpp>

// Special functions for the M(2) harmonic-analysis formulas: integer-order
// Bessel J, generalized Laguerre polynomials, Kummer 1F1, factorials, and
// the radial coefficient functions C_{r,s;k}(rho) and D_{r,s;k}(rho).

namespace pentapack::specfun {

/// n! from an immutable table; n must be in [0, 170].
double factorial(int n);

/// Rising factorial (a)_n = a (a+1) ... (a+n-1), (a)_0 = 1.
double pochhammer(double a, int n);

double binomial(int n, int k);

/// Integer-order Bessel function of the first kind J_n(z).
double bessel_j(int n, double z);

/// Generalized Laguerre polynomial L_n^m(x) by the three-term recurrence.
double laguerre(int n, int m, double x);

/// Confluent hypergeometric 1F1(a; b; x) by direct summation in 50-digit
/// arithmetic. Throws
/// InvalidArgument when b is a nonpositive integer.
double kummer_1f1(double a, double b, double x);

/// C_{r,s;k}(rho) = Gamma(k+1+m/2) (rho sqrt(pi))^m / (2 pi^{k+1} Gamma(m+1)),
/// m = |r-s|. Requires m even and k >= 0.
double coeff_C(int r, int s, int k, double rho);

/// D_{r,s;k}(rho) = C_{r,s;k}(rho) n! / (m+1)_n with n = k - m/2.
/// Requires m even and k >= m/2.
double coeff_D(int r, int s, int k, double rho);

/// Closed form of int_0^inf a^{2k+1} e^{-pi a^2} J_{s-r}(2 pi a rho) da:
/// (-1)^{s-r} C_{r,s;k}(rho) 1F1(m/2 - k; m+1; pi rho^2) e^{-pi rho^2}.
double hankel_closed_form(int r, int s, int k, double rho);

/// Composite 30-point Gauss-Legendre rule over `panels` equal panels of [lo, hi].
template <class F>
double panel_quadrature(F&& f, double lo, double hi, int panels) {
  const double h = (hi - lo) / panels;
  double acc = 0.0;
  for (int i = 0; i < panels; ++i) {
    acc += boost::math::quadrature::gauss<double, 30>::integrate(f, lo + i * h, lo + (i + 1) * h);
  }
  return acc;
}

/// Direct quadrature of the same integral on [0, 8] with std::cyl_bessel_j.
/// Test oracle only.
double hankel_integral_oracle(int r, int s, int k, double rho);

}  // namespace pentapack::specfun
