#pragma once

// The function f on M(2) given through its operator Fourier transform
// fhat(a) = phi(a) e^{-pi a^2}, phi(a)_{r,s} = sum_k f_{r,s;k} a^{2k}.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <iosfwd>
#include <string>
#include <vector>

#include "pentapack/motion.hpp"
#include "pentapack/specfun.hpp"

namespace pentapack {

/// Nonzero f_{r,s;k} require r - s to be a multiple of this (pentagon symmetry
/// combined with the even-gap restriction).
inline constexpr int kModulus = 10;

struct ModelParams {
  int N = 5;   ///< Fourier band limit
  int d = 11;  ///< odd polynomial degree parameter

  /// Throws InvalidArgument unless N >= 1 and d is odd and positive.
  void validate() const;
  int half_degree() const { return d / 2; }
  bool operator==(const ModelParams&) const = default;
};

/// Coefficients of an even polynomial in a: coeffs[k] multiplies a^{2k}.
struct EvenPolynomial {
  std::vector<double> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  double operator()(double a) const;
  EvenPolynomial operator*(const EvenPolynomial& o) const;
};

/// Real coefficients f_{r,s;k}, -N <= r, s <= N, 0 <= k <= d.
class CoefficientTensor {
 public:
  CoefficientTensor() = default;
  explicit CoefficientTensor(ModelParams params);

  const ModelParams& params() const { return params_; }
  double at(int r, int s, int k) const { return data_[index(r, s, k)]; }
  double& at(int r, int s, int k) { return data_[index(r, s, k)]; }
  /// Writes the value into (r,s), (s,r), (-r,-s) and (-s,-r).
  void set_symmetric(int r, int s, int k, double value);

  /// Largest violation of the structural invariants (zero pattern and both
  /// symmetries).
  double invariant_violation() const;
  /// Throws InvalidArgument when invariant_violation() exceeds `tol`.
  void validate(double tol = 1e-12) const;

  CoefficientTensor& operator+=(const CoefficientTensor& o);
  CoefficientTensor operator*(double c) const;

 private:
  std::size_t index(int r, int s, int k) const;

  ModelParams params_;
  std::vector<double> data_;
};

/// Whether (r, s, k) may carry a nonzero coefficient.
bool allowed_entry(int r, int s, int k);

/// f(rho, theta, alpha) from the closed Laguerre form, summed in complex
/// arithmetic; throws NumericalFailure if the imaginary residue exceeds
/// 1e-12 relative to the magnitude of the terms.
double evaluate_f(const CoefficientTensor& t, const MotionPoint& p);

/// fhat(a), entries indexed by r + N, s + N.
Eigen::MatrixXd evaluate_fhat(const CoefficientTensor& t, double a);

/// u^a_{r,s}(rho, theta, alpha) = i^{s-r} e^{-i(s alpha + (r-s) theta)} J_{s-r}(2 pi a rho).
std::complex<double> matrix_coefficient_u(double a, int r, int s, const MotionPoint& p);

/// Quadrature of int_0^A sum_{r,s} fhat(a)_{r,s} u^a_{r,s} a da with
/// A = 6. Test oracle only.
double evaluate_f_quadrature(const CoefficientTensor& t, const MotionPoint& p);

/// tau_{r,s} extended linearly over the monomials of q; throws InvalidArgument
/// when r - s is not a multiple of 10.
std::complex<double> tau(int r, int s, const EvenPolynomial& q, const MotionPoint& p);

/// Radial factor of tau_{r,s}(a^{2k}) without the angular phase:
/// (-1)^{m/2} D_{r,s;k}(rho) L_n^m(pi rho^2), zero when k < m/2.
double tau_radial(int r, int s, int k, double rho);

/// Coefficients c_j of tau_radial(r, s, k, rho) = sum_j c_j rho^{2j}.
std::vector<double> tau_radial_coefficients(int r, int s, int k);

/// lambda = f_{0,0;0} = integral of f over M(2), with f normalized as in the
/// inversion formula f = 2 pi int tr(U^a fhat(a)) a da.
double lambda_of(const CoefficientTensor& t);

/// Function value at the identity, f(0, I), in the same normalization as
/// lambda_of: 2 pi times evaluate_f at the origin.
double value_at_identity(const CoefficientTensor& t);

// ---------------------------------------------------------------------------
// Compiled form used for high-precision sweeps:
//   f = e^{-pi u} sum_modes cos(s alpha + t theta) sum_j c_j u^j,  u = rho^2.

template <class T>
struct AngularMode {
  int alpha_freq = 0;
  int theta_freq = 0;
  std::vector<T> coeffs;  ///< polynomial in u = rho^2
};

template <class T>
struct CompiledFunction {
  std::vector<AngularMode<T>> modes;
  T pi;

  T operator()(const T& rho, const T& theta, const T& alpha) const {
    using std::cos;
    using std::exp;
    const T u = rho * rho;
    T sum = 0;
    for (const auto& m : modes) {
      T poly = 0;
      for (auto it = m.coeffs.rbegin(); it != m.coeffs.rend(); ++it) poly = poly * u + *it;
      if (m.alpha_freq == 0 && m.theta_freq == 0) {
        sum += poly;
      } else {
        sum += poly * cos(T(m.alpha_freq) * alpha + T(m.theta_freq) * theta);
      }
    }
    return sum * exp(-pi * u);
  }
};

namespace detail {

// Laguerre coefficients of L_n^m(y) = sum_i l_i y^i in exact integer ratios.
template <class T>
std::vector<T> laguerre_coefficients(int n, int m) {
  std::vector<T> l(n + 1);
  // l_i = (-1)^i binom(n+m, n-i) / i!
  for (int i = 0; i <= n; ++i) {
    T b = 1;
    for (int j = 1; j <= n - i; ++j) b = b * T(m + i + j) / T(j);
    T fact = 1;
    for (int j = 2; j <= i; ++j) fact *= T(j);
    l[i] = (i % 2 ? T(-b) : b) / fact;
  }
  return l;
}

}  // namespace detail

/// Builds the compiled form with all constants evaluated in T. `pi` must be
/// supplied at the working precision of T.
template <class T>
CompiledFunction<T> compile(const CoefficientTensor& t, const T& pi) {
  using std::pow;
  const ModelParams& p = t.params();
  CompiledFunction<T> out;
  out.pi = pi;
  auto find_mode = [&](int af, int tf) -> AngularMode<T>& {
    if (af < 0 || (af == 0 && tf < 0)) {
      af = -af;
      tf = -tf;
    }
    for (auto& m : out.modes) {
      if (m.alpha_freq == af && m.theta_freq == tf) return m;
    }
    out.modes.push_back(AngularMode<T>{af, tf, std::vector<T>(p.d + 1, T(0))});
    return out.modes.back();
  };
  for (int r = -p.N; r <= p.N; ++r) {
    for (int s = -p.N; s <= p.N; ++s) {
      const int m = std::abs(r - s);
      if (m % kModulus) continue;
      for (int k = m / 2; k <= p.d; ++k) {
        const double v = t.at(r, s, k);
        if (v == 0.0) continue;
        const int n = k - m / 2;
        // (-1)^{m/2} D_{r,s;k}(rho) / rho^m
        T c = T(1);
        for (int j = 2; j <= k + m / 2; ++j) c *= T(j);
        for (int j = 2; j <= m; ++j) c /= T(j);
        for (int j = 2; j <= n; ++j) c *= T(j);
        for (int j = 0; j < n; ++j) c /= T(m + 1 + j);
        c /= T(2);
        c *= pow(pi, m / 2);
        c /= pow(pi, k + 1);
        if ((m / 2) % 2) c = -c;
        const auto lag = detail::laguerre_coefficients<T>(n, m);
        AngularMode<T>& mode = find_mode(s, r - s);
        T pik = 1;
        for (int i = 0; i <= n; ++i) {
          mode.coeffs[m / 2 + i] += T(v) * c * lag[i] * pik;
          pik *= pi;
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization: versioned text, nonzero entries with round-trip decimals.

void write_tensor(std::ostream& os, const CoefficientTensor& t);
CoefficientTensor read_tensor(std::istream& is);
/// Hex digest (FNV-1a) of the serialized form.
std::string tensor_hash(const CoefficientTensor& t);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

}  // namespace pentapack
