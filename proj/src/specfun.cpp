#include "pentapack/specfun.hpp"

#include <array>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <cstdlib>

#include "pentapack/error.hpp"
#include "pentapack/motion.hpp"

namespace pentapack::specfun {
namespace {

constexpr int kMaxFactorial = 170;

const std::array<double, kMaxFactorial + 1>& factorial_table() {
  static const auto table = [] {
    std::array<double, kMaxFactorial + 1> t{};
    t[0] = 1.0;
    for (int i = 1; i <= kMaxFactorial; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  return table;
}

// Power series sum_j (-1)^j (z/2)^{2j+n} / (j! (j+n)!), n >= 0.
double bessel_series(int n, double z) {
  const double half = 0.5 * z;
  double term = std::pow(half, n) / factorial(n);
  double sum = term;
  const double q = -half * half;
  for (int j = 1; j < 200; ++j) {
    term *= q / (static_cast<double>(j) * (j + n));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// Miller's backward recurrence normalized by J_0 + 2 sum J_{2k} = 1; z > 0.
double bessel_miller(int n, double z) {
  const double top = std::max<double>(n, z);
  int start = static_cast<int>(top + 25.0 + 2.0 * std::sqrt(40.0 * top));
  if (start % 2) ++start;
  double next = 0.0;  // J_{k+1}
  double cur = 1e-300;  // J_k
  double norm = 0.0;
  double result = 0.0;
  const double two_over_z = 2.0 / z;
  for (int k = start; k >= 1; --k) {
    const double prev = k * two_over_z * cur - next;  // J_{k-1}
    next = cur;
    cur = prev;
    if (std::abs(cur) > 1e250) {
      cur *= 1e-250;
      next *= 1e-250;
      result *= 1e-250;
      norm *= 1e-250;
    }
    if (k - 1 == n) result = cur;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * cur;
  }
  norm += cur;
  return result / norm;
}

}  // namespace

double factorial(int n) {
  if (n < 0 || n > kMaxFactorial) throw InvalidArgument("factorial: argument out of table range");
  return factorial_table()[n];
}

double pochhammer(double a, int n) {
  if (n < 0) throw InvalidArgument("pochhammer: negative length");
  double p = 1.0;
  for (int i = 0; i < n; ++i) p *= a + i;
  return p;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::round(factorial(n) / (factorial(k) * factorial(n - k)));
}

double bessel_j(int n, double z) {
  double sign = 1.0;
  if (n < 0) {
    n = -n;
    if (n % 2) sign = -sign;
  }
  if (z < 0.0) {
    z = -z;
    if (n % 2) sign = -sign;
  }
  if (z == 0.0) return n == 0 ? sign : 0.0;
  if (z <= 1.0) return sign * bessel_series(n, z);
  return sign * bessel_miller(n, z);
}

double laguerre(int n, int m, double x) {
  if (n < 0) throw InvalidArgument("laguerre: negative degree");
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 1.0 + m - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + m - x) * cur - (k + m) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double kummer_1f1(double a, double b, double x) {
  if (b <= 0.0 && b == std::floor(b)) throw InvalidArgument("kummer_1f1: b must not be a nonpositive integer");
  // alternating terms can exceed the sum by many orders, so accumulate wide
  using Wide = boost::multiprecision::cpp_bin_float_50;
  Wide term = 1, sum = 1;
  const Wide wx = x;
  for (int j = 0; j < 10000; ++j) {
    term *= (Wide(a) + j) * wx / ((Wide(b) + j) * (j + 1));
    sum += term;
    if (term == 0) break;
    if (abs(term) < 1e-40 * abs(sum) && j > std::abs(x)) break;
  }
  return sum.convert_to<double>();
}

namespace {
int even_gap(int r, int s, const char* who) {
  const int m = std::abs(r - s);
  if (m % 2) throw InvalidArgument(std::string(who) + ": |r - s| must be even");
  return m;
}
}  // namespace

double coeff_C(int r, int s, int k, double rho) {
  const int m = even_gap(r, s, "coeff_C");
  if (k < 0) throw InvalidArgument("coeff_C: k must be nonnegative");
  if (rho < 0.0) throw InvalidArgument("coeff_C: rho must be nonnegative");
  return factorial(k + m / 2) * std::pow(rho * std::sqrt(kPi), m) /
         (2.0 * std::pow(kPi, k + 1) * factorial(m));
}

double coeff_D(int r, int s, int k, double rho) {
  const int m = even_gap(r, s, "coeff_D");
  const int n = k - m / 2;
  if (n < 0) throw InvalidArgument("coeff_D: requires k >= |r - s| / 2");
  return coeff_C(r, s, k, rho) * factorial(n) / pochhammer(m + 1.0, n);
}

double hankel_closed_form(int r, int s, int k, double rho) {
  const int m = even_gap(r, s, "hankel_closed_form");
  const double sign = ((s - r) % 2 == 0) ? 1.0 : -1.0;
  const double x = kPi * rho * rho;
  return sign * coeff_C(r, s, k, rho) * kummer_1f1(m / 2.0 - k, m + 1.0, x) * std::exp(-x);
}

double hankel_integral_oracle(int r, int s, int k, double rho) {
  even_gap(r, s, "hankel_integral_oracle");
  if (k < 0) throw InvalidArgument("hankel_integral_oracle: k must be nonnegative");
  const double order = s - r;
  const double sign = (s - r) < 0 && (r - s) % 2 ? -1.0 : 1.0;
  // std::cyl_bessel_j keeps the oracle independent of bessel_j above
  return sign * panel_quadrature(
                    [&](double a) {
                      return std::pow(a, 2 * k + 1) * std::exp(-kPi * a * a) *
                             std::cyl_bessel_j(std::abs(order), 2.0 * kPi * a * rho);
                    },
                    0.0, 8.0, 128);
}

}  // namespace pentapack::specfun
