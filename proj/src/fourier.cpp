#include "pentapack/fourier.hpp"

#include <charconv>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "pentapack/error.hpp"

namespace pentapack {

void ModelParams::validate() const {
  if (N < 1) throw InvalidArgument("ModelParams: N must be at least 1");
  if (d < 1 || d % 2 == 0) throw InvalidArgument("ModelParams: d must be odd and positive");
}

double EvenPolynomial::operator()(double a) const {
  const double a2 = a * a;
  double v = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * a2 + *it;
  return v;
}

EvenPolynomial EvenPolynomial::operator*(const EvenPolynomial& o) const {
  if (coeffs.empty() || o.coeffs.empty()) return {};
  EvenPolynomial out{std::vector<double>(coeffs.size() + o.coeffs.size() - 1, 0.0)};
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    for (std::size_t j = 0; j < o.coeffs.size(); ++j) out.coeffs[i + j] += coeffs[i] * o.coeffs[j];
  }
  return out;
}

CoefficientTensor::CoefficientTensor(ModelParams params) : params_(params) {
  params_.validate();
  const std::size_t side = 2 * params_.N + 1;
  data_.assign(side * side * (params_.d + 1), 0.0);
}

std::size_t CoefficientTensor::index(int r, int s, int k) const {
  const int n = params_.N;
  if (r < -n || r > n || s < -n || s > n || k < 0 || k > params_.d) {
    throw InvalidArgument("CoefficientTensor: index out of range");
  }
  const std::size_t side = 2 * n + 1;
  return (static_cast<std::size_t>(r + n) * side + static_cast<std::size_t>(s + n)) * (params_.d + 1) + k;
}

void CoefficientTensor::set_symmetric(int r, int s, int k, double value) {
  at(r, s, k) = value;
  at(s, r, k) = value;
  at(-r, -s, k) = value;
  at(-s, -r, k) = value;
}

bool allowed_entry(int r, int s, int k) {
  const int m = std::abs(r - s);
  return m % kModulus == 0 && 2 * k >= m;
}

double CoefficientTensor::invariant_violation() const {
  double worst = 0.0;
  const int n = params_.N;
  for (int r = -n; r <= n; ++r) {
    for (int s = -n; s <= n; ++s) {
      for (int k = 0; k <= params_.d; ++k) {
        const double v = at(r, s, k);
        if (!allowed_entry(r, s, k)) worst = std::max(worst, std::abs(v));
        worst = std::max(worst, std::abs(v - at(s, r, k)));
        worst = std::max(worst, std::abs(v - at(-r, -s, k)));
      }
    }
  }
  return worst;
}

void CoefficientTensor::validate(double tol) const {
  if (data_.empty()) throw InvalidArgument("CoefficientTensor: empty tensor");
  const double v = invariant_violation();
  if (v > tol) {
    throw InvalidArgument("CoefficientTensor: invariant violated by " + format_double(v));
  }
}

CoefficientTensor& CoefficientTensor::operator+=(const CoefficientTensor& o) {
  if (!(params_ == o.params_)) throw DimensionMismatch("CoefficientTensor: parameter mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

CoefficientTensor CoefficientTensor::operator*(double c) const {
  CoefficientTensor out = *this;
  for (double& v : out.data_) v *= c;
  return out;
}

double tau_radial(int r, int s, int k, double rho) {
  const int m = std::abs(r - s);
  if (m % 2) throw InvalidArgument("tau_radial: |r - s| must be even");
  if (2 * k < m) return 0.0;
  const int n = k - m / 2;
  const double sign = (m / 2) % 2 ? -1.0 : 1.0;
  return sign * specfun::coeff_D(r, s, k, rho) * specfun::laguerre(n, m, kPi * rho * rho);
}

std::vector<double> tau_radial_coefficients(int r, int s, int k) {
  const int m = std::abs(r - s);
  if (m % 2) throw InvalidArgument("tau_radial_coefficients: |r - s| must be even");
  std::vector<double> c(std::max(k, 0) + 1, 0.0);
  if (2 * k < m) return c;
  const int n = k - m / 2;
  const double lead = specfun::coeff_D(r, s, k, 1.0) * ((m / 2) % 2 ? -1.0 : 1.0);
  const auto lag = detail::laguerre_coefficients<double>(n, m);
  double pik = 1.0;
  for (int i = 0; i <= n; ++i) {
    c[m / 2 + i] = lead * lag[i] * pik;
    pik *= kPi;
  }
  return c;
}

double evaluate_f(const CoefficientTensor& t, const MotionPoint& p) {
  t.validate(1e-9);
  const ModelParams& mp = t.params();
  std::complex<double> sum = 0.0;
  double magnitude = 0.0;
  for (int r = -mp.N; r <= mp.N; ++r) {
    for (int s = -mp.N; s <= mp.N; ++s) {
      const int m = std::abs(r - s);
      if (m % kModulus) continue;
      const std::complex<double> phase = std::polar(1.0, -(s * p.alpha + (r - s) * p.theta));
      for (int k = m / 2; k <= mp.d; ++k) {
        const double v = t.at(r, s, k);
        if (v == 0.0) continue;
        const double radial = v * tau_radial(r, s, k, p.rho);
        sum += radial * phase;
        magnitude += std::abs(radial);
      }
    }
  }
  const double gauss = std::exp(-kPi * p.rho * p.rho);
  if (std::abs(sum.imag()) > 1e-12 * std::max(1.0, magnitude)) {
    throw NumericalFailure("evaluate_f: imaginary residue " + format_double(sum.imag()));
  }
  return sum.real() * gauss;
}

Eigen::MatrixXd evaluate_fhat(const CoefficientTensor& t, double a) {
  if (a < 0.0) throw InvalidArgument("evaluate_fhat: a must be nonnegative");
  const ModelParams& mp = t.params();
  const int side = 2 * mp.N + 1;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(side, side);
  const double a2 = a * a;
  const double gauss = std::exp(-kPi * a2);
  for (int r = -mp.N; r <= mp.N; ++r) {
    for (int s = -mp.N; s <= mp.N; ++s) {
      double v = 0.0;
      for (int k = mp.d; k >= 0; --k) v = v * a2 + t.at(r, s, k);
      out(r + mp.N, s + mp.N) = v * gauss;
    }
  }
  return out;
}

std::complex<double> matrix_coefficient_u(double a, int r, int s, const MotionPoint& p) {
  if (a < 0.0) throw InvalidArgument("matrix_coefficient_u: a must be nonnegative");
  static const std::complex<double> kPowI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const std::complex<double> ipow = kPowI[((s - r) % 4 + 4) % 4];
  const std::complex<double> phase = std::polar(1.0, -(s * p.alpha + (r - s) * p.theta));
  return ipow * phase * specfun::bessel_j(s - r, 2.0 * kPi * a * p.rho);
}

double evaluate_f_quadrature(const CoefficientTensor& t, const MotionPoint& p) {
  t.validate(1e-9);
  const ModelParams& mp = t.params();
  auto integrand = [&](double a) {
    const Eigen::MatrixXd fh = evaluate_fhat(t, a);
    std::complex<double> acc = 0.0;
    for (int r = -mp.N; r <= mp.N; ++r) {
      for (int s = -mp.N; s <= mp.N; ++s) {
        const double v = fh(r + mp.N, s + mp.N);
        if (v != 0.0) acc += v * matrix_coefficient_u(a, r, s, p);
      }
    }
    return acc.real() * a;
  };
  return specfun::panel_quadrature(integrand, 0.0, 6.0, 96);
}

std::complex<double> tau(int r, int s, const EvenPolynomial& q, const MotionPoint& p) {
  if ((r - s) % kModulus) throw InvalidArgument("tau: r - s must be a multiple of 10");
  double radial = 0.0;
  for (int k = 0; k <= q.degree(); ++k) {
    if (q.coeffs[k] != 0.0) radial += q.coeffs[k] * tau_radial(r, s, k, p.rho);
  }
  return radial * std::polar(1.0, -(s * p.alpha + (r - s) * p.theta));
}

double lambda_of(const CoefficientTensor& t) { return t.at(0, 0, 0); }

double value_at_identity(const CoefficientTensor& t) { return kTwoPi * evaluate_f(t, MotionPoint{}); }

// ---------------------------------------------------------------------------

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {
constexpr const char* kTensorMagic = "pentapack-tensor";
constexpr int kTensorVersion = 1;

double parse_double(const std::string& tok) {
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
    throw MalformedFile("tensor: bad number '" + tok + "'");
  }
  return v;
}
}  // namespace

void write_tensor(std::ostream& os, const CoefficientTensor& t) {
  const ModelParams& p = t.params();
  std::size_t nnz = 0;
  for (int r = -p.N; r <= p.N; ++r)
    for (int s = -p.N; s <= p.N; ++s)
      for (int k = 0; k <= p.d; ++k) nnz += t.at(r, s, k) != 0.0;
  os << kTensorMagic << ' ' << kTensorVersion << '\n';
  os << "N " << p.N << " d " << p.d << '\n';
  os << "entries " << nnz << '\n';
  for (int r = -p.N; r <= p.N; ++r)
    for (int s = -p.N; s <= p.N; ++s)
      for (int k = 0; k <= p.d; ++k) {
        const double v = t.at(r, s, k);
        if (v != 0.0) os << r << ' ' << s << ' ' << k << ' ' << format_double(v) << '\n';
      }
}

CoefficientTensor read_tensor(std::istream& is) {
  std::string magic, key_n, key_d, key_e;
  int version = 0;
  ModelParams p;
  std::size_t nnz = 0;
  if (!(is >> magic >> version) || magic != kTensorMagic) throw MalformedFile("tensor: missing header");
  if (version != kTensorVersion) throw MalformedFile("tensor: unsupported version");
  if (!(is >> key_n >> p.N >> key_d >> p.d) || key_n != "N" || key_d != "d") {
    throw MalformedFile("tensor: bad parameter line");
  }
  if (!(is >> key_e >> nnz) || key_e != "entries") throw MalformedFile("tensor: bad entry count");
  try {
    p.validate();
  } catch (const InvalidArgument& e) {
    throw MalformedFile(std::string("tensor: ") + e.what());
  }
  CoefficientTensor t(p);
  for (std::size_t i = 0; i < nnz; ++i) {
    int r = 0, s = 0, k = 0;
    std::string tok;
    if (!(is >> r >> s >> k >> tok)) throw MalformedFile("tensor: truncated entry list");
    if (std::abs(r) > p.N || std::abs(s) > p.N || k < 0 || k > p.d) throw MalformedFile("tensor: index out of range");
    t.at(r, s, k) = parse_double(tok);
  }
  return t;
}

std::string tensor_hash(const CoefficientTensor& t) {
  std::ostringstream os;
  write_tensor(os, t);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : os.str()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream hex;
  hex << std::hex << std::setw(16) << std::setfill('0') << h;
  return hex.str();
}

}  // namespace pentapack
