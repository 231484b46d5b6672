#include "pentapack/sos.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <sstream>

#include "pentapack/error.hpp"

namespace pentapack {
namespace {

// Working type for symbolic expansion; coefficients involve powers of pi so
// exact rationals are not available, 50 digits keeps rounding invisible in
// the final doubles.
using HP = boost::multiprecision::cpp_bin_float_50;
using HPoly = std::vector<HP>;  // coefficients of u^q, u = x^2 (or rho^2)

const HP& hp_pi() {
  static const HP pi = boost::math::constants::pi<HP>();
  return pi;
}

int mod10(int v) { return ((v % kModulus) + kModulus) % kModulus; }

// mu_k^{-1} L_k^0(2 pi u) as a polynomial in u, together with mu_k.
std::pair<HPoly, HP> normalized_laguerre(int k) {
  HPoly c(k + 1);
  HP binom = 1;
  HP fact = 1;
  HP twopi_pow = 1;
  for (int j = 0; j <= k; ++j) {
    if (j > 0) {
      binom = binom * HP(k - j + 1) / HP(j);
      fact *= HP(j);
      twopi_pow *= 2 * hp_pi();
    }
    c[j] = (j % 2 ? HP(-1) : HP(1)) * binom * twopi_pow / fact;
  }
  HP mu = 0;
  for (const auto& v : c) mu = std::max<HP>(mu, abs(v));
  for (auto& v : c) v /= mu;
  return {c, mu};
}

const std::vector<HPoly>& hp_basis(int count) {
  static std::map<int, std::vector<HPoly>> cache;
  auto it = cache.find(count);
  if (it != cache.end()) return it->second;
  std::vector<HPoly> out;
  for (int k = 0; k < count; ++k) out.push_back(normalized_laguerre(k).first);
  return cache.emplace(count, std::move(out)).first->second;
}

HPoly multiply(const HPoly& a, const HPoly& b) {
  HPoly out(a.size() + b.size() - 1, HP(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

// a^{2i} P_l(a) P_l'(a) in powers of a^2.
HPoly gram_product(int i, int l, int lp, int half) {
  const auto& b = hp_basis(half + 1);
  HPoly prod = multiply(b[l], b[lp]);
  prod.insert(prod.begin(), i, HP(0));
  return prod;
}

// (-1)^{m/2} D_{r,s;k}(rho) L_n^m(pi rho^2) as a polynomial in u = rho^2.
HPoly tau_poly(int r, int s, int k) {
  const int m = std::abs(r - s);
  HPoly out(k + 1, HP(0));
  if (2 * k < m) return out;
  const int n = k - m / 2;
  HP c = 1;
  for (int j = 2; j <= k + m / 2; ++j) c *= HP(j);
  for (int j = 2; j <= m; ++j) c /= HP(j);
  for (int j = 2; j <= n; ++j) c *= HP(j);
  for (int j = 0; j < n; ++j) c /= HP(m + 1 + j);
  c /= 2;
  c *= pow(hp_pi(), m / 2);
  c /= pow(hp_pi(), k + 1);
  if ((m / 2) % 2) c = -c;
  const auto lag = detail::laguerre_coefficients<HP>(n, m);
  HP pik = 1;
  for (int i = 0; i <= n; ++i) {
    out[m / 2 + i] = c * lag[i] * pik;
    pik *= hp_pi();
  }
  return out;
}

// tau_{r,s} applied to an even polynomial given by its a^{2k} coefficients.
HPoly tau_of(int r, int s, const HPoly& q) {
  HPoly out(q.size(), HP(0));
  for (std::size_t k = 0; k < q.size(); ++k) {
    if (q[k] == 0) continue;
    const HPoly t = tau_poly(r, s, static_cast<int>(k));
    for (std::size_t j = 0; j < t.size(); ++j) out[j] += q[k] * t[j];
  }
  return out;
}

std::vector<double> to_double(const HPoly& p) {
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = static_cast<double>(p[i]);
  return out;
}

// Row/column labels of a block.
struct Index {
  int l;
  int r;  // Q: r ; R/S: u of (u, v)
  int s;  // R/S: v of (u, v)
};

std::vector<Index> block_indices(const BlockRole& role, int N, int half) {
  std::vector<Index> out;
  if (role.family == 'Q') {
    for (int r : index_set_I(N, role.j))
      for (int l = 0; l <= half; ++l) out.push_back({l, r, 0});
  } else {
    for (auto [u, v] : index_set_P(N, role.j))
      for (int l = 0; l <= half; ++l) out.push_back({l, u, v});
  }
  return out;
}

std::string block_label(const BlockRole& r) {
  if (r.family == 'S') return "S" + std::to_string(r.j);
  return std::string(1, r.family) + std::to_string(r.i) + std::to_string(r.j);
}

// Dense functional accumulator -> symmetric sparse entries.
class Functional {
 public:
  void add(int block, int a, int b, double v) { m_[{block, a, b}] += v; }
  SparseSymmetric sparse() const {
    SparseSymmetric out;
    for (const auto& [key, v] : m_) {
      const auto [block, a, b] = key;
      if (a == b) {
        out.push_back({block, a, a, v});
      } else {
        out.push_back({block, std::min(a, b), std::max(a, b), 0.5 * v});
      }
    }
    canonicalize(out);
    return out;
  }
  bool empty() const { return m_.empty(); }

 private:
  std::map<std::tuple<int, int, int>, double> m_;
};

bool canonical_monomial(int a, int b) { return a > 0 || (a == 0 && b >= 0); }

}  // namespace

BasisPolynomials laguerre_family(int count) {
  BasisPolynomials out;
  out.d = 2 * count - 1;
  for (int k = 0; k < count; ++k) {
    auto [c, mu] = normalized_laguerre(k);
    out.p.push_back(EvenPolynomial{to_double(c)});
    out.mu.push_back(static_cast<double>(mu));
  }
  return out;
}

BasisPolynomials basis(int d) {
  if (d < 1 || d % 2 == 0) throw InvalidArgument("basis: d must be odd and positive");
  BasisPolynomials out = laguerre_family(d / 2 + 1);
  out.d = d;
  return out;
}

std::vector<int> index_set_I(int N, int j) {
  std::vector<int> out;
  for (int r = -N; r <= N; ++r)
    if (mod10(r) == mod10(j)) out.push_back(r);
  return out;
}

std::vector<std::pair<int, int>> index_set_P(int N, int j) {
  std::vector<std::pair<int, int>> out;
  for (int r = 0; r <= N; ++r)
    for (int s = 0; s <= N; ++s)
      if (mod10(r - s) == mod10(j)) out.push_back({r, s});
  return out;
}

Eigen::MatrixXd build_F(int i, int r, int s, int k, const BasisPolynomials& b, int N) {
  if (mod10(r) != mod10(s)) throw InvalidArgument("build_F: r and s lie in different classes");
  if (i != 0 && i != 1) throw InvalidArgument("build_F: i must be 0 or 1");
  const auto cls = index_set_I(N, mod10(r));
  const int half = b.size() - 1;
  const int dim = static_cast<int>(cls.size()) * (half + 1);
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(dim, dim);
  const auto pos = [&](int v) {
    return static_cast<int>(std::find(cls.begin(), cls.end(), v) - cls.begin());
  };
  if (std::abs(r) > N || std::abs(s) > N) throw InvalidArgument("build_F: index outside band limit");
  for (int l = 0; l <= half; ++l) {
    for (int lp = 0; lp <= half; ++lp) {
      const HPoly q = gram_product(i, l, lp, half);
      const double v = (k >= 0 && k < static_cast<int>(q.size())) ? static_cast<double>(q[k]) : 0.0;
      f(pos(r) * (half + 1) + l, pos(s) * (half + 1) + lp) = v;
    }
  }
  return f;
}

Eigen::MatrixXcd build_calF(int i, int j, const MotionPoint& p, const BasisPolynomials& b, int N) {
  const int half = b.size() - 1;
  const auto idx = block_indices(BlockRole{'Q', i, j}, N, half);
  const int dim = static_cast<int>(idx.size());
  Eigen::MatrixXcd out(dim, dim);
  const double u = p.rho * p.rho;
  for (int a = 0; a < dim; ++a) {
    for (int c = 0; c < dim; ++c) {
      const HPoly poly = tau_of(idx[a].r, idx[c].r, gram_product(i, idx[a].l, idx[c].l, half));
      double v = 0.0;
      for (auto it = poly.rbegin(); it != poly.rend(); ++it) v = v * u + static_cast<double>(*it);
      const int r = idx[a].r, s = idx[c].r;
      out(a, c) = v * std::polar(1.0, -(s * p.alpha + (r - s) * p.theta));
    }
  }
  return out;
}

std::complex<double> LaurentPolynomial::operator()(double rho, std::complex<double> z1, std::complex<double> z2) const {
  std::complex<double> acc = 0.0;
  for (const auto& [e, c] : terms) {
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * rho + *it;
    acc += v * std::pow(z1, e.first) * std::pow(z2, e.second);
  }
  return acc;
}

void LaurentPolynomial::add(int e1, int e2, const std::vector<double>& rho_coeffs, double scale) {
  auto& c = terms[{e1, e2}];
  if (c.size() < rho_coeffs.size()) c.resize(rho_coeffs.size(), 0.0);
  for (std::size_t q = 0; q < rho_coeffs.size(); ++q) c[q] += scale * rho_coeffs[q];
}

LaurentMatrix build_W(int i, int j, const BasisPolynomials& b, int N) {
  const int half = b.size() - 1;
  const auto idx = block_indices(BlockRole{'R', i, j}, N, half);
  const int dim = static_cast<int>(idx.size());
  LaurentMatrix out(dim, std::vector<LaurentPolynomial>(dim));
  for (int a = 0; a < dim; ++a) {
    for (int c = 0; c < dim; ++c) {
      const HPoly q = gram_product(i, idx[a].l, idx[c].l, half);  // in rho^2
      std::vector<double> rho_coeffs(2 * q.size() - 1, 0.0);
      for (std::size_t k = 0; k < q.size(); ++k) rho_coeffs[2 * k] = static_cast<double>(q[k]);
      out[a][c].add(idx[c].r - idx[a].r, idx[c].s - idx[a].s, rho_coeffs);
    }
  }
  return out;
}

Eigen::MatrixXcd evaluate(const LaurentMatrix& m, double rho, std::complex<double> z1, std::complex<double> z2) {
  const int dim = static_cast<int>(m.size());
  Eigen::MatrixXcd out(dim, dim);
  for (int a = 0; a < dim; ++a)
    for (int c = 0; c < dim; ++c) out(a, c) = m[a][c](rho, z1, z2);
  return out;
}

ProblemA assemble_problem_A(const ModelParams& params, const std::vector<SamplePoint>& sample,
                            const ProblemOptions& opts) {
  params.validate();
  ProblemA pa;
  pa.params = params;
  pa.basis = basis(params.d);
  pa.sample = sample;
  const int N = params.N;
  const int half = params.half_degree();

  for (const auto& sp : sample) {
    if (!(sp.rho >= 0.0) || sp.rho > 1.0 + 1e-12 || !std::isfinite(sp.theta) || !std::isfinite(sp.alpha)) {
      throw InvalidArgument("assemble_problem_A: sample point violates rho in [0, 1]");
    }
  }

  if (opts.full_block_set) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < kModulus; ++j)
        if (!index_set_I(N, j).empty()) pa.roles.push_back({'Q', i, j});
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < kModulus; ++j)
        if (!index_set_P(N, j).empty()) pa.roles.push_back({'R', i, j});
    for (int j = 0; j < kModulus; ++j)
      if (!index_set_P(N, j).empty()) pa.roles.push_back({'S', 0, j});
  } else {
    pa.roles = {{'Q', 0, 0}, {'Q', 0, 5}, {'Q', 1, 0}, {'Q', 1, 5}, {'R', 0, 0}, {'R', 0, 5}, {'S', 0, 0}, {'S', 0, 5}};
    std::erase_if(pa.roles, [&](const BlockRole& r) {
      return r.family == 'Q' ? index_set_I(N, r.j).empty() : index_set_P(N, r.j).empty();
    });
  }

  std::vector<std::vector<Index>> indices;
  for (std::size_t b = 0; b < pa.roles.size(); ++b) {
    indices.push_back(block_indices(pa.roles[b], N, half));
    pa.sdp.blocks.push_back(BlockSpec{block_label(pa.roles[b]), static_cast<int>(indices.back().size()), BlockKind::psd});
  }

  // Gram products and their tau images, cached per (i, l, l', r, s).
  std::map<std::tuple<int, int, int>, HPoly> gram;
  auto gram_of = [&](int i, int l, int lp) -> const HPoly& {
    auto key = std::make_tuple(i, l, lp);
    auto it = gram.find(key);
    if (it == gram.end()) it = gram.emplace(key, gram_product(i, l, lp, half)).first;
    return it->second;
  };
  std::map<std::tuple<int, int, int, int, int>, HPoly> tau_cache;
  auto tau_entry = [&](int i, int l, int lp, int r, int s) -> const HPoly& {
    auto key = std::make_tuple(i, l, lp, std::abs(r - s), 0);
    auto it = tau_cache.find(key);
    if (it == tau_cache.end()) it = tau_cache.emplace(key, tau_of(r, s, gram_of(i, l, lp))).first;
    return it->second;
  };

  // Functional f_{r,s;k} = sum_i <F^i_{r,s;k}, Q^{ij}> over the retained Q blocks.
  auto coefficient_functional = [&](int r, int s, int k) {
    Functional fn;
    for (std::size_t b = 0; b < pa.roles.size(); ++b) {
      const BlockRole& role = pa.roles[b];
      if (role.family != 'Q' || mod10(role.j) != mod10(r) || mod10(r) != mod10(s)) continue;
      const auto& idx = indices[b];
      for (std::size_t a = 0; a < idx.size(); ++a) {
        if (idx[a].r != r) continue;
        for (std::size_t c = 0; c < idx.size(); ++c) {
          if (idx[c].r != s) continue;
          const HPoly& q = gram_of(role.i, idx[a].l, idx[c].l);
          if (k < static_cast<int>(q.size()) && q[k] != 0) {
            fn.add(static_cast<int>(b), static_cast<int>(a), static_cast<int>(c), static_cast<double>(q[k]));
          }
        }
      }
    }
    return fn;
  };

  // Pairs (r, s) carried by the retained Q blocks.
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t b = 0; b < pa.roles.size(); ++b) {
    if (pa.roles[b].family != 'Q') continue;
    for (int r : index_set_I(N, pa.roles[b].j))
      for (int s : index_set_I(N, pa.roles[b].j))
        if (r <= s && std::find(pairs.begin(), pairs.end(), std::make_pair(r, s)) == pairs.end()) pairs.push_back({r, s});
  }
  auto has_pair = [&](int r, int s) {
    return std::find(pairs.begin(), pairs.end(), std::make_pair(std::min(r, s), std::max(r, s))) != pairs.end();
  };

  // zero pattern: f_{r,s;k} = 0 for k < |r - s| / 2
  for (auto [r, s] : pairs) {
    for (int k = 0; 2 * k < std::abs(r - s) && k <= params.d; ++k) {
      Functional fn = coefficient_functional(r, s, k);
      if (fn.empty()) continue;
      std::ostringstream tag;
      tag << "coeff-zero r=" << r << " s=" << s << " k=" << k;
      pa.sdp.equalities.push_back(LinearConstraint{fn.sparse(), 0.0, tag.str()});
      ++pa.counts.coeff_zero;
    }
  }

  // real-valuedness: f_{r,s;k} = f_{-r,-s;k}, one row per unordered pair of pairs
  for (auto [r, s] : pairs) {
    const int nr = std::min(-r, -s), ns = std::max(-r, -s);
    if (std::make_pair(nr, ns) == std::make_pair(r, s)) {
      pa.counts.coeff_real_vacuous += params.d + 1;
      continue;
    }
    if (std::make_pair(nr, ns) < std::make_pair(r, s)) continue;  // handled from the other side
    if (!has_pair(nr, ns)) continue;
    for (int k = 0; k <= params.d; ++k) {
      SparseSymmetric a = coefficient_functional(r, s, k).sparse();
      for (auto e : coefficient_functional(nr, ns, k).sparse()) {
        e.value = -e.value;
        a.push_back(e);
      }
      canonicalize(a);
      if (a.empty()) {
        ++pa.counts.coeff_real_vacuous;
        continue;
      }
      std::ostringstream tag;
      tag << "coeff-real r=" << r << " s=" << s << " k=" << k;
      pa.sdp.equalities.push_back(LinearConstraint{std::move(a), 0.0, tag.str()});
      ++pa.counts.coeff_real;
    }
  }

  // cylinder identity, expanded in the basis P_k(rho) z1^{a} z2^{b}, k = 0..d
  {
    // monomial -> (block, a, c) -> polynomial in u = rho^2
    std::map<std::pair<int, int>, std::map<std::tuple<int, int, int>, HPoly>> expansion;
    auto accumulate = [&](std::pair<int, int> mono, int b, int a, int c, const HPoly& poly) {
      if (!canonical_monomial(mono.first, mono.second)) return;
      HPoly& target = expansion[mono][{b, a, c}];
      if (target.size() < poly.size()) target.resize(poly.size(), HP(0));
      for (std::size_t q = 0; q < poly.size(); ++q) target[q] += poly[q];
    };
    for (std::size_t b = 0; b < pa.roles.size(); ++b) {
      const BlockRole& role = pa.roles[b];
      const auto& idx = indices[b];
      const int ib = static_cast<int>(b);
      for (int a = 0; a < static_cast<int>(idx.size()); ++a) {
        for (int c = 0; c < static_cast<int>(idx.size()); ++c) {
          if (role.family == 'Q') {
            const int r = idx[a].r, s = idx[c].r;
            accumulate({-r, -s}, ib, a, c, tau_entry(role.i, idx[a].l, idx[c].l, r, s));
          } else {
            const HPoly& q = gram_of(role.family == 'R' ? role.i : 0, idx[a].l, idx[c].l);
            const std::pair<int, int> mono{idx[c].r - idx[a].r, idx[c].s - idx[a].s};
            if (role.family == 'R') {
              accumulate(mono, ib, a, c, q);
            } else {
              HPoly shifted(q.size() + 1, HP(0));  // (u - 1) q
              for (std::size_t k = 0; k < q.size(); ++k) {
                shifted[k + 1] += q[k];
                shifted[k] -= q[k];
              }
              accumulate(mono, ib, a, c, shifted);
            }
          }
        }
      }
    }
    const int count = params.d + 1;
    const auto& target_basis = hp_basis(count);
    for (const auto& [mono, entries] : expansion) {
      std::vector<Functional> rows(count);
      for (const auto& [key, poly] : entries) {
        if (static_cast<int>(poly.size()) > count) throw InvalidArgument("assemble_problem_A: identity degree exceeds d");
        // back substitution in the triangular basis
        HPoly rem = poly;
        rem.resize(count, HP(0));
        for (int k = count - 1; k >= 0; --k) {
          const HP beta = rem[k] / target_basis[k][k];
          if (beta == 0) continue;
          for (int q = 0; q <= k; ++q) rem[q] -= beta * target_basis[k][q];
          const auto [blk, a, c] = key;
          rows[k].add(blk, a, c, static_cast<double>(beta));
        }
      }
      for (int k = 0; k < count; ++k) {
        SparseSymmetric a = rows[k].sparse();
        std::erase_if(a, [](const MatrixEntry& e) { return std::abs(e.value) < 1e-300; });
        if (a.empty()) continue;
        std::ostringstream tag;
        tag << "cylinder z1^" << mono.first << " z2^" << mono.second << " P" << k;
        pa.sdp.equalities.push_back(LinearConstraint{std::move(a), 0.0, tag.str()});
        ++pa.counts.cylinder;
      }
    }
  }

  // normalization f_{0,0;0} = 1
  {
    Functional fn = coefficient_functional(0, 0, 0);
    pa.sdp.equalities.push_back(LinearConstraint{fn.sparse(), 1.0, "normalization"});
    ++pa.counts.normalization;
  }

  // objective: value of the calF sum at the identity
  {
    Functional fn;
    for (std::size_t b = 0; b < pa.roles.size(); ++b) {
      if (pa.roles[b].family != 'Q') continue;
      const auto& idx = indices[b];
      for (int a = 0; a < static_cast<int>(idx.size()); ++a)
        for (int c = 0; c < static_cast<int>(idx.size()); ++c) {
          const HPoly& t = tau_entry(pa.roles[b].i, idx[a].l, idx[c].l, idx[a].r, idx[c].r);
          if (!t.empty() && t[0] != 0) fn.add(static_cast<int>(b), a, c, static_cast<double>(t[0]));
        }
    }
    pa.sdp.objective = fn.sparse();
  }

  // one row per sample point: sum <Re calF(p), Q> <= 0
  for (const auto& sp : sample) {
    Functional fn;
    const double u = sp.rho * sp.rho;
    for (std::size_t b = 0; b < pa.roles.size(); ++b) {
      if (pa.roles[b].family != 'Q') continue;
      const auto& idx = indices[b];
      for (int a = 0; a < static_cast<int>(idx.size()); ++a)
        for (int c = 0; c < static_cast<int>(idx.size()); ++c) {
          const HPoly& t = tau_entry(pa.roles[b].i, idx[a].l, idx[c].l, idx[a].r, idx[c].r);
          double v = 0.0;
          for (auto it = t.rbegin(); it != t.rend(); ++it) v = v * u + static_cast<double>(*it);
          const int r = idx[a].r, s = idx[c].r;
          v *= std::cos(s * sp.alpha + (r - s) * sp.theta);
          if (v != 0.0) fn.add(static_cast<int>(b), a, c, v);
        }
    }
    std::ostringstream tag;
    tag << "sample rho=" << format_double(sp.rho) << " theta=" << format_double(sp.theta)
        << " alpha=" << format_double(sp.alpha);
    pa.sdp.inequalities.push_back(LinearConstraint{fn.sparse(), 0.0, tag.str()});
    ++pa.counts.sample;
  }
  return pa;
}

ProblemA assemble_feasibility_variant(const ProblemA& base, double z_star) {
  ProblemA out = base;
  out.objective_cap = z_star + 1e-5;
  if (std::isfinite(out.objective_cap)) {
    out.sdp.inequalities.push_back(LinearConstraint{base.sdp.objective, out.objective_cap, "objective-cap"});
  }
  out.sdp.objective.clear();
  return out;
}

CoefficientTensor recover_tensor(const SdpSolution& sol, const ProblemA& problem) {
  const ModelParams& params = problem.params;
  const int half = params.half_degree();
  CoefficientTensor t(params);
  if (sol.x.blocks.size() < problem.roles.size()) throw DimensionMismatch("recover_tensor: solution has too few blocks");
  for (std::size_t b = 0; b < problem.roles.size(); ++b) {
    const BlockRole& role = problem.roles[b];
    if (role.family != 'Q') continue;
    const auto idx = block_indices(role, params.N, half);
    const Eigen::MatrixXd& q = sol.x.blocks[b];
    if (q.rows() != static_cast<long>(idx.size()) || q.cols() != static_cast<long>(idx.size())) {
      throw DimensionMismatch("recover_tensor: block " + block_label(role) + " has the wrong size");
    }
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t c = 0; c < idx.size(); ++c) {
        const HPoly g = gram_product(role.i, idx[a].l, idx[c].l, half);
        for (std::size_t k = 0; k < g.size() && static_cast<int>(k) <= params.d; ++k) {
          t.at(idx[a].r, idx[c].r, static_cast<int>(k)) += static_cast<double>(g[k]) * q(a, c);
        }
      }
  }
  // canonical representative carries the value for (-r, -s)
  for (int r = -params.N; r <= params.N; ++r)
    for (int s = -params.N; s <= params.N; ++s) {
      const bool canonical = r + s > 0 || (r + s == 0 && r >= 0);
      if (!canonical) continue;
      for (int k = 0; k <= params.d; ++k) t.at(-r, -s, k) = t.at(r, s, k);
    }
  return t;
}

double sample_row_value(const SdpSolution& sol, const ProblemA& problem, const MotionPoint& p) {
  double acc = 0.0;
  for (std::size_t b = 0; b < problem.roles.size(); ++b) {
    const BlockRole& role = problem.roles[b];
    if (role.family != 'Q') continue;
    const Eigen::MatrixXcd f = build_calF(role.i, role.j, p, problem.basis, problem.params.N);
    acc += (f.real().cwiseProduct(sol.x.blocks[b])).sum();
  }
  return acc;
}

std::complex<double> cylinder_identity_value(const SdpSolution& sol, const ProblemA& problem, double rho,
                                             std::complex<double> z1, std::complex<double> z2) {
  std::complex<double> acc = 0.0;
  const double theta = std::arg(z1);
  const double alpha = std::arg(z2) + theta;
  for (std::size_t b = 0; b < problem.roles.size(); ++b) {
    const BlockRole& role = problem.roles[b];
    const Eigen::MatrixXd& x = sol.x.blocks[b];
    if (role.family == 'Q') {
      const Eigen::MatrixXcd f = build_calF(role.i, role.j, MotionPoint{rho, theta, alpha}, problem.basis, problem.params.N);
      acc += (f.transpose().cwiseProduct(x.cast<std::complex<double>>())).sum();
    } else {
      const LaurentMatrix w = build_W(role.family == 'R' ? role.i : 0, role.j, problem.basis, problem.params.N);
      Eigen::MatrixXcd wv = evaluate(w, rho, z1, z2);
      if (role.family == 'S') wv *= (rho * rho - 1.0);
      acc += (wv.transpose().cwiseProduct(x.cast<std::complex<double>>())).sum();
    }
  }
  return acc;
}

std::string problem_manifest(const ProblemA& problem) {
  std::ostringstream os;
  os << "pentapack-manifest 1\n";
  os << "N " << problem.params.N << " d " << problem.params.d << '\n';
  os << "blocks " << problem.sdp.blocks.size() + (problem.sdp.inequalities.empty() ? 0 : 1) << '\n';
  for (std::size_t b = 0; b < problem.sdp.blocks.size(); ++b) {
    os << "block " << b + 1 << ' ' << problem.sdp.blocks[b].label << ' ' << problem.sdp.blocks[b].dim << '\n';
  }
  if (!problem.sdp.inequalities.empty()) {
    os << "block " << problem.sdp.blocks.size() + 1 << " slack " << problem.sdp.inequalities.size()
       << " (diagonal; inequality rows carry +1 on their slack)\n";
  }
  os << "rows coeff-zero " << problem.counts.coeff_zero << " coeff-real " << problem.counts.coeff_real
     << " (vacuous pruned " << problem.counts.coeff_real_vacuous << ") cylinder " << problem.counts.cylinder
     << " normalization " << problem.counts.normalization << " sample " << problem.counts.sample << '\n';
  if (std::isfinite(problem.objective_cap)) os << "objective-cap " << format_double(problem.objective_cap) << '\n';
  std::size_t row = 1;
  for (const auto& c : problem.sdp.equalities) os << "constraint " << row++ << " eq " << c.tag << '\n';
  for (const auto& c : problem.sdp.inequalities) os << "constraint " << row++ << " le " << c.tag << '\n';
  return os.str();
}

}  // namespace pentapack
