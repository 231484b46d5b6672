#include "pentapack/certify.hpp"

#include <algorithm>
#include <atomic>
#include <Eigen/Sparse>
#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "json.hpp"
#include "pentapack/error.hpp"

namespace pentapack {

namespace {

using Wide = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<128>, boost::multiprecision::et_off>;
using Mpfr = boost::multiprecision::mpfr_float;

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Coordinates of the symmetric blocks in which the trace inner product is
// the Euclidean one: X_ii, and sqrt(2) X_ij above the diagonal.
struct Coordinates {
  std::map<std::tuple<int, int, int>, int> index;
  std::vector<std::tuple<int, int, int>> keys;

  int of(int block, int row, int col) {
    auto [it, fresh] = index.try_emplace({block, row, col}, static_cast<int>(keys.size()));
    if (fresh) keys.emplace_back(block, row, col);
    return it->second;
  }
};

Wide wide_residual(const LinearConstraint& c, const BlockMatrix& x) {
  Wide acc = Wide(c.rhs);
  for (const auto& e : c.coeffs) {
    const auto& b = x.blocks[e.block];
    const double xv = b.cols() == 1 ? (e.row == e.col ? b(e.row, 0) : 0.0) : b(e.row, e.col);
    Wide term = Wide(e.value) * Wide(xv);
    if (e.row != e.col) term *= 2;
    acc -= term;
  }
  return acc;
}

void check_layout(const SdpSolution& sol, const SdpProblem& p) {
  if (sol.x.blocks.size() < p.blocks.size()) throw DimensionMismatch("solution has fewer blocks than the problem");
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    const auto& m = sol.x.blocks[b];
    const int dim = p.blocks[b].dim;
    const bool ok = p.blocks[b].kind == BlockKind::psd ? (m.rows() == dim && m.cols() == dim)
                                                       : (m.rows() == dim && m.cols() == 1);
    if (!ok) throw DimensionMismatch("block " + p.blocks[b].label + " has the wrong shape");
  }
}

std::string family_of(const std::string& tag) { return tag.substr(0, tag.find(' ')); }

// Certified lower bound for the smallest eigenvalue of a symmetric matrix.
double certified_min_eigenvalue(const Eigen::MatrixXd& m) {
  const double norm = m.norm();
  if (norm == 0.0) return 0.0;
  const double estimate = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues()(0);
  const auto n = m.rows();
  double delta = 64.0 * kEps * norm * static_cast<double>(n);
  for (int attempt = 0; attempt < 40; ++attempt, delta *= 4.0) {
    const double mu = estimate - delta;
    std::vector<Wide> a(n * n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) a[i * n + j] = Wide(m(i, j)) - (i == j ? Wide(mu) : Wide(0));
    bool positive = true;
    for (Eigen::Index k = 0; k < n && positive; ++k) {
      const Wide pivot = a[k * n + k];
      if (!(pivot > 0)) {
        positive = false;
        break;
      }
      for (Eigen::Index i = k + 1; i < n; ++i) {
        const Wide f = a[i * n + k] / pivot;
        for (Eigen::Index j = k + 1; j <= i; ++j) a[i * n + j] -= f * a[j * n + k];
      }
    }
    if (positive) return mu;
  }
  throw NumericalFailure("minimum eigenvalue could not be confirmed");
}

// Bound on sup |q(u)| for u in [lo, hi] from the Taylor coefficients at the
// midpoint.
double enclose(const std::vector<double>& q, double lo, double hi) {
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  std::vector<double> b = q;
  const int n = static_cast<int>(b.size());
  // synthetic division: b becomes the coefficients of q(c + v)
  for (int k = 0; k < n; ++k)
    for (int j = n - 2; j >= k; --j) b[j] += c * b[j + 1];
  double sum = 0.0;
  double hp = 1.0;
  double magnitude = 0.0;
  for (int j = 0; j < n; ++j) {
    sum += std::abs(b[j]) * hp;
    hp *= h;
  }
  for (double v : q) magnitude += std::abs(v);
  // covers rounding in the shift and the sum
  return sum * (1.0 + 1e-9) + 1e3 * n * n * kEps * magnitude * std::max(1.0, std::pow(hi, n));
}

std::vector<double> derivative(const std::vector<double>& p) {
  std::vector<double> d(p.size() > 1 ? p.size() - 1 : 1, 0.0);
  for (std::size_t j = 1; j < p.size(); ++j) d[j - 1] = static_cast<double>(j) * p[j];
  return d;
}

int digits10_for_bits(int bits) { return static_cast<int>(std::ceil(bits * std::log10(2.0))) + 1; }

}  // namespace

// ---------------------------------------------------------------------------

ProjectionResult project_affine(const SdpSolution& sol, const SdpProblem& p) {
  check_layout(sol, p);
  ProjectionResult out;
  out.solution = sol;
  const std::size_t m = p.equalities.size();
  if (m == 0) return out;

  Coordinates coords;
  std::vector<std::vector<std::pair<int, double>>> rows(m);
  std::vector<double> scale(m);
  for (std::size_t i = 0; i < m; ++i) {
    double norm2 = 0.0;
    for (const auto& e : p.equalities[i].coeffs) {
      const double a = e.row == e.col ? e.value : std::sqrt(2.0) * e.value;
      rows[i].emplace_back(coords.of(e.block, e.row, e.col), a);
      norm2 += a * a;
    }
    if (norm2 == 0.0) throw NumericalFailure("equality row '" + p.equalities[i].tag + "' is empty");
    scale[i] = 1.0 / std::sqrt(norm2);
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor> a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(coords.keys.size()));
  std::vector<Eigen::Triplet<double>> trips;
  for (std::size_t i = 0; i < m; ++i)
    for (const auto& [k, v] : rows[i]) trips.emplace_back(static_cast<int>(i), k, v * scale[i]);
  a.setFromTriplets(trips.begin(), trips.end());
  const Eigen::MatrixXd gram = Eigen::MatrixXd(a * a.transpose());
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  const Eigen::VectorXd pivots = ldlt.vectorD();
  if (ldlt.info() != Eigen::Success || pivots.minCoeff() <= 1e-12 * std::max(1.0, pivots.maxCoeff())) {
    throw NumericalFailure("project_affine: equality rows are linearly dependent");
  }

  auto residuals = [&](const BlockMatrix& x) {
    Eigen::VectorXd r(m);
    double worst = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const Wide w = wide_residual(p.equalities[i], x);
      r(i) = static_cast<double>(w);
      worst = std::max(worst, std::abs(r(i)));
    }
    return std::pair{r, worst};
  };

  BlockMatrix& x = out.solution.x;
  auto [r, worst] = residuals(x);
  out.residual_before = worst;
  Eigen::VectorXd moved = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(coords.keys.size()));
  for (int round = 0; round < 6 && worst > 0.0; ++round) {
    const Eigen::VectorXd y = ldlt.solve(r.cwiseProduct(Eigen::Map<const Eigen::VectorXd>(scale.data(), m)));
    const Eigen::VectorXd dz = a.transpose() * y;
    for (std::size_t k = 0; k < coords.keys.size(); ++k) {
      const auto [b, i, j] = coords.keys[k];
      auto& blk = x.blocks[b];
      if (blk.cols() == 1) {
        blk(i, 0) += dz(k);
      } else if (i == j) {
        blk(i, i) += dz(k);
      } else {
        const double d = dz(k) / std::sqrt(2.0);
        blk(i, j) += d;
        blk(j, i) += d;
      }
    }
    moved += dz;
    const double previous = worst;
    std::tie(r, worst) = residuals(x);
    out.rounds = round + 1;
    if (worst >= 0.5 * previous) break;
  }
  out.residual_after = worst;
  out.displacement = moved.norm();
  out.solution.primal_objective = inner(p.objective, x);
  return out;
}

FeasibilityMargin feasibility_margin(const SdpSolution& sol, const SdpProblem& p) {
  check_layout(sol, p);
  FeasibilityMargin out;
  std::map<std::string, double> by_family;
  for (const auto& c : p.equalities) {
    const double r = std::abs(static_cast<double>(wide_residual(c, sol.x)));
    auto& slot = by_family[family_of(c.tag)];
    slot = std::max(slot, r);
    if (r > out.max_residual || out.worst_row.empty()) {
      out.max_residual = r;
      out.worst_row = c.tag;
    }
  }
  out.residual_by_family.assign(by_family.begin(), by_family.end());

  bool first = true;
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    const auto& m = sol.x.blocks[b];
    const double lo = p.blocks[b].kind == BlockKind::diagonal ? (m.size() ? m.minCoeff() : 0.0)
                                                              : certified_min_eigenvalue(m);
    if (first || lo < out.min_eigenvalue) {
      out.min_eigenvalue = lo;
      out.worst_block = p.blocks[b].label;
      first = false;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

double LipschitzBound::gradient_norm() const { return std::hypot(translation, rotation); }

namespace {

// Per-panel Lipschitz contributions on [0, rho_max] split into equal
// radial panels.
struct PanelTable {
  double rho_max = 0.0;
  std::vector<double> translation;
  std::vector<double> rotation;

  LipschitzBound over(double lo, double hi) const {
    const int n = static_cast<int>(translation.size());
    const int first = std::clamp(static_cast<int>(std::floor(lo / rho_max * n)), 0, n - 1);
    const int last = std::clamp(static_cast<int>(std::ceil(hi / rho_max * n)) - 1, first, n - 1);
    LipschitzBound l;
    for (int k = first; k <= last; ++k) {
      l.translation = std::max(l.translation, translation[k]);
      l.rotation = std::max(l.rotation, rotation[k]);
    }
    return l;
  }
};

PanelTable panel_table(const CompiledFunction<double>& f, double rho_max, int panels) {
  struct ModeData {
    std::vector<double> value;   // p(u)
    std::vector<double> slope;   // p'(u) - pi p(u); g' = 2 rho e^{-pi u} slope
    std::vector<double> over_u;  // p(u) / u
    int s = 0;
    int t = 0;
  };
  std::vector<ModeData> modes;
  for (const auto& m : f.modes) {
    ModeData d;
    d.value = m.coeffs;
    d.slope = derivative(m.coeffs);
    d.slope.resize(m.coeffs.size(), 0.0);
    for (std::size_t j = 0; j < m.coeffs.size(); ++j) d.slope[j] -= M_PI * m.coeffs[j];
    if (m.theta_freq != 0) {
      if (m.coeffs.front() != 0.0) throw NumericalFailure("lipschitz_estimate: angular mode without radial zero");
      d.over_u.assign(m.coeffs.begin() + 1, m.coeffs.end());
    }
    d.s = m.alpha_freq;
    d.t = m.theta_freq;
    modes.push_back(std::move(d));
  }
  PanelTable table;
  table.rho_max = rho_max;
  table.translation.resize(panels);
  table.rotation.resize(panels);
  for (int k = 0; k < panels; ++k) {
    const double ra = rho_max * k / panels;
    const double rb = rho_max * (k + 1) / panels;
    const double ua = ra * ra;
    const double ub = rb * rb;
    const double decay = std::exp(-M_PI * ua) * (1.0 + 1e-12);
    double radial = 0.0;
    double angular = 0.0;
    double rotation = 0.0;
    for (const auto& d : modes) {
      radial += 2.0 * rb * decay * enclose(d.slope, ua, ub);
      if (d.t != 0) angular += std::abs(d.t) * rb * decay * enclose(d.over_u, ua, ub);
      if (d.s != 0) rotation += std::abs(d.s) * decay * enclose(d.value, ua, ub);
    }
    table.translation[k] = std::hypot(radial, angular);
    table.rotation[k] = rotation;
  }
  return table;
}

}  // namespace

LipschitzBound lipschitz_estimate(const CoefficientTensor& t, double rho_max) {
  if (!(rho_max > 0.0)) throw InvalidArgument("lipschitz_estimate: rho_max must be positive");
  const auto f = compile<double>(t, boost::math::constants::pi<double>());
  return panel_table(f, rho_max, 64).over(0.0, rho_max);
}

CoverResult cover_region(const CoefficientTensor& t, double scale, int max_depth, int threads) {
  if (scale < 1.0) throw InvalidArgument("cover_region: enlargement must be at least 1");
  constexpr int kRootX = 16;
  constexpr int kRootA = 8;
  constexpr double kRhoCap = 1.5;
  const double alpha_half = M_PI / 5.0;
  const auto f = compile<double>(t, boost::math::constants::pi<double>());
  const PanelTable table = panel_table(f, kRhoCap, 3000);
  double magnitude = 0.0;
  for (const auto& m : f.modes) {
    double w = 1.0;
    for (double c : m.coeffs) {
      magnitude += std::abs(c) * w;
      w *= kRhoCap * kRhoCap;
    }
  }
  const double rounding = 1e3 * kEps * magnitude;

  struct Box {
    double x1, x2, alpha, a, b;
    int depth;
  };
  struct Partial {
    CoverResult r;
    int failed_root = std::numeric_limits<int>::max();
  };
  const int roots = kRootX * kRootX * kRootA;
  std::vector<Partial> parts(std::max(1, threads));
  std::atomic<int> next_root{0};
  std::atomic<bool> stop{false};

  auto worker = [&](int id) {
    Partial& mine = parts[id];
    mine.r.worst_slack = -std::numeric_limits<double>::infinity();
    mine.r.smallest_half_width = std::numeric_limits<double>::infinity();
    std::vector<Box> stack;
    for (int root; !stop && (root = next_root++) < roots;) {
      const int ia = root % kRootA;
      const int ix = (root / kRootA) % kRootX;
      const int iy = root / (kRootA * kRootX);
      const double a = 1.0 / kRootX;
      const double b = alpha_half / kRootA;
      stack.push_back(Box{-1.0 + (2 * ix + 1) * a, -1.0 + (2 * iy + 1) * a, -alpha_half + (2 * ia + 1) * b, a, b, 0});
      while (!stack.empty()) {
        const Box box = stack.back();
        stack.pop_back();
        const double dx = std::max(0.0, std::abs(box.x1) - box.a);
        const double dy = std::max(0.0, std::abs(box.x2) - box.a);
        const double rho_lo = std::hypot(dx, dy);
        if (rho_lo >= 1.0) continue;  // the cylinder identity covers it
        const double rho_hi = std::hypot(std::abs(box.x1) + box.a, std::abs(box.x2) + box.a);
        const double rho = std::hypot(box.x1, box.x2);
        const double theta = std::atan2(box.x2, box.x1);
        const double value = f(rho, theta, box.alpha);
        ++mine.r.evaluations;
        const LipschitzBound l = table.over(rho_lo, rho_hi);
        const double lhs = value + rounding + l.translation * std::sqrt(2.0) * box.a + l.rotation * box.b;
        if (lhs <= 0.0) {
          ++mine.r.boxes;
          if (lhs > mine.r.worst_slack) {
            mine.r.worst_slack = lhs;
            mine.r.worst_center = MotionPoint{rho, theta, box.alpha};
          }
          mine.r.smallest_half_width = std::min(mine.r.smallest_half_width, box.a);
          continue;
        }
        // boxes deep inside the difference body need no sign
        const double depth = minkowski_difference(box.alpha, scale).interior_depth({box.x1, box.x2});
        if (depth > std::sqrt(2.0) * box.a + 0.5 * scale * box.b + 1e-12) continue;
        if (box.depth >= max_depth) {
          std::ostringstream os;
          os << "box at x=(" << format_double(box.x1) << ", " << format_double(box.x2)
             << ") alpha=" << format_double(box.alpha) << " half-width " << format_double(box.a) << ": f(center) = "
             << format_double(value);
          mine.r.failure = os.str();
          mine.failed_root = std::min(mine.failed_root, root);
          stop = true;
          stack.clear();
          break;
        }
        const double a2 = 0.5 * box.a;
        const double b2 = 0.5 * box.b;
        for (int k = 0; k < 8; ++k) {
          stack.push_back(Box{box.x1 + ((k & 1) ? a2 : -a2), box.x2 + ((k & 2) ? a2 : -a2),
                              box.alpha + ((k & 4) ? b2 : -b2), a2, b2, box.depth + 1});
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (int i = 1; i < static_cast<int>(parts.size()); ++i) pool.emplace_back(worker, i);
  worker(0);
  for (auto& th : pool) th.join();

  CoverResult out;
  out.worst_slack = -std::numeric_limits<double>::infinity();
  out.smallest_half_width = std::numeric_limits<double>::infinity();
  int failed_root = std::numeric_limits<int>::max();
  for (const auto& p : parts) {
    out.boxes += p.r.boxes;
    out.evaluations += p.r.evaluations;
    if (p.r.worst_slack > out.worst_slack) {
      out.worst_slack = p.r.worst_slack;
      out.worst_center = p.r.worst_center;
    }
    out.smallest_half_width = std::min(out.smallest_half_width, p.r.smallest_half_width);
    if (p.failed_root < failed_root) {
      failed_root = p.failed_root;
      out.failure = p.r.failure;
    }
  }
  out.ok = out.failure.empty();
  return out;
}

double grid_guard(int alpha_count, int grid_n, double scale) {
  VerificationGrid g{alpha_count, grid_n, scale, 0.0};
  // nearest grid point: x within half a cell diagonal, alpha within half a
  // step; the difference body moves by at most scale * (1/2) per radian
  return g.x_spacing() / std::sqrt(2.0) + 0.25 * scale * g.alpha_spacing() + 1e-12;
}

double covering_radius(const VerificationGrid& grid, const LipschitzBound& l) {
  const double weight = l.translation > 0.0 ? l.rotation / l.translation : 1.0;
  return grid.x_spacing() / std::sqrt(2.0) + weight * 0.5 * grid.alpha_spacing();
}

SignSweep sweep_sign(const CoefficientTensor& t, const VerificationGrid& grid, int precision_bits, int threads) {
  if (grid.scale < 1.0) throw InvalidArgument("sweep_sign: enlargement must be at least 1");
  if (precision_bits < 53) throw InvalidArgument("sweep_sign: precision below 53 bits");
  threads = std::max(1, threads);

  const unsigned saved = Mpfr::default_precision();
  Mpfr::default_precision(digits10_for_bits(precision_bits));
  const Mpfr pi = boost::math::constants::pi<Mpfr>();
  const CompiledFunction<Mpfr> f = compile<Mpfr>(t, pi);

  SignSweep out;
  out.grid = grid;
  out.precision_bits = static_cast<int>(mpfr_get_prec(pi.backend().data()));

  VerificationSampleStream stream(grid);
  std::mutex stream_lock;
  std::uint64_t next_chunk = 0;
  constexpr std::size_t kChunk = 2048;

  struct Best {
    double value = -std::numeric_limits<double>::infinity();
    std::uint64_t order = std::numeric_limits<std::uint64_t>::max();
    MotionPoint where;
    std::uint64_t count = 0;
    std::string failure;
  };
  std::vector<Best> best(threads);

  auto worker = [&](int id) {
    Best& mine = best[id];
    std::vector<SamplePoint> chunk;
    std::unordered_map<double, ConvexPolygon> regions;
    try {
      for (;;) {
        std::uint64_t index;
        {
          std::lock_guard<std::mutex> g(stream_lock);
          if (!stream.next_chunk(chunk, kChunk)) return;
          index = next_chunk++;
        }
        for (std::size_t i = 0; i < chunk.size(); ++i) {
          const SamplePoint& sp = chunk[i];
          auto it = regions.find(sp.alpha);
          if (it == regions.end()) it = regions.emplace(sp.alpha, minkowski_difference(sp.alpha, grid.scale)).first;
          if (sp.rho > 1.0 + grid.guard + 1e-12 || it->second.interior_depth(sp.position()) > grid.guard + 1e-12) {
            throw NumericalFailure("sweep_sign: streamed point outside the verification region");
          }
          const double v = static_cast<double>(f(Mpfr(sp.rho), Mpfr(sp.theta), Mpfr(sp.alpha)));
          const std::uint64_t order = index * kChunk + i;
          if (v > mine.value || (v == mine.value && order < mine.order)) {
            mine.value = v;
            mine.order = order;
            mine.where = sp.motion_point();
          }
          ++mine.count;
        }
      }
    } catch (const std::exception& e) {
      mine.failure = e.what();
    }
  };

  std::vector<std::thread> pool;
  for (int i = 1; i < threads; ++i) pool.emplace_back(worker, i);
  worker(0);
  for (auto& th : pool) th.join();
  Mpfr::default_precision(saved);

  Best total;
  for (const auto& b : best) {
    if (!b.failure.empty()) throw NumericalFailure(b.failure);
    total.count += b.count;
    if (b.value > total.value || (b.value == total.value && b.order < total.order)) {
      total.value = b.value;
      total.order = b.order;
      total.where = b.where;
    }
  }
  out.sign_margin = total.value;
  out.argmax = total.where;
  out.points = total.count;
  return out;
}

VerificationReport verify_nonpositivity(const CoefficientTensor& t, double enlargement, int alpha_count, int grid_n,
                                        int precision_bits, int threads) {
  if (enlargement < 1.0) throw InvalidArgument("verify_nonpositivity: enlargement must be at least 1");
  VerificationGrid grid{alpha_count, grid_n, enlargement, grid_guard(alpha_count, grid_n, enlargement)};
  const LipschitzBound l = lipschitz_estimate(t, 1.0 + grid.guard);
  const SignSweep sweep = sweep_sign(t, grid, precision_bits, threads);

  VerificationReport r;
  r.sign_margin = sweep.sign_margin;
  r.sign_argmax = sweep.argmax;
  r.points = sweep.points;
  r.precision_bits = sweep.precision_bits;
  r.lipschitz_bound = l.translation;
  r.rotation_lipschitz = l.rotation;
  r.covering_radius = covering_radius(grid, l);
  r.enlargement = enlargement;
  r.alpha_count = alpha_count;
  r.grid_n = grid_n;
  r.tensor_hash = tensor_hash(t);
  r.lambda = lambda_of(t);
  if (r.lambda > 0.0) {
    r.z_value = value_at_identity(t) / r.lambda;
    r.bound = final_bound(t, enlargement);
  }
  r.sign_ok = r.sign_margin + r.lipschitz_bound * r.covering_radius <= 0.0;
  r.certified = r.sign_ok;
  return r;
}

void attach_cover(VerificationReport& r, const CoefficientTensor& t, int threads) {
  const CoverResult c = cover_region(t, r.enlargement, 18, threads);
  r.cover_run = true;
  r.cover_ok = c.ok;
  r.cover_boxes = c.boxes;
  r.cover_worst_slack = c.worst_slack;
  r.cover_smallest_half_width = c.smallest_half_width;
  r.cover_failure = c.failure;
}

void finalize(VerificationReport& r) {
  r.margin_ok = r.min_block_eigenvalue > r.safety_factor * r.max_constraint_residual;
  r.sign_ok = r.sign_margin + r.lipschitz_bound * r.covering_radius <= 0.0;
  r.certified = r.margin_ok && (r.sign_ok || (r.cover_run && r.cover_ok)) && r.lambda > 0.0;
}

double final_bound(const CoefficientTensor& t, double enlargement) {
  if (enlargement < 1.0) throw InvalidArgument("final_bound: enlargement must be at least 1");
  const double lambda = lambda_of(t);
  if (!(lambda > 0.0)) throw InvalidArgument("final_bound: lambda = " + format_double(lambda) + " is not positive");
  return value_at_identity(t) / lambda * pentagon(enlargement).area();
}

// ---------------------------------------------------------------------------

std::string VerificationReport::to_text() const {
  std::ostringstream os;
  auto line = [&](const char* key, const std::string& v) { os << key << ": " << v << '\n'; };
  auto num = [&](const char* key, double v) { line(key, format_double(v)); };
  line("format", "pentapack-report 1");
  line("tensor_hash", tensor_hash);
  num("enlargement", enlargement);
  line("sample", "alpha_count=" + std::to_string(alpha_count) + " grid_n=" + std::to_string(grid_n));
  line("points", std::to_string(points));
  line("precision_bits", std::to_string(precision_bits));
  num("min_block_eigenvalue", min_block_eigenvalue);
  num("max_constraint_residual", max_constraint_residual);
  num("cylinder_residual", cylinder_residual);
  num("safety_factor", safety_factor);
  num("sign_margin", sign_margin);
  line("sign_argmax", format_double(sign_argmax.rho) + ' ' + format_double(sign_argmax.theta) + ' ' +
                          format_double(sign_argmax.alpha));
  num("lipschitz_bound", lipschitz_bound);
  num("rotation_lipschitz", rotation_lipschitz);
  num("covering_radius", covering_radius);
  num("sign_slack", sign_margin + lipschitz_bound * covering_radius);
  line("lipschitz_method", lipschitz_method);
  line("cover_run", cover_run ? "true" : "false");
  line("cover_ok", cover_ok ? "true" : "false");
  line("cover_boxes", std::to_string(cover_boxes));
  num("cover_worst_slack", cover_worst_slack);
  num("cover_smallest_half_width", cover_smallest_half_width);
  if (!cover_failure.empty()) line("cover_failure", cover_failure);
  num("lambda", lambda);
  num("value_at_identity_over_lambda", z_value);
  line("margin_ok", margin_ok ? "true" : "false");
  line("sign_ok", sign_ok ? "true" : "false");
  line("certified", certified ? "true" : "false");
  num("bound", bound);
  return os.str();
}

std::string VerificationReport::to_json() const {
  nlohmann::ordered_json j;
  j["format"] = "pentapack-report";
  j["version"] = 1;
  j["tensor_hash"] = tensor_hash;
  j["enlargement"] = enlargement;
  j["sample"] = {{"alpha_count", alpha_count}, {"grid_n", grid_n}, {"points", points}};
  j["precision_bits"] = precision_bits;
  j["min_block_eigenvalue"] = min_block_eigenvalue;
  j["max_constraint_residual"] = max_constraint_residual;
  j["cylinder_residual"] = cylinder_residual;
  j["safety_factor"] = safety_factor;
  j["sign_margin"] = sign_margin;
  j["sign_argmax"] = {{"rho", sign_argmax.rho}, {"theta", sign_argmax.theta}, {"alpha", sign_argmax.alpha}};
  j["lipschitz_bound"] = lipschitz_bound;
  j["rotation_lipschitz"] = rotation_lipschitz;
  j["covering_radius"] = covering_radius;
  j["sign_slack"] = sign_margin + lipschitz_bound * covering_radius;
  j["lipschitz_method"] = lipschitz_method;
  j["cover"] = {{"run", cover_run},
                {"ok", cover_ok},
                {"boxes", cover_boxes},
                {"worst_slack", cover_worst_slack},
                {"smallest_half_width", cover_smallest_half_width},
                {"failure", cover_failure}};
  j["lambda"] = lambda;
  j["value_at_identity_over_lambda"] = z_value;
  j["margin_ok"] = margin_ok;
  j["sign_ok"] = sign_ok;
  j["certified"] = certified;
  j["bound"] = bound;
  return j.dump(2) + "\n";
}

VerificationReport VerificationReport::from_json(const std::string& text) {
  VerificationReport r;
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format") != "pentapack-report" || j.at("version") != 1) throw MalformedFile("report: unknown format");
    // infinities are stored as null
    auto num = [](const nlohmann::json& v) {
      return v.is_null() ? -std::numeric_limits<double>::infinity() : v.get<double>();
    };
    r.tensor_hash = j.at("tensor_hash");
    r.enlargement = j.at("enlargement");
    r.alpha_count = j.at("sample").at("alpha_count");
    r.grid_n = j.at("sample").at("grid_n");
    r.points = j.at("sample").at("points");
    r.precision_bits = j.at("precision_bits");
    r.min_block_eigenvalue = num(j.at("min_block_eigenvalue"));
    r.max_constraint_residual = num(j.at("max_constraint_residual"));
    r.cylinder_residual = num(j.at("cylinder_residual"));
    r.safety_factor = j.at("safety_factor");
    r.sign_margin = num(j.at("sign_margin"));
    r.sign_argmax = MotionPoint{j.at("sign_argmax").at("rho"), j.at("sign_argmax").at("theta"),
                                j.at("sign_argmax").at("alpha")};
    r.lipschitz_bound = j.at("lipschitz_bound");
    r.rotation_lipschitz = j.at("rotation_lipschitz");
    r.covering_radius = j.at("covering_radius");
    r.lipschitz_method = j.at("lipschitz_method");
    const auto& c = j.at("cover");
    r.cover_run = c.at("run");
    r.cover_ok = c.at("ok");
    r.cover_boxes = c.at("boxes");
    r.cover_worst_slack = num(c.at("worst_slack"));
    r.cover_smallest_half_width = num(c.at("smallest_half_width"));
    r.cover_failure = c.at("failure");
    r.lambda = j.at("lambda");
    r.z_value = j.at("value_at_identity_over_lambda");
    r.margin_ok = j.at("margin_ok");
    r.sign_ok = j.at("sign_ok");
    r.certified = j.at("certified");
    r.bound = j.at("bound");
  } catch (const nlohmann::json::exception& e) {
    throw MalformedFile(std::string("report: ") + e.what());
  }
  return r;
}

}  // namespace pentapack
