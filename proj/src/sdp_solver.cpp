#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <map>

#include "pentapack/error.hpp"
#include "pentapack/sdp.hpp"

namespace pentapack {

void canonicalize(SparseSymmetric& a) {
  for (auto& e : a) {
    if (e.row > e.col) std::swap(e.row, e.col);
  }
  std::sort(a.begin(), a.end(), [](const MatrixEntry& l, const MatrixEntry& r) {
    return std::tie(l.block, l.row, l.col) < std::tie(r.block, r.row, r.col);
  });
  SparseSymmetric out;
  out.reserve(a.size());
  for (const auto& e : a) {
    if (!out.empty() && out.back().block == e.block && out.back().row == e.row && out.back().col == e.col) {
      out.back().value += e.value;
    } else {
      out.push_back(e);
    }
  }
  std::erase_if(out, [](const MatrixEntry& e) { return e.value == 0.0; });
  a = std::move(out);
}

BlockMatrix BlockMatrix::zeros(const std::vector<BlockSpec>& specs) {
  BlockMatrix m;
  for (const auto& s : specs) {
    m.blocks.push_back(s.kind == BlockKind::psd ? Eigen::MatrixXd::Zero(s.dim, s.dim)
                                                : Eigen::MatrixXd::Zero(s.dim, 1));
  }
  return m;
}

BlockMatrix BlockMatrix::identity(const std::vector<BlockSpec>& specs, double scale) {
  BlockMatrix m;
  for (const auto& s : specs) {
    m.blocks.push_back(s.kind == BlockKind::psd ? Eigen::MatrixXd(scale * Eigen::MatrixXd::Identity(s.dim, s.dim))
                                                : Eigen::MatrixXd::Constant(s.dim, 1, scale));
  }
  return m;
}

double inner(const SparseSymmetric& a, const BlockMatrix& x) {
  double acc = 0.0;
  for (const auto& e : a) {
    const Eigen::MatrixXd& b = x.blocks[e.block];
    if (b.cols() == 1) {
      if (e.row == e.col) acc += e.value * b(e.row, 0);
    } else {
      acc += (e.row == e.col ? 1.0 : 2.0) * e.value * b(e.row, e.col);
    }
  }
  return acc;
}

int SdpProblem::block_index(const std::string& label) const {
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].label == label) return static_cast<int>(i);
  }
  return -1;
}

StandardSdp to_standard(const SdpProblem& p) {
  StandardSdp s;
  s.blocks = p.blocks;
  s.objective = p.objective;
  canonicalize(s.objective);
  for (const auto& c : p.equalities) {
    s.constraints.push_back(c.coeffs);
    canonicalize(s.constraints.back());
    s.rhs.push_back(c.rhs);
  }
  if (!p.inequalities.empty()) {
    const int slack = static_cast<int>(s.blocks.size());
    s.blocks.push_back(BlockSpec{"slack", static_cast<int>(p.inequalities.size()), BlockKind::diagonal});
    for (std::size_t j = 0; j < p.inequalities.size(); ++j) {
      SparseSymmetric a = p.inequalities[j].coeffs;
      a.push_back(MatrixEntry{slack, static_cast<int>(j), static_cast<int>(j), 1.0});
      canonicalize(a);
      s.constraints.push_back(std::move(a));
      s.rhs.push_back(p.inequalities[j].rhs);
    }
  }
  return s;
}

std::string to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::optimal: return "optimal";
    case SolverStatus::near_optimal: return "near-optimal";
    case SolverStatus::infeasible: return "infeasible";
    case SolverStatus::numerical_failure: return "numerical-failure";
  }
  return "unknown";
}

const Eigen::MatrixXd& SdpSolution::block(const std::string& label) const {
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].label == label) return x.blocks[i];
  }
  throw InvalidArgument("SdpSolution: no block labelled " + label);
}

Eigen::VectorXd primal_residual(const StandardSdp& p, const BlockMatrix& x) {
  Eigen::VectorXd r(p.constraints.size());
  for (std::size_t i = 0; i < p.constraints.size(); ++i) r[i] = p.rhs[i] - inner(p.constraints[i], x);
  return r;
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct BlockTerm {
  int constraint;
  std::vector<MatrixEntry> entries;
};

// Constraint data regrouped by block.
struct Layout {
  std::vector<std::vector<BlockTerm>> terms;  // [block] -> constraints touching it
  int m = 0;
};

Layout make_layout(const StandardSdp& p) {
  Layout l;
  l.m = static_cast<int>(p.constraints.size());
  l.terms.resize(p.blocks.size());
  for (int i = 0; i < l.m; ++i) {
    std::map<int, std::vector<MatrixEntry>> grouped;
    for (const auto& e : p.constraints[i]) {
      if (e.block < 0 || e.block >= static_cast<int>(p.blocks.size())) {
        throw DimensionMismatch("solve: constraint references a missing block");
      }
      const int dim = p.blocks[e.block].dim;
      if (e.row < 0 || e.col < 0 || e.row >= dim || e.col >= dim) {
        throw DimensionMismatch("solve: constraint entry outside its block");
      }
      if (p.blocks[e.block].kind == BlockKind::diagonal && e.row != e.col) {
        throw DimensionMismatch("solve: off-diagonal entry in a diagonal block");
      }
      grouped[e.block].push_back(e);
    }
    for (auto& [b, es] : grouped) l.terms[b].push_back(BlockTerm{i, std::move(es)});
  }
  return l;
}

double block_inner(const std::vector<MatrixEntry>& es, const MatrixXd& b) {
  double acc = 0.0;
  if (b.cols() == 1) {
    for (const auto& e : es) acc += e.value * b(e.row, 0);
  } else {
    for (const auto& e : es) acc += (e.row == e.col ? 1.0 : 2.0) * e.value * b(e.row, e.col);
  }
  return acc;
}

void add_entries(MatrixXd& b, const std::vector<MatrixEntry>& es, double scale) {
  if (b.cols() == 1) {
    for (const auto& e : es) b(e.row, 0) += scale * e.value;
  } else {
    for (const auto& e : es) {
      b(e.row, e.col) += scale * e.value;
      if (e.row != e.col) b(e.col, e.row) += scale * e.value;
    }
  }
}

VectorXd apply_a(const Layout& l, const BlockMatrix& x) {
  VectorXd out = VectorXd::Zero(l.m);
  for (std::size_t b = 0; b < l.terms.size(); ++b) {
    for (const auto& t : l.terms[b]) out[t.constraint] += block_inner(t.entries, x.blocks[b]);
  }
  return out;
}

BlockMatrix apply_at(const Layout& l, const std::vector<BlockSpec>& specs, const VectorXd& y) {
  BlockMatrix out = BlockMatrix::zeros(specs);
  for (std::size_t b = 0; b < l.terms.size(); ++b) {
    for (const auto& t : l.terms[b]) add_entries(out.blocks[b], t.entries, y[t.constraint]);
  }
  return out;
}

BlockMatrix sparse_to_dense(const SparseSymmetric& a, const std::vector<BlockSpec>& specs) {
  BlockMatrix out = BlockMatrix::zeros(specs);
  for (const auto& e : a) {
    MatrixXd& b = out.blocks[e.block];
    if (b.cols() == 1) {
      b(e.row, 0) += e.value;
    } else {
      b(e.row, e.col) += e.value;
      if (e.row != e.col) b(e.col, e.row) += e.value;
    }
  }
  return out;
}

double dot(const BlockMatrix& a, const BlockMatrix& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.blocks.size(); ++i) acc += a.blocks[i].cwiseProduct(b.blocks[i]).sum();
  return acc;
}

double frob(const BlockMatrix& a) { return std::sqrt(dot(a, a)); }

BlockMatrix axpy(const BlockMatrix& x, double alpha, const BlockMatrix& d) {
  BlockMatrix out = x;
  for (std::size_t i = 0; i < out.blocks.size(); ++i) out.blocks[i] += alpha * d.blocks[i];
  return out;
}

// NT scaling data of one block: W = G G^T, G^{-1} X G^{-T} = G^T Z G = diag(lambda).
struct Scaling {
  MatrixXd g;
  MatrixXd g_inv;
  MatrixXd w;
  VectorXd lambda;
};

bool nt_scaling(const MatrixXd& x, const MatrixXd& z, Scaling& s) {
  if (x.cols() == 1) {
    if ((x.array() <= 0.0).any() || (z.array() <= 0.0).any()) return false;
    s.w = (x.array() / z.array()).sqrt().matrix();
    s.g = s.w.array().sqrt().matrix();
    s.g_inv = s.g.cwiseInverse();
    s.lambda = (x.array() * z.array()).sqrt().matrix();
    return true;
  }
  Eigen::LLT<MatrixXd> lx(x), lz(z);
  if (lx.info() != Eigen::Success || lz.info() != Eigen::Success) return false;
  const MatrixXd lxm = lx.matrixL();
  const MatrixXd lzm = lz.matrixL();
  Eigen::JacobiSVD<MatrixXd> svd(lzm.transpose() * lxm, Eigen::ComputeFullU | Eigen::ComputeFullV);
  s.lambda = svd.singularValues();
  if (!(s.lambda.minCoeff() > 0.0)) return false;
  const VectorXd isq = s.lambda.array().rsqrt().matrix();
  s.g = lxm * svd.matrixV() * isq.asDiagonal();
  // G^{-1} = S^{1/2} V^T Lx^{-1}
  const MatrixXd lx_inv = lxm.triangularView<Eigen::Lower>().solve(MatrixXd::Identity(x.rows(), x.rows()));
  s.g_inv = s.lambda.array().sqrt().matrix().asDiagonal() * svd.matrixV().transpose() * lx_inv;
  s.w = s.g * s.g.transpose();
  s.w = 0.5 * (s.w + s.w.transpose()).eval();
  return true;
}

// Largest step t <= 1e30 with x + t*dx psd, x positive definite.
double max_step(const MatrixXd& x, const MatrixXd& dx) {
  double lmin;
  if (x.cols() == 1) {
    lmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < x.rows(); ++i) lmin = std::min(lmin, dx(i, 0) / x(i, 0));
  } else {
    Eigen::LLT<MatrixXd> l(x);
    const MatrixXd lm = l.matrixL();
    MatrixXd t = lm.triangularView<Eigen::Lower>().solve(dx);
    t = lm.triangularView<Eigen::Lower>().solve(t.transpose()).transpose();
    t = 0.5 * (t + t.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(t, Eigen::EigenvaluesOnly);
    lmin = es.eigenvalues()(0);
  }
  if (lmin >= 0.0) return 1e30;
  return -1.0 / lmin;
}

double max_step(const BlockMatrix& x, const BlockMatrix& dx) {
  double t = 1e30;
  for (std::size_t i = 0; i < x.blocks.size(); ++i) {
    if (x.blocks[i].size() == 0) continue;
    t = std::min(t, max_step(x.blocks[i], dx.blocks[i]));
  }
  return t;
}

// Schur complement M_ij = <A_i, W A_j W>.
MatrixXd schur(const Layout& l, const std::vector<Scaling>& sc) {
  MatrixXd m = MatrixXd::Zero(l.m, l.m);
  for (std::size_t b = 0; b < l.terms.size(); ++b) {
    const auto& terms = l.terms[b];
    if (terms.empty()) continue;
    const MatrixXd& w = sc[b].w;
    if (w.cols() == 1) {
      // diagonal block: sum_k a_ik a_jk w_k
      std::map<int, std::vector<std::pair<int, double>>> by_index;
      for (const auto& t : terms) {
        for (const auto& e : t.entries) by_index[e.row].push_back({t.constraint, e.value});
      }
      for (const auto& [k, list] : by_index) {
        const double wk = w(k, 0) * w(k, 0);
        for (const auto& [i, ai] : list) {
          for (const auto& [j, aj] : list) {
            if (j <= i) m(i, j) += ai * aj * wk;
          }
        }
      }
      continue;
    }
    const int n = static_cast<int>(w.rows());
    MatrixXd t(n, n);
    for (std::size_t jj = 0; jj < terms.size(); ++jj) {
      t.setZero();
      for (const auto& e : terms[jj].entries) {
        if (e.row == e.col) {
          t.noalias() += e.value * w.col(e.row) * w.col(e.row).transpose();
        } else {
          t.noalias() += e.value * (w.col(e.row) * w.col(e.col).transpose() + w.col(e.col) * w.col(e.row).transpose());
        }
      }
      const int j = terms[jj].constraint;
      for (std::size_t ii = jj; ii < terms.size(); ++ii) {
        const int i = terms[ii].constraint;
        const double v = block_inner(terms[ii].entries, t);
        if (i >= j) {
          m(i, j) += v;
        } else {
          m(j, i) += v;
        }
      }
    }
  }
  return m.selfadjointView<Eigen::Lower>();
}

}  // namespace

SdpSolution solve_core(const StandardSdp& p, const SolverOptions& opts) {
  const Layout layout = make_layout(p);
  const int m = layout.m;
  const auto& specs = p.blocks;
  const std::size_t nb = specs.size();
  if (static_cast<int>(p.rhs.size()) != m) throw DimensionMismatch("solve: rhs size mismatch");

  VectorXd b(m);
  for (int i = 0; i < m; ++i) b[i] = p.rhs[i];
  const BlockMatrix c = sparse_to_dense(p.objective, specs);

  double total_dim = 0.0;
  for (const auto& s : specs) total_dim += s.dim;

  // initial point (SDPT3-style scale heuristics)
  std::vector<double> a_norm(m, 0.0);
  for (int i = 0; i < m; ++i) {
    for (const auto& e : p.constraints[i]) a_norm[i] += (e.row == e.col ? 1.0 : 2.0) * e.value * e.value;
    a_norm[i] = std::sqrt(a_norm[i]);
  }
  BlockMatrix x = BlockMatrix::zeros(specs);
  BlockMatrix z = BlockMatrix::zeros(specs);
  for (std::size_t k = 0; k < nb; ++k) {
    const double dim = specs[k].dim;
    double xi = std::max(10.0, std::sqrt(dim));
    double eta = std::max(10.0, std::sqrt(dim));
    for (const auto& t : layout.terms[k]) {
      double nrm = 0.0;
      for (const auto& e : t.entries) nrm += (e.row == e.col ? 1.0 : 2.0) * e.value * e.value;
      nrm = std::sqrt(nrm);
      xi = std::max(xi, dim * (1.0 + std::abs(b[t.constraint])) / (1.0 + nrm));
      eta = std::max(eta, nrm);
    }
    eta = std::max(eta, c.blocks[k].norm());
    x.blocks[k] = specs[k].kind == BlockKind::psd ? MatrixXd(xi * MatrixXd::Identity(specs[k].dim, specs[k].dim))
                                                  : MatrixXd::Constant(specs[k].dim, 1, xi);
    z.blocks[k] = specs[k].kind == BlockKind::psd ? MatrixXd(eta * MatrixXd::Identity(specs[k].dim, specs[k].dim))
                                                  : MatrixXd::Constant(specs[k].dim, 1, eta);
  }
  VectorXd y = VectorXd::Zero(m);

  const double b_norm = b.size() ? b.cwiseAbs().maxCoeff() : 0.0;
  const double c_norm = frob(c);

  SdpSolution sol;
  sol.blocks = specs;
  sol.status = SolverStatus::numerical_failure;

  auto finish = [&](SolverStatus st, int iter) {
    if (st == SolverStatus::numerical_failure && sol.relative_gap <= 1e3 * opts.gap_tol &&
        sol.primal_infeasibility <= 1e3 * opts.feas_tol && sol.dual_infeasibility <= 1e3 * opts.feas_tol) {
      st = SolverStatus::near_optimal;
    }
    sol.x = x;
    sol.z = z;
    sol.y = y;
    sol.iterations = iter;
    sol.status = st;
    return sol;
  };

  std::vector<Scaling> sc(nb);
  for (int iter = 0; iter <= opts.max_iterations; ++iter) {
    const VectorXd rp = b - apply_a(layout, x);
    BlockMatrix rd = c;
    {
      const BlockMatrix aty = apply_at(layout, specs, y);
      for (std::size_t k = 0; k < nb; ++k) rd.blocks[k] -= aty.blocks[k] + z.blocks[k];
    }
    const double xz = dot(x, z);
    const double mu = xz / total_dim;
    const double pobj = dot(c, x);
    const double dobj = b.dot(y);
    sol.primal_objective = pobj;
    sol.dual_objective = dobj;
    sol.relative_gap = std::max(std::abs(pobj - dobj), std::abs(xz)) / (1.0 + std::abs(pobj) + std::abs(dobj));
    sol.primal_infeasibility = (m ? rp.cwiseAbs().maxCoeff() : 0.0) / (1.0 + b_norm);
    sol.dual_infeasibility = frob(rd) / (1.0 + c_norm);
    sol.gap_history.push_back(sol.relative_gap);
    if (opts.verbose) {
      std::cerr << "iter " << iter << " pobj " << pobj << " dobj " << dobj << " gap " << sol.relative_gap
                << " pinf " << sol.primal_infeasibility << " dinf " << sol.dual_infeasibility << '\n';
    }
    if (sol.relative_gap <= opts.gap_tol && sol.primal_infeasibility <= opts.feas_tol &&
        sol.dual_infeasibility <= opts.feas_tol) {
      return finish(SolverStatus::optimal, iter);
    }
    if (frob(x) > opts.divergence_bound || y.norm() > opts.divergence_bound) {
      return finish(SolverStatus::infeasible, iter);
    }
    if (iter == opts.max_iterations) break;

    for (std::size_t k = 0; k < nb; ++k) {
      if (specs[k].dim == 0) continue;
      if (!nt_scaling(x.blocks[k], z.blocks[k], sc[k])) return finish(SolverStatus::numerical_failure, iter);
    }
    const MatrixXd schur_m = schur(layout, sc);
    Eigen::LLT<MatrixXd> chol(schur_m);
    Eigen::LDLT<MatrixXd> ldlt;
    bool use_ldlt = false;
    if (chol.info() != Eigen::Success) {
      ldlt.compute(schur_m);
      if (ldlt.info() != Eigen::Success) return finish(SolverStatus::numerical_failure, iter);
      use_ldlt = true;
    }
    auto schur_solve = [&](const VectorXd& rhs) -> VectorXd {
      return use_ldlt ? VectorXd(ldlt.solve(rhs)) : VectorXd(chol.solve(rhs));
    };

    // W * Rd * W, reused by both solves
    BlockMatrix wrw = rd;
    for (std::size_t k = 0; k < nb; ++k) {
      if (specs[k].dim == 0) continue;
      if (specs[k].kind == BlockKind::psd) {
        wrw.blocks[k] = sc[k].w * rd.blocks[k] * sc[k].w;
      } else {
        wrw.blocks[k] = sc[k].w.cwiseProduct(sc[k].w).cwiseProduct(rd.blocks[k]);
      }
    }
    const VectorXd a_wrw = apply_a(layout, wrw);

    // Direction for a scaled complementarity right-hand side rc (per block).
    auto direction = [&](const std::vector<MatrixXd>& rc, BlockMatrix& dx, VectorXd& dy, BlockMatrix& dz) {
      BlockMatrix gvg = BlockMatrix::zeros(specs);
      for (std::size_t k = 0; k < nb; ++k) {
        if (specs[k].dim == 0) continue;
        const VectorXd& lam = sc[k].lambda;
        if (specs[k].kind == BlockKind::psd) {
          MatrixXd v = rc[k];
          for (int i = 0; i < v.rows(); ++i)
            for (int j = 0; j < v.cols(); ++j) v(i, j) *= 2.0 / (lam[i] + lam[j]);
          gvg.blocks[k] = sc[k].g * v * sc[k].g.transpose();
        } else {
          // g^2 * rc / lambda
          gvg.blocks[k] = (sc[k].g.array().square() * rc[k].array() / lam.array()).matrix();
        }
      }
      dy = schur_solve(rp - apply_a(layout, gvg) + a_wrw);
      dz = rd;
      const BlockMatrix aty = apply_at(layout, specs, dy);
      dx = gvg;
      for (std::size_t k = 0; k < nb; ++k) {
        dz.blocks[k] -= aty.blocks[k];
        if (specs[k].kind == BlockKind::psd) {
          dx.blocks[k] -= sc[k].w * dz.blocks[k] * sc[k].w;
          dx.blocks[k] = 0.5 * (dx.blocks[k] + dx.blocks[k].transpose()).eval();
        } else {
          dx.blocks[k] -= sc[k].w.cwiseProduct(sc[k].w).cwiseProduct(dz.blocks[k]);
        }
      }
    };

    // predictor
    std::vector<MatrixXd> rc(nb);
    for (std::size_t k = 0; k < nb; ++k) {
      if (specs[k].dim == 0) continue;
      const VectorXd& lam = sc[k].lambda;
      if (specs[k].kind == BlockKind::psd) {
        rc[k] = MatrixXd((-lam.array().square()).matrix().asDiagonal());
      } else {
        rc[k] = -lam.array().square().matrix();
      }
    }
    BlockMatrix dx, dz;
    VectorXd dy;
    direction(rc, dx, dy, dz);
    const double ap_aff = std::min(1.0, max_step(x, dx));
    const double ad_aff = std::min(1.0, max_step(z, dz));
    const double mu_aff = dot(axpy(x, ap_aff, dx), axpy(z, ad_aff, dz)) / total_dim;
    const double ratio = std::clamp(mu_aff / mu, 0.0, 1.0);
    const double expon = std::max(1.0, 3.0 * std::pow(std::min(ap_aff, ad_aff), 2));
    const double sigma = std::clamp(std::pow(ratio, expon), 0.0, 1.0);

    // corrector: rc = sigma mu I - Lambda^2 - Hsym(dX~ dZ~)
    for (std::size_t k = 0; k < nb; ++k) {
      if (specs[k].dim == 0) continue;
      const VectorXd& lam = sc[k].lambda;
      if (specs[k].kind == BlockKind::psd) {
        const MatrixXd dxs = sc[k].g_inv * dx.blocks[k] * sc[k].g_inv.transpose();
        const MatrixXd dzs = sc[k].g.transpose() * dz.blocks[k] * sc[k].g;
        const MatrixXd prod = dxs * dzs;
        rc[k] = -0.5 * (prod + prod.transpose());
        rc[k].diagonal().array() += sigma * mu - lam.array().square();
      } else {
        const VectorXd g2 = sc[k].g.array().square().matrix();
        const VectorXd dxs = dx.blocks[k].cwiseQuotient(g2);
        const VectorXd dzs = dz.blocks[k].cwiseProduct(g2);
        rc[k] = (sigma * mu - lam.array().square() - dxs.array() * dzs.array()).matrix();
      }
    }
    direction(rc, dx, dy, dz);
    const double ap = std::min(1.0, opts.step_fraction * max_step(x, dx));
    const double ad = std::min(1.0, opts.step_fraction * max_step(z, dz));
    if (!(ap > 1e-14) || !(ad > 1e-14)) return finish(SolverStatus::numerical_failure, iter);
    x = axpy(x, ap, dx);
    z = axpy(z, ad, dz);
    y += ad * dy;
    for (std::size_t k = 0; k < nb; ++k) {
      if (specs[k].kind == BlockKind::psd) {
        x.blocks[k] = 0.5 * (x.blocks[k] + x.blocks[k].transpose()).eval();
        z.blocks[k] = 0.5 * (z.blocks[k] + z.blocks[k].transpose()).eval();
      }
    }
  }
  return finish(SolverStatus::numerical_failure, opts.max_iterations);
}

SdpSolution solve(const StandardSdp& p, const SolverOptions& opts) {
  // Row equilibration: each constraint is scaled to unit Frobenius norm and
  // the multipliers are mapped back afterwards.
  StandardSdp scaled = p;
  std::vector<double> scale(p.constraints.size(), 1.0);
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    double nrm = 0.0;
    for (const auto& e : p.constraints[i]) nrm += (e.row == e.col ? 1.0 : 2.0) * e.value * e.value;
    nrm = std::sqrt(nrm);
    if (nrm > 0.0) scale[i] = 1.0 / nrm;
    for (auto& e : scaled.constraints[i]) e.value *= scale[i];
    scaled.rhs[i] *= scale[i];
  }
  SdpSolution sol = solve_core(scaled, opts);
  for (std::size_t i = 0; i < scale.size(); ++i) sol.y[i] *= scale[i];
  const VectorXd r = primal_residual(p, sol.x);
  double bmax = 0.0;
  for (double v : p.rhs) bmax = std::max(bmax, std::abs(v));
  sol.primal_infeasibility = r.size() ? r.cwiseAbs().maxCoeff() / (1.0 + bmax) : 0.0;
  return sol;
}

SdpSolution solve(const SdpProblem& p, const SolverOptions& opts) { return solve(to_standard(p), opts); }

}  // namespace pentapack
