#pragma once

// Shared builders for tests that need SOS problems and PSD solutions.

#include <Eigen/Dense>
#include <stdexcept>

#include "oracles.hpp"
#include "pentapack/sos.hpp"

namespace fixture {

inline Eigen::MatrixXd random_psd(int n, int rank = -1) {
  if (rank < 0) rank = n;
  Eigen::MatrixXd g(n, rank);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < rank; ++j) g(i, j) = oracle::uniform(-1.0, 1.0);
  return g * g.transpose();
}

/// Random PSD blocks for every block of the problem. Q blocks are made
/// invariant under r -> -r so that the recovered tensor is symmetric
/// without averaging, and the transform stays PSD.
inline pentapack::SdpSolution random_psd_solution(const pentapack::ProblemA& problem) {
  pentapack::SdpSolution sol;
  sol.blocks = problem.sdp.blocks;
  const int half = problem.params.half_degree();
  for (std::size_t b = 0; b < sol.blocks.size(); ++b) {
    const auto& spec = sol.blocks[b];
    if (spec.kind == pentapack::BlockKind::diagonal) {
      Eigen::MatrixXd d(spec.dim, 1);
      for (int i = 0; i < spec.dim; ++i) d(i, 0) = oracle::uniform(0.0, 1.0);
      sol.x.blocks.push_back(d);
      continue;
    }
    Eigen::MatrixXd q = random_psd(spec.dim);
    if (b < problem.roles.size() && problem.roles[b].family == 'Q') {
      const auto idx = pentapack::index_set_I(problem.params.N, problem.roles[b].j);
      const int m = static_cast<int>(idx.size());
      Eigen::MatrixXd perm = Eigen::MatrixXd::Zero(spec.dim, spec.dim);
      for (int p = 0; p < m; ++p) {
        int mirror = -1;
        for (int o = 0; o < m; ++o)
          if (idx[o] == -idx[p]) mirror = o;
        if (mirror < 0) throw std::logic_error("index set is not symmetric");
        for (int l = 0; l <= half; ++l) perm(p * (half + 1) + l, mirror * (half + 1) + l) = 1.0;
      }
      // keep only r == r' couplings; pinching preserves PSD and avoids entries the tensor forbids
      for (int p = 0; p < m; ++p)
        for (int o = 0; o < m; ++o)
          if (o != p) q.block(p * (half + 1), o * (half + 1), half + 1, half + 1).setZero();
      q = 0.5 * (q + perm * q * perm.transpose());
    }
    sol.x.blocks.push_back(q);
  }
  sol.z = sol.x;
  return sol;
}

/// Coefficients of mu^{-1} L_n(2 pi x^2) in powers of x^2, from the explicit sum.
inline std::vector<double> normalized_laguerre(int n) {
  std::vector<double> c(n + 1);
  double mu = 0.0;
  for (int j = 0; j <= n; ++j) {
    c[j] = (j % 2 ? -1.0 : 1.0) * std::tgamma(n + 1.0) / (std::tgamma(j + 1.0) * std::tgamma(n - j + 1.0)) *
           std::pow(2.0 * M_PI, j) / std::tgamma(j + 1.0);
    mu = std::max(mu, std::abs(c[j]));
  }
  for (double& v : c) v /= mu;
  return c;
}

}  // namespace fixture
