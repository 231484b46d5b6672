#pragma once

// Block-diagonal semidefinite programs, the embedded primal-dual
// interior-point solver, and SDPA sparse-format exchange.

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

namespace pentapack {

enum class BlockKind { psd, diagonal };

struct BlockSpec {
  std::string label;
  int dim = 0;
  BlockKind kind = BlockKind::psd;
  bool operator==(const BlockSpec&) const = default;
};

/// One upper-triangle entry of a symmetric coefficient matrix. An
/// off-diagonal entry stands for both (row, col) and (col, row), so it
/// contributes 2 * value * X(row, col) to the trace inner product.
struct MatrixEntry {
  int block = 0;
  int row = 0;
  int col = 0;
  double value = 0.0;
  bool operator==(const MatrixEntry&) const = default;
};

using SparseSymmetric = std::vector<MatrixEntry>;

/// Sorts by (block, row, col), merges duplicates and drops exact zeros.
void canonicalize(SparseSymmetric& a);

struct LinearConstraint {
  SparseSymmetric coeffs;
  double rhs = 0.0;
  std::string tag;
};

/// Dense block-diagonal matrix; diagonal blocks are stored as dim x 1.
struct BlockMatrix {
  std::vector<Eigen::MatrixXd> blocks;

  static BlockMatrix zeros(const std::vector<BlockSpec>& specs);
  static BlockMatrix identity(const std::vector<BlockSpec>& specs, double scale = 1.0);
};

/// <A, X> for a sparse symmetric A.
double inner(const SparseSymmetric& a, const BlockMatrix& x);

/// Minimize <objective, X> subject to <A_i, X> = b_i, <B_j, X> <= c_j, X psd.
struct SdpProblem {
  std::vector<BlockSpec> blocks;
  SparseSymmetric objective;
  std::vector<LinearConstraint> equalities;
  std::vector<LinearConstraint> inequalities;

  int block_index(const std::string& label) const;
};

/// Equality-only form: minimize <C, X> s.t. <A_i, X> = b_i. Inequalities of
/// an SdpProblem become equalities with one slack entry each in a trailing
/// diagonal block labelled "slack".
struct StandardSdp {
  std::vector<BlockSpec> blocks;
  SparseSymmetric objective;
  std::vector<SparseSymmetric> constraints;
  std::vector<double> rhs;
};

StandardSdp to_standard(const SdpProblem& p);

enum class SolverStatus { optimal, near_optimal, infeasible, numerical_failure };

std::string to_string(SolverStatus s);

struct SolverOptions {
  double gap_tol = 1e-8;
  double feas_tol = 1e-8;
  int max_iterations = 200;
  double step_fraction = 0.98;
  /// Primal or dual iterates beyond this norm are reported as infeasible.
  double divergence_bound = 1e12;
  bool verbose = false;
};

struct SdpSolution {
  std::vector<BlockSpec> blocks;
  BlockMatrix x;  ///< primal
  BlockMatrix z;  ///< dual slack
  Eigen::VectorXd y;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double relative_gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  SolverStatus status = SolverStatus::numerical_failure;
  std::vector<double> gap_history;

  /// Primal block by label; throws InvalidArgument if absent.
  const Eigen::MatrixXd& block(const std::string& label) const;
};

/// Primal-dual path-following method with Nesterov-Todd scaling and
/// Mehrotra predictor-corrector steps, infeasible start.
SdpSolution solve(const StandardSdp& p, const SolverOptions& opts = {});
SdpSolution solve(const SdpProblem& p, const SolverOptions& opts = {});

/// Residual b_i - <A_i, X> for every constraint of the standard form.
Eigen::VectorXd primal_residual(const StandardSdp& p, const BlockMatrix& x);

// ---------------------------------------------------------------------------
// SDPA sparse format. The file encodes, as read by CSDP, the problem
//   maximize tr(F0 X) subject to tr(Fi X) = c_i, X psd,
// so F0 = -C for our minimization. Diagonal blocks carry negative sizes.

std::string export_sdpa(const StandardSdp& p);
std::string export_sdpa(const SdpProblem& p);
/// Throws MalformedFile.
StandardSdp parse_sdpa(const std::string& text);

/// Solution layout: optional "* key value" comment lines, the dual vector y
/// on one line, then "matno block i j value" with matno 1 for Z and 2 for X.
std::string export_solution(const SdpSolution& s);
/// Throws MalformedFile or DimensionMismatch.
SdpSolution import_solution(const std::string& text, const StandardSdp& p);

}  // namespace pentapack
