#pragma once

// From a numerical SDP solution to a checked bound: projection onto the
// equality constraints, eigenvalue/residual margins in extended precision,
// the high-precision sign sweep over the verification grid, and the final
// density bound.

#include <cstdint>
#include <string>
#include <vector>

#include "pentapack/fourier.hpp"
#include "pentapack/geometry.hpp"
#include "pentapack/sdp.hpp"

namespace pentapack {

struct ProjectionResult {
  SdpSolution solution;
  double residual_before = 0.0;  ///< max |b_i - <A_i, X>| over equalities
  double residual_after = 0.0;
  double displacement = 0.0;  ///< Frobenius norm of the change in X
  int rounds = 0;
};

/// Least-squares projection of the primal blocks onto {X : <A_i, X> = b_i}
/// for the equality constraints of `p`, with iterative refinement of the
/// residual in extended precision. The slack block and the inequalities are
/// left alone. Throws NumericalFailure when the equality rows are dependent.
ProjectionResult project_affine(const SdpSolution& sol, const SdpProblem& p);

struct FeasibilityMargin {
  double min_eigenvalue = 0.0;  ///< certified lower bound over the non-slack blocks
  double max_residual = 0.0;    ///< max |b_i - <A_i, X>| over equalities
  std::string worst_block;
  std::string worst_row;
  /// Largest residual per row family (the tag up to its first space).
  std::vector<std::pair<std::string, double>> residual_by_family;
};

/// Residuals are accumulated in 128-bit binary floating point. Each block's
/// minimum eigenvalue is first estimated in double and then confirmed by an
/// LDL^T factorization of X - mu I in the same precision.
FeasibilityMargin feasibility_margin(const SdpSolution& sol, const SdpProblem& p);

/// Termwise Lipschitz constants of f over rho <= rho_max, all theta, alpha:
/// |f(x, a) - f(x', a)| <= translation |x - x'| and
/// |f(x, a) - f(x, a')| <= rotation |a - a'|.
struct LipschitzBound {
  double translation = 0.0;
  double rotation = 0.0;

  double gradient_norm() const;
};

LipschitzBound lipschitz_estimate(const CoefficientTensor& t, double rho_max = 1.0);

struct SignSweep {
  double sign_margin = 0.0;  ///< max of f over the streamed points
  MotionPoint argmax;
  std::uint64_t points = 0;
  int precision_bits = 0;
  VerificationGrid grid;
};

/// Evaluates f at every point of the grid stream in `precision_bits`-bit
/// MPFR arithmetic, split over `threads` workers. Throws InvalidArgument for
/// an enlargement below 1 and NumericalFailure if a streamed point lies
/// outside the guarded region.
SignSweep sweep_sign(const CoefficientTensor& t, const VerificationGrid& grid, int precision_bits, int threads = 1);

/// Guard distance such that every point of the verification region lies
/// within one grid cell of a streamed point.
double grid_guard(int alpha_count, int grid_n, double scale);

/// Metric half-diagonal of a grid cell in (x1, x2, alpha), the alpha
/// direction weighted by rotation / translation.
double covering_radius(const VerificationGrid& grid, const LipschitzBound& l);

/// Adaptive cover of the region {rho <= 1, x outside the open
/// scale * (K - A(alpha) K)} x [-pi/5, pi/5] by boxes in (x1, x2, alpha).
/// A box passes when f(center) plus its rounding allowance plus the local
/// termwise Lipschitz bound times the box half-widths is <= 0; failing boxes
/// are split in eight until `max_depth`.
struct CoverResult {
  bool ok = false;
  std::uint64_t boxes = 0;        ///< boxes that passed
  std::uint64_t evaluations = 0;  ///< function evaluations
  double worst_slack = 0.0;       ///< largest passing left-hand side
  MotionPoint worst_center;
  double smallest_half_width = 0.0;
  std::string failure;  ///< location of the first box that could not pass
};

CoverResult cover_region(const CoefficientTensor& t, double scale, int max_depth = 18, int threads = 1);

struct VerificationReport {
  double min_block_eigenvalue = 0.0;
  double max_constraint_residual = 0.0;
  double cylinder_residual = 0.0;
  double safety_factor = 1e3;
  double sign_margin = 0.0;
  MotionPoint sign_argmax;
  double lipschitz_bound = 0.0;  ///< translation constant
  double rotation_lipschitz = 0.0;
  double covering_radius = 0.0;
  std::string lipschitz_method = "termwise, polynomial Taylor enclosures on 64 radial panels";
  double enlargement = 1.0;
  int alpha_count = 0;
  int grid_n = 0;
  std::uint64_t points = 0;
  int precision_bits = 0;
  bool cover_run = false;
  bool cover_ok = false;
  std::uint64_t cover_boxes = 0;
  double cover_worst_slack = 0.0;
  double cover_smallest_half_width = 0.0;
  std::string cover_failure;
  double z_value = 0.0;  ///< f(0, I) / lambda
  double lambda = 0.0;
  bool margin_ok = false;
  bool sign_ok = false;
  bool certified = false;
  double bound = 0.0;
  std::string tensor_hash;

  /// "key: value" lines.
  std::string to_text() const;
  std::string to_json() const;
  /// Inverse of to_json; throws MalformedFile.
  static VerificationReport from_json(const std::string& text);
};

/// Sign part of the report for a tensor. The eigenvalue/residual fields are
/// left for the caller; `certified` reflects the sign inequality only.
VerificationReport verify_nonpositivity(const CoefficientTensor& t, double enlargement, int alpha_count, int grid_n,
                                        int precision_bits = 256, int threads = 1);

/// Runs cover_region and stores its outcome in the report.
void attach_cover(VerificationReport& r, const CoefficientTensor& t, int threads = 1);

/// Sets margin_ok, sign_ok and certified from the stored fields: the
/// eigenvalue margin must hold and the sign condition must be shown either
/// by the grid inequality or by the adaptive cover.
void finalize(VerificationReport& r);

/// value_at_identity(t) / lambda_of(t) * area(pentagon(enlargement)).
/// Throws InvalidArgument when lambda <= 0 or enlargement < 1.
double final_bound(const CoefficientTensor& t, double enlargement);

}  // namespace pentapack
