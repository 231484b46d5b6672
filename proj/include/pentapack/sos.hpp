#pragma once

// Sums-of-squares compilation of the search for f: basis polynomials,
// index sets, the coefficient matrices F, calF and W, the polynomial
// identity on the cylinder rho >= 1, sample rows, normalization, and
// recovery of f_{r,s;k} from the PSD blocks.

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pentapack/fourier.hpp"
#include "pentapack/geometry.hpp"
#include "pentapack/sdp.hpp"

namespace pentapack {

/// P_k(x) = mu_k^{-1} L_k^0(2 pi x^2), k = 0..floor(d/2).
struct BasisPolynomials {
  int d = 0;
  std::vector<EvenPolynomial> p;  ///< coefficients of x^{2j}
  std::vector<double> mu;

  int size() const { return static_cast<int>(p.size()); }
};

/// Throws InvalidArgument for even d.
BasisPolynomials basis(int d);

/// Normalized Laguerre polynomials with index up to `count - 1` (used as the
/// expansion basis of the cylinder identity, where k runs to d).
BasisPolynomials laguerre_family(int count);

/// I_j = { r : -N <= r <= N, r = j (mod 10) }, ascending.
std::vector<int> index_set_I(int N, int j);

/// P_j = { (r, s) : 0 <= r, s <= N, r - s = j (mod 10) }, lexicographic.
std::vector<std::pair<int, int>> index_set_P(int N, int j);

/// F^i_{r,s;k}: rows/columns (l, r) over {0..floor(d/2)} x I_j, flattened as
/// position(r) * (floor(d/2) + 1) + l. Throws InvalidArgument when r and s
/// lie in different classes.
Eigen::MatrixXd build_F(int i, int r, int s, int k, const BasisPolynomials& b, int N);

/// calF^{ij}(rho, theta, alpha) with entries tau_{r,s}(a^{2i} P_l P_l').
Eigen::MatrixXcd build_calF(int i, int j, const MotionPoint& p, const BasisPolynomials& b, int N);

/// Polynomial in rho, z1^{+-1}, z2^{+-1}: exponent pair -> coefficients of rho^q.
struct LaurentPolynomial {
  std::map<std::pair<int, int>, std::vector<double>> terms;

  std::complex<double> operator()(double rho, std::complex<double> z1, std::complex<double> z2) const;
  void add(int e1, int e2, const std::vector<double>& rho_coeffs, double scale = 1.0);
};

using LaurentMatrix = std::vector<std::vector<LaurentPolynomial>>;

/// W^{ij}: rows/columns (l, p) over {0..floor(d/2)} x P_j, flattened as
/// position(p) * (floor(d/2) + 1) + l.
LaurentMatrix build_W(int i, int j, const BasisPolynomials& b, int N);

Eigen::MatrixXcd evaluate(const LaurentMatrix& m, double rho, std::complex<double> z1, std::complex<double> z2);

/// Which variable matrix a block of Problem A holds.
struct BlockRole {
  char family = 'Q';  ///< 'Q', 'R' or 'S'
  int i = 0;
  int j = 0;
};

struct ProblemOptions {
  /// Instantiate every Q^{ij}, R^{ij}, S^j instead of the reduced set
  /// Q00, Q05, Q10, Q15, R00, R05, S0, S5.
  bool full_block_set = false;
};

/// Counts of each row family, for logging.
struct RowCounts {
  int coeff_zero = 0;
  int coeff_real = 0;
  int coeff_real_vacuous = 0;
  int cylinder = 0;
  int sample = 0;
  int normalization = 0;
};

struct ProblemA {
  ModelParams params;
  BasisPolynomials basis;
  std::vector<BlockRole> roles;  ///< one per SDP block
  std::vector<SamplePoint> sample;
  SdpProblem sdp;
  RowCounts counts;
  /// Value of the objective cap of a feasibility variant (NaN otherwise).
  double objective_cap = std::numeric_limits<double>::quiet_NaN();
};

/// Assembles the SDP: minimize f(0, I) (without the 2 pi factor) subject to
/// the zero pattern, real-valuedness, the cylinder identity, one row per
/// sample point and the normalization f_{0,0;0} = 1.
ProblemA assemble_problem_A(const ModelParams& params, const std::vector<SamplePoint>& sample,
                            const ProblemOptions& opts = {});

/// Drops the objective and caps it at z_star + 1e-5 instead.
ProblemA assemble_feasibility_variant(const ProblemA& base, double z_star);

/// f_{r,s;k} = sum_i <F^i_{r,s;k}, Q^{ij}>, symmetrized to (-r,-s).
CoefficientTensor recover_tensor(const SdpSolution& sol, const ProblemA& problem);

/// Sample-row value sum_{ij} <Re calF^{ij}(p), Q^{ij}> for the solution.
double sample_row_value(const SdpSolution& sol, const ProblemA& problem, const MotionPoint& p);

/// Cylinder-identity polynomial g(rho, z1, z2) evaluated for a solution;
/// identically zero for exactly feasible solutions.
std::complex<double> cylinder_identity_value(const SdpSolution& sol, const ProblemA& problem, double rho,
                                             std::complex<double> z1, std::complex<double> z2);

/// Text manifest mapping blocks and constraint rows to their meaning.
std::string problem_manifest(const ProblemA& problem);

}  // namespace pentapack
