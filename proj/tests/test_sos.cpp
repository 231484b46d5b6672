#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "pentapack/certify.hpp"
#include "pentapack/error.hpp"
#include "pentapack/sos.hpp"

using namespace pentapack;

namespace {

double min_eig(const Eigen::MatrixXd& m) { return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues()(0); }

double min_eig(const Eigen::MatrixXcd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(m).eigenvalues()(0);
}

double poly_at(const std::vector<double>& c, double x2) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x2 + *it;
  return v;
}

const ProblemA& small_solved(SdpSolution& out) {
  static ProblemA problem = assemble_problem_A(ModelParams{5, 5}, constraint_sample(3, 24));
  static SdpSolution sol = [] {
    SolverOptions o;
    return solve(problem.sdp, o);
  }();
  out = sol;
  return problem;
}

}  // namespace

TEST_SUITE("sos") {
  TEST_CASE("basis polynomials") {
    const BasisPolynomials b = basis(11);
    REQUIRE(b.size() == 6);
    CHECK(b.p[0].coeffs == std::vector<double>{1.0});
    CHECK(b.mu[1] == doctest::Approx(kTwoPi));
    CHECK(b.p[1].coeffs[0] == doctest::Approx(1.0 / kTwoPi).epsilon(1e-15));
    CHECK(b.p[1].coeffs[1] == doctest::Approx(-1.0).epsilon(1e-15));
    for (int k = 0; k <= 5; ++k) {
      const auto expect = fixture::normalized_laguerre(k);
      REQUIRE(b.p[k].degree() == k);
      double largest = 0.0;
      for (int j = 0; j <= k; ++j) {
        largest = std::max(largest, std::abs(b.p[k].coeffs[j]));
        CHECK(std::abs(b.p[k].coeffs[j] - expect[j]) <= 1e-14);
      }
      CHECK(largest == 1.0);
    }
    CHECK_THROWS_AS(basis(10), InvalidArgument);
  }

  TEST_CASE("index sets") {
    CHECK(index_set_I(5, 0) == std::vector<int>{0});
    CHECK(index_set_I(5, 5) == std::vector<int>{-5, 5});
    CHECK(index_set_I(5, 3) == std::vector<int>{3});
    CHECK(index_set_P(5, 0).size() == 6);
    CHECK(index_set_P(5, 5) == std::vector<std::pair<int, int>>{{0, 5}, {5, 0}});
    CHECK(index_set_P(5, 0).front() == std::pair<int, int>{0, 0});
  }

  TEST_CASE("coefficient matrices F") {
    const BasisPolynomials b = basis(11);
    CHECK(build_F(0, 0, 0, 0, b, 5)(0, 0) == 1.0);
    CHECK(build_F(1, 0, 0, 0, b, 5).norm() == 0.0);
    CHECK_THROWS_AS(build_F(0, 5, 0, 5, b, 5), InvalidArgument);
    // sum_k F a^{2k} = a^{2i} P_l P_l'
    for (int i = 0; i < 2; ++i)
      for (int r : {-5, 5})
        for (int s : {-5, 5}) {
          const double a = oracle::uniform(0.2, 1.5);
          Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(12, 12);
          for (int k = 0; k <= 11; ++k) acc += build_F(i, r, s, k, b, 5) * std::pow(a * a, k);
          const int pr = r < 0 ? 0 : 1, ps = s < 0 ? 0 : 1;
          double worst = 0.0;
          for (int l = 0; l <= 5; ++l)
            for (int m = 0; m <= 5; ++m) {
              const double expect = std::pow(a, 2 * i) * poly_at(fixture::normalized_laguerre(l), a * a) *
                                    poly_at(fixture::normalized_laguerre(m), a * a);
              worst = std::max(worst, std::abs(acc(pr * 6 + l, ps * 6 + m) - expect));
              acc(pr * 6 + l, ps * 6 + m) = 0.0;
            }
          CHECK(worst <= 1e-12);
          CHECK(acc.norm() == 0.0);
        }
  }

  TEST_CASE("problem A layout") {
    const ProblemA pa = assemble_problem_A(ModelParams{5, 11}, constraint_sample(5, 50));
    std::map<std::string, int> dims;
    for (const auto& blk : pa.sdp.blocks) dims[blk.label] = blk.dim;
    CHECK(dims == std::map<std::string, int>{{"Q00", 6}, {"Q05", 12}, {"Q10", 6}, {"Q15", 12},
                                             {"R00", 36}, {"R05", 12}, {"S0", 36}, {"S5", 12}});
    CHECK(pa.sdp.inequalities.size() == pa.sample.size());
    CHECK(pa.counts.sample == static_cast<int>(pa.sample.size()));
    CHECK(pa.counts.normalization == 1);
    CHECK(problem_manifest(pa).find("normalization") != std::string::npos);
    CHECK_THROWS_AS(assemble_problem_A(ModelParams{5, 11}, {SamplePoint{1.5, 0.0, 0.0}}), InvalidArgument);

    const ProblemA full = assemble_problem_A(ModelParams{5, 3}, {}, ProblemOptions{true});
    CHECK(full.sdp.blocks.size() > 8);
  }

  TEST_CASE("calF at the origin and the matrices W") {
    const BasisPolynomials b = basis(11);
    const Eigen::MatrixXcd f = build_calF(0, 0, MotionPoint{}, b, 5);
    CHECK(std::abs(f(0, 0) - 1.0 / kTwoPi) <= 1e-15);
    const LaurentMatrix w = build_W(0, 0, b, 5);
    CHECK(std::abs(w[0][0](0.7, 1.0, 1.0) - 1.0) <= 1e-15);
    double worst = 0.0, worst_cyl = 0.0;
    for (int t = 0; t < 50; ++t) {
      const double theta = oracle::uniform(0, kTwoPi), alpha = oracle::uniform(0, kTwoPi);
      const std::complex<double> z1 = std::polar(1.0, theta), z2 = std::polar(1.0, alpha - theta);
      for (int j : {0, 5})
        for (int i : {0, 1}) {
          const double rho = oracle::uniform(0.0, 3.0);
          const Eigen::MatrixXcd m = evaluate(build_W(i, j, b, 5), rho, z1, z2);
          CHECK((m - m.adjoint()).norm() <= 1e-12 * (1.0 + m.norm()));
          worst = std::min(worst, min_eig(m) / (1.0 + m.norm()));
        }
      const double rho = oracle::uniform(1.0, 3.0);
      const Eigen::MatrixXcd m = (rho * rho - 1.0) * evaluate(build_W(0, 5, b, 5), rho, z1, z2);
      worst_cyl = std::min(worst_cyl, min_eig(m) / (1.0 + m.norm()));
    }
    CHECK(worst >= -1e-12);
    CHECK(worst_cyl >= -1e-12);
  }

  TEST_CASE("tensor recovery") {
    const ProblemA pa = assemble_problem_A(ModelParams{5, 11}, {});
    SdpSolution zero;
    zero.blocks = pa.sdp.blocks;
    zero.x = BlockMatrix::zeros(pa.sdp.blocks);
    const CoefficientTensor t0 = recover_tensor(zero, pa);
    CHECK(oracle::random_tensor(5, 11).params() == t0.params());
    double largest = 0.0;
    for (int r = -5; r <= 5; ++r)
      for (int s = -5; s <= 5; ++s)
        for (int k = 0; k <= 11; ++k) largest = std::max(largest, std::abs(t0.at(r, s, k)));
    CHECK(largest == 0.0);

    SdpSolution e = zero;
    e.x.blocks[pa.sdp.block_index("Q00")](0, 0) = 1.0;
    const CoefficientTensor t1 = recover_tensor(e, pa);
    for (int k = 0; k <= 11; ++k) CHECK(t1.at(0, 0, k) == (k == 0 ? 1.0 : 0.0));

    SdpSolution wrong = zero;
    wrong.x.blocks[0] = Eigen::MatrixXd::Zero(3, 3);
    CHECK_THROWS_AS(recover_tensor(wrong, pa), DimensionMismatch);

    for (int trial = 0; trial < 3; ++trial) {
      const SdpSolution sol = fixture::random_psd_solution(pa);
      const CoefficientTensor t = recover_tensor(sol, pa);
      CHECK(t.invariant_violation() <= 1e-12);
      double worst = 0.0;
      for (int i = 0; i < 100; ++i) {
        const Eigen::MatrixXd fh = evaluate_fhat(t, oracle::uniform(0.0, 5.0));
        worst = std::min(worst, min_eig(fh) / (1.0 + fh.norm()));
      }
      CHECK(worst >= -1e-9);
      // f from the calF pairing equals f from the tensor
      for (int i = 0; i < 10; ++i) {
        const MotionPoint p{oracle::uniform(0, 1.5), oracle::uniform(0, kTwoPi), oracle::uniform(0, kTwoPi)};
        const double via_blocks = sample_row_value(sol, pa, p) * std::exp(-kPi * p.rho * p.rho);
        CHECK(std::abs(via_blocks - evaluate_f(t, p)) <= 1e-10 * (1.0 + std::abs(via_blocks)));
      }
    }
  }

  TEST_CASE("feasibility variant") {
    const ProblemA pa = assemble_problem_A(ModelParams{5, 5}, constraint_sample(3, 20));
    const ProblemA v = assemble_feasibility_variant(pa, 0.3);
    CHECK(v.sdp.objective.empty());
    CHECK(v.sdp.inequalities.size() == pa.sdp.inequalities.size() + 1);
    CHECK(v.sdp.inequalities.back().rhs == doctest::Approx(0.3 + 1e-5).epsilon(1e-15));
    CHECK(v.objective_cap == doctest::Approx(0.3 + 1e-5));
  }

  TEST_CASE("solved small instance") {
    SdpSolution sol;
    const ProblemA& pa = small_solved(sol);
    REQUIRE((sol.status == SolverStatus::optimal || sol.status == SolverStatus::near_optimal));
    const CoefficientTensor t = recover_tensor(sol, pa);
    CHECK(lambda_of(t) == doctest::Approx(1.0).epsilon(1e-7));
    double worst = -INFINITY;
    for (const auto& p : pa.sample) worst = std::max(worst, evaluate_f(t, p.motion_point()));
    CHECK(worst <= 1e-9);
    CHECK(value_at_identity(t) / lambda_of(t) == doctest::Approx(kTwoPi * sol.primal_objective).epsilon(1e-6));

    // after projection the cylinder identity holds to rounding and f <= 0 beyond rho = 1
    const ProjectionResult pr = project_affine(sol, pa.sdp);
    CHECK(pr.residual_after <= 1e-12);
    const CoefficientTensor tp = recover_tensor(pr.solution, pa);
    double worst_g = 0.0, worst_f = -INFINITY;
    for (int i = 0; i < 2000; ++i) {
      const double rho = oracle::uniform(1.0, 3.0), theta = oracle::uniform(0, kTwoPi), alpha = oracle::uniform(0, kTwoPi);
      worst_g = std::max(worst_g, std::abs(cylinder_identity_value(pr.solution, pa, rho, std::polar(1.0, theta),
                                                                   std::polar(1.0, alpha - theta))));
      worst_f = std::max(worst_f, evaluate_f(tp, {rho, theta, alpha}));
    }
    CHECK(worst_g <= 1e-9);
    CHECK(worst_f <= 1e-9);
  }
}
