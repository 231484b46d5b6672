#include <Eigen/Eigenvalues>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "pentapack/error.hpp"
#include "pentapack/sdp.hpp"

using namespace pentapack;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// max <A, X> s.t. tr X = 1 as a minimization; optimum -lambda_max(A).
SdpProblem eigen_problem(const Eigen::MatrixXd& a) {
  SdpProblem p;
  const int n = static_cast<int>(a.rows());
  p.blocks = {{"X", n, BlockKind::psd}};
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      if (a(i, j) != 0.0) p.objective.push_back({0, i, j, -a(i, j)});
  LinearConstraint trace;
  for (int i = 0; i < n; ++i) trace.coeffs.push_back({0, i, i, 1.0});
  trace.rhs = 1.0;
  trace.tag = "trace";
  p.equalities.push_back(trace);
  return p;
}

// Random feasible problem: constraints built around a known interior point.
SdpProblem random_problem(int constraints, int seed_dim) {
  SdpProblem p;
  p.blocks = {{"A", seed_dim, BlockKind::psd}, {"B", 4, BlockKind::psd}, {"d", 3, BlockKind::diagonal}};
  BlockMatrix x0 = BlockMatrix::identity(p.blocks);
  auto random_sparse = [&](double density) {
    SparseSymmetric s;
    for (int b = 0; b < 3; ++b) {
      const int n = p.blocks[b].dim;
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          if (p.blocks[b].kind == BlockKind::diagonal && i != j) continue;
          if (oracle::uniform(0, 1) < density) s.push_back({b, i, j, oracle::uniform(-1, 1)});
        }
    }
    return s;
  };
  // objective positive definite on the cone keeps the problem bounded
  for (int b = 0; b < 3; ++b)
    for (int i = 0; i < p.blocks[b].dim; ++i) p.objective.push_back({b, i, i, 1.0 + oracle::uniform(0, 1)});
  for (int c = 0; c < constraints; ++c) {
    LinearConstraint row{random_sparse(0.3), 0.0, "row " + std::to_string(c)};
    row.rhs = inner(row.coeffs, x0);
    if (c % 3 == 2) {
      row.rhs += 0.5;
      p.inequalities.push_back(row);
    } else {
      p.equalities.push_back(row);
    }
  }
  return p;
}

}  // namespace

TEST_SUITE("sdp") {
  TEST_CASE("largest eigenvalue") {
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::MatrixXd a = fixture::random_psd(3) - 1.5 * Eigen::MatrixXd::Identity(3, 3);
      const double lmax = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a).eigenvalues()(2);
      CHECK(solve(eigen_problem(a)).relative_gap <= 1e-8);
      SolverOptions tight;
      tight.gap_tol = tight.feas_tol = 1e-10;
      const SdpSolution s = solve(eigen_problem(a), tight);
      CHECK(s.status == SolverStatus::optimal);
      CHECK(std::abs(-s.primal_objective - lmax) <= 1e-8);
      CHECK(std::abs(-s.dual_objective - lmax) <= 1e-8);
      CHECK((s.x.blocks[0] - s.x.blocks[0].transpose()).norm() <= 1e-12);
    }
  }

  TEST_CASE("linear program") {
    SdpProblem p;
    p.blocks = {{"x", 1, BlockKind::diagonal}};
    p.objective = {{0, 0, 0, 1.0}};
    p.inequalities.push_back({{{0, 0, 0, -1.0}}, -3.0, "x >= 3"});
    const SdpSolution s = solve(p);
    CHECK(s.status == SolverStatus::optimal);
    CHECK(s.primal_objective == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(s.block("x")(0, 0) == doctest::Approx(3.0).epsilon(1e-8));
    CHECK_THROWS_AS(s.block("missing"), InvalidArgument);
  }

  TEST_CASE("infeasible problem is reported") {
    SdpProblem p;
    p.blocks = {{"x", 2, BlockKind::diagonal}};
    p.objective = {{0, 0, 0, 1.0}};
    p.equalities.push_back({{{0, 0, 0, 1.0}, {0, 1, 1, 1.0}}, -1.0, "sum = -1"});
    const SdpSolution s = solve(p);
    CHECK(s.status != SolverStatus::optimal);
    CHECK(s.status != SolverStatus::near_optimal);
  }

  TEST_CASE("optimality certificates recomputed") {
    const SdpProblem p = random_problem(30, 6);
    const StandardSdp sp = to_standard(p);
    const SdpSolution s = solve(sp);
    REQUIRE(s.status == SolverStatus::optimal);
    CHECK(primal_residual(sp, s.x).cwiseAbs().maxCoeff() <= 1e-8);
    double gap = 0.0;
    for (std::size_t b = 0; b < s.x.blocks.size(); ++b) gap += (s.x.blocks[b].array() * s.z.blocks[b].array()).sum();
    CHECK(std::abs(gap) <= 1e-7 * (1.0 + std::abs(s.primal_objective)));
    double cx = inner(sp.objective, s.x);
    CHECK(cx == doctest::Approx(s.primal_objective).epsilon(1e-10));
    int increases = 0;
    for (std::size_t i = 1; i < s.gap_history.size(); ++i) increases += s.gap_history[i] > s.gap_history[i - 1];
    MESSAGE("gap increases over " << s.gap_history.size() << " iterations: " << increases);
  }

  TEST_CASE("sdpa export and parse") {
    const StandardSdp empty = to_standard(SdpProblem{});
    const std::string e = export_sdpa(empty);
    CHECK(e.find("0") != std::string::npos);
    CHECK(export_sdpa(parse_sdpa(e)) == e);

    const StandardSdp sp = to_standard(random_problem(40, 5));
    const std::string text = export_sdpa(sp);
    const StandardSdp back = parse_sdpa(text);
    CHECK(export_sdpa(back) == text);
    CHECK(back.rhs == sp.rhs);
    CHECK(back.blocks.size() == sp.blocks.size());
    CHECK_THROWS_AS(parse_sdpa("3\n1\n"), MalformedFile);
    CHECK_THROWS_AS(parse_sdpa(text.substr(0, text.size() / 2) + " x"), MalformedFile);
  }

  TEST_CASE("solution export and import") {
    const StandardSdp sp = to_standard(random_problem(20, 4));
    const SdpSolution s = solve(sp);
    const std::string text = export_solution(s);
    const SdpSolution back = import_solution(text, sp);
    for (std::size_t b = 0; b < s.x.blocks.size(); ++b) {
      CHECK((back.x.blocks[b] - s.x.blocks[b]).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK((back.z.blocks[b] - s.z.blocks[b]).cwiseAbs().maxCoeff() <= 1e-12);
    }
    CHECK((back.y - s.y).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(std::abs(inner(sp.objective, back.x) - back.primal_objective) <= 1e-7);
    CHECK(export_solution(back) == text);
    CHECK_THROWS_AS(import_solution(text.substr(0, text.find('\n', text.size() / 2)) + "\n2 1 1", sp), MalformedFile);
    CHECK_THROWS_AS(import_solution("* status optimal\n", sp), MalformedFile);
    CHECK_THROWS_AS(import_solution("1 2 3\n2 9 1 1 1.0\n", sp), Error);
  }

  TEST_CASE("golden solution pair") {
    const std::string dir = PENTAPACK_TEST_DATA;
    const std::string problem_text = slurp(dir + "/golden_problem.dat-s");
    const StandardSdp sp = parse_sdpa(problem_text);
    CHECK(export_sdpa(sp) == problem_text);
    const SdpSolution s = import_solution(slurp(dir + "/golden_solution.sol"), sp);
    CHECK(s.primal_objective == doctest::Approx(-3.0).epsilon(1e-12));
    CHECK(inner(sp.objective, s.x) == doctest::Approx(-3.0).epsilon(1e-12));
    CHECK(primal_residual(sp, s.x).cwiseAbs().maxCoeff() <= 1e-12);
    Eigen::MatrixXd a(2, 2);
    a << 2, 1, 1, 2;
    CHECK(export_sdpa(to_standard(eigen_problem(a))) == problem_text);
  }

  TEST_CASE("canonicalize") {
    SparseSymmetric s{{1, 2, 0, 1.0}, {0, 0, 0, 2.0}, {1, 0, 2, 0.5}, {1, 0, 0, 0.0}};
    canonicalize(s);
    REQUIRE(s.size() == 2);
    CHECK(s[0] == MatrixEntry{0, 0, 0, 2.0});
    CHECK(s[1] == MatrixEntry{1, 0, 2, 1.5});
  }
}
