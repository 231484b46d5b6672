// Acceptance checks. Prints one PASS/FAIL line per criterion; with an
// argument runs only that criterion. Exit status is the number of failures.

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "pentapack/certify.hpp"
#include "pentapack/error.hpp"
#include "pentapack/finite_theta.hpp"
#include "pentapack/pipeline.hpp"
#include "pentapack/specfun.hpp"

using namespace pentapack;
namespace fs = std::filesystem;

namespace {

// Tolerances and corridors, fixed.
constexpr double kBoundLo = 0.975;
constexpr double kBoundHi = 0.985;
const double kConstruction = (5.0 - std::sqrt(5.0)) / 3.0;
constexpr std::size_t kSampleLo = 450;
constexpr std::size_t kSampleHi = 650;
constexpr double kHankelTol = 1e-9;
constexpr double kKummerTol = 1e-12;
constexpr double kInversionTol = 1e-8;
constexpr double kGramTol = -1e-8;
constexpr double kSigmaTol = 1e-12;
constexpr double kProjectionTol = 1e-12;
constexpr double kCylinderTol = 1e-9;
constexpr double kEigTol = 1e-8;
constexpr double kCrossSolverTol = 1e-6;
constexpr double kThetaTol = 1e-6;
constexpr double kPerfectTol = 1e-5;
constexpr double kNormTol = 1e-12;
constexpr double kPrecisionTol = 1e-10;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::path(PENTAPACK_TEST_SCRATCH) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome headline() {
  RunConfig cfg;
  cfg.out_dir = scratch("headline");
  std::ofstream log(cfg.out_dir / "run.log");
  set_log_sink([&](const std::string& m) { log << m << '\n' << std::flush; });
  const VerificationReport r = run_all(cfg);
  set_log_sink(nullptr);
  const std::size_t samples = read_sample(cfg.out_dir / artifact::sample).size();
  const bool in_corridor = r.bound >= kBoundLo && r.bound <= kBoundHi;
  const bool sample_ok = samples >= kSampleLo && samples <= kSampleHi;
  Outcome o;
  o.pass = r.certified && in_corridor && r.bound > kConstruction && sample_ok;
  o.detail = "samples " + std::to_string(samples) + ", certified " + (r.certified ? "yes" : "no") + ", bound " +
             fmt(r.bound) + " (corridor [" + fmt(kBoundLo) + ", " + fmt(kBoundHi) + "], construction " +
             fmt(kConstruction) + ")";
  return o;
}

Outcome special_functions() {
  namespace sf = specfun;
  double hankel = 0.0;
  for (int n = -10; n <= 10; n += 2)
    for (int k = 0; k <= 11; ++k)
      for (double rho : {0.1, 0.5, 1.0, 2.0}) {
        const int r = n < 0 ? -n : 0, s = n < 0 ? 0 : n;
        hankel = std::max(hankel, std::abs(sf::hankel_closed_form(r, s, k, rho) - sf::hankel_integral_oracle(r, s, k, rho)));
      }
  double kummer = 0.0;
  for (int n = 0; n <= 20; ++n)
    for (int m = 0; m <= 40; m += 4)
      for (double x : {0.0, 0.3, 1.0, 2.5, 5.0, 4.0 * kPi}) {
        const double lhs = sf::kummer_1f1(-n, m + 1, x);
        const double rhs = sf::factorial(n) / sf::pochhammer(m + 1, n) * sf::laguerre(n, m, x);
        kummer = std::max(kummer, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
      }
  return {hankel <= kHankelTol && kummer <= kKummerTol,
          "hankel max error " + fmt(hankel) + " (tol " + fmt(kHankelTol) + "), kummer-laguerre max relative error " +
              fmt(kummer) + " (tol " + fmt(kKummerTol) + ")"};
}

Outcome inversion() {
  double worst = 0.0, worst_series = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const CoefficientTensor t = oracle::random_tensor(2, 3);
    for (int i = 0; i < 100; ++i) {
      const MotionPoint p{oracle::uniform(0.0, 2.0), oracle::uniform(0.0, kTwoPi), oracle::uniform(0.0, kTwoPi)};
      const double f = evaluate_f(t, p);
      worst = std::max(worst, std::abs(f - evaluate_f_quadrature(t, p)));
      if (i % 10 == 0) worst_series = std::max(worst_series, std::abs(f - oracle::f_by_series(t, p)));
    }
  }
  return {worst <= kInversionTol && worst_series <= kInversionTol,
          "closed form vs quadrature " + fmt(worst) + ", vs Bessel series " + fmt(worst_series) + " (tol " +
              fmt(kInversionTol) + ")"};
}

Outcome positive_type() {
  const ProblemA pa = assemble_problem_A(ModelParams{5, 11}, {});
  double worst = INFINITY;
  for (int trial = 0; trial < 50; ++trial) {
    const CoefficientTensor t = recover_tensor(fixture::random_psd_solution(pa), pa);
    const double scale = evaluate_f(t, MotionPoint{});
    std::vector<Motion> g(20);
    for (auto& m : g) m = Motion{{oracle::uniform(-1, 1), oracle::uniform(-1, 1)}, oracle::uniform(0, kTwoPi)};
    Eigen::MatrixXd gram(20, 20);
    for (int i = 0; i < 20; ++i)
      for (int j = 0; j < 20; ++j) gram(i, j) = evaluate_f(t, to_polar(compose(invert(g[j]), g[i]))) / scale;
    gram = 0.5 * (gram + gram.transpose());
    worst = std::min(worst, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram).eigenvalues()(0));
  }
  return {worst >= kGramTol, "min Gram eigenvalue " + fmt(worst) + " (f normalized to 1 at the identity; floor " +
                                 fmt(kGramTol) + ")"};
}

Outcome sos_correctness() {
  // (a) recovered tensor vs sigma assembled directly from the Gram blocks
  const ProblemA pa = assemble_problem_A(ModelParams{5, 11}, constraint_sample(5, 50));
  const int half = 5;
  double sigma = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const SdpSolution sol = fixture::random_psd_solution(pa);
    const CoefficientTensor t = recover_tensor(sol, pa);
    std::map<std::tuple<int, int, int>, double> direct;
    for (std::size_t b = 0; b < pa.roles.size(); ++b) {
      if (pa.roles[b].family != 'Q') continue;
      const auto idx = index_set_I(5, pa.roles[b].j);
      const Eigen::MatrixXd& q = sol.x.blocks[b];
      for (std::size_t pr = 0; pr < idx.size(); ++pr)
        for (std::size_t ps = 0; ps < idx.size(); ++ps)
          for (int l = 0; l <= half; ++l)
            for (int m = 0; m <= half; ++m) {
              const auto a = fixture::normalized_laguerre(l), c = fixture::normalized_laguerre(m);
              for (int u = 0; u <= l; ++u)
                for (int v = 0; v <= m; ++v)
                  direct[{idx[pr], idx[ps], u + v + pa.roles[b].i}] +=
                      q(pr * (half + 1) + l, ps * (half + 1) + m) * a[u] * c[v];
            }
    }
    for (int r = -5; r <= 5; ++r)
      for (int s = -5; s <= 5; ++s)
        for (int k = 0; k <= 11; ++k) {
          const auto it = direct.find({r, s, k});
          sigma = std::max(sigma, std::abs(t.at(r, s, k) - (it == direct.end() ? 0.0 : it->second)));
        }
  }

  // (b) projection of the solver output, (c) nonpositivity beyond rho = 1
  const SdpSolution sol = solve(pa.sdp);
  const ProjectionResult pr = project_affine(sol, pa.sdp);
  const CoefficientTensor t = recover_tensor(pr.solution, pa);
  double cylinder = -INFINITY;
  for (int i = 0; i < 10000; ++i) {
    const MotionPoint p{oracle::uniform(1.0, 4.0), oracle::uniform(0, kTwoPi), oracle::uniform(0, kTwoPi)};
    cylinder = std::max(cylinder, evaluate_f(t, p));
  }
  const bool pass = sigma <= kSigmaTol && pr.residual_after <= kProjectionTol && cylinder <= kCylinderTol;
  return {pass, "sigma coefficients " + fmt(sigma) + " (tol " + fmt(kSigmaTol) + "), equality residual " +
                    fmt(pr.residual_before) + " -> " + fmt(pr.residual_after) + " (tol " + fmt(kProjectionTol) +
                    "), max f on rho >= 1 " + fmt(cylinder) + " (tol " + fmt(kCylinderTol) + ")"};
}

Outcome solver() {
  // (a) largest eigenvalue
  double eig = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXd a = fixture::random_psd(3) - 1.5 * Eigen::MatrixXd::Identity(3, 3);
    SdpProblem p;
    p.blocks = {{"X", 3, BlockKind::psd}};
    LinearConstraint tr{{}, 1.0, "trace"};
    for (int i = 0; i < 3; ++i) {
      tr.coeffs.push_back({0, i, i, 1.0});
      for (int j = i; j < 3; ++j) p.objective.push_back({0, i, j, -a(i, j)});
    }
    p.equalities.push_back(tr);
    const double lmax = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a).eigenvalues()(2);
    SolverOptions tight;
    tight.gap_tol = tight.feas_tol = 1e-10;
    eig = std::max(eig, std::abs(-solve(p, tight).primal_objective - lmax));
  }

  // (b) embedded vs external on a Problem A instance
  const ProblemA pa = assemble_problem_A(ModelParams{5, 5}, constraint_sample(3, 24));
  const StandardSdp sp = to_standard(pa.sdp);
  const fs::path dir = scratch("cross-solver");
  const fs::path prob = dir / "medium.dat-s", sol = dir / "medium.sol";
  std::ofstream(prob) << export_sdpa(sp);
  const std::string cmd = "python3 " + std::string(PENTAPACK_SOURCE) + "/tools/external_sdp_solve.py " +
                          prob.string() + " " + sol.string() + " > " + (dir / "external.log").string() + " 2>&1";
  double cross = INFINITY;
  std::string external_note;
  const double embedded = solve(sp).primal_objective;
  if (std::system(cmd.c_str()) == 0) {
    const SdpSolution ext = import_solution(slurp(sol), sp);
    cross = std::abs(ext.primal_objective - embedded);
    external_note = "embedded " + fmt(embedded) + " external " + fmt(ext.primal_objective);
  } else {
    external_note = "external solver failed, see " + (dir / "external.log").string();
  }

  // (c) byte-identical roundtrips
  const std::string text = export_sdpa(sp);
  const SdpSolution es = solve(sp);
  const std::string stext = export_solution(es);
  const bool roundtrip = export_sdpa(parse_sdpa(text)) == text && export_solution(import_solution(stext, sp)) == stext;

  const bool pass = eig <= kEigTol && cross <= kCrossSolverTol && roundtrip;
  return {pass, "lambda_max error " + fmt(eig) + " (tol " + fmt(kEigTol) + "), " + external_note + " with " +
                    std::to_string(sp.constraints.size()) + " constraints, difference " + fmt(cross) + " (tol " +
                    fmt(kCrossSolverTol) + "), roundtrip " + (roundtrip ? "identical" : "differs")};
}

Outcome theta() {
  int unsound = 0;
  double slack = INFINITY;
  for (int i = 0; i < 200; ++i) {
    const int n = oracle::uniform_int(1, 12);
    const double p = oracle::uniform(0.1, 0.9);
    FiniteGraph g(n);
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (oracle::uniform(0, 1) < p) g.add_edge(u, v);
    const double gap = theta_prime_bound(g) - brute_force_alpha(g);
    slack = std::min(slack, gap);
    unsound += gap < -kThetaTol;
  }
  double perfect = 0.0;
  std::vector<FiniteGraph> family;
  for (int m = 1; m <= 8; ++m) family.push_back(complete_graph(m));
  for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 1}, {2, 3}, {3, 3}, {2, 6}, {4, 5}}) family.push_back(complete_bipartite(a, b));
  family.push_back(disjoint_union(complete_graph(3), complete_graph(4)));
  family.push_back(disjoint_union(disjoint_union(complete_graph(2), complete_graph(5)), complete_graph(1)));
  family.push_back(disjoint_union(complete_graph(4), complete_graph(4)));
  for (const auto& g : family) perfect = std::max(perfect, std::abs(theta_prime_bound(g) - brute_force_alpha(g)));
  const int petersen = brute_force_alpha(petersen_graph());
  return {unsound == 0 && perfect <= kPerfectTol && petersen == 4,
          "random graphs below alpha: " + std::to_string(unsound) + " of 200 (min bound - alpha " + fmt(slack) +
              "), perfect families max gap " + fmt(perfect) + " (tol " + fmt(kPerfectTol) + "), Petersen alpha " +
              std::to_string(petersen)};
}

Outcome geometry() {
  double norm = 0.0;
  for (int i = 0; i < 10000; ++i)
    for (const auto& v : minkowski_difference(kTwoPi * i / 10000.0, 1.0).vertices()) norm = std::max(norm, std::hypot(v[0], v[1]));
  int mismatches = 0;
  for (int i = 0; i < 100000; ++i) {
    const Vec2 x{oracle::uniform(-1.1, 1.1), oracle::uniform(-1.1, 1.1)};
    const double alpha = oracle::uniform(0, kTwoPi);
    const bool sat = oracle::interiors_disjoint(oracle::pentagon_vertices(1.0, 0.0), oracle::pentagon_vertices(1.0, alpha, x));
    mismatches += sat != copies_disjoint(x, alpha, 1.0);
  }
  return {norm <= 1.0 + kNormTol && mismatches == 0,
          "max vertex norm " + fmt(norm) + " over 1e4 angles, separating-axis mismatches " + std::to_string(mismatches) +
              " of 1e5"};
}

Outcome precision() {
  std::ifstream in(std::string(PENTAPACK_TEST_DATA) + "/tensor_n5_d11.txt");
  const CoefficientTensor t = read_tensor(in);
  const VerificationReport hi = verify_nonpositivity(t, 1.02, 21, 160, 256);
  const VerificationReport lo = verify_nonpositivity(t, 1.02, 21, 160, 128);
  const double diff = std::abs(hi.sign_margin - lo.sign_margin);
  return {hi.points >= 100000 && diff <= kPrecisionTol,
          std::to_string(hi.points) + " points, sign margin " + fmt(hi.sign_margin) + " at " +
              std::to_string(hi.precision_bits) + " bits, difference to " + std::to_string(lo.precision_bits) +
              " bits " + fmt(diff) + " (tol " + fmt(kPrecisionTol) + ")"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"headline bound", headline},       {"special functions", special_functions},
      {"inversion formula", inversion},   {"positive type", positive_type},
      {"sos and projection", sos_correctness}, {"sdp solver", solver},
      {"finite theta", theta},            {"geometry", geometry},
      {"precision sweep", precision}};
  int only = argc > 1 ? std::atoi(argv[1]) : 0;
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && static_cast<int>(i) + 1 != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first << ": " << o.detail << " ("
              << fmt(secs) << " s)" << std::endl;
    failures += !o.pass;
  }
  return failures;
}
