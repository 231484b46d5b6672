#include "pentapack/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "pentapack/error.hpp"

#ifndef PENTAPACK_SOURCE_DIR
#define PENTAPACK_SOURCE_DIR "."
#endif

namespace pentapack {

namespace fs = std::filesystem;

namespace {

std::function<void(const std::string&)>& log_sink() {
  static std::function<void(const std::string&)> sink = [](const std::string& m) { std::cerr << m << '\n'; };
  return sink;
}

void log(const std::string& m) {
  if (log_sink()) log_sink()(m);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read " + p.string() + " (run the earlier steps first)");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw InvalidArgument("cannot write " + p.string());
}

fs::path at(const RunConfig& cfg, const char* name) { return cfg.out_dir / name; }

std::string fnv_hex(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

SolverOptions solver_options(const RunConfig& cfg) {
  SolverOptions o;
  o.gap_tol = cfg.gap_tol;
  o.feas_tol = cfg.feas_tol;
  o.max_iterations = cfg.max_iterations;
  return o;
}

std::string solution_text(const RunConfig& cfg, const char* kind, const SdpSolution& s,
                          const std::string& extra = {}) {
  std::ostringstream os;
  os << "* artifact " << kind << "\n* version 1\n* config " << cfg.hash() << '\n' << extra << export_solution(s);
  return os.str();
}

std::string header_value(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] != '*') break;
    std::istringstream ls(line.substr(1));
    std::string k, v;
    ls >> k >> v;
    if (k == key) return v;
  }
  return {};
}

void check_config(const RunConfig& cfg, const std::string& text, const fs::path& file) {
  const std::string h = header_value(text, "config");
  if (!h.empty() && h != cfg.hash()) {
    throw InvalidArgument(file.string() + " was written with config " + h + ", current config is " + cfg.hash());
  }
}

ProblemA load_problem(const RunConfig& cfg) {
  const ProblemA pa = assemble_problem_A(ModelParams{cfg.N, cfg.d}, read_sample(at(cfg, artifact::sample)));
  if (read_file(at(cfg, artifact::problem)) != export_sdpa(pa.sdp)) {
    throw InvalidArgument(std::string(artifact::problem) + " does not match the current sample and config");
  }
  return pa;
}

double z_star_of(const RunConfig& cfg, const ProblemA& pa) {
  const std::string text = read_file(at(cfg, artifact::solution));
  check_config(cfg, text, at(cfg, artifact::solution));
  const SdpSolution s = import_solution(text, to_standard(pa.sdp));
  return inner(pa.sdp.objective, s.x);
}

ProblemA load_refine_problem(const RunConfig& cfg, double& z_star) {
  const ProblemA pa = load_problem(cfg);
  z_star = z_star_of(cfg, pa);
  ProblemA fv = assemble_feasibility_variant(pa, z_star);
  const fs::path file = at(cfg, artifact::refine_problem);
  if (fs::exists(file) && read_file(file) != export_sdpa(fv.sdp)) {
    throw InvalidArgument(std::string(artifact::refine_problem) + " does not match the current solution");
  }
  return fv;
}

SdpSolution run_solver(const RunConfig& cfg, const SdpProblem& p, const fs::path& problem_file,
                       const std::string& import_path, const char* what) {
  const StandardSdp st = to_standard(p);
  std::string source = import_path;
  if (source.empty() && cfg.solver == "external") {
    const fs::path out = problem_file.string() + ".external.sol";
    std::string cmd = cfg.external_command.empty()
                          ? std::string("python3 ") + PENTAPACK_SOURCE_DIR + "/tools/external_sdp_solve.py {problem} {solution}"
                          : cfg.external_command;
    auto replace = [&](const std::string& key, const std::string& value) {
      for (auto pos = cmd.find(key); pos != std::string::npos; pos = cmd.find(key, pos + value.size())) {
        cmd.replace(pos, key.size(), value);
      }
    };
    replace("{problem}", problem_file.string());
    replace("{solution}", out.string());
    log(std::string(what) + ": running " + cmd);
    if (std::system(cmd.c_str()) != 0) throw NumericalFailure(std::string(what) + ": external solver failed");
    source = out.string();
  }
  SdpSolution s;
  if (!source.empty()) {
    s = import_solution(read_file(source), st);
    log(std::string(what) + ": imported " + source);
  } else {
    s = solve(st, solver_options(cfg));
  }
  log(std::string(what) + ": status " + to_string(s.status) + ", objective " + format_double(s.primal_objective) +
      ", iterations " + std::to_string(s.iterations) + ", primal infeasibility " +
      format_double(s.primal_infeasibility));
  if (s.status == SolverStatus::infeasible || s.status == SolverStatus::numerical_failure) {
    throw NumericalFailure(std::string(what) + ": solver returned " + to_string(s.status));
  }
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------

void RunConfig::validate() const {
  ModelParams{N, d}.validate();
  if (alpha_count < 2 || grid_n < 2) throw InvalidArgument("config: alpha_count and grid_n must be at least 2");
  if (verify_alpha_count < 2 || verify_grid_n < 2) throw InvalidArgument("config: verification grid too small");
  if (enlargement < 1.0) throw InvalidArgument("config: enlargement must be at least 1");
  if (precision_bits < 53) throw InvalidArgument("config: precision_bits must be at least 53");
  if (solver != "embedded" && solver != "external") throw InvalidArgument("config: solver must be embedded or external");
  if (!(gap_tol > 0.0) || !(feas_tol > 0.0) || max_iterations < 1) throw InvalidArgument("config: bad tolerances");
  if (!(safety_factor > 0.0) || cover_depth < 0 || threads < 1) throw InvalidArgument("config: bad verification settings");
}

namespace {
nlohmann::ordered_json result_fields(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["N"] = c.N;
  j["d"] = c.d;
  j["alpha_count"] = c.alpha_count;
  j["grid_n"] = c.grid_n;
  j["enlargement"] = c.enlargement;
  j["precision_bits"] = c.precision_bits;
  j["solver"] = c.solver;
  j["gap_tol"] = c.gap_tol;
  j["feas_tol"] = c.feas_tol;
  j["max_iterations"] = c.max_iterations;
  j["verify_alpha_count"] = c.verify_alpha_count;
  j["verify_grid_n"] = c.verify_grid_n;
  j["safety_factor"] = c.safety_factor;
  j["cover_depth"] = c.cover_depth;
  return j;
}
}  // namespace

std::string RunConfig::hash() const { return fnv_hex(result_fields(*this).dump()); }

std::string RunConfig::to_json() const {
  auto j = result_fields(*this);
  j["external_command"] = external_command;
  j["threads"] = threads;
  j["out_dir"] = out_dir.string();
  return j.dump(2) + "\n";
}

void RunConfig::merge_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    auto take = [&](const char* key, auto& field) {
      if (j.contains(key)) j.at(key).get_to(field);
    };
    take("N", N);
    take("d", d);
    take("alpha_count", alpha_count);
    take("grid_n", grid_n);
    take("enlargement", enlargement);
    take("precision_bits", precision_bits);
    take("solver", solver);
    take("external_command", external_command);
    take("gap_tol", gap_tol);
    take("feas_tol", feas_tol);
    take("max_iterations", max_iterations);
    take("verify_alpha_count", verify_alpha_count);
    take("verify_grid_n", verify_grid_n);
    take("safety_factor", safety_factor);
    take("cover_depth", cover_depth);
    take("threads", threads);
    if (j.contains("out_dir")) out_dir = j.at("out_dir").get<std::string>();
    for (const auto& [key, value] : j.items()) {
      static const char* known[] = {"N", "d", "alpha_count", "grid_n", "enlargement", "precision_bits",
                                    "solver", "external_command", "gap_tol", "feas_tol", "max_iterations",
                                    "verify_alpha_count", "verify_grid_n", "safety_factor", "cover_depth",
                                    "threads", "out_dir"};
      if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
        throw InvalidArgument("config: unknown key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
}

fs::path default_out_dir() {
  if (const char* s = std::getenv("PENTAPACK_SCRATCH"); s && *s) return fs::path(s);
  return "pentapack-out";
}

void set_log_sink(std::function<void(const std::string&)> sink) { log_sink() = std::move(sink); }

std::vector<SamplePoint> read_sample(const fs::path& file) {
  std::istringstream in(read_file(file));
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != "pentapack-sample" || version != 1) throw MalformedFile(file.string() + ": not a sample file");
  std::string key, hash;
  std::size_t n = 0;
  int a = 0, g = 0;
  std::string ka, kg, kp;
  if (!(in >> key >> hash >> ka >> a >> kg >> g >> kp >> n) || key != "config" || kp != "points") {
    throw MalformedFile(file.string() + ": bad header");
  }
  std::vector<SamplePoint> out(n);
  for (auto& p : out) {
    std::string r, t, al;
    if (!(in >> r >> t >> al)) throw MalformedFile(file.string() + ": truncated");
    auto parse = [&](const std::string& s, double& v) {
      const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw MalformedFile(file.string() + ": bad number");
    };
    parse(r, p.rho);
    parse(t, p.theta);
    parse(al, p.alpha);
    p.tag = SamplePoint::Tag::constraint;
  }
  return out;
}

void step_sample(const RunConfig& cfg, bool plot_data) {
  cfg.validate();
  const auto s = constraint_sample(cfg.alpha_count, cfg.grid_n);
  std::ostringstream os;
  os << "pentapack-sample 1\nconfig " << cfg.hash() << "\nalpha_count " << cfg.alpha_count << " grid_n "
     << cfg.grid_n << "\npoints " << s.size() << '\n';
  for (const auto& p : s) os << format_double(p.rho) << ' ' << format_double(p.theta) << ' ' << format_double(p.alpha) << '\n';
  write_file(at(cfg, artifact::sample), os.str());
  log("sample: " + std::to_string(s.size()) + " constraint points");
  if (!plot_data) return;

  std::ostringstream v;
  v << "alpha,vx,vy\n";
  for (double a : uniform_values(-kTwoPi / 10.0, 0.0, cfg.alpha_count)) {
    for (const auto& p : minkowski_difference(a, 1.0).vertices()) {
      v << format_double(a) << ',' << format_double(p[0]) << ',' << format_double(p[1]) << '\n';
    }
  }
  write_file(at(cfg, artifact::plot_vertices), v.str());
  // boundary of {(x, alpha) : x in K - A(alpha) K} over one full turn
  std::ostringstream b;
  b << "x1,x2,alpha\n";
  for (double a : uniform_values(0.0, kTwoPi, 121)) {
    const auto& vs = minkowski_difference(a, 1.0).vertices();
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const Vec2& p = vs[i];
      const Vec2& q = vs[(i + 1) % vs.size()];
      for (int k = 0; k < 8; ++k) {
        const double t = k / 8.0;
        b << format_double(p[0] + t * (q[0] - p[0])) << ',' << format_double(p[1] + t * (q[1] - p[1])) << ','
          << format_double(a) << '\n';
      }
    }
  }
  write_file(at(cfg, artifact::plot_points), b.str());
  log("sample: plot data written");
}

void step_generate(const RunConfig& cfg) {
  cfg.validate();
  const ProblemA pa = assemble_problem_A(ModelParams{cfg.N, cfg.d}, read_sample(at(cfg, artifact::sample)));
  write_file(at(cfg, artifact::problem), export_sdpa(pa.sdp));
  write_file(at(cfg, artifact::manifest), "config " + cfg.hash() + "\n" + problem_manifest(pa));
  log("generate: " + std::to_string(pa.sdp.equalities.size()) + " equalities, " +
      std::to_string(pa.sdp.inequalities.size()) + " inequalities");
}

void step_solve(const RunConfig& cfg, const std::string& import_path) {
  cfg.validate();
  const ProblemA pa = load_problem(cfg);
  const SdpSolution s = run_solver(cfg, pa.sdp, at(cfg, artifact::problem), import_path, "solve");
  write_file(at(cfg, artifact::solution), solution_text(cfg, "solution", s));
}

void step_refine(const RunConfig& cfg, const std::string& import_path) {
  cfg.validate();
  const ProblemA pa = load_problem(cfg);
  const double z_star = z_star_of(cfg, pa);
  const ProblemA fv = assemble_feasibility_variant(pa, z_star);
  write_file(at(cfg, artifact::refine_problem), export_sdpa(fv.sdp));
  write_file(at(cfg, artifact::refine_manifest), "config " + cfg.hash() + "\n" + problem_manifest(fv));
  log("refine: z* = " + format_double(z_star) + ", cap " + format_double(fv.objective_cap));
  const SdpSolution s = run_solver(cfg, fv.sdp, at(cfg, artifact::refine_problem), import_path, "refine");
  write_file(at(cfg, artifact::refined), solution_text(cfg, "refined", s, "* z_star " + format_double(z_star) + "\n"));
}

void step_project(const RunConfig& cfg) {
  cfg.validate();
  double z_star = 0.0;
  const ProblemA fv = load_refine_problem(cfg, z_star);
  const std::string text = read_file(at(cfg, artifact::refined));
  check_config(cfg, text, at(cfg, artifact::refined));
  const SdpSolution s = import_solution(text, to_standard(fv.sdp));
  const ProjectionResult pr = project_affine(s, fv.sdp);
  write_file(at(cfg, artifact::projected), solution_text(cfg, "projected", pr.solution));
  const CoefficientTensor t = recover_tensor(pr.solution, fv);
  std::ostringstream ts;
  write_tensor(ts, t);
  write_file(at(cfg, artifact::tensor), ts.str());
  std::ostringstream log_text;
  log_text << "config " << cfg.hash() << "\nresidual_before " << format_double(pr.residual_before)
           << "\nresidual_after " << format_double(pr.residual_after) << "\ndisplacement "
           << format_double(pr.displacement) << "\nrounds " << pr.rounds << "\ntensor_hash " << tensor_hash(t) << '\n';
  write_file(at(cfg, artifact::projection_log), log_text.str());
  log("project: residual " + format_double(pr.residual_before) + " -> " + format_double(pr.residual_after) +
      ", displacement " + format_double(pr.displacement));
}

void step_verify(const RunConfig& cfg) {
  cfg.validate();
  double z_star = 0.0;
  const ProblemA fv = load_refine_problem(cfg, z_star);
  const std::string text = read_file(at(cfg, artifact::projected));
  check_config(cfg, text, at(cfg, artifact::projected));
  const SdpSolution s = import_solution(text, to_standard(fv.sdp));
  const FeasibilityMargin m = feasibility_margin(s, fv.sdp);
  std::istringstream ts(read_file(at(cfg, artifact::tensor)));
  const CoefficientTensor t = read_tensor(ts);
  log("verify: min eigenvalue " + format_double(m.min_eigenvalue) + " (" + m.worst_block + "), max residual " +
      format_double(m.max_residual));

  VerificationReport r = verify_nonpositivity(t, cfg.enlargement, cfg.verify_alpha_count, cfg.verify_grid_n,
                                              cfg.precision_bits, cfg.threads);
  r.min_block_eigenvalue = m.min_eigenvalue;
  r.max_constraint_residual = m.max_residual;
  for (const auto& [family, v] : m.residual_by_family)
    if (family == "cylinder") r.cylinder_residual = v;
  r.safety_factor = cfg.safety_factor;
  log("verify: " + std::to_string(r.points) + " grid points, sign margin " + format_double(r.sign_margin) +
      ", grid slack " + format_double(r.sign_margin + r.lipschitz_bound * r.covering_radius));
  const CoverResult c = cover_region(t, cfg.enlargement, cfg.cover_depth, cfg.threads);
  r.cover_run = true;
  r.cover_ok = c.ok;
  r.cover_boxes = c.boxes;
  r.cover_worst_slack = c.worst_slack;
  r.cover_smallest_half_width = c.smallest_half_width;
  r.cover_failure = c.failure;
  log("verify: adaptive cover " + std::string(c.ok ? "passed" : "failed") + " with " + std::to_string(c.boxes) +
      " boxes" + (c.ok ? "" : ": " + c.failure));
  finalize(r);
  write_file(at(cfg, artifact::verification), r.to_json());
}

VerificationReport step_bound(const RunConfig& cfg) {
  cfg.validate();
  const std::string text = read_file(at(cfg, artifact::verification));
  VerificationReport r = VerificationReport::from_json(text);
  std::istringstream ts(read_file(at(cfg, artifact::tensor)));
  const CoefficientTensor t = read_tensor(ts);
  if (tensor_hash(t) != r.tensor_hash) throw InvalidArgument("bound: tensor does not match the verification");
  r.lambda = lambda_of(t);
  r.bound = final_bound(t, cfg.enlargement);
  r.z_value = value_at_identity(t) / r.lambda;
  finalize(r);
  write_file(at(cfg, artifact::report_text), r.to_text());
  write_file(at(cfg, artifact::report_json), r.to_json());
  return r;
}

VerificationReport run_all(const RunConfig& cfg) {
  step_sample(cfg, true);
  step_generate(cfg);
  step_solve(cfg);
  step_refine(cfg);
  step_project(cfg);
  step_verify(cfg);
  return step_bound(cfg);
}

}  // namespace pentapack
