// Command-line driver for the pentagon packing bound.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pentapack/error.hpp"
#include "pentapack/finite_theta.hpp"
#include "pentapack/pipeline.hpp"

using namespace pentapack;

namespace {

void add_config_flags(CLI::App& app, RunConfig& cfg, std::string& config_file, std::string& out_dir) {
  app.add_option("--config", config_file, "JSON file with RunConfig fields (flags override it)");
  app.add_option("--N", cfg.N, "Fourier band limit");
  app.add_option("--d", cfg.d, "odd polynomial degree parameter");
  app.add_option("--alpha-count", cfg.alpha_count, "rotation angles in the constraint sample");
  app.add_option("--grid-n", cfg.grid_n, "grid points per axis in the constraint sample");
  app.add_option("--enlargement", cfg.enlargement, "scale of the pentagon used for verification");
  app.add_option("--precision-bits", cfg.precision_bits, "mantissa bits of the sign sweep");
  app.add_option("--solver", cfg.solver, "embedded or external")->check(CLI::IsMember({"embedded", "external"}));
  app.add_option("--external-command", cfg.external_command,
                 "external solver command with {problem} and {solution} placeholders");
  app.add_option("--gap-tol", cfg.gap_tol, "relative duality gap tolerance");
  app.add_option("--feas-tol", cfg.feas_tol, "feasibility tolerance");
  app.add_option("--max-iterations", cfg.max_iterations, "interior-point iteration cap");
  app.add_option("--verify-alpha-count", cfg.verify_alpha_count, "rotation angles in the sign sweep");
  app.add_option("--verify-grid-n", cfg.verify_grid_n, "grid points per axis in the sign sweep");
  app.add_option("--safety-factor", cfg.safety_factor, "required ratio of eigenvalue margin to residual");
  app.add_option("--cover-depth", cfg.cover_depth, "maximum subdivision depth of the adaptive cover");
  app.add_option("--threads", cfg.threads, "worker threads for the sign checks");
  app.add_option("--out", out_dir, "artifact directory (default: $PENTAPACK_SCRATCH or ./pentapack-out)");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void print_report(const VerificationReport& r) {
  std::cout << r.to_text();
  if (r.certified) {
    std::cout << "certified upper bound: " << format_double(r.bound) << '\n';
  } else {
    std::cout << "NOT certified; computed value " << format_double(r.bound) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Upper bounds for the packing density of regular pentagons"};
  app.require_subcommand(1);

  // Flags are parsed into `flags`; the config file, if any, is applied
  // first and the explicitly given flags are re-applied on top.
  RunConfig flags;
  std::string config_file;
  std::string out_dir;
  bool plot_data = false;
  std::string import_path;
  std::string graph_name, adjacency_file, dimacs_file;

  auto* sample = app.add_subcommand("sample", "write the constraint sample");
  sample->add_flag("--plot-data", plot_data, "also write CSV plot data");
  auto* generate = app.add_subcommand("generate", "write the SDP in SDPA format and its manifest");
  auto* solve_cmd = app.add_subcommand("solve", "solve the SDP or import an external solution");
  solve_cmd->add_flag("--embedded", "use the embedded solver (default)");
  solve_cmd->add_option("--import", import_path, "solution file from an external solver");
  auto* refine = app.add_subcommand("refine", "re-solve with the objective capped at z* + 1e-5");
  refine->add_option("--import", import_path, "solution file from an external solver");
  auto* project = app.add_subcommand("project", "project onto the equality constraints and extract the tensor");
  auto* verify = app.add_subcommand("verify", "eigenvalue margins and the sign check");
  auto* bound = app.add_subcommand("bound", "final bound and report");
  auto* all = app.add_subcommand("all", "run every step");
  auto* theta = app.add_subcommand("theta", "kernel bound for a finite graph");
  auto* graph_opts = theta->add_option_group("graph");
  graph_opts->add_option("--graph", graph_name, "c5, petersen, complete:m, cycle:m, empty:m, bipartite:a,b");
  graph_opts->add_option("--adjacency", adjacency_file, "adjacency-list file");
  graph_opts->add_option("--dimacs", dimacs_file, "DIMACS edge file");
  graph_opts->require_option(1);

  for (auto* sub : {sample, generate, solve_cmd, refine, project, verify, bound, all}) {
    add_config_flags(*sub, flags, config_file, out_dir);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (theta->parsed()) {
      FiniteGraph g;
      if (!graph_name.empty()) {
        g = named_graph(graph_name);
      } else if (!adjacency_file.empty()) {
        std::ifstream in(adjacency_file);
        if (!in) throw InvalidArgument("cannot read " + adjacency_file);
        g = parse_adjacency_list(in);
      } else {
        std::ifstream in(dimacs_file);
        if (!in) throw InvalidArgument("cannot read " + dimacs_file);
        g = parse_dimacs(in);
      }
      std::cout << "vertices " << g.size() << " edges " << g.edge_count() << '\n';
      if (g.size() <= 30) std::cout << "alpha " << brute_force_alpha(g) << '\n';
      std::cout << "bound " << format_double(theta_prime_bound(g)) << '\n';
      return 0;
    }

    RunConfig cfg;
    cfg.out_dir = default_out_dir();
    CLI::App* active = app.get_subcommands().front();
    if (!config_file.empty()) cfg.merge_json(slurp(config_file));
    // explicit flags win over the file
    auto given = [&](const char* name) { return active->count(name) > 0; };
    if (given("--N")) cfg.N = flags.N;
    if (given("--d")) cfg.d = flags.d;
    if (given("--alpha-count")) cfg.alpha_count = flags.alpha_count;
    if (given("--grid-n")) cfg.grid_n = flags.grid_n;
    if (given("--enlargement")) cfg.enlargement = flags.enlargement;
    if (given("--precision-bits")) cfg.precision_bits = flags.precision_bits;
    if (given("--solver")) cfg.solver = flags.solver;
    if (given("--external-command")) cfg.external_command = flags.external_command;
    if (given("--gap-tol")) cfg.gap_tol = flags.gap_tol;
    if (given("--feas-tol")) cfg.feas_tol = flags.feas_tol;
    if (given("--max-iterations")) cfg.max_iterations = flags.max_iterations;
    if (given("--verify-alpha-count")) cfg.verify_alpha_count = flags.verify_alpha_count;
    if (given("--verify-grid-n")) cfg.verify_grid_n = flags.verify_grid_n;
    if (given("--safety-factor")) cfg.safety_factor = flags.safety_factor;
    if (given("--cover-depth")) cfg.cover_depth = flags.cover_depth;
    if (given("--threads")) cfg.threads = flags.threads;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    cfg.validate();
    std::cerr << "config " << cfg.hash() << " -> " << cfg.out_dir.string() << '\n';

    if (sample->parsed()) step_sample(cfg, plot_data);
    if (generate->parsed()) step_generate(cfg);
    if (solve_cmd->parsed()) step_solve(cfg, import_path);
    if (refine->parsed()) step_refine(cfg, import_path);
    if (project->parsed()) step_project(cfg);
    if (verify->parsed()) step_verify(cfg);
    if (bound->parsed()) print_report(step_bound(cfg));
    if (all->parsed()) print_report(run_all(cfg));
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
