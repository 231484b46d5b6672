#pragma once

// The batch workflow behind the command-line tool. Every step reads and
// writes plain-text artifacts in RunConfig::out_dir so that each one can be
// re-run on its own.

#include <filesystem>
#include <functional>
#include <string>

#include "pentapack/certify.hpp"
#include "pentapack/sos.hpp"

namespace pentapack {

struct RunConfig {
  int N = 5;
  int d = 11;
  int alpha_count = 5;
  int grid_n = 50;
  double enlargement = 1.02;
  int precision_bits = 256;
  /// "embedded" or "external"; the external path runs `external_command`.
  std::string solver = "embedded";
  std::string external_command;
  double gap_tol = 1e-8;
  double feas_tol = 1e-8;
  int max_iterations = 200;
  /// Grid of the high-precision sign sweep.
  int verify_alpha_count = 101;
  int verify_grid_n = 801;
  double safety_factor = 1e3;
  int cover_depth = 18;
  int threads = 1;
  std::filesystem::path out_dir = "pentapack-out";

  /// Throws InvalidArgument on out-of-range values.
  void validate() const;
  /// Hex digest of the fields that change results (not threads or paths).
  std::string hash() const;
  std::string to_json() const;
  /// Fields missing from the JSON keep their current values.
  void merge_json(const std::string& text);
};

/// Default output directory: $PENTAPACK_SCRATCH when set.
std::filesystem::path default_out_dir();

/// Progress messages go here; defaults to stderr.
void set_log_sink(std::function<void(const std::string&)> sink);

void step_sample(const RunConfig& cfg, bool plot_data);
void step_generate(const RunConfig& cfg);
/// Embedded solve, or import of `import_path` when it is non-empty.
void step_solve(const RunConfig& cfg, const std::string& import_path = {});
void step_refine(const RunConfig& cfg, const std::string& import_path = {});
void step_project(const RunConfig& cfg);
void step_verify(const RunConfig& cfg);
VerificationReport step_bound(const RunConfig& cfg);
VerificationReport run_all(const RunConfig& cfg);

// Artifact names inside out_dir.
namespace artifact {
inline constexpr const char* sample = "sample.txt";
inline constexpr const char* plot_vertices = "minkowski_vertices.csv";
inline constexpr const char* plot_points = "region_points.csv";
inline constexpr const char* problem = "problem.dat-s";
inline constexpr const char* manifest = "problem.manifest";
inline constexpr const char* solution = "solution.sol";
inline constexpr const char* refine_problem = "refine.dat-s";
inline constexpr const char* refine_manifest = "refine.manifest";
inline constexpr const char* refined = "refined.sol";
inline constexpr const char* projected = "projected.sol";
inline constexpr const char* tensor = "tensor.txt";
inline constexpr const char* projection_log = "projection.txt";
inline constexpr const char* verification = "verification.json";
inline constexpr const char* report_text = "report.txt";
inline constexpr const char* report_json = "report.json";
}  // namespace artifact

/// Reads a sample file written by step_sample. Throws MalformedFile.
std::vector<SamplePoint> read_sample(const std::filesystem::path& file);

}  // namespace pentapack
