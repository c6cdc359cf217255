#pragma once

#include "hho/analysis.hpp"
#include "hho/hmm.hpp"
#include "hho/problems.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace hho {

/// Configuration of a convergence study, parsed from a flat key-value file
/// with [section] headers (see docs in the repository README).
struct RunConfig {
  std::string problem = "uniform_diffusion";
  double nu = 1.0;        ///< uniform_diffusion only
  int poly_degree = 1;    ///< polynomial problem only

  std::vector<int> orders{0};
  FluxScheme flux = FluxScheme::scharfetter_gummel;
  double sigma = 1.0;
  PecletMode peclet_mode = PecletMode::pointwise;
  bool orthonormalize = false;

  MeshFamily family = MeshFamily::triangular;
  std::vector<int> levels{4, 8, 16};
  std::vector<std::string> mesh_files;  ///< overrides family/levels when nonempty

  std::string csv_prefix = "results";
  bool stability_probe = false;
  bool hmm_crosscheck = false;
  bool dump_matrix = false;
  bool zero_time_column = false;  ///< write 0 in the seconds column (bit-reproducible output)
};

RunConfig parse_run_config(const std::string& path);
RunConfig parse_run_config_stream(std::istream& in, const std::string& origin);

/// One solved (mesh, order) pair.
struct RunRow {
  double meshsize = 0.0;
  double err_sharp = 0.0;
  double err_flat = 0.0;
  double err_l2_potential = 0.0;
  double residual = 0.0;
  long n_face_dofs = 0;
  double seconds = 0.0;
};

struct RunResult {
  int k = 0;
  std::vector<RunRow> rows;
  double eoc_sharp = 0.0;  ///< least-squares slope over the refinement set
  double eoc_l2 = 0.0;
  std::string csv_path;
  bool checks_passed = true;
  std::vector<std::string> check_messages;
};

/// Runs the full study: for each order, assemble/solve/measure over the
/// refinement list, write one CSV per order (columns: meshsize, err_sharp,
/// err_flat, err_l2_potential, residual, n_face_dofs, seconds) and report
/// EOC slopes. `check` enables internal acceptance checks (residual bounds,
/// probe inequalities) whose failure flips checks_passed.
std::vector<RunResult> run_convergence_study(const RunConfig& config, std::ostream& log,
                                             bool check = false);

}  // namespace hho
