#include "hho/runner.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace hho {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::invalid_argument("config: invalid boolean for " + key + ": " + v);
}

template <typename T>
std::vector<T> parse_list(const std::string& v) {
  std::vector<T> out;
  std::istringstream ss(v);
  T x;
  while (ss >> x) out.push_back(x);
  return out;
}

}  // namespace

RunConfig parse_run_config_stream(std::istream& in, const std::string& origin) {
  RunConfig cfg;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": malformed section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = section + "." + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "problem.type") cfg.problem = value;
    else if (key == "problem.nu") cfg.nu = std::stod(value);
    else if (key == "problem.degree") cfg.poly_degree = std::stoi(value);
    else if (key == "discretization.orders") cfg.orders = parse_list<int>(value);
    else if (key == "discretization.flux") cfg.flux = flux_scheme_from_string(value);
    else if (key == "discretization.sigma") cfg.sigma = std::stod(value);
    else if (key == "discretization.peclet")
      cfg.peclet_mode = value == "face_averaged" ? PecletMode::face_averaged : PecletMode::pointwise;
    else if (key == "discretization.orthonormalize") cfg.orthonormalize = parse_bool(value, key);
    else if (key == "mesh.family") cfg.family = mesh_family_from_string(value);
    else if (key == "mesh.levels") cfg.levels = parse_list<int>(value);
    else if (key == "mesh.files") {
      std::istringstream ss(value);
      std::string f;
      while (ss >> f) cfg.mesh_files.push_back(f);
    } else if (key == "output.csv_prefix") cfg.csv_prefix = value;
    else if (key == "output.zero_time_column") cfg.zero_time_column = parse_bool(value, key);
    else if (key == "checks.stability_probe") cfg.stability_probe = parse_bool(value, key);
    else if (key == "checks.hmm_crosscheck") cfg.hmm_crosscheck = parse_bool(value, key);
    else if (key == "checks.dump_matrix") cfg.dump_matrix = parse_bool(value, key);
    else
      throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": unknown key " + key);
  }

  for (std::size_t i = 1; i < cfg.levels.size(); ++i)
    if (cfg.levels[i] <= cfg.levels[i - 1])
      throw std::invalid_argument(origin + ": mesh levels must be strictly increasing");
  for (int k : cfg.orders)
    if (k < 0 || k > 3)
      throw std::invalid_argument(origin + ": polynomial orders are limited to 0..3");
  return cfg;
}

RunConfig parse_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  return parse_run_config_stream(in, path);
}

namespace {

Mesh mesh_for_level(const RunConfig& cfg, const TestProblem& problem, std::size_t level) {
  if (!cfg.mesh_files.empty()) return load_mesh(cfg.mesh_files.at(level));
  return generate_mesh(cfg.family, cfg.levels.at(level), problem.domain);
}

std::size_t n_levels(const RunConfig& cfg) {
  return cfg.mesh_files.empty() ? cfg.levels.size() : cfg.mesh_files.size();
}

void write_csv(const std::string& path, const std::vector<RunRow>& rows) {
  const std::filesystem::path parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open CSV output " + path);
  out << "meshsize,err_sharp,err_flat,err_l2_potential,residual,n_face_dofs,seconds\n";
  char buf[256];
  for (const RunRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%ld,%.6f\n", r.meshsize,
                  r.err_sharp, r.err_flat, r.err_l2_potential, r.residual, r.n_face_dofs,
                  r.seconds);
    out << buf;
  }
}

}  // namespace

std::vector<RunResult> run_convergence_study(const RunConfig& cfg, std::ostream& log, bool check) {
  const TestProblem problem = make_problem(cfg.problem, cfg.nu, cfg.poly_degree);
  const PhysicalData data = problem.physical();
  const FluxFunction flux(cfg.flux);

  if (cfg.problem == "locally_degenerate" && cfg.flux == FluxScheme::centered)
    throw std::invalid_argument(
        "run: the centered flux is not admissible for the locally degenerate problem; it "
        "loses control of the cell-face difference on diffusion-free faces (pick upwind, "
        "theta_upwind or scharfetter_gummel)");

  std::vector<Mesh> meshes;
  for (std::size_t l = 0; l < n_levels(cfg); ++l) meshes.push_back(mesh_for_level(cfg, problem, l));

  std::vector<RunResult> results;
  for (int k : cfg.orders) {
    RunResult result;
    result.k = k;

    DiscretizationOptions opts;
    opts.peclet_mode = cfg.peclet_mode;
    opts.orthonormalize_bases = cfg.orthonormalize;

    std::vector<double> hs, sharp_errors, l2_errors;
    for (std::size_t l = 0; l < meshes.size(); ++l) {
      const auto t0 = std::chrono::steady_clock::now();
      const Mesh& mesh = meshes[l];
      struct LevelRun {
        Discretization disc;
        NormWeights weights;
        AssembledSystem system;
        CondensedSystem condensed;
        DiscreteSolution sol;
        ErrorReport err;
      };
      auto level = [&]() -> LevelRun {
        Discretization disc(mesh, data, k, flux, opts);
        NormWeights weights = compute_norm_weights(disc);
        AssembledSystem system = assemble(disc, cfg.sigma);
        CondensedSystem condensed = condense(system);
        DiscreteSolution sol = solve(disc, condensed);
        ErrorReport err = compute_error_report(disc, sol, problem.exact, weights);
        return {std::move(disc), weights, std::move(system), std::move(condensed),
                std::move(sol), err};
      };
      std::optional<LevelRun> maybe_run;
      try {
        maybe_run.emplace(level());
      } catch (const std::exception& e) {
        throw std::runtime_error("run [" + cfg.problem + ", k=" + std::to_string(k) +
                                 ", level " + std::to_string(l) + "]: " + e.what());
      }
      const LevelRun& run = *maybe_run;
      const Discretization& disc = run.disc;
      const NormWeights& weights = run.weights;
      const AssembledSystem& system = run.system;
      const CondensedSystem& condensed = run.condensed;
      const DiscreteSolution& sol = run.sol;
      const ErrorReport& err = run.err;
      const auto t1 = std::chrono::steady_clock::now();

      RunRow row;
      row.meshsize = err.h;
      row.err_sharp = err.rel_sharp;
      row.err_flat = err.rel_flat;
      row.err_l2_potential = err.rel_l2_potential;
      row.residual = sol.residual;
      row.n_face_dofs = condensed.map.n_face_system;
      row.seconds =
          cfg.zero_time_column ? 0.0 : std::chrono::duration<double>(t1 - t0).count();
      result.rows.push_back(row);

      hs.push_back(row.meshsize);
      sharp_errors.push_back(row.err_sharp);
      l2_errors.push_back(row.err_l2_potential);

      log << "  k=" << k << " h=" << row.meshsize << " dofs=" << row.n_face_dofs
          << " err_sharp=" << row.err_sharp << " err_l2=" << row.err_l2_potential
          << " residual=" << row.residual << "\n";

      if (check && row.residual > 1e-9) {
        result.checks_passed = false;
        result.check_messages.push_back("solver residual above 1e-9");
      }

      if (cfg.stability_probe) {
        const StabilityReport probe = stability_probe(disc, system, weights, 200);
        log << "    stability: min a(v,v)/|v|^2 = " << probe.min_ratio
            << " (zeta = " << probe.zeta << "), ibp residual = " << probe.max_ibp_residual
            << (weights.advective_resolution_ok
                    ? ""
                    : " [mesh does not resolve the velocity scales]")
            << "\n";
        if (check && (probe.min_ratio < probe.zeta || probe.max_ibp_residual > 1e-10)) {
          result.checks_passed = false;
          result.check_messages.push_back("stability probe failed");
        }
      }

      if (cfg.hmm_crosscheck && k == 0) {
        PhysicalData hmm_data = data;
        hmm_data.reaction = nullptr;
        hmm_data.mu0 = 0.0;
        DiscretizationOptions hmm_opts = opts;
        hmm_opts.peclet_mode = PecletMode::face_averaged;
        Discretization hmm_disc(mesh, hmm_data, 0, flux, hmm_opts);
        const CondensedSystem lhs = condense(assemble(hmm_disc, cfg.sigma, BoundaryMode::strong));
        const CondensedSystem rhs = condense(hmm_flux_system(mesh, hmm_data, flux));
        const double diff = (lhs.matrix - rhs.matrix).norm();
        const double scale = std::max(1.0, lhs.matrix.norm());
        log << "    hmm cross-check: matrix difference " << diff / scale << "\n";
        if (check && diff / scale > 1e-11) {
          result.checks_passed = false;
          result.check_messages.push_back("hmm cross-check failed");
        }
      }

      if (cfg.dump_matrix) {
        const std::string path = cfg.csv_prefix + "_matrix_k" + std::to_string(k) + "_l" +
                                 std::to_string(l) + ".txt";
        dump_coordinate_format(condensed.matrix, path);
        log << "    matrix dumped to " << path << "\n";
      }
    }

    if (result.rows.size() >= 2) {
      result.eoc_sharp = least_squares_slope(hs, sharp_errors);
      result.eoc_l2 = least_squares_slope(hs, l2_errors);
      log << "  k=" << k << " EOC(sharp) = " << result.eoc_sharp
          << ", EOC(L2) = " << result.eoc_l2 << "\n";
    }

    result.csv_path = cfg.csv_prefix + "_k" + std::to_string(k) + ".csv";
    write_csv(result.csv_path, result.rows);
    results.push_back(std::move(result));
  }
  return results;
}

}  // namespace hho
