#include "hho/runner.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

int cmd_run(const std::string& config_path, bool check) {
  const hho::RunConfig cfg = hho::parse_run_config(config_path);
  std::cout << "problem: " << cfg.problem << ", flux: " << to_string(cfg.flux)
            << ", sigma: " << cfg.sigma << "\n";
  const auto results = hho::run_convergence_study(cfg, std::cout, check);

  bool all_passed = true;
  for (const auto& r : results) {
    std::cout << "k=" << r.k << ": " << r.csv_path;
    if (r.rows.size() >= 2) std::cout << "  EOC(sharp)=" << r.eoc_sharp;
    std::cout << "\n";
    if (!r.checks_passed) {
      all_passed = false;
      for (const auto& m : r.check_messages) std::cout << "  CHECK FAILED: " << m << "\n";
    }
  }
  if (check && !all_passed) return 1;
  return 0;
}

int cmd_validate(const std::string& mesh_path) {
  const hho::Mesh mesh = hho::load_mesh(mesh_path);
  const hho::ValidationReport report = hho::validate(mesh);
  std::cout << "cells:              " << mesh.n_cells() << "\n"
            << "faces:              " << mesh.n_faces() << " (" << mesh.boundary_faces.size()
            << " on the boundary)\n"
            << "vertices:           " << mesh.n_vertices() << "\n"
            << "meshsize:           " << mesh.meshsize() << "\n"
            << "total measure:      " << report.total_measure << "\n"
            << "min cell measure:   " << report.min_cell_measure << "\n"
            << "max faces per cell: " << report.max_faces_per_cell << "\n"
            << "worst h_F/h_T:      " << report.worst_face_ratio
            << " (regularity estimate " << report.regularity_estimate << ")\n"
            << "star-shaped cells:  " << (report.all_star_shaped ? "all" : "NOT ALL") << "\n";
  if (!report.all_star_shaped) {
    std::cout << "offending cells:";
    for (int c : report.non_star_cells) std::cout << ' ' << c;
    std::cout << "\n";
    return 1;
  }
  return 0;
}

int cmd_probe(const std::string& config_path, bool check) {
  hho::RunConfig cfg = hho::parse_run_config(config_path);
  cfg.stability_probe = true;
  const auto results = hho::run_convergence_study(cfg, std::cout, check);
  for (const auto& r : results)
    if (!r.checks_passed) return 1;
  return 0;
}

int cmd_dump(const std::string& config_path) {
  hho::RunConfig cfg = hho::parse_run_config(config_path);
  cfg.dump_matrix = true;
  hho::run_convergence_study(cfg, std::cout, false);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discontinuous-skeletal solver for advection-diffusion-reaction problems on "
               "polygonal meshes"};
  app.require_subcommand(1);

  std::string config_path, mesh_path;
  bool check = false;

  CLI::App* run = app.add_subcommand("run", "Run a convergence study from a config file");
  run->add_option("config", config_path, "config file")->required();
  run->add_flag("--check", check, "exit nonzero if any internal check fails");

  CLI::App* validate = app.add_subcommand("validate-mesh", "Validate a mesh file");
  validate->add_option("mesh", mesh_path, "mesh file")->required();

  CLI::App* probe = app.add_subcommand("probe", "Stability and identity checks for a config");
  probe->add_option("config", config_path, "config file")->required();
  probe->add_flag("--check", check, "exit nonzero if any check fails");

  CLI::App* dump = app.add_subcommand("dump-matrix", "Assemble and dump condensed matrices");
  dump->add_option("config", config_path, "config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, check);
    if (validate->parsed()) return cmd_validate(mesh_path);
    if (probe->parsed()) return cmd_probe(config_path, check);
    if (dump->parsed()) return cmd_dump(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
