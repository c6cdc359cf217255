#include "hho/runner.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace hho;

namespace {

RunConfig parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse_run_config_stream(in, "<test>");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("full example") {
    const RunConfig cfg = parse_string(R"(
# study setup
[problem]
type = uniform_diffusion
nu = 0.001

[discretization]
orders = 0 1 2
flux = theta_upwind
sigma = 2.5
peclet = face_averaged

[mesh]
family = kershaw
levels = 4 8 16

[output]
csv_prefix = /tmp/study

[checks]
stability_probe = true
)");
    CHECK(cfg.problem == "uniform_diffusion");
    CHECK(cfg.nu == 0.001);
    CHECK(cfg.orders == std::vector<int>{0, 1, 2});
    CHECK(cfg.flux == FluxScheme::theta_upwind);
    CHECK(cfg.sigma == 2.5);
    CHECK(cfg.peclet_mode == PecletMode::face_averaged);
    CHECK(cfg.family == MeshFamily::kershaw);
    CHECK(cfg.levels == std::vector<int>{4, 8, 16});
    CHECK(cfg.csv_prefix == "/tmp/study");
    CHECK(cfg.stability_probe);
    CHECK_FALSE(cfg.hmm_crosscheck);
  }
  SUBCASE("rejects malformed input") {
    CHECK_THROWS(parse_string("[mesh]\nlevels = 8 4\n"));           // not increasing
    CHECK_THROWS(parse_string("[discretization]\norders = 5\n"));   // out of range
    CHECK_THROWS(parse_string("[mesh\nfamily = cartesian\n"));      // broken section
    CHECK_THROWS(parse_string("[mesh]\nfamily cartesian\n"));       // missing '='
    CHECK_THROWS(parse_string("[mesh]\nunknown_key = 1\n"));
    CHECK_THROWS(parse_string("[discretization]\nflux = nope\n"));
  }
}

TEST_CASE("a small study writes the expected CSV") {
  RunConfig cfg;
  cfg.problem = "uniform_diffusion";
  cfg.nu = 1.0;
  cfg.orders = {0};
  cfg.family = MeshFamily::cartesian;
  cfg.levels = {2, 4};
  cfg.flux = FluxScheme::scharfetter_gummel;
  cfg.csv_prefix = (std::filesystem::temp_directory_path() / "hho_run").string();

  std::ostringstream log;
  const auto results = run_convergence_study(cfg, log, true);
  REQUIRE(results.size() == 1);
  CHECK(results[0].checks_passed);
  CHECK(results[0].rows.size() == 2);
  CHECK(results[0].rows[0].meshsize > results[0].rows[1].meshsize);
  CHECK(results[0].rows[1].err_sharp < results[0].rows[0].err_sharp);

  const std::string csv = slurp(results[0].csv_path);
  CHECK(csv.rfind("meshsize,err_sharp,err_flat,err_l2_potential,residual,n_face_dofs,seconds\n",
                  0) == 0);
  std::remove(results[0].csv_path.c_str());
}

TEST_CASE("reruns reproduce the CSV bit-exactly with the neutral time column") {
  RunConfig cfg;
  cfg.problem = "polynomial";
  cfg.poly_degree = 1;
  cfg.orders = {1};
  cfg.family = MeshFamily::triangular;
  cfg.levels = {2, 4};
  cfg.zero_time_column = true;
  cfg.csv_prefix = (std::filesystem::temp_directory_path() / "hho_det").string();

  std::ostringstream log;
  const auto first = run_convergence_study(cfg, log, false);
  const std::string csv1 = slurp(first[0].csv_path);
  const auto second = run_convergence_study(cfg, log, false);
  const std::string csv2 = slurp(second[0].csv_path);
  CHECK(csv1 == csv2);
  CHECK(!csv1.empty());
  std::remove(first[0].csv_path.c_str());
}

TEST_CASE("centered flux on the degenerate problem is refused with an explanation") {
  RunConfig cfg;
  cfg.problem = "locally_degenerate";
  cfg.orders = {0};
  cfg.family = MeshFamily::triangular;
  cfg.levels = {8};
  cfg.flux = FluxScheme::centered;
  std::ostringstream log;
  try {
    run_convergence_study(cfg, log, false);
    FAIL("expected a rejection");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("centered") != std::string::npos);
    CHECK(msg.find("degenerate") != std::string::npos);
  }
}

TEST_CASE("hmm cross-check and matrix dump hooks run") {
  RunConfig cfg;
  cfg.problem = "uniform_diffusion";
  cfg.nu = 1.0;
  cfg.orders = {0};
  cfg.family = MeshFamily::cartesian;
  cfg.levels = {4};
  cfg.hmm_crosscheck = true;
  cfg.dump_matrix = true;
  cfg.csv_prefix = (std::filesystem::temp_directory_path() / "hho_hooks").string();

  std::ostringstream log;
  const auto results = run_convergence_study(cfg, log, true);
  CHECK(results[0].checks_passed);
  CHECK(log.str().find("hmm cross-check") != std::string::npos);
  const std::string dumped = cfg.csv_prefix + "_matrix_k0_l0.txt";
  CHECK(std::filesystem::exists(dumped));
  std::remove(dumped.c_str());
  std::remove(results[0].csv_path.c_str());
}
