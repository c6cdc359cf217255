// Acceptance suite: one check per shipped guarantee, each printed as a
// single PASS/FAIL line. The process exits nonzero if any check fails.

#include "hho/analysis.hpp"
#include "hho/hmm.hpp"
#include "hho/problems.hpp"
#include "hho/runner.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace hho;

namespace {

struct Criterion {
  std::string name;
  std::function<bool(std::string&)> run;
};

Eigen::VectorXd interpolate_local(const CellOperators& ops, const ScalarField& f) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(ops.layout.size());
  Eigen::VectorXd b = Eigen::VectorXd::Zero(ops.layout.cell_dim);
  for (int q = 0; q < ops.cell_quad.size(); ++q)
    b += ops.cell_quad.weights[q] * f(ops.cell_quad.points[q]) *
         ops.basis_k.values(ops.cell_quad.points[q]);
  v.head(ops.layout.cell_dim) = Eigen::LDLT<Eigen::MatrixXd>(ops.mass_k).solve(b);
  for (int i = 0; i < ops.layout.n_faces; ++i) {
    const QuadratureRule& fq = ops.face_quads[i];
    const Eigen::MatrixXd phi = ops.face_bases[i].values_at(fq);
    Eigen::VectorXd bf = Eigen::VectorXd::Zero(ops.layout.face_dim);
    for (int q = 0; q < fq.size(); ++q)
      bf += fq.weights[q] * f(fq.points[q]) * phi.row(q).transpose();
    v.segment(ops.layout.face_offset(i), ops.layout.face_dim) =
        Eigen::LDLT<Eigen::MatrixXd>(gram_matrix(phi, phi, fq.weights)).solve(bf);
  }
  return v;
}

double l2_norm_k1(const CellOperators& ops, const Eigen::VectorXd& coeffs) {
  return std::sqrt(coeffs.dot(mass_matrix(ops.basis_k1, ops.cell_quad) * coeffs));
}

// ---------------------------------------------------------------------------
// 1. Operator exactness: reconstruction reproduces P^{k+1}, the diffusive
//    stabilization annihilates its interpolates, and the advective
//    derivative is exact for constant velocity, on cartesian, triangular
//    and hexagonal cells for k = 0..3, at 1e-10 relative.
bool operator_exactness(std::string& detail) {
  PhysicalData data;
  data.nu = {1.0};
  data.reaction = [](const Vec2&) { return 1.0; };
  data.mu0 = 1.0;
  const Vec2 beta(0.7, -1.3);
  PhysicalData adv_data = data;
  adv_data.velocity = [=](const Vec2&) { return beta; };

  const FluxFunction flux(FluxScheme::upwind);
  double worst = 0.0;

  for (MeshFamily family :
       {MeshFamily::cartesian, MeshFamily::triangular, MeshFamily::hexagonal}) {
    const Mesh mesh = generate_mesh(family, family == MeshFamily::hexagonal ? 3 : 2);
    for (int k = 0; k <= 3; ++k) {
      for (int cell : {0, mesh.n_cells() / 2, mesh.n_cells() - 1}) {
        const CellOperators ops = build_cell_operators(mesh, adv_data, flux, cell, k);
        Eigen::VectorXd q_coeffs = Eigen::VectorXd::LinSpaced(ops.basis_k1.dim(), -0.8, 1.2);
        auto q = [&](const Vec2& x) { return ops.basis_k1.values(x).dot(q_coeffs); };
        const Eigen::VectorXd v = interpolate_local(ops, q);
        const double scale = std::max(1.0, l2_norm_k1(ops, q_coeffs));

        // Reconstruction reproduces q.
        const Eigen::VectorXd rec_err = ops.reconstruction * v - q_coeffs;
        worst = std::max(worst, l2_norm_k1(ops, rec_err) / scale);

        // Stabilization annihilates the interpolate: its energy must vanish
        // relative to the full diffusive energy of the interpolate.
        const double energy = std::max(1e-30, std::abs(v.dot(ops.diffusion * v)));
        worst = std::max(worst, std::abs(v.dot(ops.diffusion_stab * v)) / energy);

        // Advective derivative is exact: G (I_T q) = beta . grad q.
        auto beta_grad_q = [&](const Vec2& x) {
          return (ops.basis_k1.gradients(x).transpose() * q_coeffs).dot(beta);
        };
        Eigen::VectorXd moments = Eigen::VectorXd::Zero(ops.layout.cell_dim);
        for (int iq = 0; iq < ops.cell_quad.size(); ++iq)
          moments += ops.cell_quad.weights[iq] * beta_grad_q(ops.cell_quad.points[iq]) *
                     ops.basis_k.values(ops.cell_quad.points[iq]);
        const Eigen::VectorXd expected = Eigen::LDLT<Eigen::MatrixXd>(ops.mass_k).solve(moments);
        const Eigen::VectorXd adv_err = ops.advective_derivative * v - expected;
        worst = std::max(worst,
                         std::sqrt(adv_err.dot(ops.mass_k * adv_err)) / scale);
      }
    }
  }
  std::ostringstream os;
  os << "worst relative defect " << worst << " (tolerance 1e-10)";
  detail = os.str();
  return worst < 1e-10;
}

// ---------------------------------------------------------------------------
// 2. Identities: A+ - A- = s on a log grid to 1e-12; the discrete
//    integration-by-parts residual below 1e-10 on cartesian(8) with the
//    rotational velocity; bounded norm-equivalence ratios across three
//    refinements.
bool identity_suite(std::string& detail) {
  double worst_flux = 0.0;
  for (FluxScheme scheme : {FluxScheme::centered, FluxScheme::upwind, FluxScheme::theta_upwind,
                            FluxScheme::scharfetter_gummel}) {
    const FluxFunction flux(scheme);
    for (double mag = 1e-6; mag <= 1e6; mag *= 2.0) {
      for (double s : {mag, -mag}) {
        const double defect = std::abs(flux.plus(s) - flux.minus(s) - s) /
                              std::max(1.0, std::abs(s));
        worst_flux = std::max(worst_flux, defect);
      }
    }
  }

  const TestProblem problem = uniform_diffusion_problem(1.0);
  const PhysicalData data = problem.physical();
  const Mesh mesh = generate_mesh(MeshFamily::cartesian, 8);
  double worst_ibp = 0.0;
  {
    const Discretization disc(mesh, data, 1, FluxFunction(FluxScheme::upwind));
    std::mt19937 rng(2024);
    std::normal_distribution<double> gauss;
    for (int s = 0; s < 8; ++s) {
      Eigen::VectorXd w(disc.n_dofs()), v(disc.n_dofs());
      for (int i = 0; i < w.size(); ++i) w(i) = gauss(rng);
      for (int i = 0; i < v.size(); ++i) v(i) = gauss(rng);
      worst_ibp = std::max(worst_ibp, ibp_residual(disc, w, v));
    }
  }

  // The local energy norm is equivalent to the gradient-plus-jumps form
  // with h-independent constants; sampled ratios must stay inside one fixed
  // band across all three refinements.
  double ratio_lo = std::numeric_limits<double>::infinity(), ratio_hi = 0.0;
  {
    std::mt19937 rng(7);
    std::normal_distribution<double> gauss;
    for (int n : {4, 8, 16}) {
      const Mesh m = generate_mesh(MeshFamily::triangular, n);
      const Discretization disc(m, data, 1, FluxFunction(FluxScheme::upwind));
      for (int c = 0; c < m.n_cells(); ++c)
        for (int s = 0; s < 3; ++s) {
          Eigen::VectorXd v(disc.local(c).layout.size());
          for (int i = 0; i < v.size(); ++i) v(i) = gauss(rng);
          const auto [lhs, rhs] = diffusive_norm_equivalence(disc, c, v);
          if (rhs > 1e-14) {
            ratio_lo = std::min(ratio_lo, lhs / rhs);
            ratio_hi = std::max(ratio_hi, lhs / rhs);
          }
        }
    }
  }
  const bool ratios_bounded = ratio_lo > 1e-2 && ratio_hi < 1e2;

  std::ostringstream os;
  os << "flux identity defect " << worst_flux << ", ibp residual " << worst_ibp
     << ", equivalence ratios in [" << ratio_lo << ", " << ratio_hi << "]";
  detail = os.str();
  return worst_flux < 1e-12 && worst_ibp < 1e-10 && ratios_bounded;
}

// ---------------------------------------------------------------------------
// 3. Coercivity: min over 1000 random vectors of a(v,v)/|v|_flat^2 >= zeta
//    for nu in {0, 1e-3, 1}, k in {0, 1}, penalty 4.
bool coercivity(std::string& detail) {
  double worst_margin = std::numeric_limits<double>::infinity();
  for (double nu : {0.0, 1e-3, 1.0}) {
    for (int k : {0, 1}) {
      const TestProblem problem = uniform_diffusion_problem(nu);
      const PhysicalData data = problem.physical();
      const Mesh mesh = generate_mesh(MeshFamily::triangular, 8);
      const Discretization disc(mesh, data, k, FluxFunction(FluxScheme::scharfetter_gummel));
      const NormWeights weights = compute_norm_weights(disc);
      const AssembledSystem sys = assemble(disc, 4.0);
      const StabilityReport report = stability_probe(disc, sys, weights, 1000);
      worst_margin = std::min(worst_margin, report.min_ratio - report.zeta);
      if (report.min_ratio < report.zeta) {
        std::ostringstream os;
        os << "nu=" << nu << " k=" << k << ": min ratio " << report.min_ratio << " < zeta "
           << report.zeta;
        detail = os.str();
        return false;
      }
    }
  }
  std::ostringstream os;
  os << "smallest margin above zeta: " << worst_margin;
  detail = os.str();
  return true;
}

std::vector<double> run_sharp_eocs(double nu, std::vector<double>* eocs_out) {
  RunConfig cfg;
  cfg.problem = "uniform_diffusion";
  cfg.nu = nu;
  cfg.orders = {0, 1, 2};
  cfg.family = MeshFamily::triangular;
  cfg.levels = {8, 16, 32, 64};
  cfg.flux = FluxScheme::scharfetter_gummel;
  cfg.sigma = 1.0;
  cfg.csv_prefix = "/tmp/hho_acceptance";
  std::ostringstream sink;
  const auto results = run_convergence_study(cfg, sink, false);
  std::vector<double> eocs;
  for (const auto& r : results) eocs.push_back(r.eoc_sharp);
  if (eocs_out) *eocs_out = eocs;
  return eocs;
}

std::vector<double> g_diffusive_eocs;

// 4. Diffusion-dominated convergence: sharp-norm EOC in [k+0.7, k+1.5].
bool convergence_diffusive(std::string& detail) {
  const std::vector<double> eocs = run_sharp_eocs(1.0, &g_diffusive_eocs);
  std::ostringstream os;
  bool ok = true;
  for (int k = 0; k <= 2; ++k) {
    os << "k=" << k << ": EOC " << eocs[k] << " ";
    if (eocs[k] < k + 0.7 || eocs[k] > k + 1.5) ok = false;
  }
  os << "(bands [k+0.7, k+1.5])";
  detail = os.str();
  return ok;
}

// 5. Advection-dominated convergence: EOC in [k+0.2, k+1.0], and the gain
//    from nu=0 to nu=1 lies in [0.2, 0.9] per order.
bool convergence_advective(std::string& detail) {
  if (g_diffusive_eocs.empty()) run_sharp_eocs(1.0, &g_diffusive_eocs);
  const std::vector<double> eocs = run_sharp_eocs(0.0, nullptr);
  std::ostringstream os;
  bool ok = true;
  for (int k = 0; k <= 2; ++k) {
    const double gain = g_diffusive_eocs[k] - eocs[k];
    os << "k=" << k << ": EOC " << eocs[k] << " gain " << gain << " ";
    if (eocs[k] < k + 0.2 || eocs[k] > k + 1.0) ok = false;
    if (gain < 0.2 || gain > 0.9) ok = false;
  }
  os << "(bands [k+0.2, k+1.0], gain [0.2, 0.9])";
  detail = os.str();
  return ok;
}

// ---------------------------------------------------------------------------
// 6. Locally degenerate case: monotone decay of the relative potential and
//    sharp errors, EOC >= k+0.2, and the discrete solution reproduces the
//    interface jump at the finest level within 10%.
bool degenerate_case(std::string& detail) {
  using std::numbers::pi;
  const TestProblem problem = locally_degenerate_problem();
  const PhysicalData data = problem.physical();
  const FluxFunction flux(FluxScheme::scharfetter_gummel);

  std::ostringstream os;
  bool ok = true;
  for (int k : {0, 1}) {
    std::vector<double> hs, sharp, l2;
    double worst_jump = 0.0;
    for (int n : {8, 16, 32, 64}) {
      const Mesh mesh = generate_mesh(MeshFamily::triangular, n, problem.domain);
      const Discretization disc(mesh, data, k, flux);
      const NormWeights weights = compute_norm_weights(disc);
      const DiscreteSolution sol = solve(disc, condense(assemble(disc, 1.0)));
      const ErrorReport err = compute_error_report(disc, sol, problem.exact, weights);
      hs.push_back(err.h);
      sharp.push_back(err.rel_sharp);
      l2.push_back(err.rel_l2_potential);

      if (n == 64) {
        const BoundaryClassification& cls = disc.classification();
        for (std::size_t i = 0; i < cls.interface_faces.size(); ++i) {
          if (cls.interface_side[i] != -1) continue;
          const int f = cls.interface_faces[i];
          const Face& F = mesh.faces[f];
          const int upper = cls.diffusive_cell[f];
          const int lower = upper == F.owner ? F.neighbor : F.owner;
          const Vec2 mid = F.midpoint;
          const double trace_up =
              disc.local(upper).basis_k.values(mid).dot(sol.cell_coeffs(disc, upper));
          const double trace_dn =
              disc.local(lower).basis_k.values(mid).dot(sol.cell_coeffs(disc, lower));
          const double exact_jump = 2.0 * pi * pi;
          worst_jump = std::max(worst_jump,
                                std::abs((trace_dn - trace_up) - exact_jump) / exact_jump);
        }
      }
    }
    bool monotone = true;
    for (std::size_t i = 1; i < sharp.size(); ++i)
      if (sharp[i] >= sharp[i - 1] || l2[i] >= l2[i - 1]) monotone = false;
    const double eoc = least_squares_slope(hs, sharp);
    os << "k=" << k << ": EOC " << eoc << ", jump defect " << worst_jump
       << (monotone ? "" : ", NOT monotone") << "; ";
    if (!monotone || eoc < k + 0.2 || worst_jump > 0.10) ok = false;
  }
  detail = os.str();
  return ok;
}

// ---------------------------------------------------------------------------
// 7. Flux-form equivalence at k=0: the condensed matrix matches the mimetic
//    flux assembly entrywise to 1e-11 with averaged Peclet numbers, strong
//    boundary conditions and no reaction.
bool hmm_equivalence(std::string& detail) {
  const TestProblem problem = uniform_diffusion_problem(1.0);
  PhysicalData data = problem.physical();
  data.reaction = nullptr;
  data.mu0 = 0.0;
  const FluxFunction flux(FluxScheme::scharfetter_gummel);

  double worst = 0.0;
  for (MeshFamily family : {MeshFamily::cartesian, MeshFamily::triangular}) {
    const Mesh mesh = generate_mesh(family, 4);
    DiscretizationOptions opts;
    opts.peclet_mode = PecletMode::face_averaged;
    const Discretization disc(mesh, data, 0, flux, opts);
    const CondensedSystem hho = condense(assemble(disc, 1.0, BoundaryMode::strong));
    const CondensedSystem hmm = condense(hmm_flux_system(mesh, data, flux));
    const Eigen::MatrixXd a = Eigen::MatrixXd(hho.matrix);
    const Eigen::MatrixXd b = Eigen::MatrixXd(hmm.matrix);
    worst = std::max(worst, (a - b).cwiseAbs().maxCoeff() / a.cwiseAbs().maxCoeff());
  }
  std::ostringstream os;
  os << "max entrywise mismatch " << worst << " (tolerance 1e-11)";
  detail = os.str();
  return worst < 1e-11;
}

// ---------------------------------------------------------------------------
// 8. Condensation oracle: condensed solve plus recovery matches the direct
//    uncondensed solve to 1e-10 relative on three small meshes, k = 0..2.
bool condensation_oracle(std::string& detail) {
  const TestProblem problem = uniform_diffusion_problem(1.0);
  const PhysicalData data = problem.physical();
  std::vector<Mesh> meshes;
  meshes.push_back(generate_mesh(MeshFamily::cartesian, 3));
  meshes.push_back(generate_mesh(MeshFamily::triangular, 2));
  meshes.push_back(generate_mesh(MeshFamily::hexagonal, 3));

  double worst = 0.0;
  for (const Mesh& mesh : meshes)
    for (int k : {0, 1, 2}) {
      const Discretization disc(mesh, data, k, FluxFunction(FluxScheme::scharfetter_gummel));
      const AssembledSystem sys = assemble(disc, 1.0);
      const DiscreteSolution direct = solve_uncondensed(disc, sys);
      const DiscreteSolution condensed = solve(disc, condense(sys));
      worst = std::max(worst, (direct.dofs - condensed.dofs).norm() /
                                  std::max(1.0, direct.dofs.norm()));
    }
  std::ostringstream os;
  os << "worst relative mismatch " << worst << " (tolerance 1e-10)";
  detail = os.str();
  return worst < 1e-10;
}

}  // namespace

int main() {
  const std::vector<std::pair<Criterion, double>> criteria = {
      {{"operator exactness (reconstruction / stabilization / advective derivative)",
        operator_exactness}, 10.0},
      {{"algebraic identities (flux profiles, integration by parts, norm equivalence)",
        identity_suite}, 120.0},
      {{"coercivity of the assembled form", coercivity}, 60.0},
      {{"convergence, diffusion-dominated", convergence_diffusive}, 600.0},
      {{"convergence, advection-dominated", convergence_advective}, 600.0},
      {{"locally degenerate diffusion (rates and interface jump)", degenerate_case}, 600.0},
      {{"flux-form equivalence at lowest order", hmm_equivalence}, 60.0},
      {{"static condensation against the direct solve", condensation_oracle}, 60.0},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& [criterion, budget] = criteria[i];
    std::string detail;
    bool ok = false;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      ok = criterion.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
      ok = false;
    }
    const double elapsed = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - t0).count();
    if (elapsed > budget) {
      ok = false;
      detail += " [exceeded the " + std::to_string(static_cast<int>(budget)) + " s budget]";
    }
    std::printf("%s criterion %zu: %s — %s (%.1f s)\n", ok ? "PASS" : "FAIL", i + 1,
                criterion.name.c_str(), detail.c_str(), elapsed);
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  else std::printf("all %zu criteria passed\n", criteria.size());
  return failures == 0 ? 0 : 1;
}
