#include "hho/analysis.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace hho {

NormWeights compute_norm_weights(const Discretization& disc) {
  const Mesh& mesh = disc.mesh();
  const PhysicalData& data = disc.data();
  NormWeights w;
  w.mu0 = data.mu0;

  auto jacobian_sup = [&](const Vec2& x, double h) {
    if (data.velocity_jacobian) {
      return data.velocity_jacobian(x).rowwise().norm().maxCoeff();
    }
    if (!data.velocity) return 0.0;
    const double eps = 1e-6 * h;
    const Vec2 dx = (data.velocity(x + Vec2(eps, 0)) - data.velocity(x - Vec2(eps, 0))) / (2 * eps);
    const Vec2 dy = (data.velocity(x + Vec2(0, eps)) - data.velocity(x - Vec2(0, eps))) / (2 * eps);
    return std::max(Vec2(dx.x(), dy.x()).norm(), Vec2(dx.y(), dy.y()).norm());
  };

  std::vector<double> cell_beta_sup(mesh.n_cells(), 0.0);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const CellOperators& ops = disc.local(c);
    const Cell& T = mesh.cells[c];
    auto sample = [&](const Vec2& x) {
      if (data.velocity) cell_beta_sup[c] = std::max(cell_beta_sup[c], data.velocity(x).norm());
      w.lipschitz = std::max(w.lipschitz, jacobian_sup(x, T.diameter));
      if (data.reaction) w.mu_sup = std::max(w.mu_sup, std::abs(data.reaction(x)));
    };
    for (const Vec2& x : ops.cell_quad.points) sample(x);
    for (int v : T.vertices) sample(mesh.vertices[v]);
    w.beta_sup = std::max(w.beta_sup, cell_beta_sup[c]);
  }

  const double denom = std::max(w.mu_sup, w.lipschitz);
  if (denom <= 0.0)
    throw std::runtime_error("compute_norm_weights: both reaction and velocity variation vanish; "
                             "the reference time is undefined");
  w.tau = 1.0 / denom;

  if (w.beta_sup > 0.0)
    for (int c = 0; c < mesh.n_cells(); ++c) {
      const double h = mesh.cells[c].diameter;
      if (h * w.lipschitz > w.beta_sup || h * w.mu0 > w.beta_sup)
        w.advective_resolution_ok = false;
    }
  return w;
}

DiscreteNorms compute_norms(const Discretization& disc, const Eigen::VectorXd& dofs,
                            const NormWeights& weights) {
  const Mesh& mesh = disc.mesh();
  const PhysicalData& data = disc.data();
  DiscreteNorms out;

  double nu2 = 0.0, nu_bnd2 = 0.0, adv2 = 0.0, adv_bnd2 = 0.0, gbeta2 = 0.0;

  for (int c = 0; c < mesh.n_cells(); ++c) {
    const CellOperators& ops = disc.local(c);
    const Eigen::VectorXd v = disc.gather_local(dofs, c);

    nu2 += v.dot(ops.diffusion * v);
    adv2 += 0.5 * v.dot((ops.adv_stab_plus + ops.adv_stab_minus) * v);
    const Eigen::VectorXd vT = v.head(ops.layout.cell_dim);
    adv2 += (1.0 / weights.tau) * vT.dot(ops.mass_k * vT);

    if (weights.beta_sup > 0.0) {
      const Eigen::VectorXd g = ops.advective_derivative * v;
      gbeta2 += mesh.cells[c].diameter / weights.beta_sup * g.dot(ops.mass_k * g);
    }

    const Cell& T = mesh.cells[c];
    for (std::size_t i = 0; i < T.faces.size(); ++i) {
      const int f = T.faces[i];
      if (!mesh.faces[f].is_boundary()) continue;
      const QuadratureRule& fq = ops.face_quads[i];
      const Eigen::MatrixXd face_phi = ops.face_bases[i].values_at(fq);
      const Eigen::VectorXd vF =
          v.segment(ops.layout.face_offset(static_cast<int>(i)), ops.layout.face_dim);
      const Eigen::VectorXd vals = face_phi * vF;
      const double nu_f = data.nu_of_face(mesh, f);
      for (int q = 0; q < fq.size(); ++q) {
        nu_bnd2 += fq.weights[q] * (nu_f / mesh.faces[f].diameter) * vals(q) * vals(q);
        adv_bnd2 += 0.5 * fq.weights[q] * ops.coupling[i].absval(q) * vals(q) * vals(q);
      }
    }
  }

  out.diffusive_boundary = std::sqrt(nu_bnd2);
  out.advective_boundary = std::sqrt(adv_bnd2);
  out.diffusive = std::sqrt(nu2 + nu_bnd2);
  out.advective = std::sqrt(adv2 + adv_bnd2);
  out.flat = std::sqrt(nu2 + nu_bnd2 + adv2 + adv_bnd2);
  out.advective_derivative = std::sqrt(gbeta2);
  out.sharp = std::sqrt(out.flat * out.flat + gbeta2);
  return out;
}

Eigen::VectorXd interpolate(const Discretization& disc, const SidedScalarField& u) {
  const Mesh& mesh = disc.mesh();
  Eigen::VectorXd dofs = Eigen::VectorXd::Zero(disc.n_dofs());

  for (int c = 0; c < mesh.n_cells(); ++c) {
    const CellOperators& ops = disc.local(c);
    const int tag = mesh.cells[c].subdomain;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(ops.layout.cell_dim);
    for (int q = 0; q < ops.cell_quad.size(); ++q)
      b += ops.cell_quad.weights[q] * u(ops.cell_quad.points[q], tag) *
           ops.basis_k.values(ops.cell_quad.points[q]);
    dofs.segment(disc.cell_offset(c), disc.cell_dim()) =
        Eigen::LDLT<Eigen::MatrixXd>(ops.mass_k).solve(b);
  }

  const BoundaryClassification& cls = disc.classification();
  for (int f = 0; f < mesh.n_faces(); ++f) {
    const int side_cell = cls.diffusive_cell[f];
    const int tag = mesh.cells[side_cell].subdomain;
    const int local = mesh.local_face_index(side_cell, f);
    const CellOperators& ops = disc.local(side_cell);
    const QuadratureRule& fq = ops.face_quads[local];
    const Eigen::MatrixXd face_phi = ops.face_bases[local].values_at(fq);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(disc.face_dim());
    for (int q = 0; q < fq.size(); ++q)
      b += fq.weights[q] * u(fq.points[q], tag) * face_phi.row(q).transpose();
    const Eigen::MatrixXd M = gram_matrix(face_phi, face_phi, fq.weights);
    dofs.segment(disc.face_offset(f), disc.face_dim()) =
        Eigen::LDLT<Eigen::MatrixXd>(M).solve(b);
  }
  return dofs;
}

ErrorReport compute_error_report(const Discretization& disc, const DiscreteSolution& solution,
                                 const SidedScalarField& exact, const NormWeights& weights) {
  const Eigen::VectorXd uhat = interpolate(disc, exact);
  const Eigen::VectorXd diff = uhat - solution.dofs;

  const DiscreteNorms err = compute_norms(disc, diff, weights);
  const DiscreteNorms ref = compute_norms(disc, uhat, weights);

  auto l2_potential = [&](const Eigen::VectorXd& v) {
    double acc = 0.0;
    for (int c = 0; c < disc.mesh().n_cells(); ++c) {
      const Eigen::VectorXd vT = v.segment(disc.cell_offset(c), disc.cell_dim());
      acc += vT.dot(disc.local(c).mass_k * vT);
    }
    return std::sqrt(acc);
  };

  ErrorReport report;
  report.h = disc.mesh().meshsize();
  report.err_sharp = err.sharp;
  report.err_flat = err.flat;
  report.err_diffusive = err.diffusive;
  report.err_advective = err.advective;
  report.err_diffusive_boundary = err.diffusive_boundary;
  report.err_advective_boundary = err.advective_boundary;
  report.err_l2_potential = l2_potential(diff);

  const double ref_l2 = l2_potential(uhat);
  if (ref.sharp <= 0.0 || ref_l2 <= 0.0)
    throw std::runtime_error("compute_error_report: exact solution is identically zero");
  report.rel_sharp = err.sharp / ref.sharp;
  report.rel_flat = err.flat / ref.flat;
  report.rel_l2_potential = report.err_l2_potential / ref_l2;
  return report;
}

std::vector<double> eoc_slopes(const std::vector<double>& h, const std::vector<double>& errors) {
  if (h.size() != errors.size() || h.size() < 2)
    throw std::invalid_argument("eoc_slopes: need at least two (h, error) pairs");
  std::vector<double> slopes;
  for (std::size_t i = 0; i + 1 < h.size(); ++i) {
    if (!(h[i] > h[i + 1])) throw std::invalid_argument("eoc_slopes: h must be strictly decreasing");
    if (!(errors[i] > 0.0 && errors[i + 1] > 0.0))
      throw std::invalid_argument("eoc_slopes: errors must be positive");
    slopes.push_back(std::log(errors[i] / errors[i + 1]) / std::log(h[i] / h[i + 1]));
  }
  return slopes;
}

double least_squares_slope(const std::vector<double>& h, const std::vector<double>& errors) {
  eoc_slopes(h, errors);  // validates the input
  const std::size_t n = h.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(h[i]);
    const double y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double ibp_residual(const Discretization& disc, const Eigen::VectorXd& w,
                    const Eigen::VectorXd& v) {
  const Mesh& mesh = disc.mesh();
  const PhysicalData& data = disc.data();

  double cell_terms = 0.0, jump_terms = 0.0, boundary_terms = 0.0, magnitude = 0.0;

  for (int c = 0; c < mesh.n_cells(); ++c) {
    const CellOperators& ops = disc.local(c);
    const Eigen::VectorXd wl = disc.gather_local(w, c);
    const Eigen::VectorXd vl = disc.gather_local(v, c);
    const Eigen::VectorXd gw = ops.advective_derivative * wl;
    const Eigen::VectorXd gv = ops.advective_derivative * vl;
    const Eigen::VectorXd wT = wl.head(ops.layout.cell_dim);
    const Eigen::VectorXd vT = vl.head(ops.layout.cell_dim);
    const double t = gw.dot(ops.mass_k * vT) + wT.dot(ops.mass_k * gv);
    cell_terms += t;
    magnitude += std::abs(t);

    const Cell& T = mesh.cells[c];
    for (std::size_t i = 0; i < T.faces.size(); ++i) {
      const QuadratureRule& fq = ops.face_quads[i];
      const Eigen::MatrixXd face_phi = ops.face_bases[i].values_at(fq);
      const Vec2 n = mesh.outward_normal(c, static_cast<int>(i));
      const Eigen::VectorXd wF =
          wl.segment(ops.layout.face_offset(static_cast<int>(i)), ops.layout.face_dim);
      const Eigen::VectorXd vF =
          vl.segment(ops.layout.face_offset(static_cast<int>(i)), ops.layout.face_dim);
      double t2 = 0.0;
      for (int q = 0; q < fq.size(); ++q) {
        const double beta_n = data.velocity(fq.points[q]).dot(n);
        const double wjump = face_phi.row(q).dot(wF) - ops.basis_k.values(fq.points[q]).dot(wT);
        const double vjump = face_phi.row(q).dot(vF) - ops.basis_k.values(fq.points[q]).dot(vT);
        t2 += fq.weights[q] * beta_n * wjump * vjump;
      }
      jump_terms += t2;
      magnitude += std::abs(t2);

      if (mesh.faces[T.faces[i]].is_boundary()) {
        double t3 = 0.0;
        for (int q = 0; q < fq.size(); ++q) {
          const double beta_n = data.velocity(fq.points[q]).dot(n);
          t3 += fq.weights[q] * beta_n * face_phi.row(q).dot(wF) * face_phi.row(q).dot(vF);
        }
        boundary_terms += t3;
        magnitude += std::abs(t3);
      }
    }
  }

  return std::abs(cell_terms + jump_terms - boundary_terms) / std::max(1.0, magnitude);
}

StabilityReport stability_probe(const Discretization& disc, const AssembledSystem& system,
                                const NormWeights& weights, int samples, unsigned seed) {
  if (system.boundary_mode != BoundaryMode::weak)
    throw std::invalid_argument("stability_probe: requires the weakly enforced system");

  StabilityReport report;
  report.zeta = weights.zeta();
  report.samples = samples;
  report.min_ratio = std::numeric_limits<double>::infinity();

  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const bool has_velocity = static_cast<bool>(disc.data().velocity);
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd v(disc.n_dofs());
    for (int i = 0; i < v.size(); ++i) v(i) = gauss(rng);
    const double energy = v.dot(system.matrix * v);
    const DiscreteNorms norms = compute_norms(disc, v, weights);
    if (norms.flat > 0.0)
      report.min_ratio = std::min(report.min_ratio, energy / (norms.flat * norms.flat));

    if (has_velocity && s < 16) {
      // A handful of pairs suffices for the integration-by-parts check.
      Eigen::VectorXd u(disc.n_dofs());
      for (int i = 0; i < u.size(); ++i) u(i) = gauss(rng);
      report.max_ibp_residual = std::max(report.max_ibp_residual, ibp_residual(disc, v, u));
    }
  }
  return report;
}

std::pair<double, double> diffusive_norm_equivalence(const Discretization& disc, int cell,
                                                     const Eigen::VectorXd& local_dofs) {
  const CellOperators& ops = disc.local(cell);
  const Mesh& mesh = disc.mesh();
  const Cell& T = mesh.cells[cell];
  const double lhs = local_dofs.dot(ops.diffusion * local_dofs);

  const Eigen::VectorXd vT = local_dofs.head(ops.layout.cell_dim);
  const auto grads = ops.basis_k.gradients_at(ops.cell_quad);
  double rhs = 0.0;
  for (int q = 0; q < ops.cell_quad.size(); ++q) {
    const double gx = grads[0].row(q).dot(vT);
    const double gy = grads[1].row(q).dot(vT);
    rhs += ops.cell_quad.weights[q] * ops.nu * (gx * gx + gy * gy);
  }
  for (std::size_t i = 0; i < T.faces.size(); ++i) {
    const QuadratureRule& fq = ops.face_quads[i];
    const Eigen::MatrixXd face_phi = ops.face_bases[i].values_at(fq);
    const Eigen::VectorXd vF =
        local_dofs.segment(ops.layout.face_offset(static_cast<int>(i)), ops.layout.face_dim);
    for (int q = 0; q < fq.size(); ++q) {
      const double jump = face_phi.row(q).dot(vF) - ops.basis_k.values(fq.points[q]).dot(vT);
      rhs += fq.weights[q] * (ops.nu / T.diameter) * jump * jump;
    }
  }
  return {lhs, rhs};
}

}  // namespace hho
