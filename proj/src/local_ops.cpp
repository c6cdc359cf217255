#include "hho/local_ops.hpp"

#include <stdexcept>
#include <string>

namespace hho {

CellBasis make_cell_basis(const Mesh& mesh, int cell, int degree,
                          const DiscretizationOptions& opts) {
  CellBasis basis(mesh, cell, degree);
  if (opts.orthonormalize_bases)
    basis.orthonormalize(cell_quadrature(mesh, cell, 2 * degree));
  return basis;
}

FaceCouplingWeights face_coupling_weights(const Mesh& mesh, const PhysicalData& data,
                                          const FluxFunction& flux, int cell, int local_face,
                                          PecletMode mode, const QuadratureRule& face_quad) {
  const Cell& T = mesh.cells[cell];
  const int face = T.faces[local_face];
  const Face& F = mesh.faces[face];
  const Vec2 n = mesh.outward_normal(cell, local_face);

  FaceCouplingWeights w;
  w.nu_face = data.nu_of_face(mesh, face);
  const int nq = face_quad.size();
  w.plus.resize(nq);
  w.minus.resize(nq);
  w.absval.resize(nq);

  Eigen::VectorXd beta_n = Eigen::VectorXd::Zero(nq);
  if (data.velocity)
    for (int q = 0; q < nq; ++q) beta_n(q) = data.velocity(face_quad.points[q]).dot(n);

  const double scale = w.nu_face / F.diameter;

  if (mode == PecletMode::face_averaged) {
    double mean = 0.0;
    for (int q = 0; q < nq; ++q) mean += face_quad.weights[q] * beta_n(q);
    mean /= F.measure;
    if (w.nu_face > 0.0) {
      w.averaged_peclet = F.diameter * mean / w.nu_face;
      w.plus.setConstant(scale * flux.plus(w.averaged_peclet));
      w.minus.setConstant(scale * flux.minus(w.averaged_peclet));
      w.absval.setConstant(scale * flux.abs(w.averaged_peclet));
    } else {
      w.plus.setConstant(std::max(mean, 0.0));
      w.minus.setConstant(std::max(-mean, 0.0));
      w.absval.setConstant(std::abs(mean));
    }
    return w;
  }

  for (int q = 0; q < nq; ++q) {
    if (w.nu_face > 0.0) {
      const double pe = F.diameter * beta_n(q) / w.nu_face;
      w.plus(q) = scale * flux.plus(pe);
      w.minus(q) = scale * flux.minus(pe);
      w.absval(q) = scale * flux.abs(pe);
    } else {
      w.plus(q) = std::max(beta_n(q), 0.0);
      w.minus(q) = std::max(-beta_n(q), 0.0);
      w.absval(q) = std::abs(beta_n(q));
    }
  }
  return w;
}

namespace {

Vec2 eval_velocity(const PhysicalData& data, const Vec2& x) {
  return data.velocity ? data.velocity(x) : Vec2::Zero();
}

double eval_reaction(const PhysicalData& data, const Vec2& x) {
  return data.reaction ? data.reaction(x) : 0.0;
}

}  // namespace

CellOperators build_cell_operators(const Mesh& mesh, const PhysicalData& data,
                                   const FluxFunction& flux, int cell, int k,
                                   const DiscretizationOptions& opts) {
  const Cell& T = mesh.cells[cell];
  const int qd = opts.effective_quad_degree(k);

  CellOperators ops;
  ops.cell = cell;
  ops.nu = data.nu_of(mesh, cell);
  if (ops.nu < 0.0)
    throw std::invalid_argument("build_cell_operators: negative diffusion on cell " +
                                std::to_string(cell));
  ops.layout = LocalDofLayout::make(k, static_cast<int>(T.faces.size()));
  ops.basis_k = make_cell_basis(mesh, cell, k, opts);
  ops.basis_k1 = make_cell_basis(mesh, cell, k + 1, opts);
  ops.cell_quad = cell_quadrature(mesh, cell, qd);
  const int N = ops.layout.size();
  const int dim_k = ops.layout.cell_dim;
  const int dim_k1 = ops.basis_k1.dim();

  ops.face_bases.reserve(T.faces.size());
  ops.face_quads.reserve(T.faces.size());
  for (int f : T.faces) {
    ops.face_bases.emplace_back(mesh, f, k);
    ops.face_quads.push_back(face_quadrature(mesh, f, qd));
  }

  // Cell gram matrices.
  const Eigen::MatrixXd phi_k = ops.basis_k.values_at(ops.cell_quad);
  const Eigen::MatrixXd phi_k1 = ops.basis_k1.values_at(ops.cell_quad);
  const auto grad_k = ops.basis_k.gradients_at(ops.cell_quad);
  const auto grad_k1 = ops.basis_k1.gradients_at(ops.cell_quad);
  ops.mass_k = gram_matrix(phi_k, phi_k, ops.cell_quad.weights);
  const Eigen::MatrixXd mass_k1 = gram_matrix(phi_k1, phi_k1, ops.cell_quad.weights);
  const Eigen::MatrixXd stiff_k1 = gram_matrix(grad_k1[0], grad_k1[0], ops.cell_quad.weights) +
                                   gram_matrix(grad_k1[1], grad_k1[1], ops.cell_quad.weights);
  // int_T phi^k (phi^{k+1})^T, and the embedding of P^k into the P^{k+1} basis.
  const Eigen::MatrixXd cross_mass = gram_matrix(phi_k, phi_k1, ops.cell_quad.weights);
  Eigen::LDLT<Eigen::MatrixXd> mass_k1_ldlt(mass_k1);
  Eigen::LDLT<Eigen::MatrixXd> mass_k_ldlt(ops.mass_k);
  if (mass_k1_ldlt.info() != Eigen::Success || mass_k_ldlt.info() != Eigen::Success)
    throw std::runtime_error("build_cell_operators: singular cell mass matrix on cell " +
                             std::to_string(cell));
  const Eigen::MatrixXd embed = mass_k1_ldlt.solve(cross_mass.transpose());  // dim_k1 x dim_k

  // Per-face evaluation tables.
  std::vector<Eigen::MatrixXd> face_phi(T.faces.size());        // face basis at face quad
  std::vector<Eigen::MatrixXd> cell_phi_k_face(T.faces.size()); // cell P^k at face quad
  std::vector<Eigen::MatrixXd> grad_k1_n_face(T.faces.size());  // grad P^{k+1} . n_TF
  std::vector<Eigen::MatrixXd> cell_phi_k1_face(T.faces.size());
  for (std::size_t i = 0; i < T.faces.size(); ++i) {
    const QuadratureRule& fq = ops.face_quads[i];
    const Vec2 n = mesh.outward_normal(cell, static_cast<int>(i));
    face_phi[i] = ops.face_bases[i].values_at(fq);
    cell_phi_k_face[i].resize(fq.size(), dim_k);
    cell_phi_k1_face[i].resize(fq.size(), dim_k1);
    grad_k1_n_face[i].resize(fq.size(), dim_k1);
    for (int q = 0; q < fq.size(); ++q) {
      cell_phi_k_face[i].row(q) = ops.basis_k.values(fq.points[q]).transpose();
      cell_phi_k1_face[i].row(q) = ops.basis_k1.values(fq.points[q]).transpose();
      grad_k1_n_face[i].row(q) = (ops.basis_k1.gradients(fq.points[q]) * n).transpose();
    }
  }

  // Potential reconstruction: solve the Neumann-type problem in P^{k+1},
  // closing the constant mode with the mean-value condition.
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(dim_k1, N);
  {
    const Eigen::MatrixXd mixed_stiff =
        gram_matrix(grad_k1[0], grad_k[0], ops.cell_quad.weights) +
        gram_matrix(grad_k1[1], grad_k[1], ops.cell_quad.weights);
    rhs.block(0, 0, dim_k1, dim_k) = mixed_stiff;
    for (std::size_t i = 0; i < T.faces.size(); ++i) {
      const QuadratureRule& fq = ops.face_quads[i];
      rhs.block(0, ops.layout.face_offset(static_cast<int>(i)), dim_k1, ops.layout.face_dim) +=
          gram_matrix(grad_k1_n_face[i], face_phi[i], fq.weights);
      rhs.block(0, 0, dim_k1, dim_k) -=
          gram_matrix(grad_k1_n_face[i], cell_phi_k_face[i], fq.weights);
    }

    Eigen::MatrixXd lhs = stiff_k1;
    Eigen::VectorXd moments_k1(dim_k1);
    for (int j = 0; j < dim_k1; ++j) moments_k1(j) = phi_k1.col(j).dot(
        Eigen::Map<const Eigen::VectorXd>(ops.cell_quad.weights.data(), ops.cell_quad.size()));
    lhs.row(0) = moments_k1.transpose();
    Eigen::VectorXd moments_k(dim_k);
    for (int j = 0; j < dim_k; ++j) moments_k(j) = phi_k.col(j).dot(
        Eigen::Map<const Eigen::VectorXd>(ops.cell_quad.weights.data(), ops.cell_quad.size()));
    rhs.row(0).setZero();
    rhs.block(0, 0, 1, dim_k) = moments_k.transpose();

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(lhs);
    if (lu.rcond() < 1e-14)
      throw std::runtime_error("build_cell_operators: singular reconstruction system on cell " +
                               std::to_string(cell));
    ops.reconstruction = lu.solve(rhs);
  }

  // High-order correction: v_T + (p v - pi^k_T p v), expressed in P^{k+1}.
  {
    const Eigen::MatrixXd proj_k = mass_k_ldlt.solve(cross_mass);  // P^{k+1} -> P^k coefficients
    Eigen::MatrixXd cell_pad = Eigen::MatrixXd::Zero(dim_k1, N);
    cell_pad.block(0, 0, dim_k1, dim_k) = embed;
    ops.correction = cell_pad + ops.reconstruction - embed * (proj_k * ops.reconstruction);
  }

  // Diffusion: Galerkin part on the reconstruction plus the face penalty
  // built on the corrected potential.
  {
    ops.diffusion_stab = Eigen::MatrixXd::Zero(N, N);
    for (std::size_t i = 0; i < T.faces.size(); ++i) {
      const Face& F = mesh.faces[T.faces[i]];
      const QuadratureRule& fq = ops.face_quads[i];
      const Eigen::MatrixXd mass_f = gram_matrix(face_phi[i], face_phi[i], fq.weights);
      const Eigen::MatrixXd trace_f = gram_matrix(face_phi[i], cell_phi_k1_face[i], fq.weights);
      Eigen::LDLT<Eigen::MatrixXd> mass_f_ldlt(mass_f);
      // pi^k_F of the corrected potential, minus the face unknown itself.
      Eigen::MatrixXd diff = -mass_f_ldlt.solve(trace_f) * ops.correction;
      diff.block(0, ops.layout.face_offset(static_cast<int>(i)), ops.layout.face_dim,
                 ops.layout.face_dim) += Eigen::MatrixXd::Identity(ops.layout.face_dim,
                                                                   ops.layout.face_dim);
      ops.diffusion_stab += (ops.nu / F.diameter) * diff.transpose() * mass_f * diff;
    }
    ops.diffusion = ops.nu * ops.reconstruction.transpose() * stiff_k1 * ops.reconstruction +
                    ops.diffusion_stab;
  }

  // Divergence check: the scheme is built under div(beta) = 0, so the
  // boundary flux of beta must vanish on every cell. An elevated quadrature
  // degree keeps the check meaningful for nonpolynomial velocities.
  if (data.velocity) {
    double flux_sum = 0.0, beta_sup = 0.0, perimeter = 0.0;
    for (std::size_t i = 0; i < T.faces.size(); ++i) {
      const QuadratureRule fq = face_quadrature(mesh, T.faces[i], qd + 6);
      const Vec2 n = mesh.outward_normal(cell, static_cast<int>(i));
      for (int q = 0; q < fq.size(); ++q) {
        const Vec2 b = data.velocity(fq.points[q]);
        flux_sum += fq.weights[q] * b.dot(n);
        beta_sup = std::max(beta_sup, b.norm());
      }
      perimeter += mesh.faces[T.faces[i]].measure;
    }
    if (std::abs(flux_sum) > opts.divergence_tol * (1.0 + beta_sup) * perimeter)
      throw std::runtime_error(
          "build_cell_operators: velocity field has nonvanishing divergence on cell " +
          std::to_string(cell));
  }

  // Discrete advective derivative.
  {
    Eigen::MatrixXd badv = Eigen::MatrixXd::Zero(dim_k, N);
    Eigen::MatrixXd beta_grad(ops.cell_quad.size(), dim_k);  // beta . grad phi^k at cell points
    for (int q = 0; q < ops.cell_quad.size(); ++q) {
      const Vec2 b = eval_velocity(data, ops.cell_quad.points[q]);
      beta_grad.row(q) = b.x() * grad_k[0].row(q) + b.y() * grad_k[1].row(q);
    }
    badv.block(0, 0, dim_k, dim_k) = -gram_matrix(beta_grad, phi_k, ops.cell_quad.weights);
    for (std::size_t i = 0; i < T.faces.size(); ++i) {
      const QuadratureRule& fq = ops.face_quads[i];
      const Vec2 n = mesh.outward_normal(cell, static_cast<int>(i));
      Eigen::VectorXd beta_n(fq.size());
      for (int q = 0; q < fq.size(); ++q)
        beta_n(q) = eval_velocity(data, fq.points[q]).dot(n) * fq.weights[q];
      badv.block(0, ops.layout.face_offset(static_cast<int>(i)), dim_k, ops.layout.face_dim) +=
          cell_phi_k_face[i].transpose() * beta_n.asDiagonal() * face_phi[i];
    }
    ops.advective_derivative = mass_k_ldlt.solve(badv);
  }

  // Flux-stabilized advection-reaction form.
  {
    for (std::size_t i = 0; i < T.faces.size(); ++i) {
      const int face = T.faces[i];
      if (!flux.robust_at_infinite_peclet() && data.nu_of_face(mesh, face) == 0.0)
        throw std::runtime_error(
            "build_cell_operators: the centered flux cannot be used on diffusion-free faces "
            "(cell " + std::to_string(cell) + ", face " + std::to_string(face) + ")");
      ops.coupling.push_back(face_coupling_weights(mesh, data, flux, cell, static_cast<int>(i),
                                                   opts.peclet_mode, ops.face_quads[i]));
    }

    Eigen::MatrixXd reaction_mass(dim_k, dim_k);
    {
      Eigen::VectorXd mu_w(ops.cell_quad.size());
      for (int q = 0; q < ops.cell_quad.size(); ++q)
        mu_w(q) = eval_reaction(data, ops.cell_quad.points[q]) * ops.cell_quad.weights[q];
      reaction_mass = phi_k.transpose() * mu_w.asDiagonal() * phi_k;
    }

    ops.adv_stab_plus = Eigen::MatrixXd::Zero(N, N);
    ops.adv_stab_minus = Eigen::MatrixXd::Zero(N, N);
    for (std::size_t i = 0; i < T.faces.size(); ++i) {
      const QuadratureRule& fq = ops.face_quads[i];
      Eigen::MatrixXd jump = Eigen::MatrixXd::Zero(fq.size(), N);  // v_F - v_T at face points
      jump.block(0, 0, fq.size(), dim_k) = -cell_phi_k_face[i];
      jump.block(0, ops.layout.face_offset(static_cast<int>(i)), fq.size(),
                 ops.layout.face_dim) = face_phi[i];
      Eigen::VectorXd wp(fq.size()), wm(fq.size());
      for (int q = 0; q < fq.size(); ++q) {
        wp(q) = fq.weights[q] * ops.coupling[i].plus(q);
        wm(q) = fq.weights[q] * ops.coupling[i].minus(q);
      }
      ops.adv_stab_plus += jump.transpose() * wp.asDiagonal() * jump;
      ops.adv_stab_minus += jump.transpose() * wm.asDiagonal() * jump;
    }

    Eigen::MatrixXd cell_select = Eigen::MatrixXd::Zero(dim_k, N);
    cell_select.block(0, 0, dim_k, dim_k) = Eigen::MatrixXd::Identity(dim_k, dim_k);
    ops.advection_reaction = -ops.advective_derivative.transpose() * ops.mass_k * cell_select +
                             cell_select.transpose() * reaction_mass * cell_select +
                             ops.adv_stab_minus;
  }

  return ops;
}

}  // namespace hho
