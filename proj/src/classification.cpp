#include "hho/classification.hpp"

#include "hho/quadrature.hpp"

#include <stdexcept>
#include <string>

namespace hho {

BoundaryClassification classify(const Mesh& mesh, const PhysicalData& data, int quad_degree) {
  BoundaryClassification cls;
  cls.dirichlet_boundary.assign(mesh.n_faces(), 0);
  cls.diffusive_cell.resize(mesh.n_faces());

  // Scale for "the normal velocity vanishes identically on this face".
  double beta_scale = 0.0;

  std::vector<std::vector<double>> beta_n(mesh.n_faces());
  for (int f = 0; f < mesh.n_faces(); ++f) {
    const QuadratureRule quad = face_quadrature(mesh, f, quad_degree);
    beta_n[f].assign(quad.size(), 0.0);
    if (!data.velocity) continue;
    for (int q = 0; q < quad.size(); ++q) {
      beta_n[f][q] = data.velocity(quad.points[q]).dot(mesh.faces[f].normal);
      beta_scale = std::max(beta_scale, std::abs(beta_n[f][q]));
    }
  }
  const double tol = 1e-12 * (1.0 + beta_scale);

  for (int f = 0; f < mesh.n_faces(); ++f) {
    const Face& F = mesh.faces[f];
    const double nu_owner = data.nu_of(mesh, F.owner);

    if (F.is_boundary()) {
      cls.diffusive_cell[f] = F.owner;
      bool inflow = false;
      for (double bn : beta_n[f])
        if (bn < -tol) inflow = true;
      cls.dirichlet_boundary[f] = (nu_owner > 0.0 || inflow) ? 1 : 0;
    } else {
      const double nu_neighbor = data.nu_of(mesh, F.neighbor);
      cls.diffusive_cell[f] = nu_neighbor > nu_owner ? F.neighbor : F.owner;

      const double nu_min = std::min(nu_owner, nu_neighbor);
      const double nu_max = std::max(nu_owner, nu_neighbor);
      if (nu_min == 0.0 && nu_max > 0.0) {
        // Face on the diffusive/nondiffusive interface. Orient the interface
        // normal out of the diffusive side and require a single sign.
        const double flip = cls.diffusive_cell[f] == F.owner ? 1.0 : -1.0;
        bool pos = false, neg = false;
        for (double bn : beta_n[f]) {
          if (flip * bn > tol) pos = true;
          if (flip * bn < -tol) neg = true;
        }
        if (pos && neg)
          throw std::runtime_error("classify: face " + std::to_string(f) +
                                   " straddles the sign change of the normal velocity on the "
                                   "diffusive/nondiffusive interface");
        if (!pos && !neg)
          throw std::runtime_error("classify: normal velocity vanishes on interface face " +
                                   std::to_string(f));
        cls.interface_faces.push_back(f);
        cls.interface_side.push_back(pos ? +1 : -1);
      }
    }

    if (data.nu_of_face(mesh, f) == 0.0) {
      bool active = false;
      for (double bn : beta_n[f])
        if (std::abs(bn) > tol) active = true;
      // Interface faces were already screened above; for all other faces a
      // vanishing normal velocity means the face is penalized by nothing.
      if (!active)
        throw std::runtime_error("classify: face " + std::to_string(f) +
                                 " carries no diffusion and the normal velocity vanishes on it");
    }
  }
  return cls;
}

}  // namespace hho
