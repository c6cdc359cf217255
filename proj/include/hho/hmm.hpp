#pragma once

#include "hho/assembly.hpp"

namespace hho {

/// Assembles the lowest-order hybrid mixed mimetic scheme in flux-balance /
/// flux-continuity form: one unknown per cell and per interior face,
/// diffusive fluxes with diagonal stabilization weighted by nu_T |F| / h_F,
/// advective fluxes built from the A-profiles at the face-averaged Peclet
/// number, homogeneous strong boundary conditions. Requires positive
/// diffusion everywhere and no reaction. The returned system uses the same
/// layout conventions as assemble() with k = 0, so condense() applies
/// unchanged; it serves as an independent oracle for the k = 0 scheme.
AssembledSystem hmm_flux_system(const Mesh& mesh, const PhysicalData& data,
                                const FluxFunction& flux, int quad_degree = -1);

/// Total numerical flux (diffusive + advective) of a solved state through
/// each face of each cell; fluxes[c][i] belongs to local face i of cell c.
/// Used to check the flux balance and conservativity identities.
std::vector<std::vector<double>> hmm_fluxes(const Mesh& mesh, const PhysicalData& data,
                                            const FluxFunction& flux,
                                            const Eigen::VectorXd& cell_values,
                                            const Eigen::VectorXd& face_values,
                                            int quad_degree = -1);

}  // namespace hho
