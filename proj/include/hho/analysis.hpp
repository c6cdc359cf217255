#pragma once

#include "hho/assembly.hpp"

#include <optional>

namespace hho {

/// Reference velocity/time constants entering the advection-reaction norm.
/// Estimated by sampling at quadrature points and vertices; exact when the
/// data provides the velocity Jacobian.
struct NormWeights {
  double beta_sup = 0.0;    ///< max over cells of the sup of |beta|
  double lipschitz = 0.0;   ///< max over cells/components of the sup of |grad beta_i|
  double mu_sup = 0.0;
  double mu0 = 0.0;
  double tau = 0.0;         ///< 1 / max(mu_sup, lipschitz)
  bool advective_resolution_ok = true;  ///< h_T L <= beta_sup and h_T mu0 <= beta_sup per cell

  double zeta() const { return std::min(0.5, tau * mu0); }
};

NormWeights compute_norm_weights(const Discretization& disc);

/// The discrete (semi)norms of a global DOF vector.
struct DiscreteNorms {
  double diffusive = 0.0;            ///< energy norm including its boundary seminorm
  double diffusive_boundary = 0.0;
  double advective = 0.0;            ///< flux-weighted jump + scaled cell L2, with boundary part
  double advective_boundary = 0.0;
  double flat = 0.0;
  double sharp = 0.0;
  double advective_derivative = 0.0; ///< sqrt(sum_T h_T ||G v||^2 / beta_sup); 0 if beta == 0
};

DiscreteNorms compute_norms(const Discretization& disc, const Eigen::VectorXd& dofs,
                            const NormWeights& weights);

/// Interpolate a (possibly two-valued) exact solution: cell components are
/// L2 projections, face components take the trace from the cell with
/// maximal diffusion, so that on the nondiffusive side of the interface the
/// face unknowns follow the diffusive branch.
Eigen::VectorXd interpolate(const Discretization& disc, const SidedScalarField& u);

struct ErrorReport {
  double h = 0.0;
  double err_sharp = 0.0, err_flat = 0.0;
  double err_diffusive = 0.0, err_advective = 0.0;
  double err_diffusive_boundary = 0.0, err_advective_boundary = 0.0;
  double err_l2_potential = 0.0;
  double rel_sharp = 0.0, rel_flat = 0.0, rel_l2_potential = 0.0;
};

/// Discrete errors of a solved state against the interpolate of the exact
/// solution; relative errors are normalized by the same norm of the
/// interpolate. Throws if the exact solution is identically zero.
ErrorReport compute_error_report(const Discretization& disc, const DiscreteSolution& solution,
                                 const SidedScalarField& exact, const NormWeights& weights);

/// Pairwise experimental orders of convergence log(e_i/e_{i+1})/log(h_i/h_{i+1}).
std::vector<double> eoc_slopes(const std::vector<double>& h, const std::vector<double>& errors);

/// Least-squares slope of log(error) against log(h).
double least_squares_slope(const std::vector<double>& h, const std::vector<double>& errors);

struct StabilityReport {
  double min_ratio = 0.0;   ///< min over samples of a_h(v,v) / ||v||_flat^2
  double zeta = 0.0;        ///< theoretical coercivity constant min(1/2, tau mu0)
  double max_ibp_residual = 0.0;
  int samples = 0;
};

/// Samples random DOF vectors and reports the worst coercivity ratio of the
/// assembled form together with the discrete integration-by-parts residual.
StabilityReport stability_probe(const Discretization& disc, const AssembledSystem& system,
                                const NormWeights& weights, int samples, unsigned seed = 42);

/// Residual of the discrete integration-by-parts identity for a pair of
/// DOF vectors, normalized by the magnitude of its terms.
double ibp_residual(const Discretization& disc, const Eigen::VectorXd& w,
                    const Eigen::VectorXd& v);

/// Left- and right-hand side of the local norm-equivalence bound: the local
/// diffusive energy norm squared vs the explicit gradient-plus-jumps form.
std::pair<double, double> diffusive_norm_equivalence(const Discretization& disc, int cell,
                                                     const Eigen::VectorXd& local_dofs);

}  // namespace hho
