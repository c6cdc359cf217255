#include "hho/analysis.hpp"
#include "hho/hmm.hpp"
#include "hho/problems.hpp"
#include "hho/runner.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace hho;

namespace {

Domain domain_from_string(const std::string& name) {
  if (name == "unit_square") return Domain::unit_square();
  if (name == "square_ring") return Domain::square_ring();
  throw std::invalid_argument("unknown domain: " + name + " (unit_square or square_ring)");
}

py::dict validate_dict(const Mesh& mesh) {
  const ValidationReport r = validate(mesh);
  py::dict d;
  d["worst_face_ratio"] = r.worst_face_ratio;
  d["regularity_estimate"] = r.regularity_estimate;
  d["max_faces_per_cell"] = r.max_faces_per_cell;
  d["min_cell_measure"] = r.min_cell_measure;
  d["total_measure"] = r.total_measure;
  d["all_star_shaped"] = r.all_star_shaped;
  return d;
}

struct SolveOutput {
  ErrorReport error;
  double residual = 0.0;
  long n_face_dofs = 0;
  double stability_ratio = 0.0;
  double zeta = 0.0;
};

SolveOutput solve_on_mesh(const TestProblem& problem, const Mesh& mesh, int k,
                          const std::string& flux_name, double sigma,
                          const std::string& peclet, bool probe) {
  const PhysicalData data = problem.physical();
  DiscretizationOptions opts;
  opts.peclet_mode =
      peclet == "face_averaged" ? PecletMode::face_averaged : PecletMode::pointwise;
  const Discretization disc(mesh, data, k, FluxFunction(flux_scheme_from_string(flux_name)),
                            opts);
  const NormWeights weights = compute_norm_weights(disc);
  const AssembledSystem system = assemble(disc, sigma);
  const DiscreteSolution sol = solve(disc, condense(system));

  SolveOutput out;
  out.error = compute_error_report(disc, sol, problem.exact, weights);
  out.residual = sol.residual;
  out.n_face_dofs = disc.mesh().n_faces() * disc.face_dim();
  if (probe) {
    const StabilityReport rep = stability_probe(disc, system, weights, 200);
    out.stability_ratio = rep.min_ratio;
    out.zeta = rep.zeta;
  }
  return out;
}

py::dict solve_dict(const SolveOutput& out, bool probe) {
  py::dict d;
  d["h"] = out.error.h;
  d["err_sharp"] = out.error.rel_sharp;
  d["err_flat"] = out.error.rel_flat;
  d["err_l2_potential"] = out.error.rel_l2_potential;
  d["abs_err_sharp"] = out.error.err_sharp;
  d["residual"] = out.residual;
  d["n_face_dofs"] = out.n_face_dofs;
  if (probe) {
    d["stability_ratio"] = out.stability_ratio;
    d["zeta"] = out.zeta;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_hho2d, m) {
  m.doc() = "Discontinuous-skeletal (hybrid high-order) solver for "
            "advection-diffusion-reaction problems on polygonal meshes";

  py::class_<Mesh>(m, "Mesh")
      .def_property_readonly("n_cells", &Mesh::n_cells)
      .def_property_readonly("n_faces", &Mesh::n_faces)
      .def_property_readonly("n_vertices", &Mesh::n_vertices)
      .def_property_readonly("n_boundary_faces",
                             [](const Mesh& mesh) { return mesh.boundary_faces.size(); })
      .def_property_readonly("meshsize", &Mesh::meshsize)
      .def("validate", &validate_dict)
      .def("save", &save_mesh, py::arg("path"))
      .def("__repr__", [](const Mesh& mesh) {
        std::ostringstream os;
        os << "<hho2d.Mesh cells=" << mesh.n_cells() << " faces=" << mesh.n_faces() << ">";
        return os.str();
      });

  m.def(
      "generate_mesh",
      [](const std::string& family, int n, const std::string& domain) {
        return generate_mesh(mesh_family_from_string(family), n, domain_from_string(domain));
      },
      py::arg("family"), py::arg("n"), py::arg("domain") = "unit_square",
      "Generate a built-in mesh family (cartesian, triangular, hexagonal, kershaw) on "
      "the unit square or on the square ring used by the degenerate test case.");

  m.def("load_mesh", &load_mesh, py::arg("path"));

  m.def(
      "flux_profile",
      [](const std::string& scheme, double s) {
        const FluxFunction flux(flux_scheme_from_string(scheme));
        return py::make_tuple(flux.abs(s), flux.plus(s), flux.minus(s));
      },
      py::arg("scheme"), py::arg("s"),
      "Evaluate (|A|(s), A+(s), A-(s)) for a flux stabilization profile.");

  m.def(
      "solve_problem",
      [](const std::string& problem, const Mesh& mesh, int k, const std::string& flux,
         double nu, double sigma, const std::string& peclet, bool probe) {
        const TestProblem p = make_problem(problem, nu, 1);
        return solve_dict(solve_on_mesh(p, mesh, k, flux, sigma, peclet, probe), probe);
      },
      py::arg("problem"), py::arg("mesh"), py::arg("k") = 1,
      py::arg("flux") = "scharfetter_gummel", py::arg("nu") = 1.0, py::arg("sigma") = 1.0,
      py::arg("peclet") = "pointwise", py::arg("probe") = false,
      "Assemble, condense and solve one of the built-in problems on the given mesh; "
      "returns relative errors against the exact solution.");

  m.def(
      "run_convergence",
      [](const std::string& problem, double nu, const std::string& family,
         const std::vector<int>& levels, int k, const std::string& flux, double sigma) {
        const TestProblem p = make_problem(problem, nu, 1);
        py::list rows;
        std::vector<double> hs, errs;
        for (int n : levels) {
          const Mesh mesh = generate_mesh(mesh_family_from_string(family), n, p.domain);
          const SolveOutput out = solve_on_mesh(p, mesh, k, flux, sigma, "pointwise", false);
          hs.push_back(out.error.h);
          errs.push_back(out.error.rel_sharp);
          rows.append(solve_dict(out, false));
        }
        py::dict d;
        d["rows"] = rows;
        d["eoc_sharp"] = least_squares_slope(hs, errs);
        return d;
      },
      py::arg("problem"), py::arg("nu"), py::arg("family"), py::arg("levels"),
      py::arg("k") = 1, py::arg("flux") = "scharfetter_gummel", py::arg("sigma") = 1.0,
      "Refinement study over the given levels; returns per-level rows and the "
      "least-squares convergence order of the sharp-norm error.");

  m.def(
      "eoc",
      [](const std::vector<double>& h, const std::vector<double>& errors) {
        py::dict d;
        d["slopes"] = eoc_slopes(h, errors);
        d["least_squares"] = least_squares_slope(h, errors);
        return d;
      },
      py::arg("h"), py::arg("errors"));

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const std::invalid_argument& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });
}
