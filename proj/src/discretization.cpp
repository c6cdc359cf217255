#include "hho/discretization.hpp"

#include <future>
#include <thread>

namespace hho {

Discretization::Discretization(const Mesh& mesh, const PhysicalData& data, int k,
                               FluxFunction flux, DiscretizationOptions opts)
    : mesh_(&mesh), data_(&data), k_(k), flux_(flux), opts_(opts),
      classification_(classify(mesh, data, opts.effective_quad_degree(k))) {
  local_.resize(mesh.n_cells());

  const int n = mesh.n_cells();
  unsigned n_threads = std::min<unsigned>(std::thread::hardware_concurrency(), 8);
  if (n < 64 || n_threads < 2) {
    for (int c = 0; c < n; ++c)
      local_[c] = build_cell_operators(mesh, data, flux_, c, k_, opts_);
    return;
  }

  // Cell operators are independent; build them in chunks. Results are
  // deterministic regardless of the thread count.
  std::vector<std::future<void>> jobs;
  const int chunk = (n + static_cast<int>(n_threads) - 1) / static_cast<int>(n_threads);
  for (int begin = 0; begin < n; begin += chunk) {
    const int end = std::min(begin + chunk, n);
    jobs.push_back(std::async(std::launch::async, [this, begin, end] {
      for (int c = begin; c < end; ++c)
        local_[c] = build_cell_operators(*mesh_, *data_, flux_, c, k_, opts_);
    }));
  }
  for (auto& job : jobs) job.get();
}

Eigen::VectorXd Discretization::gather_local(const Eigen::VectorXd& global, int cell) const {
  const Cell& T = mesh_->cells[cell];
  const LocalDofLayout& layout = local_[cell].layout;
  Eigen::VectorXd v(layout.size());
  v.head(layout.cell_dim) = global.segment(cell_offset(cell), layout.cell_dim);
  for (std::size_t i = 0; i < T.faces.size(); ++i)
    v.segment(layout.face_offset(static_cast<int>(i)), layout.face_dim) =
        global.segment(face_offset(T.faces[i]), layout.face_dim);
  return v;
}

}  // namespace hho
