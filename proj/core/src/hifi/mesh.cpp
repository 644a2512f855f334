#include "rbeig/hifi/mesh.hpp"

#include <cmath>
#include <string>

#include "rbeig/errors.hpp"

namespace rbeig {

Partition Partition::uniform(double L, int blocks_per_side) {
  if (blocks_per_side < 1) throw DimensionMismatch("partition needs at least one block per side");
  Partition p;
  for (int i = 0; i <= blocks_per_side; ++i) {
    const double x = L * i / blocks_per_side;
    p.x_breaks.push_back(x);
    p.y_breaks.push_back(x);
  }
  return p;
}

std::array<Index, 4> Mesh2D::cell_nodes(int ci, int cj) const {
  return {node_id(ci, cj), node_id(ci + 1, cj), node_id(ci + 1, cj + 1), node_id(ci, cj + 1)};
}

namespace {

// Converts breakpoints to cell-edge indices.
std::vector<int> edge_indices(const std::vector<double>& breaks, double L, int n, double h) {
  if (breaks.size() < 2) throw MisalignedPartition("partition needs at least two breakpoints per axis");
  std::vector<int> out;
  for (double b : breaks) {
    const double r = b / h;
    const long idx = std::lround(r);
    if (std::abs(r - idx) > 1e-9 * std::max(1.0, std::abs(r))) {
      throw MisalignedPartition("breakpoint " + std::to_string(b) + " is not on a cell edge (h = " +
                                std::to_string(h) + ")");
    }
    if (!out.empty() && idx <= out.back()) throw MisalignedPartition("breakpoints must increase");
    out.push_back(static_cast<int>(idx));
  }
  if (out.front() != 0 || out.back() != n) {
    throw MisalignedPartition("breakpoints must span [0, " + std::to_string(L) + "]");
  }
  return out;
}

}  // namespace

Mesh2D build_mesh(double L, int cells_per_side, const Partition& partition, BoundaryCondition bc) {
  if (!(L > 0.0) || cells_per_side < 1) throw DimensionMismatch("mesh needs L > 0 and at least one cell");
  Mesh2D m;
  m.L = L;
  m.cells_per_side = cells_per_side;
  m.h = L / cells_per_side;
  m.bc = bc;
  m.partition = partition;

  const auto ex = edge_indices(partition.x_breaks, L, cells_per_side, m.h);
  const auto ey = edge_indices(partition.y_breaks, L, cells_per_side, m.h);
  auto block_of = [](const std::vector<int>& edges, int c) {
    int b = 0;
    while (c >= edges[b + 1]) ++b;
    return b;
  };
  m.cell_subdomain.resize(m.cell_count());
  for (int cj = 0; cj < cells_per_side; ++cj)
    for (int ci = 0; ci < cells_per_side; ++ci)
      m.cell_subdomain[static_cast<std::size_t>(cj) * cells_per_side + ci] =
          block_of(ey, cj) * partition.nx() + block_of(ex, ci);

  m.node_dof.assign(m.node_count(), -1);
  Index next = 0;
  for (int j = 0; j < m.nodes_per_side(); ++j)
    for (int i = 0; i < m.nodes_per_side(); ++i)
      if (bc == BoundaryCondition::robin || !m.on_boundary(i, j)) m.node_dof[m.node_id(i, j)] = next++;
  m.dofs_per_group = next;
  return m;
}

}  // namespace rbeig
