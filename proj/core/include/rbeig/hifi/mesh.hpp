#pragma once

#include <array>
#include <vector>

#include "rbeig/linalg/types.hpp"

namespace rbeig {

enum class BoundaryCondition { dirichlet, robin };

/// Axis-aligned subdomain layout: breakpoints along x and y, each including
/// 0 and L. Subdomain (i, j) covers [x_i, x_{i+1}] x [y_j, y_{j+1}] and has
/// index j * nx + i.
struct Partition {
  std::vector<double> x_breaks;
  std::vector<double> y_breaks;

  static Partition uniform(double L, int blocks_per_side);
  int nx() const { return static_cast<int>(x_breaks.size()) - 1; }
  int ny() const { return static_cast<int>(y_breaks.size()) - 1; }
  int count() const { return nx() * ny(); }
};

/// Uniform square grid of [0, L]^2 with Q1 cells. Node (i, j) sits at
/// (i h, j h) with id j (n + 1) + i; cell (i, j) has id j n + i.
struct Mesh2D {
  double L = 0.0;
  int cells_per_side = 0;
  double h = 0.0;
  BoundaryCondition bc = BoundaryCondition::dirichlet;
  Partition partition;

  std::vector<int> cell_subdomain;  ///< per cell
  std::vector<Index> node_dof;      ///< per node, -1 when excluded (Dirichlet boundary)
  Index dofs_per_group = 0;

  int nodes_per_side() const { return cells_per_side + 1; }
  Index node_count() const { return static_cast<Index>(nodes_per_side()) * nodes_per_side(); }
  Index cell_count() const { return static_cast<Index>(cells_per_side) * cells_per_side; }
  int subdomain_count() const { return partition.count(); }
  Index node_id(int i, int j) const { return static_cast<Index>(j) * nodes_per_side() + i; }
  bool on_boundary(int i, int j) const {
    return i == 0 || j == 0 || i == cells_per_side || j == cells_per_side;
  }
  /// Corner node ids of a cell, counter-clockwise from (x_min, y_min).
  std::array<Index, 4> cell_nodes(int ci, int cj) const;
};

/// Throws MisalignedPartition when a breakpoint does not coincide with a
/// cell edge, and DimensionMismatch for non-positive sizes.
Mesh2D build_mesh(double L, int cells_per_side, const Partition& partition, BoundaryCondition bc);

}  // namespace rbeig
