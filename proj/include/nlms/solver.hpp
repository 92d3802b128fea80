// Exact minimization of the lattice s-perimeter with frozen exterior data by
// reduction to minimum cut, a single-flip descent fallback, and the vertical
// sliding construction.
#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "nlms/energy.hpp"
#include "nlms/geometry.hpp"
#include "nlms/kernel.hpp"

namespace nlms {

struct Problem {
  std::shared_ptr<const Grid> grid;
  std::shared_ptr<const CylinderDomain> dom;
  std::shared_ptr<const ExteriorGraphData> exterior;
  std::shared_ptr<const Kernel> kernel;
  std::vector<CellIndex> free_cells;  // cells of Omega ∩ window, canonical order

  static Problem make(std::shared_ptr<const Grid> grid, std::shared_ptr<const CylinderDomain> dom,
                      std::shared_ptr<const ExteriorGraphData> exterior,
                      std::shared_ptr<const Kernel> kernel);
};

// s-t cut encoding of the configuration energy: a free cell sits on the
// source side exactly when it is a member; every capacity is nonnegative
// because the kernel is positive (the energy is submodular).
struct FlowNetwork {
  std::vector<CellIndex> free_cells;
  std::vector<std::array<int32_t, 2>> pair_arcs;  // indices into free_cells, i < j
  std::vector<double> pair_cap;
  std::vector<double> cap_member;     // cut when the cell is a member (to sink)
  std::vector<double> cap_nonmember;  // cut when the cell is not (from source)
  double truncation_error_bound = 0.0;
  int64_t arc_count() const { return int64_t(pair_arcs.size()) + 2 * int64_t(free_cells.size()); }
};

struct SolveOptions {
  int64_t max_free_cells = 1 << 14;
  int graph_radius_cells = 64;  // free-free arcs only within this radius
};

FlowNetwork build_cut_graph(const Problem& p, const SolveOptions& opts = {});

struct SolveResult {
  CellSet set;
  EnergyValue energy;
  double cut_value = 0.0;
  double truncation_error_bound = 0.0;
};

// Global minimizer (the minimal one among minimizers, from the source side of
// the canonical maximum flow).
SolveResult minimize_exact(const Problem& p, const SolveOptions& opts = {});

// Single-flip coordinate descent from init, deterministic row-major sweeps.
SolveResult minimize_descent(const Problem& p, const CellSet& init, int max_sweeps = 200);

struct ContactReport {
  double t = 0.0;
  int t_cells = 0;
  // contact cells (boundary of E meeting the boundary of the lifted copy),
  // classified interior (center in Omega_{2h}) or boundary.
  std::vector<std::pair<CellIndex, bool>> contact;  // (cell, is_interior)
};

// Least vertical lift t >= 0 (multiple of h) such that E + tau e_n contains E
// on the region for every tau >= t.
ContactReport slide_contact(const CellSet& e, const std::vector<CellIndex>& region);

}  // namespace nlms
