// Interaction functional L(F,G) and the lattice s-perimeter with per-cell
// tail corrections against the exterior subgraph.
#pragma once

#include <vector>

#include "nlms/geometry.hpp"
#include "nlms/kernel.hpp"
#include "nlms/types.hpp"

namespace nlms {

struct EnergyValue {
  double value = 0.0;      // units length^{n-2s}
  double tail_part = 0.0;  // portion contributed by beyond-window tails
  int64_t pair_count = 0;  // number of disagreeing in-window pairs summed
};

// Kernel mass from a point to the member (below) and non-member (above)
// parts of the region beyond the window, as classified by a set's closure.
struct CellTails {
  double below = 0.0;
  double above = 0.0;
};

CellTails beyond_window_tails(const Kernel& k, const Grid& g, const ClosureDesc& cd,
                              const std::array<double, 3>& x);

// L(F,G): sum of cell_pair_weight over F x G in canonical order (pairs sorted
// by flat index); F and G must be disjoint.
EnergyValue interaction(const std::vector<CellIndex>& F, const std::vector<CellIndex>& G,
                        const Kernel& k, const Grid& g);

// Per_s(E, Omega) on the window lattice: disagreeing unordered in-window
// pairs with at least one cell in Omega, plus per-cell tails for Omega cells
// when the kernel's tail policy is active.
EnergyValue s_perimeter(const CellSet& e, const CylinderDomain& dom, const Kernel& k,
                        const Grid& g);

// Per_s(E with cell c flipped) - Per_s(E), in O(window) work.
double energy_delta(const CellSet& e, CellIndex c, const CylinderDomain& dom, const Kernel& k,
                    const Grid& g);

}  // namespace nlms
