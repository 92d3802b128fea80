// Serial reference implementations of the hot kernels.  These stay
// deliberately naive (straight double loops, no blocking, no OpenMP) and are
// used as oracles by the tests and as the baseline by the benchmark.
#pragma once

#include "nlms/curvature.hpp"
#include "nlms/energy.hpp"
#include "nlms/geometry.hpp"

namespace nlms::reference {

EnergyValue s_perimeter_naive(const CellSet& e, const CylinderDomain& dom, const Kernel& k,
                              const Grid& g);

// Single-radius principal-value estimate, whole window plus tails.
double nmc_estimate_naive(const CellSet& e, CellIndex x, const Kernel& k, const Grid& g,
                          double exclusion_radius);

CellSet supconvolve_naive(const CellSet& e, double delta);

}  // namespace nlms::reference
