// Principal-value fractional mean curvature at boundary cells, with
// convergence diagnostics, and the supconvolution comparison check.
#pragma once

#include <limits>
#include <vector>

#include "nlms/energy.hpp"
#include "nlms/geometry.hpp"
#include "nlms/kernel.hpp"

namespace nlms {

// Signed integral I_E(x) = ∫ (chi_E - chi_{E^c})(y) |x-y|^{-(n+2s)} dy in the
// Euler-Lagrange orientation; estimates over shrinking symmetric exclusion
// balls and their Richardson extrapolation in the exponent 1-2s.
struct CurvatureSample {
  std::array<double, 3> point{0, 0, 0};
  double value = 0.0;
  std::vector<double> pv_radii;
  std::vector<double> estimates;
  bool converged = false;
  double extrapolated = 0.0;
  bool tails_ignored = false;
};

struct NmcOptions {
  std::vector<double> radii;  // default {8h, 4h, 2h}
  // Matched-quadrature cutoff: only cells within this center distance enter
  // the sum and tails are dropped.  Infinity means whole window plus tails.
  double outer_radius = std::numeric_limits<double>::infinity();
  double tol_pv = 1e-3;
};

CurvatureSample nmc(const CellSet& e, CellIndex x, const Kernel& k, const Grid& g,
                    const NmcOptions& opts = {});

struct SupconvCheck {
  bool holds = false;
  double margin = 0.0;    // I_{E#}(x_o + v) - I_E(x_o) at matched quadrature
  double lhs = 0.0;
  double rhs = 0.0;
  double radius = 0.0;    // matched evaluation radius
};

// Lemma-style comparison: evaluates I at x_o on E and at x_o+v on the
// supconvolution, over the same relative neighborhood, term by term.
SupconvCheck supconvolution_inequality_check(const CellSet& e, double delta, CellIndex x_o,
                                             const std::array<int, 3>& v, const Kernel& k);

}  // namespace nlms
