// Numeric verifiers: graph property, stickiness, trapped-region integrals,
// spike bound, curvature continuity, overlap defect, density estimates.
#pragma once

#include <map>
#include <optional>
#include <vector>

#include "nlms/curvature.hpp"
#include "nlms/energy.hpp"
#include "nlms/geometry.hpp"
#include "nlms/kernel.hpp"

namespace nlms {

struct GraphViolation {
  int64_t column;
  double gap_lo;
  double gap_hi;
};

struct GraphReport {
  bool is_graph = false;
  std::map<int64_t, double> v;  // column -> boundary height, Omega columns only
  std::vector<GraphViolation> violations;
};

GraphReport graph_check(const CellSet& e, const CylinderDomain& dom);

struct StickinessColumn {
  int64_t column;
  double v;
  double u_exterior;
  double gap;  // v - u at the nearest exterior column
};

struct StickinessReport {
  std::vector<StickinessColumn> columns;
  double max_gap = 0.0;
};

StickinessReport stickiness_check(const CellSet& e, const CylinderDomain& dom,
                                  const ExteriorGraphData& u);

struct LemmaRow {
  double R = 0, lambda = 0, L = 0, alpha = 0, C_o = 0, s = 0;
  int n = 2;
  double measured = 0.0;
  double reference = 0.0;
  double ratio = 0.0;
  bool flagged = false;
};

// ∫_{P_{R,lambda}} |x|^{-(n+2s)} dx by adaptive quadrature; the reference is
// the R-scaling transplant of the unit-radius value.
LemmaRow trap_integral(double R, double lambda, const Kernel& k, double resolution = 1e-6);

// Same over P_L = {|x'| <= L, |x_n| <= C_o |x'|^{1+alpha}}, alpha > 2s; the
// reference is the closed-form bounding integral, linear in C_o.
LemmaRow graph_trap_integral(double L, double alpha, double C_o, const Kernel& k,
                             double resolution = 1e-6);

struct SpikeReport {
  double M = 0.0;          // top edge of the highest member cell over Omega
  int clearance_cells = 0; // cells between M and the window top
  bool ok = false;         // clearance >= 2
};

SpikeReport spike_bound_check(const CellSet& e, const CylinderDomain& dom);

struct ContinuityProbe {
  std::vector<CurvatureSample> samples;
  double last_discrepancy = 0.0;  // |value(last) - value(previous)|
  bool all_nonpositive = false;
  bool terminal_nonpositive = false;  // value(last) <= tol when all are <= 0
};

ContinuityProbe curvature_continuity_probe(const CellSet& e, const std::vector<CellIndex>& x_seq,
                                           const Kernel& k, const Grid& g, double tol = 1e-2);

struct OverlapDefect {
  double value = 0.0;
  bool contained = true;  // A ⊆ B held on the region
};

// ∫_region (chi_{B\A} - chi_{A\B})(y) |p-y|^{-(n+2s)} dy on window cells.
OverlapDefect overlap_defect_integral(const CellSet& A, const CellSet& B,
                                      const std::vector<CellIndex>& region, CellIndex p,
                                      const Kernel& k, const Grid& g);

// Fraction of member cells among cells with centers in B_r(x).
double density_ratio(const CellSet& e, CellIndex x, double r);

}  // namespace nlms
