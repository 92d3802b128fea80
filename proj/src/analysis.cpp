#include "nlms/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "nlms/quadrature.hpp"

namespace nlms {

GraphReport graph_check(const CellSet& e, const CylinderDomain& dom) {
  const Grid& g = e.grid();
  GraphReport rep;
  rep.is_graph = true;
  for (int iy = 0; iy < g.count[1]; ++iy)
    for (int ix = 0; ix < g.count[0]; ++ix) {
      double x = g.center(0, ix), y = g.n == 3 ? g.center(1, iy) : 0.0;
      if (!dom.contains(x, y)) continue;
      int64_t col = int64_t(iy) * g.count[0] + ix;
      int first_off = g.count[2];
      for (int iv = 0; iv < g.count[2]; ++iv)
        if (!e.bit(g.flat(ix, iy, iv))) {
          first_off = iv;
          break;
        }
      rep.v[col] = g.lo[2] + first_off * g.h;
      for (int iv = first_off; iv < g.count[2]; ++iv)
        if (e.bit(g.flat(ix, iy, iv))) {
          // found a member above a gap: locate the gap extent
          rep.is_graph = false;
          rep.violations.push_back(
              {col, g.lo[2] + first_off * g.h, g.center(2, iv) - 0.5 * g.h});
          break;
        }
    }
  if (!rep.is_graph) rep.v.clear();
  return rep;
}

StickinessReport stickiness_check(const CellSet& e, const CylinderDomain& dom,
                                  const ExteriorGraphData& u) {
  const Grid& g = e.grid();
  GraphReport gr = graph_check(e, dom);
  if (!gr.is_graph)
    throw std::invalid_argument("stickiness_check: set is not a graph over Omega");
  StickinessReport rep;
  bool first = true;
  for (int iy = 0; iy < g.count[1]; ++iy)
    for (int ix = 0; ix < g.count[0]; ++ix) {
      double x = g.center(0, ix), y = g.n == 3 ? g.center(1, iy) : 0.0;
      if (!dom.contains(x, y)) continue;
      // nearest exterior 4-neighbour column
      struct Cand {
        int ix, iy;
      };
      std::vector<Cand> cands = {{ix - 1, iy}, {ix + 1, iy}};
      if (g.n == 3) {
        cands.push_back({ix, iy - 1});
        cands.push_back({ix, iy + 1});
      }
      std::optional<Cand> ext;
      for (auto& c : cands) {
        if (c.ix < 0 || c.ix >= g.count[0] || c.iy < 0 || c.iy >= g.count[1]) continue;
        double cx = g.center(0, c.ix), cy = g.n == 3 ? g.center(1, c.iy) : 0.0;
        if (!dom.contains(cx, cy)) {
          ext = c;
          break;
        }
      }
      if (!ext) continue;
      int64_t col = int64_t(iy) * g.count[0] + ix;
      double ux = g.center(0, ext->ix), uy = g.n == 3 ? g.center(1, ext->iy) : 0.0;
      StickinessColumn sc;
      sc.column = col;
      sc.v = gr.v.at(col);
      sc.u_exterior = u(ux, uy);
      sc.gap = sc.v - sc.u_exterior;
      rep.columns.push_back(sc);
      if (first || sc.gap > rep.max_gap) rep.max_gap = sc.gap;
      first = false;
    }
  return rep;
}

LemmaRow trap_integral(double R, double lambda, const Kernel& k, double resolution) {
  if (!(R > 0.0)) throw std::invalid_argument("trap_integral: R must be positive");
  if (!(lambda > 0.0 && lambda <= 1.0))
    throw std::invalid_argument("trap_integral: lambda must lie in (0,1]");
  LemmaRow row;
  row.R = R;
  row.lambda = lambda;
  row.s = k.s();
  row.n = k.dim();

  auto measure = [&](double radius) {
    // inner vertical integral is closed-form via the ray primitive
    auto profile = [&](double rho) {
      double gheight = radius - std::sqrt(std::max(0.0, radius * radius - rho * rho));
      if (gheight <= 0.0) return 0.0;
      return 2.0 * k.line_segment(rho, 0.0, gheight);
    };
    if (k.dim() == 2) {
      auto f = [&](double rho) { return 2.0 * profile(rho); };
      return quad::integrate_adaptive(f, 0.0, lambda * radius, resolution);
    }
    auto f = [&](double rho) { return 2.0 * M_PI * rho * profile(rho); };
    return quad::integrate_adaptive(f, 0.0, lambda * radius, resolution);
  };

  auto res = measure(R);
  row.measured = res.value;
  if (std::abs(R - 1.0) < 1e-15) {
    row.reference = row.measured;
  } else {
    row.reference = std::pow(R, -2.0 * k.s()) * measure(1.0).value;
  }
  row.ratio = row.reference != 0.0 ? row.measured / row.reference : 0.0;
  row.flagged = !res.converged;
  return row;
}

LemmaRow graph_trap_integral(double L, double alpha, double C_o, const Kernel& k,
                             double resolution) {
  if (!(alpha > 2.0 * k.s()))
    throw std::domain_error("graph_trap_integral: alpha must exceed 2s");
  if (!(alpha <= 1.0)) throw std::domain_error("graph_trap_integral: alpha must be <= 1");
  if (!(L > 0.0) || !(C_o > 0.0))
    throw std::invalid_argument("graph_trap_integral: L and C_o must be positive");
  LemmaRow row;
  row.L = L;
  row.alpha = alpha;
  row.C_o = C_o;
  row.s = k.s();
  row.n = k.dim();
  auto profile = [&](double rho) {
    double gheight = C_o * std::pow(rho, 1.0 + alpha);
    return 2.0 * k.line_segment(rho, 0.0, gheight);
  };
  quad::AdaptiveResult res;
  if (k.dim() == 2) {
    res = quad::integrate_adaptive([&](double rho) { return 2.0 * profile(rho); }, 0.0, L,
                                   resolution);
  } else {
    res = quad::integrate_adaptive([&](double rho) { return 2.0 * M_PI * rho * profile(rho); },
                                   0.0, L, resolution);
  }
  row.measured = res.value;
  // Bounding integral of the proof: ∫_{|x'|<=L} 2 C_o |x'|^{1+alpha-n-2s} dx'.
  double ang = (k.dim() == 2) ? 2.0 : 2.0 * M_PI;
  row.reference = ang * 2.0 * C_o * std::pow(L, alpha - 2.0 * k.s()) / (alpha - 2.0 * k.s());
  row.ratio = row.measured / row.reference;
  row.flagged = !res.converged;
  return row;
}

SpikeReport spike_bound_check(const CellSet& e, const CylinderDomain& dom) {
  const Grid& g = e.grid();
  SpikeReport rep;
  int top = -1;
  for (int iy = 0; iy < g.count[1]; ++iy)
    for (int ix = 0; ix < g.count[0]; ++ix) {
      double x = g.center(0, ix), y = g.n == 3 ? g.center(1, iy) : 0.0;
      if (!dom.contains(x, y)) continue;
      for (int iv = g.count[2] - 1; iv >= 0; --iv)
        if (e.bit(g.flat(ix, iy, iv))) {
          top = std::max(top, iv);
          break;
        }
    }
  rep.M = g.lo[2] + (top + 1) * g.h;  // top edge of the highest member cell
  rep.clearance_cells = g.count[2] - 1 - top;
  rep.ok = rep.clearance_cells >= 2;
  return rep;
}

ContinuityProbe curvature_continuity_probe(const CellSet& e, const std::vector<CellIndex>& x_seq,
                                           const Kernel& k, const Grid& g, double tol) {
  ContinuityProbe probe;
  for (CellIndex x : x_seq) probe.samples.push_back(nmc(e, x, k, g));
  if (probe.samples.size() >= 2) {
    auto& a = probe.samples[probe.samples.size() - 2];
    auto& b = probe.samples.back();
    probe.last_discrepancy = std::abs(b.value - a.value);
  }
  probe.all_nonpositive = std::all_of(probe.samples.begin(), probe.samples.end(),
                                      [&](const CurvatureSample& s) { return s.value <= tol; });
  probe.terminal_nonpositive =
      probe.all_nonpositive && !probe.samples.empty() && probe.samples.back().value <= tol;
  return probe;
}

OverlapDefect overlap_defect_integral(const CellSet& A, const CellSet& B,
                                      const std::vector<CellIndex>& region, CellIndex p,
                                      const Kernel& k, const Grid& g) {
  OverlapDefect out;
  Accumulator acc;
  for (CellIndex y : region) {
    bool a = A.bit(y), b = B.bit(y);
    if (a == b) continue;
    double w = k.cell_pair_weight(p, y, g);
    if (b && !a) {
      acc.add(w);
    } else {
      acc.add(-w);
      out.contained = false;
    }
  }
  out.value = acc.get();
  return out;
}

double density_ratio(const CellSet& e, CellIndex x, double r) {
  const Grid& g = e.grid();
  if (!(r >= 2.0 * g.h)) throw std::invalid_argument("density_ratio: r must be at least 2h");
  auto c = g.cell_center(x);
  for (int a = 0; a < (g.n == 3 ? 3 : 2); ++a) {
    int axis = (g.n == 3) ? a : (a == 0 ? 0 : 2);
    if (c[axis] - r < g.lo[axis] || c[axis] + r > g.lo[axis] + g.count[axis] * g.h)
      throw std::invalid_argument("density_ratio: ball exits the window");
  }
  int rc = int(std::floor(r / g.h)) + 1;
  int xx, xy, xv;
  g.unflat(x, xx, xy, xv);
  int64_t members = 0, total = 0;
  int ymax = (g.n == 3) ? rc : 0;
  for (int dy = -ymax; dy <= ymax; ++dy)
    for (int dx = -rc; dx <= rc; ++dx)
      for (int dv = -rc; dv <= rc; ++dv) {
        double d2 = double(dx) * dx + double(dy) * dy + double(dv) * dv;
        if (d2 * g.h * g.h > r * r) continue;
        int ix = xx + dx, iy = xy + dy, iv = xv + dv;
        if (!g.in_window(ix, iy, iv)) continue;
        ++total;
        if (e.bit(g.flat(ix, iy, iv))) ++members;
      }
  return double(members) / double(total);
}

}  // namespace nlms
