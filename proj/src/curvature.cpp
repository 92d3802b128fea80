#include "nlms/curvature.hpp"

#include <algorithm>
#include <cmath>

namespace nlms {

CurvatureSample nmc(const CellSet& e, CellIndex x, const Kernel& k, const Grid& g,
                    const NmcOptions& opts) {
  if (!e.boundary_cell(x))
    throw std::invalid_argument("nmc: cell is not on the discrete boundary");
  CurvatureSample out;
  out.point = g.cell_center(x);
  std::vector<double> radii = opts.radii;
  if (radii.empty()) radii = {8.0 * g.h, 4.0 * g.h, 2.0 * g.h};
  std::sort(radii.begin(), radii.end(), std::greater<double>());
  out.pv_radii = radii;

  const int nr = int(radii.size());
  const bool finite_outer = std::isfinite(opts.outer_radius);
  // Ring sums: bucket 0 collects everything beyond the largest radius,
  // bucket j the ring (radii[j], radii[j-1]].
  std::vector<Accumulator> ring(size_t(nr + 1));
  const auto& bits = e.bits();
  int xx, xy, xv;
  g.unflat(x, xx, xy, xv);
  const double r2max = finite_outer ? opts.outer_radius * opts.outer_radius : 0.0;
  for (CellIndex b = 0; b < g.cell_count(); ++b) {
    if (b == x) continue;
    int bx, by, bv;
    g.unflat(b, bx, by, bv);
    double dx = (bx - xx) * g.h, dy = (by - xy) * g.h, dv = (bv - xv) * g.h;
    double d2 = dx * dx + dy * dy + dv * dv;
    if (finite_outer && d2 > r2max) continue;
    if (d2 <= radii[size_t(nr - 1)] * radii[size_t(nr - 1)]) continue;  // excluded ball
    int bucket = 0;
    for (int j = 1; j < nr; ++j)
      if (d2 <= radii[size_t(j - 1)] * radii[size_t(j - 1)]) bucket = j;
    double w = k.cell_pair_weight(x, b, g);
    ring[size_t(bucket)].add(bits[size_t(b)] ? w : -w);
  }
  double tail_signed = 0.0;
  if (!finite_outer) {
    if (k.policy() == TailPolicy::none) {
      out.tails_ignored = true;
    } else {
      CellTails t = beyond_window_tails(k, g, e.closure_desc(), out.point);
      tail_signed = t.below - t.above;
    }
  }
  out.estimates.resize(size_t(nr));
  double run = tail_signed + ring[0].get();
  out.estimates[0] = run;
  for (int j = 1; j < nr; ++j) {
    run += ring[size_t(j)].get();
    out.estimates[size_t(j)] = run;
  }
  // Richardson extrapolation in the exponent 1-2s from the last two radii.
  if (nr >= 2) {
    double q = 1.0 - 2.0 * k.s();
    double rho = std::pow(radii[size_t(nr - 1)] / radii[size_t(nr - 2)], q);
    out.extrapolated =
        (out.estimates[size_t(nr - 1)] - rho * out.estimates[size_t(nr - 2)]) / (1.0 - rho);
    double diff = std::abs(out.estimates[size_t(nr - 1)] - out.estimates[size_t(nr - 2)]);
    out.converged = diff < opts.tol_pv * std::max(std::abs(out.extrapolated), 1e-3);
  } else {
    out.extrapolated = out.estimates.back();
    out.converged = false;
  }
  out.value = out.extrapolated;
  return out;
}

SupconvCheck supconvolution_inequality_check(const CellSet& e, double delta, CellIndex x_o,
                                             const std::array<int, 3>& v, const Kernel& k) {
  const Grid& g = e.grid();
  if (!e.boundary_cell(x_o))
    throw std::invalid_argument("supconvolution check: x_o must lie on the boundary of E");
  CellSet sharp = e.supconvolve(delta);
  int ox, oy, ov;
  g.unflat(x_o, ox, oy, ov);
  int px = ox + v[0], py = oy + v[1], pv = ov + v[2];
  if (!g.in_window(px, py, pv))
    throw std::invalid_argument("supconvolution check: x_o + v leaves the window");
  CellIndex p = g.flat(px, py, pv);
  if (!sharp.boundary_cell(p))
    throw std::invalid_argument(
        "supconvolution check: x_o + v is not on the supconvolution boundary");

  // Largest relative neighborhood staying inside the window at both points.
  auto margin_cells = [&](int ix, int iy, int iv) {
    int m = std::min(std::min(ix, g.count[0] - 1 - ix), std::min(iv, g.count[2] - 1 - iv));
    if (g.n == 3) m = std::min(m, std::min(iy, g.count[1] - 1 - iy));
    return m;
  };
  int r = std::min(margin_cells(ox, oy, ov), margin_cells(px, py, pv));
  SupconvCheck out;
  out.radius = r * g.h;
  Accumulator lhs, rhs, margin;
  int ymax = (g.n == 3) ? r : 0;
  for (int dy = -ymax; dy <= ymax; ++dy)
    for (int dx = -r; dx <= r; ++dx)
      for (int dv = -r; dv <= r; ++dv) {
        if (dx == 0 && dy == 0 && dv == 0) continue;
        if (dx * dx + dy * dy + dv * dv > r * r) continue;
        double w = k.offset_weight(dx, dy, dv, g.h);
        int s_sharp = sharp.bit(g.flat(px + dx, py + dy, pv + dv)) ? 1 : -1;
        int s_e = e.bit(g.flat(ox + dx, oy + dy, ov + dv)) ? 1 : -1;
        lhs.add(s_sharp * w);
        rhs.add(s_e * w);
        if (s_sharp != s_e) margin.add((s_sharp - s_e) * w);
      }
  out.lhs = lhs.get();
  out.rhs = rhs.get();
  out.margin = margin.get();
  out.holds = out.margin >= -1e-12;
  return out;
}

}  // namespace nlms
