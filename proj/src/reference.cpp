#include "nlms/reference.hpp"

#include <cmath>

namespace nlms::reference {

EnergyValue s_perimeter_naive(const CellSet& e, const CylinderDomain& dom, const Kernel& k,
                              const Grid& g) {
  EnergyValue ev;
  Accumulator acc;
  const int64_t N = g.cell_count();
  std::vector<uint8_t> in_omega(size_t(N), 0);
  for (CellIndex c = 0; c < N; ++c) {
    int ix, iy, iv;
    g.unflat(c, ix, iy, iv);
    in_omega[size_t(c)] =
        dom.contains(g.center(0, ix), g.n == 3 ? g.center(1, iy) : 0.0) ? 1 : 0;
  }
  for (CellIndex a = 0; a < N; ++a)
    for (CellIndex b = a + 1; b < N; ++b) {
      if (!in_omega[size_t(a)] && !in_omega[size_t(b)]) continue;
      if (e.bit(a) == e.bit(b)) continue;
      acc.add(k.cell_pair_weight(a, b, g));
      ++ev.pair_count;
    }
  Accumulator tail;
  if (k.policy() != TailPolicy::none) {
    ClosureDesc cd = e.closure_desc();
    for (CellIndex a = 0; a < N; ++a) {
      if (!in_omega[size_t(a)]) continue;
      CellTails t = beyond_window_tails(k, g, cd, g.cell_center(a));
      tail.add(e.bit(a) ? t.above : t.below);
    }
  }
  ev.tail_part = tail.get();
  ev.value = acc.get() + ev.tail_part;
  return ev;
}

double nmc_estimate_naive(const CellSet& e, CellIndex x, const Kernel& k, const Grid& g,
                          double exclusion_radius) {
  Accumulator acc;
  int xx, xy, xv;
  g.unflat(x, xx, xy, xv);
  for (CellIndex b = 0; b < g.cell_count(); ++b) {
    if (b == x) continue;
    int bx, by, bv;
    g.unflat(b, bx, by, bv);
    double dx = (bx - xx) * g.h, dy = (by - xy) * g.h, dv = (bv - xv) * g.h;
    if (dx * dx + dy * dy + dv * dv <= exclusion_radius * exclusion_radius) continue;
    double w = k.cell_pair_weight(x, b, g);
    acc.add(e.bit(b) ? w : -w);
  }
  if (k.policy() != TailPolicy::none) {
    CellTails t = beyond_window_tails(k, g, e.closure_desc(), g.cell_center(x));
    acc.add(t.below - t.above);
  }
  return acc.get();
}

CellSet supconvolve_naive(const CellSet& e, double delta) {
  const Grid& g = e.grid();
  int r = int(std::ceil(delta / g.h - 1e-9));
  // union of translates, materialized one shift at a time
  CellSet acc = e;
  for (auto& off : ball_offsets(g.n, r)) {
    if (off[0] == 0 && off[1] == 0 && off[2] == 0) continue;
    CellSet shifted = e.translate(off);
    std::vector<uint8_t> bits = acc.bits();
    for (size_t i = 0; i < bits.size(); ++i) bits[i] = bits[i] | shifted.bits()[i];
    acc = CellSet::raw(e.grid_ptr(), std::move(bits));
  }
  return acc;
}

}  // namespace nlms::reference
