#include "nlms/energy.hpp"

#include <algorithm>
#include <cmath>

#include "nlms/quadrature.hpp"

namespace nlms {

namespace {

// Mass of the quadrant {xi >= A} x {tau >= B} under (xi^2+tau^2)^{-p}, A > 0.
double quadrant_mass(const Kernel& k, double p, double A, double B) {
  if (B < 0.0) {
    auto strip = [&](double t) { return k.line_above(t, A); };
    double strip_mass = quad::integrate_adaptive(strip, 0.0, -B, 1e-9).value;
    return quadrant_mass(k, p, A, 0.0) + strip_mass;
  }
  auto f = [&](double th) {
    double c = std::cos(th), s = std::sin(th);
    double r = A / std::max(c, 1e-300);
    if (B > 0.0 && s > 1e-300) r = std::max(r, B / s);
    return std::pow(r, 2.0 - 2.0 * p);
  };
  return quad::integrate_adaptive(f, 0.0, 0.5 * M_PI, 1e-9).value / (2.0 * p - 2.0);
}

}  // namespace

CellTails beyond_window_tails(const Kernel& k, const Grid& g, const ClosureDesc& cd,
                              const std::array<double, 3>& x) {
  if (!cd.ok)
    throw std::invalid_argument("tails: set closure has no subgraph form");
  if (g.n == 3) {
    // Only constant exterior data is supported for 3-d tails.
    double c0 = (*cd.u)(1e9, 1e9) + cd.vshift;
    double c1 = (*cd.u)(-1e9, -1e9) + cd.vshift;
    double c2 = (*cd.u)(1e9, -1e9) + cd.vshift;
    if (std::abs(c0 - c1) > 1e-12 || std::abs(c0 - c2) > 1e-12)
      throw std::invalid_argument("tails: n=3 requires constant exterior data");
    WindowSpec w = WindowSpec::box_of(g);
    TailValue total = k.tail_weight(x, w);
    // Split the exterior at the plane x_n = c0 by the same decomposition used
    // for the total: rays and full columns relative to that plane.
    double zbot = x[2] - g.window_bottom();
    double ex[4] = {w.center[0] + w.half[0] - x[0], w.center[1] + w.half[1] - x[1],
                    x[0] - (w.center[0] - w.half[0]), x[1] - (w.center[1] - w.half[1])};
    auto rect_r = [&](double th) {
      double c = std::cos(th), s = std::sin(th);
      double r = std::numeric_limits<double>::infinity();
      if (c > 1e-14) r = std::min(r, ex[0] / c);
      if (c < -1e-14) r = std::min(r, ex[2] / -c);
      if (s > 1e-14) r = std::min(r, ex[1] / s);
      if (s < -1e-14) r = std::min(r, ex[3] / -s);
      return r;
    };
    // Beyond-rect columns split at the constant height c0 (member below).
    // The radial integral decays like rho^{3-2p}; substitute rho = r0/v.
    auto beyond_below = [&](double th) {
      double r0 = rect_r(th);
      auto sub = [&](double v) {
        double rho = r0 / v;
        return (r0 * r0 / (v * v * v)) * k.line_above(rho, x[2] - c0);
      };
      return quad::integrate_adaptive(sub, 0.0, 1.0, 1e-8).value;
    };
    double below_beyond = quad::integrate_adaptive(beyond_below, 0.0, 2.0 * M_PI, 1e-7).value;
    auto inside_below = [&](double th) {
      double r0 = rect_r(th);
      auto radial = [&](double rho) { return rho * k.line_above(rho, zbot); };
      return quad::integrate_adaptive(radial, 0.0, r0, 1e-8).value;
    };
    double below_inside = quad::integrate_adaptive(inside_below, 0.0, 2.0 * M_PI, 1e-7).value;
    CellTails t;
    t.below = below_beyond + below_inside;
    t.above = total.value - t.below;
    if (cd.flipped) std::swap(t.below, t.above);
    return t;
  }

  // n = 2.
  double L = g.lo[0], R = g.lo[0] + g.count[0] * g.h;
  double B = g.window_bottom(), T = g.window_top();
  double p = 0.5 * k.exponent();
  auto uat = [&](double q) { return (*cd.u)(q - cd.hshift_x, 0.0) + cd.vshift; };

  CellTails t;
  Accumulator above, below;
  // In-window columns: rays beyond the vertical extent.  Omega columns
  // continue as member below / non-member above; exterior columns follow u,
  // which is validated to lie inside the vertical extent.
  for (int ix = 0; ix < g.count[0]; ++ix) {
    double q = g.center(0, ix);
    double rho = std::abs(q - x[0]);
    above.add(g.h * k.line_above(rho, T - x[2]));
    below.add(g.h * k.line_above(rho, x[2] - B));
  }
  // Beyond-window columns: continuum integral of column pieces split at u.
  // The far part, where u is constant, closes into quadrant masses.
  for (int side = 0; side < 2; ++side) {
    double edge = side == 0 ? R : L;
    double dir = side == 0 ? 1.0 : -1.0;
    double far_start = dir * (edge - x[0]) + 8.0 * (R - L);  // relative, u constant beyond
    auto piece = [&](double w) {
      // w = dir * (q - x): distance along the outward direction
      double q = x[0] + dir * w;
      double uu = uat(q);
      double a = k.line_above(w, uu - x[2]);   // non-member ray above u
      double b = k.line_above(w, x[2] - uu);   // member ray below u
      return std::array<double, 2>{a, b};
    };
    double w0 = dir * (edge - x[0]);
    auto fa = [&](double w) { return piece(w)[0]; };
    auto fb = [&](double w) { return piece(w)[1]; };
    above.add(quad::integrate_adaptive(fa, w0, far_start, 1e-9).value);
    below.add(quad::integrate_adaptive(fb, w0, far_start, 1e-9).value);
    double uc = uat(x[0] + dir * (far_start + 1.0));
    above.add(quadrant_mass(k, p, far_start, uc - x[2]));
    below.add(quadrant_mass(k, p, far_start, x[2] - uc));
  }
  t.above = above.get();
  t.below = below.get();
  if (cd.flipped) std::swap(t.below, t.above);
  return t;
}

EnergyValue interaction(const std::vector<CellIndex>& F, const std::vector<CellIndex>& G,
                        const Kernel& k, const Grid& g) {
  std::vector<CellIndex> fs = F, gs = G;
  std::sort(fs.begin(), fs.end());
  std::sort(gs.begin(), gs.end());
  for (CellIndex c : fs)
    if (std::binary_search(gs.begin(), gs.end(), c))
      throw std::invalid_argument("interaction: F and G must be disjoint");
  std::vector<std::pair<CellIndex, CellIndex>> pairs;
  pairs.reserve(fs.size() * gs.size());
  for (CellIndex a : fs)
    for (CellIndex b : gs) pairs.emplace_back(std::min(a, b), std::max(a, b));
  std::sort(pairs.begin(), pairs.end());
  Accumulator acc;
  for (auto& [a, b] : pairs) acc.add(k.cell_pair_weight(a, b, g));
  EnergyValue ev;
  ev.value = acc.get();
  ev.pair_count = int64_t(pairs.size());
  return ev;
}

namespace {

// Omega membership mask per window cell.
std::vector<uint8_t> omega_mask(const CylinderDomain& dom, const Grid& g) {
  std::vector<uint8_t> m(size_t(g.cell_count()), 0);
  for (CellIndex c = 0; c < g.cell_count(); ++c) {
    int ix, iy, iv;
    g.unflat(c, ix, iy, iv);
    m[size_t(c)] = dom.contains(g.center(0, ix), g.n == 3 ? g.center(1, iy) : 0.0) ? 1 : 0;
  }
  return m;
}

constexpr int64_t kBlock = 64;  // outer-index block size of the fixed reduction tree

}  // namespace

EnergyValue s_perimeter(const CellSet& e, const CylinderDomain& dom, const Kernel& k,
                        const Grid& g) {
  const auto mask = omega_mask(dom, g);
  const int64_t N = g.cell_count();
  const auto& bits = e.bits();

  const int64_t nblocks = (N + kBlock - 1) / kBlock;
  std::vector<double> bsum(size_t(nblocks), 0.0);
  std::vector<int64_t> bcount(size_t(nblocks), 0);

#pragma omp parallel for schedule(dynamic, 1)
  for (int64_t blk = 0; blk < nblocks; ++blk) {
    Accumulator acc;
    int64_t cnt = 0;
    const int64_t a_end = std::min(N, (blk + 1) * kBlock);
    for (int64_t a = blk * kBlock; a < a_end; ++a) {
      const bool ma = mask[size_t(a)] != 0;
      const bool sa = bits[size_t(a)] != 0;
      for (int64_t b = a + 1; b < N; ++b) {
        if (!ma && !mask[size_t(b)]) continue;
        if (sa == (bits[size_t(b)] != 0)) continue;
        acc.add(k.cell_pair_weight(a, b, g));
        ++cnt;
      }
    }
    bsum[size_t(blk)] = acc.get();
    bcount[size_t(blk)] = cnt;
  }

  Accumulator total;
  int64_t pair_count = 0;
  for (int64_t blk = 0; blk < nblocks; ++blk) {
    total.add(bsum[size_t(blk)]);
    pair_count += bcount[size_t(blk)];
  }

  EnergyValue ev;
  ev.pair_count = pair_count;
  double tail_sum = 0.0;
  if (k.policy() != TailPolicy::none) {
    ClosureDesc cd = e.closure_desc();
    std::vector<double> tails(size_t(nblocks), 0.0);
#pragma omp parallel for schedule(dynamic, 1)
    for (int64_t blk = 0; blk < nblocks; ++blk) {
      Accumulator acc;
      const int64_t a_end = std::min(N, (blk + 1) * kBlock);
      for (int64_t a = blk * kBlock; a < a_end; ++a) {
        if (!mask[size_t(a)]) continue;
        CellTails t = beyond_window_tails(k, g, cd, g.cell_center(a));
        acc.add(bits[size_t(a)] ? t.above : t.below);
      }
      tails[size_t(blk)] = acc.get();
    }
    Accumulator tacc;
    for (int64_t blk = 0; blk < nblocks; ++blk) tacc.add(tails[size_t(blk)]);
    tail_sum = tacc.get();
  }
  ev.tail_part = tail_sum;
  ev.value = total.get() + tail_sum;
  return ev;
}

double energy_delta(const CellSet& e, CellIndex c, const CylinderDomain& dom, const Kernel& k,
                    const Grid& g) {
  int ix, iy, iv;
  g.unflat(c, ix, iy, iv);
  if (!dom.contains(g.center(0, ix), g.n == 3 ? g.center(1, iy) : 0.0))
    throw std::invalid_argument("energy_delta: cell outside Omega (exterior is frozen)");
  const auto& bits = e.bits();
  const bool sc = bits[size_t(c)] != 0;
  Accumulator acc;
  for (CellIndex b = 0; b < g.cell_count(); ++b) {
    if (b == c) continue;
    const bool sb = bits[size_t(b)] != 0;
    const double w = k.cell_pair_weight(c, b, g);
    acc.add(sb == sc ? w : -w);
  }
  if (k.policy() != TailPolicy::none) {
    CellTails t = beyond_window_tails(k, g, e.closure_desc(), g.cell_center(c));
    acc.add(sc ? (t.below - t.above) : (t.above - t.below));
  }
  return acc.get();
}

}  // namespace nlms
