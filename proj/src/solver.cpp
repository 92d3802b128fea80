#include "nlms/solver.hpp"

#include <algorithm>
#include <cmath>

#include "nlms/maxflow.hpp"

namespace nlms {

Problem Problem::make(std::shared_ptr<const Grid> grid, std::shared_ptr<const CylinderDomain> dom,
                      std::shared_ptr<const ExteriorGraphData> exterior,
                      std::shared_ptr<const Kernel> kernel) {
  Problem p;
  p.grid = std::move(grid);
  p.dom = std::move(dom);
  p.exterior = std::move(exterior);
  p.kernel = std::move(kernel);
  const Grid& g = *p.grid;
  if (p.kernel->dim() != g.n) throw std::invalid_argument("problem: kernel/grid dimension mismatch");
  bool has_exterior_col = false;
  for (CellIndex c = 0; c < g.cell_count(); ++c) {
    int ix, iy, iv;
    g.unflat(c, ix, iy, iv);
    double x = g.center(0, ix), y = g.n == 3 ? g.center(1, iy) : 0.0;
    if (p.dom->contains(x, y))
      p.free_cells.push_back(c);
    else if (iv == 0)
      has_exterior_col = true;
  }
  if (p.free_cells.empty()) throw std::invalid_argument("problem: no free cells in the window");
  if (!p.dom->covers_everything() && !has_exterior_col)
    throw std::invalid_argument("problem: window has no exterior columns");
  // Exterior data must stay inside the vertical extent so the closure beyond
  // the window is a clean subgraph.
  if (!p.dom->covers_everything()) {
    for (int ix = 0; ix < g.count[0]; ++ix)
      for (int iy = 0; iy < (g.n == 3 ? g.count[1] : 1); ++iy) {
        double x = g.center(0, ix), y = g.n == 3 ? g.center(1, iy) : 0.0;
        if (p.dom->contains(x, y)) continue;
        double u = (*p.exterior)(x, y);
        if (!(u > g.window_bottom() + g.h && u < g.window_top() - g.h))
          throw std::invalid_argument("problem: exterior data leaves the window interior");
      }
  }
  return p;
}

FlowNetwork build_cut_graph(const Problem& p, const SolveOptions& opts) {
  const Grid& g = *p.grid;
  const Kernel& k = *p.kernel;
  FlowNetwork net;
  net.free_cells = p.free_cells;
  const int64_t F = int64_t(net.free_cells.size());

  // Frozen window memberships (exterior columns follow u).
  std::vector<uint8_t> frozen_bits(size_t(g.cell_count()), 0);
  std::vector<uint8_t> is_free(size_t(g.cell_count()), 0);
  for (CellIndex c : net.free_cells) is_free[size_t(c)] = 1;
  for (CellIndex c = 0; c < g.cell_count(); ++c) {
    if (is_free[size_t(c)]) continue;
    int ix, iy, iv;
    g.unflat(c, ix, iy, iv);
    double x = g.center(0, ix), y = g.n == 3 ? g.center(1, iy) : 0.0;
    frozen_bits[size_t(c)] = (g.center(2, iv) < (*p.exterior)(x, y)) ? 1 : 0;
  }

  std::vector<int32_t> free_index(size_t(g.cell_count()), -1);
  for (int64_t i = 0; i < F; ++i) free_index[size_t(net.free_cells[size_t(i)])] = int32_t(i);

  net.cap_member.assign(size_t(F), 0.0);
  net.cap_nonmember.assign(size_t(F), 0.0);

  ClosureDesc cd;
  cd.dom = p.dom.get();
  cd.u = p.exterior.get();
  cd.ok = true;
  const bool tails = k.policy() != TailPolicy::none;

  const double r_arc = double(opts.graph_radius_cells) * g.h;
  const double r_arc2 = r_arc * r_arc;

  // Unary terms; deterministic per-cell assembly, parallel across cells.
  std::vector<double> member(size_t(F), 0.0), nonmember(size_t(F), 0.0);
#pragma omp parallel for schedule(dynamic, 16)
  for (int64_t i = 0; i < F; ++i) {
    CellIndex a = net.free_cells[size_t(i)];
    int ax, ay, av;
    g.unflat(a, ax, ay, av);
    Accumulator acc_m, acc_n;
    for (CellIndex b = 0; b < g.cell_count(); ++b) {
      if (is_free[size_t(b)] || b == a) continue;
      double w = k.cell_pair_weight(a, b, g);
      if (frozen_bits[size_t(b)])
        acc_n.add(w);  // member frozen neighbor: costs when a is non-member
      else
        acc_m.add(w);
    }
    if (tails) {
      CellTails t = beyond_window_tails(k, g, cd, g.cell_center(a));
      acc_m.add(t.above);
      acc_n.add(t.below);
    }
    member[size_t(i)] = acc_m.get();
    nonmember[size_t(i)] = acc_n.get();
  }
  net.cap_member = std::move(member);
  net.cap_nonmember = std::move(nonmember);

  // Pairwise arcs within the truncation radius; beyond it the interaction is
  // folded into a constant (neutral prior) whose worst-case energy error is
  // bounded by the radial tail formula and reported.
  for (int64_t i = 0; i < F; ++i) {
    CellIndex a = net.free_cells[size_t(i)];
    int ax, ay, av;
    g.unflat(a, ax, ay, av);
    for (int64_t j = i + 1; j < F; ++j) {
      CellIndex b = net.free_cells[size_t(j)];
      int bx, by, bv;
      g.unflat(b, bx, by, bv);
      double dx = (bx - ax) * g.h, dy = (by - ay) * g.h, dv = (bv - av) * g.h;
      if (dx * dx + dy * dy + dv * dv > r_arc2) continue;
      double w = k.cell_pair_weight(a, b, g);
      if (!(w >= 0.0)) throw std::logic_error("cut graph: negative capacity");
      net.pair_arcs.push_back({int32_t(i), int32_t(j)});
      net.pair_cap.push_back(w);
    }
  }
  for (double c : net.cap_member)
    if (!(c >= 0.0)) throw std::logic_error("cut graph: negative capacity");
  for (double c : net.cap_nonmember)
    if (!(c >= 0.0)) throw std::logic_error("cut graph: negative capacity");

  // Radial bound on the folded far free-free interactions, per cell pair
  // beyond the truncation radius.
  double per_cell = 0.0;
  if (r_arc < 1e9 * g.h) {
    double surf = (g.n == 2) ? 2.0 * M_PI : 4.0 * M_PI;
    double r_eff = std::max(r_arc - g.h, g.h);
    per_cell = surf * std::pow(r_eff, -2.0 * k.s()) / (2.0 * k.s()) * std::pow(g.h, double(g.n));
  }
  // does any free pair exceed the radius?  bounding-box diagonal test
  int mn[3] = {1 << 30, 1 << 30, 1 << 30}, mx[3] = {-(1 << 30), -(1 << 30), -(1 << 30)};
  for (CellIndex c : net.free_cells) {
    int ij[3];
    g.unflat(c, ij[0], ij[1], ij[2]);
    for (int a = 0; a < 3; ++a) {
      mn[a] = std::min(mn[a], ij[a]);
      mx[a] = std::max(mx[a], ij[a]);
    }
  }
  double diag2 = 0.0;
  for (int a = 0; a < 3; ++a) diag2 += double(mx[a] - mn[a]) * (mx[a] - mn[a]) * g.h * g.h;
  net.truncation_error_bound = diag2 > r_arc2 ? per_cell * double(F) : 0.0;
  return net;
}

SolveResult minimize_exact(const Problem& p, const SolveOptions& opts) {
  const Grid& g = *p.grid;
  const int64_t F = int64_t(p.free_cells.size());
  if (F > opts.max_free_cells)
    throw std::invalid_argument(
        "minimize_exact: free cell count exceeds the limit; use minimize_descent");
  FlowNetwork net = build_cut_graph(p, opts);

  const int S = int(F), T = int(F) + 1;
  MaxFlow mf(int(F) + 2);
  for (int64_t i = 0; i < F; ++i) {
    mf.add_edge(S, int(i), net.cap_nonmember[size_t(i)]);
    mf.add_edge(int(i), T, net.cap_member[size_t(i)]);
  }
  for (size_t a = 0; a < net.pair_arcs.size(); ++a)
    mf.add_edge(net.pair_arcs[a][0], net.pair_arcs[a][1], net.pair_cap[a], net.pair_cap[a]);
  mf.solve(S, T);
  std::vector<uint8_t> side = mf.source_side();

  // Cut value recomputed from the original capacities across the found cut,
  // in canonical order (tighter than the accumulated flow).
  Accumulator cut_acc;
  for (int64_t i = 0; i < F; ++i)
    cut_acc.add(side[size_t(i)] ? net.cap_member[size_t(i)] : net.cap_nonmember[size_t(i)]);
  for (size_t a = 0; a < net.pair_arcs.size(); ++a)
    if (side[size_t(net.pair_arcs[a][0])] != side[size_t(net.pair_arcs[a][1])])
      cut_acc.add(net.pair_cap[a]);
  double cut = cut_acc.get();

  std::vector<uint8_t> interior(size_t(g.cell_count()), 0);
  for (int64_t i = 0; i < F; ++i)
    interior[size_t(p.free_cells[size_t(i)])] = side[size_t(i)] ? 1 : 0;
  SolveResult out{CellSet::base(p.grid, p.dom, p.exterior, interior), {}, cut,
                  net.truncation_error_bound};
  out.energy = s_perimeter(out.set, *p.dom, *p.kernel, g);
  double scale = std::max(1.0, std::abs(out.energy.value));
  if (net.truncation_error_bound == 0.0 &&
      std::abs(out.energy.value - cut) > 1e-10 * scale)
    throw std::logic_error("minimize_exact: cut value does not reconcile with the energy");
  return out;
}

SolveResult minimize_descent(const Problem& p, const CellSet& init, int max_sweeps) {
  const Grid& g = *p.grid;
  CellSet cur = init;
  EnergyValue ev = s_perimeter(cur, *p.dom, *p.kernel, g);
  const double tol = 1e-12;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool changed = false;
    for (CellIndex c : p.free_cells) {
      double d = energy_delta(cur, c, *p.dom, *p.kernel, g);
      if (d < -tol * std::max(1.0, std::abs(ev.value))) {
        std::vector<uint8_t> bits = cur.bits();
        bits[size_t(c)] ^= 1;
        cur = CellSet::base(p.grid, p.dom, p.exterior, bits);
        ev.value += d;
        changed = true;
      }
    }
    if (!changed) break;
  }
  SolveResult out{cur, s_perimeter(cur, *p.dom, *p.kernel, g), 0.0, 0.0};
  return out;
}

ContactReport slide_contact(const CellSet& e, const std::vector<CellIndex>& region) {
  const Grid& g = e.grid();
  const int kmax = g.count[2];
  int last_fail = -1;
  for (int kk = 1; kk <= kmax; ++kk) {
    CellSet lifted = e.translate({0, 0, kk});
    for (CellIndex c : region) {
      if (e.bit(c) && !lifted.bit(c)) {
        last_fail = kk;
        break;
      }
    }
  }
  if (last_fail == kmax)
    throw std::runtime_error("slide_contact: no admissible lift inside the window");
  ContactReport rep;
  rep.t_cells = last_fail + 1;
  rep.t = rep.t_cells * g.h;

  CellSet lifted = e.translate({0, 0, rep.t_cells});
  auto dom = e.domain();
  for (CellIndex c = 0; c < g.cell_count(); ++c) {
    if (e.boundary_cell(c) && lifted.boundary_cell(c)) {
      bool interior = false;
      if (dom) {
        int ix, iy, iv;
        g.unflat(c, ix, iy, iv);
        interior = dom->interior_distance(g.center(0, ix),
                                          g.n == 3 ? g.center(1, iy) : 0.0) > 2.0 * g.h;
      }
      rep.contact.emplace_back(c, interior);
    }
  }
  return rep;
}

}  // namespace nlms
