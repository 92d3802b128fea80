#include <doctest.h>

#include <cmath>
#include <random>

#include "nlms/geometry.hpp"
#include "nlms/quadrature.hpp"
#include "nlms/reference.hpp"

using namespace nlms;

namespace {

std::shared_ptr<const Grid> grid32() {
  static auto g = std::make_shared<Grid>(Grid::centered(2, 1.0 / 16.0, 32, 32));
  return g;
}

CellSet random_raw(std::shared_ptr<const Grid> g, uint32_t seed, double fill = 0.5) {
  std::mt19937 rng(seed);
  std::bernoulli_distribution coin(fill);
  std::vector<uint8_t> bits(size_t(g->cell_count()), 0);
  for (auto& b : bits) b = coin(rng) ? 1 : 0;
  return CellSet::raw(std::move(g), std::move(bits));
}

}  // namespace

TEST_CASE("discrete ball: 13 cells at radius 2 in n=2") {
  CHECK(ball_offsets(2, 2).size() == 13);
  CHECK(ball_offsets(2, 0).size() == 1);
  CHECK(ball_offsets(2, 1).size() == 5);
}

TEST_CASE("supconvolve: identity at delta 0 and the single-cell ball") {
  auto g = grid32();
  std::vector<uint8_t> bits(size_t(g->cell_count()), 0);
  bits[size_t(g->flat(16, 0, 16))] = 1;
  CellSet e = CellSet::raw(g, bits);
  CHECK(e.supconvolve(0.0) == e);
  CellSet d = e.supconvolve(2.0 * g->h);
  int64_t count = 0;
  for (CellIndex c = 0; c < g->cell_count(); ++c) count += d.bit(c) ? 1 : 0;
  CHECK(count == 13);
  CHECK_THROWS_AS(e.supconvolve(-1.0), std::domain_error);
  CHECK_THROWS_AS(e.subconvolve(-0.5), std::domain_error);
}

TEST_CASE("union-of-translates identity holds bitwise on random sets") {
  auto g = grid32();
  for (uint32_t seed = 0; seed < 50; ++seed) {
    CellSet e = random_raw(g, seed);
    CellSet sharp = e.supconvolve(2.0 * g->h);
    CellSet uni = reference::supconvolve_naive(e, 2.0 * g->h);
    CHECK(sharp.bits() == uni.bits());
  }
}

TEST_CASE("subconvolution duality holds bitwise on random sets") {
  auto g = grid32();
  for (uint32_t seed = 100; seed < 150; ++seed) {
    CellSet e = random_raw(g, seed);
    CellSet flat = e.subconvolve(2.0 * g->h);
    CellSet dual = e.complement().supconvolve(2.0 * g->h).complement();
    CHECK(flat.bits() == dual.bits());
  }
}

TEST_CASE("morphology of the discrete half-space") {
  auto g = grid32();
  auto dom = std::make_shared<CylinderDomain>(CylinderDomain::all());
  auto u = std::make_shared<ExteriorGraphData>(ExteriorGraphData::constant(0.0));
  CellSet hs = CellSet::subgraph(g, dom, u, [](double, double) { return 0.0; });
  CellSet eroded = hs.subconvolve(3.0 * g->h);
  // {x_n < 0} erodes to {x_n < -3h}
  for (int ix = 0; ix < g->count[0]; ++ix)
    for (int iv = 0; iv < g->count[2]; ++iv) {
      bool expect = g->center(2, iv) < -3.0 * g->h;
      CHECK(eroded.bit(g->flat(ix, 0, iv)) == expect);
    }
}

TEST_CASE("closing is extensive: sub(sup(E)) contains E") {
  auto g = grid32();
  for (uint32_t seed = 300; seed < 310; ++seed) {
    CellSet e = random_raw(g, seed, 0.35);
    CellSet closed = e.supconvolve(2.0 * g->h).subconvolve(2.0 * g->h);
    for (CellIndex c = 0; c < g->cell_count(); ++c)
      if (e.bit(c)) CHECK(closed.bit(c));
  }
}

TEST_CASE("extensivity and anti-extensivity of the morphology") {
  auto g = grid32();
  for (uint32_t seed = 400; seed < 420; ++seed) {
    CellSet e = random_raw(g, seed);
    CellSet up = e.supconvolve(2.0 * g->h);
    CellSet dn = e.subconvolve(2.0 * g->h);
    for (CellIndex c = 0; c < g->cell_count(); ++c) {
      if (e.bit(c)) CHECK(up.bit(c));
      if (dn.bit(c)) CHECK(e.bit(c));
    }
  }
}

TEST_CASE("morphology monotone in the set argument") {
  auto g = grid32();
  for (uint32_t seed = 500; seed < 510; ++seed) {
    CellSet e = random_raw(g, seed, 0.3);
    std::vector<uint8_t> fb = e.bits();
    std::mt19937 rng(seed * 7 + 1);
    for (auto& b : fb)
      if (!b && (rng() & 7) == 0) b = 1;
    CellSet f = CellSet::raw(g, fb);
    CellSet eu = e.supconvolve(2 * g->h), fu = f.supconvolve(2 * g->h);
    CellSet ed = e.subconvolve(2 * g->h), fd = f.subconvolve(2 * g->h);
    for (CellIndex c = 0; c < g->cell_count(); ++c) {
      if (eu.bit(c)) CHECK(fu.bit(c));
      if (ed.bit(c)) CHECK(fd.bit(c));
    }
  }
}

TEST_CASE("translation: identity, composition, half-space shift") {
  auto g = grid32();
  CellSet e = random_raw(g, 42);
  CHECK(e.translate({0, 0, 0}) == e);
  CellSet two = e.translate({0, 0, 1}).translate({0, 0, 1});
  CellSet once = e.translate({0, 0, 2});
  CHECK(two.bits() == once.bits());
  // round trip restores cells whose shifted positions stay inside the window
  CellSet rt = e.translate({3, 0, 2}).translate({-3, 0, -2});
  for (int ix = 3; ix < g->count[0] - 3; ++ix)
    for (int iv = 2; iv < g->count[2] - 2; ++iv)
      CHECK(rt.bit(g->flat(ix, 0, iv)) == e.bit(g->flat(ix, 0, iv)));

  auto dom = std::make_shared<CylinderDomain>(CylinderDomain::all());
  auto u = std::make_shared<ExteriorGraphData>(ExteriorGraphData::constant(0.0));
  CellSet hs = CellSet::subgraph(g, dom, u, [](double, double) { return 0.0; });
  CellSet shifted = hs.translate({0, 0, 4});
  for (int ix = 0; ix < g->count[0]; ++ix)
    for (int iv = 0; iv < g->count[2]; ++iv)
      CHECK(shifted.bit(g->flat(ix, 0, iv)) == (g->center(2, iv) < 4.0 * g->h));
}

TEST_CASE("translation equivariance of the morphology away from edges") {
  auto g = grid32();
  for (uint32_t seed = 600; seed < 605; ++seed) {
    CellSet e = random_raw(g, seed);
    std::array<int, 3> v{2, 0, -1};
    CellSet a = e.translate(v).supconvolve(2 * g->h);
    CellSet b = e.supconvolve(2 * g->h).translate(v);
    for (int ix = 4; ix < g->count[0] - 4; ++ix)
      for (int iv = 4; iv < g->count[2] - 4; ++iv)
        CHECK(a.bit(g->flat(ix, 0, iv)) == b.bit(g->flat(ix, 0, iv)));
  }
}

TEST_CASE("exterior columns strictly follow u in base sets") {
  auto g = grid32();
  auto dom = std::make_shared<CylinderDomain>(CylinderDomain::intervals({{-0.5, 0.5}}));
  auto u = std::make_shared<ExteriorGraphData>(ExteriorGraphData::constant(0.25));
  // interior bits all ones; the exterior pattern in the input must be ignored
  std::vector<uint8_t> bits(size_t(g->cell_count()), 1);
  CellSet e = CellSet::base(g, dom, u, bits);
  for (int ix = 0; ix < g->count[0]; ++ix) {
    double x = g->center(0, ix);
    if (dom->contains(x)) continue;
    for (int iv = 0; iv < g->count[2]; ++iv)
      CHECK(e.bit(g->flat(ix, 0, iv)) == (g->center(2, iv) < 0.25));
  }
}

TEST_CASE("region cells: Omega predicate and Omega_eta shrink") {
  Grid g(2, 0.25, {16, 1, 16}, {-2.0, 0.0, -2.0});
  auto dom = CylinderDomain::intervals({{-1.0, 1.0}});
  auto omega = region_cells(dom, g, RegionKind::Omega, {});
  for (CellIndex c : omega) {
    int ix, iy, iv;
    g.unflat(c, ix, iy, iv);
    CHECK(std::abs(g.center(0, ix)) < 1.0);
  }
  CHECK(omega.size() == 8 * 16);
  RegionParams p;
  p.eta = 2.0 * g.h;
  auto eta = region_cells(dom, g, RegionKind::OmegaEta, p);
  CHECK(eta.size() == 4 * 16);  // two cells shrunk from each side
}

TEST_CASE("region cells: D_{R,eta} equals Omega_{2eta} union (C_R minus Omega)") {
  Grid g(2, 0.25, {16, 1, 16}, {-2.0, 0.0, -2.0});
  auto dom = CylinderDomain::intervals({{-1.0, 1.0}});
  RegionParams p;
  p.eta = g.h;
  p.R = 1.5;
  auto d = region_cells(dom, g, RegionKind::DREta, p);
  RegionParams p2;
  p2.eta = 2.0 * p.eta;
  auto omega2eta = region_cells(dom, g, RegionKind::OmegaEta, p2);
  RegionParams pr;
  pr.R = p.R;
  auto cr = region_cells(dom, g, RegionKind::CR, pr);
  auto omega = region_cells(dom, g, RegionKind::Omega, {});
  std::vector<uint8_t> expect(size_t(g.cell_count()), 0);
  for (CellIndex c : omega2eta) expect[size_t(c)] = 1;
  std::vector<uint8_t> in_omega(size_t(g.cell_count()), 0);
  for (CellIndex c : omega) in_omega[size_t(c)] = 1;
  for (CellIndex c : cr)
    if (!in_omega[size_t(c)]) expect[size_t(c)] = 1;
  std::vector<uint8_t> got(size_t(g.cell_count()), 0);
  for (CellIndex c : d) got[size_t(c)] = 1;
  CHECK(got == expect);
}

TEST_CASE("region cells: P_trap cell count approximates the closed-form area") {
  Grid g(2, 1.0 / 64.0, {128, 1, 64}, {-1.0, 0.0, -0.5});
  auto dom = CylinderDomain::all();
  RegionParams p;
  p.R = 1.0;
  p.lambda = 0.5;
  bool empty = false;
  auto cells = region_cells(dom, g, RegionKind::PTrap, p, &empty);
  CHECK(!empty);
  double area_cells = double(cells.size()) * g.h * g.h;
  // area = 2 * 2 ∫_0^{1/2} (1 - sqrt(1-t^2)) dt
  auto f = [](double t) { return 1.0 - std::sqrt(1.0 - t * t); };
  double area = 4.0 * quad::integrate_adaptive(f, 0.0, 0.5, 1e-12).value;
  CHECK(area_cells == doctest::Approx(area).epsilon(0.03));
}

TEST_CASE("region cells: empty region is flagged") {
  Grid g(2, 0.25, {8, 1, 8}, {-1.0, 0.0, -1.0});
  auto dom = CylinderDomain::intervals({{-0.9, 0.9}});
  RegionParams p;
  p.eta = 5.0;  // larger than the domain: nothing qualifies
  bool empty = false;
  auto cells = region_cells(dom, g, RegionKind::OmegaEta, p, &empty);
  CHECK(cells.empty());
  CHECK(empty);
}

TEST_CASE("cylinder domain basics") {
  auto dom = CylinderDomain::intervals({{-1.0, -0.25}, {0.25, 1.0}});
  CHECK(dom.contains(-0.5));
  CHECK(!dom.contains(0.0));
  CHECK(dom.R_o() == doctest::Approx(1.0));
  CHECK(dom.interior_distance(0.5) == doctest::Approx(0.25));
  CHECK(dom.interior_distance(0.0) == 0.0);
  CHECK_THROWS_AS(CylinderDomain::intervals({{1.0, -1.0}}), std::invalid_argument);
}

TEST_CASE("exterior graph data samplers") {
  auto c = ExteriorGraphData::constant(0.5);
  CHECK(c(3.0) == 0.5);
  auto j = ExteriorGraphData::jump(1.0, -1.0);
  CHECK(j(-2.0) == 1.0);
  CHECK(j(2.0) == -1.0);
  auto pw = ExteriorGraphData::piecewise_linear({{-1.0, 0.0}, {1.0, 2.0}});
  CHECK(pw(-5.0) == 0.0);
  CHECK(pw(5.0) == 2.0);
  CHECK(pw(0.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(ExteriorGraphData::piecewise_linear({}), std::invalid_argument);
}

TEST_CASE("n=3 morphology: ball size and duality") {
  CHECK(ball_offsets(3, 1).size() == 7);
  auto g = std::make_shared<Grid>(Grid::centered(3, 0.25, 8, 8));
  std::mt19937 rng(9);
  std::vector<uint8_t> bits(size_t(g->cell_count()), 0);
  for (auto& b : bits) b = rng() & 1;
  CellSet e = CellSet::raw(g, bits);
  CellSet flat = e.subconvolve(g->h);
  CellSet dual = e.complement().supconvolve(g->h).complement();
  CHECK(flat.bits() == dual.bits());
}
