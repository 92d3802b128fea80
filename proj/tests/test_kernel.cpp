#include <doctest.h>

#include <cmath>

#include "nlms/kernel.hpp"
#include "nlms/quadrature.hpp"

using namespace nlms;

namespace {

// Independent oracle for the 4-d cell-pair integral between unit cells at
// lattice offset (ox, ov), n=2.  Each axis is reduced exactly by
// ∫_0^1∫_0^1 f(x-y) dx dy = ∫ (1-|d|) f(d) dd, leaving a 2-d integral with
// triangular covolume weights; that is evaluated in polar coordinates around
// the kernel singularity with a graded radial substitution (r = r_max t^4),
// 128-point Gauss per direction.  No code is shared with the implementation
// branch being checked.
double pair_integral_unit_cells(int ox, int ov, double p) {
  auto tri = [](double t) { return std::max(0.0, 1.0 - std::abs(t)); };
  const auto& xs = quad::gl_nodes(128);
  const auto& ws = quad::gl_weights(128);
  double total = 0.0;
  for (int i = 0; i < 128; ++i) {
    double th = M_PI * (xs[i] + 1.0);  // (0, 2pi)
    double cth = std::cos(th), sth = std::sin(th);
    // ray-box exit distance for the support [ox-1,ox+1] x [ov-1,ov+1]
    double t0 = 0.0, t1 = 1e300;
    auto clip = [&](double dir, double lo, double hi) {
      if (std::abs(dir) < 1e-15) {
        if (0.0 < lo || 0.0 > hi) t1 = -1.0;
        return;
      }
      double ta = lo / dir, tb = hi / dir;
      if (ta > tb) std::swap(ta, tb);
      t0 = std::max(t0, ta);
      t1 = std::min(t1, tb);
    };
    clip(cth, ox - 1.0, ox + 1.0);
    clip(sth, ov - 1.0, ov + 1.0);
    if (t1 <= t0) continue;
    double radial = 0.0;
    for (int j = 0; j < 128; ++j) {
      double t = 0.5 * (xs[j] + 1.0);  // (0,1)
      double r = t0 + (t1 - t0) * t * t * t * t;
      double dr = (t1 - t0) * 4.0 * t * t * t * 0.5;
      double w = tri(r * cth - ox) * tri(r * sth - ov);
      radial += ws[j] * dr * w * std::pow(r, 1.0 - 2.0 * p);
    }
    total += ws[i] * M_PI * radial;
  }
  return total;
}

}  // namespace

TEST_CASE("kernel value: closed forms and homogeneity") {
  Kernel k(2, 0.25);
  CHECK(k.value(1.0) == doctest::Approx(1.0));
  CHECK(k.value(2.0) == doctest::Approx(std::pow(2.0, -2.5)).epsilon(1e-14));
  for (double d : {0.3, 1.7, 42.0})
    CHECK(k.value(2 * d) / k.value(d) == doctest::Approx(std::pow(2.0, -2.5)).epsilon(1e-13));
  CHECK_THROWS_AS(k.value(0.0), std::domain_error);
  CHECK_THROWS_AS(k.value(-1.0), std::domain_error);
}

TEST_CASE("kernel constructor rejects s outside (0, 1/2)") {
  CHECK_THROWS_AS(Kernel(2, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(Kernel(2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Kernel(2, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(Kernel(2, 0.7), std::invalid_argument);
  CHECK_THROWS_AS(Kernel(4, 0.25), std::invalid_argument);
  Kernel ok(2, 0.499);
  CHECK(ok.exponent() == doctest::Approx(2.998));
}

TEST_CASE("cell pair weight: same cell, far branch, symmetry") {
  Kernel k(2, 0.25);
  Grid g = Grid::centered(2, 1.0, 16, 16);
  CellIndex a = g.flat(4, 0, 8), b = g.flat(8, 0, 8);  // distance 4
  CHECK(k.cell_pair_weight(a, a, g) == 0.0);
  CHECK(k.cell_pair_weight(a, b, g) == doctest::Approx(0.03125).epsilon(1e-14));
  for (CellIndex i : {0, 37, 120, 200})
    for (CellIndex j : {5, 77, 130, 255})
      CHECK(k.cell_pair_weight(i, j, g) == k.cell_pair_weight(j, i, g));
}

TEST_CASE("cell pair weight near branch matches the 4-d quadrature oracle") {
  for (double s : {0.1, 0.25, 0.4}) {
    double p = 0.5 * (2 + 2 * s);
    Kernel k(2, s);
    Grid g = Grid::centered(2, 1.0, 8, 8);
    // edge-adjacent unit cells
    double w = k.cell_pair_weight(g.flat(3, 0, 4), g.flat(4, 0, 4), g);
    CHECK(w == doctest::Approx(pair_integral_unit_cells(1, 0, p)).epsilon(0.01));
    // diagonal neighbour
    double wd = k.cell_pair_weight(g.flat(3, 0, 4), g.flat(4, 0, 5), g);
    CHECK(wd == doctest::Approx(pair_integral_unit_cells(1, 1, p)).epsilon(0.01));
    // distance-2 pair, still below the midpoint threshold
    double w2 = k.cell_pair_weight(g.flat(3, 0, 4), g.flat(5, 0, 4), g);
    CHECK(w2 == doctest::Approx(pair_integral_unit_cells(2, 0, p)).epsilon(0.01));
    // the near-branch weight exceeds the midpoint approximation nearby
    CHECK(w > k.value(1.0));
  }
}

TEST_CASE("cell pair weight decays monotonically with center distance") {
  Kernel k(2, 0.25);
  Grid g = Grid::centered(2, 0.5, 16, 16);
  CellIndex a = g.flat(8, 0, 8);
  std::vector<std::pair<double, double>> by_dist;
  for (CellIndex b = 0; b < g.cell_count(); ++b) {
    if (b == a) continue;
    int ax, ay, av, bx, by, bv;
    g.unflat(a, ax, ay, av);
    g.unflat(b, bx, by, bv);
    double d = g.h * std::hypot(double(bx - ax), double(bv - av));
    by_dist.emplace_back(d, k.cell_pair_weight(a, b, g));
  }
  std::sort(by_dist.begin(), by_dist.end());
  for (size_t i = 1; i < by_dist.size(); ++i) {
    if (by_dist[i].first > by_dist[i - 1].first + 1e-12)
      CHECK(by_dist[i].second < by_dist[i - 1].second);
    else
      CHECK(by_dist[i].second == doctest::Approx(by_dist[i - 1].second).epsilon(1e-12));
  }
}

TEST_CASE("cell pair weight scaling: doubling h and coordinates") {
  for (double s : {0.1, 0.25, 0.4}) {
    Kernel k(2, s);
    Grid g1 = Grid::centered(2, 1.0, 12, 12);
    Grid g2 = Grid::centered(2, 2.0, 12, 12);
    double factor = std::pow(2.0, 2.0 - 2.0 * s);
    // midpoint branch: exact
    double w1 = k.cell_pair_weight(g1.flat(2, 0, 3), g1.flat(7, 0, 3), g1);
    double w2 = k.cell_pair_weight(g2.flat(2, 0, 3), g2.flat(7, 0, 3), g2);
    CHECK(w2 == doctest::Approx(factor * w1).epsilon(1e-15));
    // near branch: within quadrature tolerance
    double n1 = k.cell_pair_weight(g1.flat(2, 0, 3), g1.flat(3, 0, 4), g1);
    double n2 = k.cell_pair_weight(g2.flat(2, 0, 3), g2.flat(3, 0, 4), g2);
    CHECK(n2 == doctest::Approx(factor * n1).epsilon(1e-5));
  }
}

TEST_CASE("radial tail weight: closed form and R^{2s} invariance") {
  Kernel k(2, 0.25);
  auto t4 = k.tail_weight({0, 0, 0}, WindowSpec::radial_around(4.0));
  CHECK(!t4.tails_ignored);
  CHECK(t4.value == doctest::Approx(2.0 * M_PI).epsilon(1e-14));
  double c = 0.0;
  for (double R : {1.0, 2.0, 4.0, 8.0, 32.0}) {
    auto t = k.tail_weight({0, 0, 0}, WindowSpec::radial_around(R));
    double inv = t.value * std::pow(R, 2.0 * k.s());
    if (c == 0.0) c = inv;
    CHECK(inv == doctest::Approx(c).epsilon(1e-14));
    CHECK(t.value > 0.0);
  }
  // window growing to infinity kills the tail
  CHECK(k.tail_weight({0, 0, 0}, WindowSpec::radial_around(1e12)).value <
        k.tail_weight({0, 0, 0}, WindowSpec::radial_around(1.0)).value * 1e-5);
}

TEST_CASE("tail policy none returns zero with the ignored flag") {
  Kernel k(2, 0.25, TailPolicy::none);
  auto t = k.tail_weight({0, 0, 0}, WindowSpec::radial_around(4.0));
  CHECK(t.value == 0.0);
  CHECK(t.tails_ignored);
}

TEST_CASE("box tail sits between the inscribed and circumscribed disk tails") {
  Kernel k(2, 0.25);
  Grid g = Grid::centered(2, 1.0, 8, 8);  // window [-4,4]^2
  auto box = k.tail_weight({0, 0, 0}, WindowSpec::box_of(g));
  double inner = k.tail_weight({0, 0, 0}, WindowSpec::radial_around(4.0)).value;
  double outer = k.tail_weight({0, 0, 0}, WindowSpec::radial_around(4.0 * std::sqrt(2.0))).value;
  CHECK(box.value < inner);
  CHECK(box.value > outer);
}

TEST_CASE("box tail matches an independent exterior quadrature oracle") {
  // oracle: polar reduction of the exterior integral; for n=2 the vertical
  // integral of the kernel along a ray from distance r is r^{-2s}/(2s) after
  // the angular change of variables, so the exterior mass is the angular
  // integral of r_box(theta)^{-2s}/(2s) ... computed here directly in 2-d.
  Kernel k(2, 0.25);
  Grid g = Grid::centered(2, 1.0, 8, 8);
  std::array<double, 3> x{0.5, 0.0, -1.5};  // off-center point
  auto box = k.tail_weight(x, WindowSpec::box_of(g));
  auto r_box = [&](double th) {
    double c = std::cos(th), s = std::sin(th);
    double r = 1e300;
    if (c > 1e-14) r = std::min(r, (4.0 - x[0]) / c);
    if (c < -1e-14) r = std::min(r, (x[0] + 4.0) / -c);
    if (s > 1e-14) r = std::min(r, (4.0 - x[2]) / s);
    if (s < -1e-14) r = std::min(r, (x[2] + 4.0) / -s);
    return r;
  };
  auto f = [&](double th) { return std::pow(r_box(th), -2.0 * k.s()) / (2.0 * k.s()); };
  double oracle = quad::integrate_adaptive(f, 0.0, 2.0 * M_PI, 1e-10).value;
  CHECK(box.value == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("column primitives agree with direct quadrature") {
  const double T = 50.0;
  for (int n : {2, 3}) {
    Kernel k(n, 0.3);
    double p = 0.5 * k.exponent();
    // two-term expansion of the remainder beyond |t| = T
    auto remainder = [&](double rho) {
      return std::pow(T, 1.0 - 2.0 * p) / (2.0 * p - 1.0) -
             p * rho * rho * std::pow(T, -1.0 - 2.0 * p) / (2.0 * p + 1.0);
    };
    for (double rho : {0.7, 2.0}) {
      auto f = [&](double t) { return std::pow(rho * rho + t * t, -p); };
      for (double a : {-1.3, 0.0, 0.9, 5.0}) {
        double ray = quad::integrate_adaptive(f, a, T, 1e-10).value + remainder(rho);
        CHECK(k.line_above(rho, a) == doctest::Approx(ray).epsilon(1e-6));
      }
      CHECK(k.line_full(rho) ==
            doctest::Approx(2.0 * k.line_above(rho, 0.0)).epsilon(1e-12));
      CHECK(k.line_segment(rho, -0.5, 1.5) ==
            doctest::Approx(quad::integrate_adaptive(f, -0.5, 1.5, 1e-10).value)
                .epsilon(1e-8));
    }
  }
}

TEST_CASE("n=3 pair weights: far branch closed form and symmetry") {
  Kernel k(3, 0.25);
  Grid g = Grid::centered(3, 1.0, 8, 8);
  CellIndex a = g.flat(1, 2, 3), b = g.flat(5, 2, 3);
  CHECK(k.cell_pair_weight(a, b, g) == doctest::Approx(std::pow(4.0, -3.5)).epsilon(1e-14));
  CHECK(k.cell_pair_weight(a, b, g) == k.cell_pair_weight(b, a, g));
  CellIndex c = g.flat(2, 2, 3);
  CHECK(k.cell_pair_weight(a, c, g) > k.cell_pair_weight(a, b, g));
}
