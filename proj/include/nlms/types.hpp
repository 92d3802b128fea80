// Lattice grid descriptor and basic index types shared by all modules.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlms {

using CellIndex = int64_t;

// Axis-aligned lattice of congruent cells of side h covering the window
// [-Wx,Wx] x ([-Wy,Wy] x) [-H,H].  The last axis is the vertical one (x_n);
// the leading n-1 axes are horizontal.  For n=2 the second horizontal axis
// collapses to a single cell.
struct Grid {
  int n = 2;                      // spatial dimension, 2 or 3
  double h = 1.0;                 // cell side
  std::array<int, 3> count{1, 1, 1};   // cells per axis (x, y, vertical)
  std::array<double, 3> lo{0, 0, 0};   // window lower corner per axis

  Grid() = default;
  Grid(int n_, double h_, std::array<int, 3> count_, std::array<double, 3> lo_)
      : n(n_), h(h_), count(count_), lo(lo_) {
    if (n != 2 && n != 3) throw std::invalid_argument("grid: n must be 2 or 3");
    if (h <= 0) throw std::invalid_argument("grid: h must be positive");
    if (n == 2 && count[1] != 1) throw std::invalid_argument("grid: n=2 needs count[1]==1");
    for (int a = 0; a < 3; ++a)
      if (count[a] < 1) throw std::invalid_argument("grid: empty axis");
  }

  // Symmetric window: horizontal half-width W (per horizontal axis), vertical
  // half-height H, both integer multiples of h.
  static Grid centered(int n, double h, int horiz_cells, int vert_cells) {
    std::array<int, 3> c{horiz_cells, n == 3 ? horiz_cells : 1, vert_cells};
    std::array<double, 3> lo{-0.5 * horiz_cells * h,
                             n == 3 ? -0.5 * horiz_cells * h : 0.0,
                             -0.5 * vert_cells * h};
    return Grid(n, h, c, lo);
  }

  int64_t num_columns() const { return int64_t(count[0]) * count[1]; }
  int levels() const { return count[2]; }
  int64_t cell_count() const { return num_columns() * levels(); }

  // Canonical flat order: columns outer (x fastest, then y), vertical inner.
  CellIndex flat(int ix, int iy, int iv) const {
    return (CellIndex(iy) * count[0] + ix) * count[2] + iv;
  }
  void unflat(CellIndex c, int& ix, int& iy, int& iv) const {
    iv = int(c % count[2]);
    CellIndex col = c / count[2];
    ix = int(col % count[0]);
    iy = int(col / count[0]);
  }
  int64_t column_of(CellIndex c) const { return c / count[2]; }
  int level_of(CellIndex c) const { return int(c % count[2]); }

  bool in_window(int ix, int iy, int iv) const {
    return ix >= 0 && ix < count[0] && iy >= 0 && iy < count[1] && iv >= 0 && iv < count[2];
  }

  double center(int axis, int i) const { return lo[axis] + (i + 0.5) * h; }
  std::array<double, 3> cell_center(CellIndex c) const {
    int ix, iy, iv;
    unflat(c, ix, iy, iv);
    return {center(0, ix), n == 3 ? center(1, iy) : 0.0, center(2, iv)};
  }

  double window_top() const { return lo[2] + count[2] * h; }
  double window_bottom() const { return lo[2]; }
  double half_width(int axis) const { return 0.5 * count[axis] * h; }
};

// Neumaier compensated accumulator; canonical summation order is the
// caller's responsibility.
struct Accumulator {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double get() const { return sum + comp; }
};

}  // namespace nlms
