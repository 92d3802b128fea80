// Fractional interaction kernel |x-y|^{-(n+2s)}: pointwise values, integrals
// over cell pairs, and closed/semi-closed tail integrals outside a window.
#pragma once

#include <array>
#include <map>
#include <memory>

#include "nlms/types.hpp"

namespace nlms {

enum class TailPolicy { none, halfspace_columns, radial };

struct WindowSpec {
  enum class Shape { radial, box } shape = Shape::box;
  double radius = 0.0;                     // radial: ball of this radius around the point
  std::array<double, 3> center{0, 0, 0};   // box center
  std::array<double, 3> half{0, 0, 0};     // box half-extents (unused axes 0)
  static WindowSpec radial_around(double r) {
    WindowSpec w;
    w.shape = Shape::radial;
    w.radius = r;
    return w;
  }
  static WindowSpec box_of(const Grid& g) {
    WindowSpec w;
    w.shape = Shape::box;
    for (int a = 0; a < 3; ++a) {
      w.center[a] = g.lo[a] + 0.5 * g.count[a] * g.h;
      w.half[a] = 0.5 * g.count[a] * g.h;
    }
    if (g.n == 2) w.half[1] = 0;
    return w;
  }
};

struct TailValue {
  double value = 0.0;
  bool tails_ignored = false;
};

class Kernel {
 public:
  Kernel(int n, double s, TailPolicy policy = TailPolicy::halfspace_columns);

  int dim() const { return n_; }
  double s() const { return s_; }
  double exponent() const { return exponent_; }  // n + 2s
  TailPolicy policy() const { return policy_; }

  // d^{-(n+2s)}; throws std::domain_error for d <= 0.
  double value(double d) const;

  // Integral of the kernel over cell_a x cell_b.  Zero for a == b; midpoint
  // rule h^{2n} value(d) once the center distance reaches 3h, precomputed
  // quadrature below that.  Exactly symmetric in (a, b).
  double cell_pair_weight(CellIndex a, CellIndex b, const Grid& g) const;
  double offset_weight(int dx, int dy, int dv, double h) const;

  // Kernel mass outside the window as seen from x (a cell center inside it).
  TailValue tail_weight(const std::array<double, 3>& x, const WindowSpec& window) const;

  // Column primitives: integrals of (rho^2 + t^2)^{-(n+2s)/2} in t at fixed
  // horizontal distance rho.  line_above is the ray integral over t >= a.
  double line_full(double rho) const;
  double line_above(double rho, double a) const;
  double line_segment(double rho, double a, double b) const;
  double half_mass_beta() const { return beta_; }

 private:
  double near_lookup(int dx, int dy, int dv) const;
  double g_of(double z) const;  // ∫_z^∞ (1+t^2)^{-p} dt

  int n_;
  double s_;
  double exponent_;
  TailPolicy policy_;
  double p_;     // (n+2s)/2
  double beta_;  // ∫_R (1+t^2)^{-p} dt
  double g_at_2_;
  std::array<double, 64> series_;
  std::shared_ptr<const std::map<std::array<int, 3>, double>> near_unit_;
};

}  // namespace nlms
