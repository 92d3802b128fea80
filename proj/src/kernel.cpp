#include "nlms/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include "nlms/quadrature.hpp"

namespace nlms {

namespace {

double tri(double t) { return std::max(0.0, 1.0 - std::abs(t)); }

// Unit-h integral of |t|^{-2p} weighted by the covolume of two unit cells at
// lattice offset o (the 2n-dimensional cell-pair integral reduced over the
// difference variable).
double unit_near_weight(int n, double p, const std::array<int, 3>& o) {
  if (n == 2) {
    auto f = [&](double x, double y) {
      double r2 = x * x + y * y;
      return tri(x - o[0]) * tri(y - o[2]) * std::pow(r2, -p);
    };
    return quad::integrate_adaptive_2d(f, o[0] - 1.0, o[0] + 1.0, o[2] - 1.0, o[2] + 1.0, 1e-7)
        .value;
  }
  // n=3: spherical rule around the singularity with a graded radial
  // substitution r = rmax * t^12 (the radial integrand behaves like
  // r^{3-2p} = r^{-2s} near the touching corner).
  const int nq = 64;
  const auto& xs = quad::gl_nodes(nq);
  const auto& ws = quad::gl_weights(nq);
  const double kappa = 12.0;
  double total = 0.0;
  for (int it = 0; it < nq; ++it) {
    double ct = xs[it];  // cos(theta) in (-1,1)
    double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    for (int ip = 0; ip < nq; ++ip) {
      double phi = M_PI * (xs[ip] + 1.0);
      double dir[3] = {st * std::cos(phi), st * std::sin(phi), ct};
      double t0 = 0.0, t1 = 1e300;
      for (int a = 0; a < 3; ++a) {
        double lo = o[a] - 1.0, hi = o[a] + 1.0;
        if (std::abs(dir[a]) < 1e-15) {
          if (0.0 < lo || 0.0 > hi) t1 = -1.0;
          continue;
        }
        double ta = lo / dir[a], tb = hi / dir[a];
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
      }
      if (t1 <= t0) continue;
      double radial = 0.0;
      for (int ir = 0; ir < nq; ++ir) {
        double t = 0.5 * (xs[ir] + 1.0);
        double tk = std::pow(t, kappa);
        double r = t0 + (t1 - t0) * tk;
        double dr = 0.5 * (t1 - t0) * kappa * tk / t;
        double w = tri(r * dir[0] - o[0]) * tri(r * dir[1] - o[1]) * tri(r * dir[2] - o[2]);
        if (w == 0.0) continue;
        radial += ws[ir] * dr * w * std::pow(r, 2.0 - 2.0 * p);
      }
      total += ws[it] * ws[ip] * M_PI * radial;
    }
  }
  return total;
}

using NearTable = std::map<std::array<int, 3>, double>;

std::mutex g_near_mutex;
std::map<std::pair<int, int64_t>, std::shared_ptr<const NearTable>> g_near_cache;

std::shared_ptr<const NearTable> near_table(int n, double s) {
  std::pair<int, int64_t> key{n, int64_t(std::llround(s * 1e12))};
  std::lock_guard<std::mutex> lock(g_near_mutex);
  auto it = g_near_cache.find(key);
  if (it != g_near_cache.end()) return it->second;
  auto table = std::make_shared<NearTable>();
  double p = 0.5 * (n + 2 * s);
  int ymax = (n == 3) ? 2 : 0;
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= ymax; ++b)
      for (int c = 0; c <= 2; ++c) {
        if (a + b + c == 0) continue;
        double d2 = a * a + b * b + c * c;
        if (d2 >= 9.0) continue;
        std::array<int, 3> off{a, b, c};
        std::array<int, 3> key3{a, n == 3 ? b : 0, c};
        std::sort(key3.begin(), key3.end());
        if (table->count(key3)) continue;
        (*table)[key3] = unit_near_weight(n, p, off);
      }
  g_near_cache[key] = table;
  return table;
}

}  // namespace

Kernel::Kernel(int n, double s, TailPolicy policy)
    : n_(n), s_(s), exponent_(n + 2 * s), policy_(policy), p_(0.5 * (n + 2 * s)) {
  if (n != 2 && n != 3) throw std::invalid_argument("kernel: n must be 2 or 3");
  if (!(s > 0.0) || !(s < 0.5))
    throw std::invalid_argument("kernel: s must lie in (0, 1/2)");
  beta_ = std::sqrt(M_PI) * std::exp(std::lgamma(p_ - 0.5) - std::lgamma(p_));
  // Binomial series of (1+x)^{-p} for the large-z ray integral.
  series_[0] = 1.0;
  for (size_t k = 1; k < series_.size(); ++k)
    series_[k] = series_[k - 1] * (-(p_ + double(k) - 1.0) / double(k));
  g_at_2_ = 0.0;
  {
    double z = 2.0, acc = 0.0;
    for (size_t k = 0; k < series_.size(); ++k)
      acc += series_[k] * std::pow(z, 1.0 - 2.0 * p_ - 2.0 * double(k)) /
             (2.0 * p_ - 1.0 + 2.0 * double(k));
    g_at_2_ = acc;
  }
  near_unit_ = near_table(n, s);
}

double Kernel::value(double d) const {
  if (!(d > 0.0)) throw std::domain_error("kernel: distance must be positive");
  return std::pow(d, -exponent_);
}

double Kernel::g_of(double z) const {
  if (z < 0.0) return beta_ - g_of(-z);
  if (z >= 2.0) {
    double acc = 0.0;
    for (size_t k = 0; k < series_.size(); ++k)
      acc += series_[k] * std::pow(z, 1.0 - 2.0 * p_ - 2.0 * double(k)) /
             (2.0 * p_ - 1.0 + 2.0 * double(k));
    return acc;
  }
  const auto& xs = quad::gl_nodes(48);
  const auto& ws = quad::gl_weights(48);
  double mid = 0.5 * (z + 2.0), half = 0.5 * (2.0 - z);
  double acc = 0.0;
  for (int i = 0; i < 48; ++i) {
    double t = mid + half * xs[i];
    acc += ws[i] * std::pow(1.0 + t * t, -p_);
  }
  return g_at_2_ + acc * half;
}

double Kernel::line_full(double rho) const {
  if (!(rho > 0.0)) throw std::domain_error("kernel: line_full needs rho > 0");
  return std::pow(rho, 1.0 - 2.0 * p_) * beta_;
}

double Kernel::line_above(double rho, double a) const {
  if (rho == 0.0) {
    if (!(a > 0.0)) throw std::domain_error("kernel: on-axis ray must avoid the singularity");
    return std::pow(a, 1.0 - 2.0 * p_) / (2.0 * p_ - 1.0);
  }
  return std::pow(rho, 1.0 - 2.0 * p_) * g_of(a / rho);
}

double Kernel::line_segment(double rho, double a, double b) const {
  if (b <= a) return 0.0;
  return line_above(rho, a) - line_above(rho, b);
}

double Kernel::near_lookup(int dx, int dy, int dv) const {
  std::array<int, 3> key{std::abs(dx), std::abs(dy), std::abs(dv)};
  std::sort(key.begin(), key.end());
  auto it = near_unit_->find(key);
  if (it == near_unit_->end())
    throw std::logic_error("kernel: missing near-table entry");
  return it->second;
}

double Kernel::offset_weight(int dx, int dy, int dv, double h) const {
  if (dx == 0 && dy == 0 && dv == 0) return 0.0;
  double d2 = double(dx) * dx + double(dy) * dy + double(dv) * dv;
  double scale = std::pow(h, double(n_) - 2.0 * s_);
  if (d2 >= 9.0)
    return scale * std::pow(d2, -p_);  // h^{2n} (h sqrt(d2))^{-(n+2s)}
  return scale * near_lookup(dx, dy, dv);
}

double Kernel::cell_pair_weight(CellIndex a, CellIndex b, const Grid& g) const {
  if (a == b) return 0.0;
  int ax, ay, av, bx, by, bv;
  g.unflat(a, ax, ay, av);
  g.unflat(b, bx, by, bv);
  return offset_weight(bx - ax, by - ay, bv - av, g.h);
}

TailValue Kernel::tail_weight(const std::array<double, 3>& x, const WindowSpec& window) const {
  TailValue out;
  if (policy_ == TailPolicy::none) {
    out.tails_ignored = true;
    return out;
  }
  if (window.shape == WindowSpec::Shape::radial) {
    double R = window.radius;
    if (!(R > 0.0)) throw std::invalid_argument("tail_weight: radius must be positive");
    double surf = (n_ == 2) ? 2.0 * M_PI : 4.0 * M_PI;
    out.value = surf * std::pow(R, -2.0 * s_) / (2.0 * s_);
    return out;
  }
  // Box window: full columns beyond the horizontal extent plus vertical rays
  // above/below within it.
  double ztop = window.center[2] + window.half[2] - x[2];
  double zbot = x[2] - (window.center[2] - window.half[2]);
  if (!(ztop > 0.0) || !(zbot > 0.0))
    throw std::invalid_argument("tail_weight: point must lie inside the window");
  if (n_ == 2) {
    double L = window.center[0] - window.half[0], R = window.center[0] + window.half[0];
    if (!(x[0] > L && x[0] < R))
      throw std::invalid_argument("tail_weight: point must lie inside the window");
    double dl = x[0] - L, dr = R - x[0];
    // ∫_{rho0}^∞ line_full = beta * rho0^{2-2p} / (2p-2)
    double beyond = beta_ * (std::pow(dl, 2.0 - 2.0 * p_) + std::pow(dr, 2.0 - 2.0 * p_)) /
                    (2.0 * p_ - 2.0);
    auto rays = [&](double y1) {
      double rho = std::abs(y1 - x[0]);
      return line_above(rho, ztop) + line_above(rho, zbot);
    };
    double inside = quad::integrate_adaptive(rays, L, x[0], 1e-9).value +
                    quad::integrate_adaptive(rays, x[0], R, 1e-9).value;
    out.value = beyond + inside;
    return out;
  }
  // n=3: polar decomposition around x' inside the horizontal rectangle.
  double ex[4] = {window.center[0] + window.half[0] - x[0], window.center[1] + window.half[1] - x[1],
                  x[0] - (window.center[0] - window.half[0]),
                  x[1] - (window.center[1] - window.half[1])};
  for (double e : ex)
    if (!(e > 0.0)) throw std::invalid_argument("tail_weight: point must lie inside the window");
  auto rect_r = [&](double th) {
    double c = std::cos(th), s = std::sin(th);
    double r = std::numeric_limits<double>::infinity();
    if (c > 1e-14) r = std::min(r, ex[0] / c);
    if (c < -1e-14) r = std::min(r, ex[2] / -c);
    if (s > 1e-14) r = std::min(r, ex[1] / s);
    if (s < -1e-14) r = std::min(r, ex[3] / -s);
    return r;
  };
  auto beyond_f = [&](double th) {
    // ∫_{r(th)}^∞ line_full(rho) rho drho = beta r^{3-2p} / (2p-3)
    return beta_ * std::pow(rect_r(th), 3.0 - 2.0 * p_) / (2.0 * p_ - 3.0);
  };
  double beyond = quad::integrate_adaptive(beyond_f, 0.0, 2.0 * M_PI, 1e-8).value;
  auto inside_f = [&](double th) {
    double rmax = rect_r(th);
    auto radial = [&](double rho) {
      return rho * (line_above(rho, ztop) + line_above(rho, zbot));
    };
    return quad::integrate_adaptive(radial, 0.0, rmax, 1e-8).value;
  };
  double inside = quad::integrate_adaptive(inside_f, 0.0, 2.0 * M_PI, 1e-7).value;
  out.value = beyond + inside;
  return out;
}

}  // namespace nlms
