#include "nlms/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <queue>
#include <stdexcept>

namespace nlms::quad {

namespace {

// Newton iteration on Legendre polynomials.
void build_gl(int k, std::vector<double>& x, std::vector<double>& w) {
  x.resize(k);
  w.resize(k);
  for (int i = 0; i < k; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (k + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int j = 2; j <= k; ++j) {
        double p2 = ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      double dp = k * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    double p0 = 1.0, p1 = t;
    for (int j = 2; j <= k; ++j) {
      double p2 = ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    double dp = k * (t * p1 - p0) / (t * t - 1.0);
    x[i] = t;
    w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

std::mutex g_rule_mutex;
std::map<int, std::pair<std::vector<double>, std::vector<double>>> g_rules;

const std::pair<std::vector<double>, std::vector<double>>& rule(int k) {
  std::lock_guard<std::mutex> lock(g_rule_mutex);
  auto it = g_rules.find(k);
  if (it == g_rules.end()) {
    std::pair<std::vector<double>, std::vector<double>> r;
    build_gl(k, r.first, r.second);
    it = g_rules.emplace(k, std::move(r)).first;
  }
  return it->second;
}

}  // namespace

const std::vector<double>& gl_nodes(int k) { return rule(k).first; }
const std::vector<double>& gl_weights(int k) { return rule(k).second; }

double gauss(const std::function<double(double)>& f, double a, double b, int order) {
  const auto& x = gl_nodes(order);
  const auto& w = gl_weights(order);
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < order; ++i) s += w[i] * f(mid + half * x[i]);
  return s * half;
}

namespace {

struct Piece {
  double a, b, coarse, fine, err;
};

Piece make_piece(const std::function<double(double)>& f, double a, double b) {
  Piece p;
  p.a = a;
  p.b = b;
  p.coarse = gauss(f, a, b, 7);
  p.fine = gauss(f, a, b, 15);
  p.err = std::abs(p.fine - p.coarse);
  return p;
}

}  // namespace

AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  double rel_tol, int max_intervals, double drop_tol) {
  AdaptiveResult res;
  if (a >= b) {
    res.converged = true;
    return res;
  }
  auto cmp = [](const Piece& l, const Piece& r) { return l.err < r.err; };
  std::priority_queue<Piece, std::vector<Piece>, decltype(cmp)> heap(cmp);
  heap.push(make_piece(f, a, b));
  double total = heap.top().fine;
  double err_total = heap.top().err;
  int n = 1;
  while (n < max_intervals) {
    double scale = std::max(std::abs(total), 1e-300);
    if (err_total <= rel_tol * scale) break;
    Piece p = heap.top();
    if (p.err <= drop_tol * scale / std::max(n, 1)) break;
    heap.pop();
    double m = 0.5 * (p.a + p.b);
    Piece l = make_piece(f, p.a, m);
    Piece r = make_piece(f, m, p.b);
    total += l.fine + r.fine - p.fine;
    err_total += l.err + r.err - p.err;
    heap.push(l);
    heap.push(r);
    ++n;
  }
  res.value = total;
  res.intervals = n;
  res.converged = err_total <= rel_tol * std::max(std::abs(total), 1e-300) || n < max_intervals;
  return res;
}

AdaptiveResult integrate_adaptive_2d(const std::function<double(double, double)>& f, double ax,
                                     double bx, double ay, double by, double rel_tol) {
  auto outer = [&](double x) {
    return integrate_adaptive([&](double y) { return f(x, y); }, ay, by, rel_tol * 0.2).value;
  };
  return integrate_adaptive(outer, ax, bx, rel_tol);
}

}  // namespace nlms::quad
