// Small quadrature toolbox: fixed Gauss-Legendre rules and adaptive 1D/2D
// integration used by the kernel and the lemma-check integrals.
#pragma once

#include <functional>
#include <vector>

namespace nlms::quad {

// Nodes/weights of the k-point Gauss-Legendre rule on [-1,1].
const std::vector<double>& gl_nodes(int k);
const std::vector<double>& gl_weights(int k);

// Fixed-order Gauss-Legendre on [a,b].
double gauss(const std::function<double(double)>& f, double a, double b, int order);

struct AdaptiveResult {
  double value = 0.0;
  bool converged = false;
  int intervals = 0;
};

// Adaptive 1D integration by interval bisection; an interval is split until
// its 15-point vs 7-point estimates agree to rel_tol of the running total,
// or until it contributes less than drop_tol of the running total.
AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  double rel_tol, int max_intervals = 200000,
                                  double drop_tol = 1e-8);

// Nested adaptive 2D integration over [ax,bx] x [ay,by].
AdaptiveResult integrate_adaptive_2d(const std::function<double(double, double)>& f, double ax,
                                     double bx, double ay, double by, double rel_tol);

}  // namespace nlms::quad
