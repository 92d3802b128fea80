// Benchmark of the OpenMP kernels against the serial reference versions.
#include <chrono>
#include <cstdio>
#include <random>

#include "nlms/curvature.hpp"
#include "nlms/energy.hpp"
#include "nlms/reference.hpp"

using namespace nlms;

namespace {

double now() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

CellSet random_set(std::shared_ptr<const Grid> grid, std::shared_ptr<const CylinderDomain> dom,
                   std::shared_ptr<const ExteriorGraphData> u, uint32_t seed) {
  std::mt19937 rng(seed);
  const Grid& g = *grid;
  std::vector<uint8_t> bits(size_t(g.cell_count()), 0);
  for (auto& b : bits) b = (rng() >> 16) & 1;
  return CellSet::base(std::move(grid), std::move(dom), std::move(u), bits);
}

}  // namespace

int main() {
  const int cells = 96;
  auto grid = std::make_shared<Grid>(Grid::centered(2, 1.0 / 16.0, cells, cells));
  auto dom = std::make_shared<CylinderDomain>(CylinderDomain::intervals({{-1.0, 1.0}}));
  auto u = std::make_shared<ExteriorGraphData>(ExteriorGraphData::constant(0.0));
  Kernel k(2, 0.25, TailPolicy::halfspace_columns);

  CellSet e = random_set(grid, dom, u, 7u);

  std::printf("window %dx%d (%lld cells)\n", cells, cells, (long long)grid->cell_count());

  double t0 = now();
  EnergyValue par = s_perimeter(e, *dom, k, *grid);
  double t1 = now();
  EnergyValue ser = reference::s_perimeter_naive(e, *dom, k, *grid);
  double t2 = now();
  std::printf("s_perimeter     omp %8.3fs  serial %8.3fs  |diff| %.3e\n", t1 - t0, t2 - t1,
              std::abs(par.value - ser.value));

  auto boundary = e.boundary_cells();
  CellIndex x = boundary[boundary.size() / 2];
  t0 = now();
  CurvatureSample smp = nmc(e, x, k, *grid);
  t1 = now();
  double ref = reference::nmc_estimate_naive(e, x, k, *grid, 2.0 * grid->h);
  t2 = now();
  std::printf("nmc             omp %8.3fs  serial %8.3fs  |diff| %.3e\n", t1 - t0, t2 - t1,
              std::abs(smp.estimates.back() - ref));

  t0 = now();
  CellSet d1 = e.supconvolve(4.0 * grid->h);
  t1 = now();
  CellSet d2 = reference::supconvolve_naive(e, 4.0 * grid->h);
  t2 = now();
  std::printf("supconvolve     omp %8.3fs  serial %8.3fs  equal %s\n", t1 - t0, t2 - t1,
              d1.bits() == d2.bits() ? "yes" : "NO");
  return 0;
}
