// Cylinder domains, exterior graph data, lattice set representation with
// structural subgraph closure, and the sup/subconvolution morphology.
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nlms/types.hpp"

namespace nlms {

// Omega_o: finite union of open intervals (n=2) or axis-aligned open
// rectangles (n=3).  Omega = Omega_o x R.
class CylinderDomain {
 public:
  static CylinderDomain intervals(std::vector<std::pair<double, double>> iv);
  static CylinderDomain rectangles(std::vector<std::array<double, 4>> rects);
  // Window-covering domain (no exterior columns inside the window).
  static CylinderDomain all();

  bool contains(double x, double y = 0.0) const;
  // Distance from an interior point to the boundary of its containing piece;
  // zero outside.  Membership of Omega_eta is interior_distance > eta.
  double interior_distance(double x, double y = 0.0) const;
  double R_o() const { return r_o_; }
  bool covers_everything() const { return all_; }
  const std::vector<std::pair<double, double>>& pieces_1d() const { return iv_; }
  std::string describe() const;

 private:
  CylinderDomain() = default;
  bool all_ = false;
  std::vector<std::pair<double, double>> iv_;
  std::vector<std::array<double, 4>> rects_;
  double r_o_ = 0.0;
};

// Exterior boundary height u, evaluable at any horizontal position; the
// sampled height map on lattice columns is derived on demand.
class ExteriorGraphData {
 public:
  static ExteriorGraphData constant(double c);
  // left value for x < 0, right value for x >= 0 (the jump sits at the
  // cylinder axis plane; only exterior columns are ever sampled).
  static ExteriorGraphData jump(double left, double right);
  // Piecewise linear in x (sorted breakpoints), constant beyond the ends.
  static ExteriorGraphData piecewise_linear(std::vector<std::pair<double, double>> pts);

  double operator()(double x, double y = 0.0) const { return f_(x, y); }
  const std::string& spec() const { return spec_; }

 private:
  std::function<double(double, double)> f_;
  std::string spec_;
};

// Closure of a set reduced to subgraph form (base/translate/complement
// chains).  Morphological sets have no such reduction; ok stays false.
struct ClosureDesc {
  const CylinderDomain* dom = nullptr;
  const ExteriorGraphData* u = nullptr;
  double vshift = 0.0;
  double hshift_x = 0.0;
  double hshift_y = 0.0;
  bool flipped = false;
  bool ok = false;
};

// A binary configuration over the window lattice together with the rule
// classifying every cell beyond the window.  Values are immutable; morphology
// and translation produce new values that keep enough provenance to answer
// membership queries on the whole lattice.
class CellSet {
 public:
  // Base set: interior bits on Omega columns, exterior window columns forced
  // to the subgraph of u, beyond-window cells via the closure rule.
  static CellSet base(std::shared_ptr<const Grid> grid,
                      std::shared_ptr<const CylinderDomain> dom,
                      std::shared_ptr<const ExteriorGraphData> u,
                      const std::vector<uint8_t>& interior_bits);
  // Arbitrary window pattern; beyond-window cells are member below the
  // window bottom and non-member elsewhere.
  static CellSet raw(std::shared_ptr<const Grid> grid, std::vector<uint8_t> bits);
  // Subgraph of a height function over every window column (exterior columns
  // still follow u where dom does not contain them).
  static CellSet subgraph(std::shared_ptr<const Grid> grid,
                          std::shared_ptr<const CylinderDomain> dom,
                          std::shared_ptr<const ExteriorGraphData> u,
                          const std::function<double(double, double)>& v);

  const Grid& grid() const { return *grid_; }
  std::shared_ptr<const Grid> grid_ptr() const { return grid_; }
  const std::vector<uint8_t>& bits() const { return bits_; }
  bool bit(CellIndex c) const { return bits_[size_t(c)] != 0; }

  // Membership on the whole lattice (cell coordinates may lie outside the
  // window).
  bool contains_cell(int ix, int iy, int iv) const;
  // Signed indicator chi_E - chi_{E^c} at a cell.
  int sign(CellIndex c) const { return bits_[size_t(c)] ? 1 : -1; }

  bool boundary_cell(CellIndex c) const;
  std::vector<CellIndex> boundary_cells() const;

  CellSet complement() const;
  CellSet translate(const std::array<int, 3>& cells) const;
  // Morphology with the closed Euclidean ball of radius delta (rounded up to
  // a whole number of cells).
  CellSet supconvolve(double delta) const;
  CellSet subconvolve(double delta) const;
  int last_rounded_radius_cells() const { return morph_r_; }

  std::shared_ptr<const CylinderDomain> domain() const { return dom_; }
  std::shared_ptr<const ExteriorGraphData> exterior() const { return u_; }
  ClosureDesc closure_desc() const;

  bool operator==(const CellSet& o) const {
    return grid_->cell_count() == o.grid_->cell_count() && bits_ == o.bits_;
  }

 private:
  CellSet() = default;
  bool closure_contains(int ix, int iy, int iv) const;

  enum class Op { base, raw, complement, translate, dilate, erode };
  Op op_ = Op::raw;
  std::shared_ptr<const Grid> grid_;
  std::vector<uint8_t> bits_;
  std::shared_ptr<const CellSet> src_;
  std::shared_ptr<const CylinderDomain> dom_;
  std::shared_ptr<const ExteriorGraphData> u_;
  std::array<int, 3> shift_{0, 0, 0};
  int morph_r_ = 0;
};

// Lattice offsets of the closed Euclidean ball of radius r cells.
std::vector<std::array<int, 3>> ball_offsets(int n, int r);

enum class RegionKind { Omega, OmegaEta, CR, DREta, PTrap, PGraph };

struct RegionParams {
  double eta = 0.0;
  double R = 0.0;
  double lambda = 0.0;
  double L = 0.0;
  double alpha = 0.0;
  double C_o = 0.0;
};

// Cells whose centers satisfy the region predicate, in canonical flat order.
// An empty result is legal; *empty_flag (when given) records it.
std::vector<CellIndex> region_cells(const CylinderDomain& dom, const Grid& g, RegionKind kind,
                                    const RegionParams& params, bool* empty_flag = nullptr);

}  // namespace nlms
