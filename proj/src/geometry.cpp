#include "nlms/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nlms {

CylinderDomain CylinderDomain::intervals(std::vector<std::pair<double, double>> iv) {
  CylinderDomain d;
  if (iv.empty()) throw std::invalid_argument("domain: no intervals");
  for (auto& [a, b] : iv)
    if (!(a < b)) throw std::invalid_argument("domain: interval must be nonempty");
  std::sort(iv.begin(), iv.end());
  d.iv_ = std::move(iv);
  for (auto& [a, b] : d.iv_) d.r_o_ = std::max({d.r_o_, std::abs(a), std::abs(b)});
  return d;
}

CylinderDomain CylinderDomain::rectangles(std::vector<std::array<double, 4>> rects) {
  CylinderDomain d;
  if (rects.empty()) throw std::invalid_argument("domain: no rectangles");
  for (auto& r : rects)
    if (!(r[0] < r[1] && r[2] < r[3]))
      throw std::invalid_argument("domain: rectangle must be nonempty");
  d.rects_ = std::move(rects);
  for (auto& r : d.rects_)
    d.r_o_ = std::max(d.r_o_, std::hypot(std::max(std::abs(r[0]), std::abs(r[1])),
                                         std::max(std::abs(r[2]), std::abs(r[3]))));
  return d;
}

CylinderDomain CylinderDomain::all() {
  CylinderDomain d;
  d.all_ = true;
  d.r_o_ = std::numeric_limits<double>::infinity();
  return d;
}

bool CylinderDomain::contains(double x, double y) const {
  if (all_) return true;
  if (!iv_.empty()) {
    for (auto& [a, b] : iv_)
      if (x > a && x < b) return true;
    return false;
  }
  for (auto& r : rects_)
    if (x > r[0] && x < r[1] && y > r[2] && y < r[3]) return true;
  return false;
}

double CylinderDomain::interior_distance(double x, double y) const {
  if (all_) return std::numeric_limits<double>::infinity();
  if (!iv_.empty()) {
    for (auto& [a, b] : iv_)
      if (x > a && x < b) return std::min(x - a, b - x);
    return 0.0;
  }
  for (auto& r : rects_)
    if (x > r[0] && x < r[1] && y > r[2] && y < r[3])
      return std::min(std::min(x - r[0], r[1] - x), std::min(y - r[2], r[3] - y));
  return 0.0;
}

std::string CylinderDomain::describe() const {
  if (all_) return "all";
  std::ostringstream os;
  if (!iv_.empty()) {
    for (size_t i = 0; i < iv_.size(); ++i) {
      if (i) os << ";";
      os << iv_[i].first << " " << iv_[i].second;
    }
  } else {
    for (size_t i = 0; i < rects_.size(); ++i) {
      if (i) os << ";";
      os << rects_[i][0] << " " << rects_[i][1] << " " << rects_[i][2] << " " << rects_[i][3];
    }
  }
  return os.str();
}

ExteriorGraphData ExteriorGraphData::constant(double c) {
  ExteriorGraphData u;
  u.f_ = [c](double, double) { return c; };
  std::ostringstream os;
  os << "constant " << c;
  u.spec_ = os.str();
  return u;
}

ExteriorGraphData ExteriorGraphData::jump(double left, double right) {
  ExteriorGraphData u;
  u.f_ = [left, right](double x, double) { return x < 0 ? left : right; };
  std::ostringstream os;
  os << "jump " << left << " " << right;
  u.spec_ = os.str();
  return u;
}

ExteriorGraphData ExteriorGraphData::piecewise_linear(
    std::vector<std::pair<double, double>> pts) {
  if (pts.empty()) throw std::invalid_argument("exterior: no breakpoints");
  std::sort(pts.begin(), pts.end());
  ExteriorGraphData u;
  u.f_ = [pts](double x, double) {
    if (x <= pts.front().first) return pts.front().second;
    if (x >= pts.back().first) return pts.back().second;
    auto it = std::upper_bound(pts.begin(), pts.end(), std::make_pair(x, 1e300));
    auto lo = std::prev(it);
    double t = (x - lo->first) / (it->first - lo->first);
    return lo->second + t * (it->second - lo->second);
  };
  std::ostringstream os;
  os << "piecewise";
  for (auto& [x, v] : pts) os << " " << x << ":" << v;
  u.spec_ = os.str();
  return u;
}

std::vector<std::array<int, 3>> ball_offsets(int n, int r) {
  std::vector<std::array<int, 3>> out;
  int ymax = (n == 3) ? r : 0;
  for (int dy = -ymax; dy <= ymax; ++dy)
    for (int dx = -r; dx <= r; ++dx)
      for (int dv = -r; dv <= r; ++dv)
        if (dx * dx + dy * dy + dv * dv <= r * r) out.push_back({dx, dy, dv});
  return out;
}

CellSet CellSet::base(std::shared_ptr<const Grid> grid,
                      std::shared_ptr<const CylinderDomain> dom,
                      std::shared_ptr<const ExteriorGraphData> u,
                      const std::vector<uint8_t>& interior_bits) {
  CellSet e;
  e.op_ = Op::base;
  e.grid_ = std::move(grid);
  e.dom_ = std::move(dom);
  e.u_ = std::move(u);
  const Grid& g = *e.grid_;
  if (interior_bits.size() != size_t(g.cell_count()))
    throw std::invalid_argument("cellset: bit count does not match grid");
  e.bits_.assign(size_t(g.cell_count()), 0);
  for (CellIndex c = 0; c < g.cell_count(); ++c) {
    int ix, iy, iv;
    g.unflat(c, ix, iy, iv);
    double x = g.center(0, ix), y = g.n == 3 ? g.center(1, iy) : 0.0;
    if (e.dom_->contains(x, y)) {
      e.bits_[size_t(c)] = interior_bits[size_t(c)] ? 1 : 0;
    } else {
      e.bits_[size_t(c)] = (g.center(2, iv) < (*e.u_)(x, y)) ? 1 : 0;
    }
  }
  return e;
}

CellSet CellSet::raw(std::shared_ptr<const Grid> grid, std::vector<uint8_t> bits) {
  CellSet e;
  e.op_ = Op::raw;
  e.grid_ = std::move(grid);
  if (bits.size() != size_t(e.grid_->cell_count()))
    throw std::invalid_argument("cellset: bit count does not match grid");
  e.bits_ = std::move(bits);
  return e;
}

CellSet CellSet::subgraph(std::shared_ptr<const Grid> grid,
                          std::shared_ptr<const CylinderDomain> dom,
                          std::shared_ptr<const ExteriorGraphData> u,
                          const std::function<double(double, double)>& v) {
  const Grid& g = *grid;
  std::vector<uint8_t> bits(size_t(g.cell_count()), 0);
  for (CellIndex c = 0; c < g.cell_count(); ++c) {
    int ix, iy, iv;
    g.unflat(c, ix, iy, iv);
    double x = g.center(0, ix), y = g.n == 3 ? g.center(1, iy) : 0.0;
    bits[size_t(c)] = (g.center(2, iv) < v(x, y)) ? 1 : 0;
  }
  return base(std::move(grid), std::move(dom), std::move(u), bits);
}

bool CellSet::closure_contains(int ix, int iy, int iv) const {
  const Grid& g = *grid_;
  switch (op_) {
    case Op::raw:
      return iv < 0;  // member below the window, non-member elsewhere
    case Op::base: {
      double x = g.lo[0] + (ix + 0.5) * g.h;
      double y = g.n == 3 ? g.lo[1] + (iy + 0.5) * g.h : 0.0;
      double z = g.lo[2] + (iv + 0.5) * g.h;
      if (dom_->contains(x, y)) return iv < 0;  // Omega columns continue past the window
      return z < (*u_)(x, y);
    }
    case Op::complement:
      return !src_->contains_cell(ix, iy, iv);
    case Op::translate:
      return src_->contains_cell(ix - shift_[0], iy - shift_[1], iv - shift_[2]);
    case Op::dilate: {
      for (auto& o : ball_offsets(g.n, morph_r_))
        if (src_->contains_cell(ix - o[0], iy - o[1], iv - o[2])) return true;
      return false;
    }
    case Op::erode: {
      for (auto& o : ball_offsets(g.n, morph_r_))
        if (!src_->contains_cell(ix - o[0], iy - o[1], iv - o[2])) return false;
      return true;
    }
  }
  return false;
}

bool CellSet::contains_cell(int ix, int iy, int iv) const {
  if (grid_->in_window(ix, iy, iv)) return bits_[size_t(grid_->flat(ix, iy, iv))] != 0;
  return closure_contains(ix, iy, iv);
}

bool CellSet::boundary_cell(CellIndex c) const {
  const Grid& g = *grid_;
  int ix, iy, iv;
  g.unflat(c, ix, iy, iv);
  bool me = bits_[size_t(c)] != 0;
  const int ddy = (g.n == 3) ? 1 : 0;
  if (contains_cell(ix + 1, iy, iv) != me) return true;
  if (contains_cell(ix - 1, iy, iv) != me) return true;
  if (contains_cell(ix, iy, iv + 1) != me) return true;
  if (contains_cell(ix, iy, iv - 1) != me) return true;
  if (ddy && contains_cell(ix, iy + 1, iv) != me) return true;
  if (ddy && contains_cell(ix, iy - 1, iv) != me) return true;
  return false;
}

std::vector<CellIndex> CellSet::boundary_cells() const {
  std::vector<CellIndex> out;
  for (CellIndex c = 0; c < grid_->cell_count(); ++c)
    if (boundary_cell(c)) out.push_back(c);
  return out;
}

CellSet CellSet::complement() const {
  CellSet e;
  e.op_ = Op::complement;
  e.grid_ = grid_;
  e.src_ = std::make_shared<CellSet>(*this);
  e.dom_ = dom_;
  e.u_ = u_;
  e.bits_.resize(bits_.size());
  for (size_t i = 0; i < bits_.size(); ++i) e.bits_[i] = bits_[i] ? 0 : 1;
  return e;
}

CellSet CellSet::translate(const std::array<int, 3>& cells) const {
  CellSet e;
  e.op_ = Op::translate;
  e.grid_ = grid_;
  e.src_ = std::make_shared<CellSet>(*this);
  e.dom_ = dom_;
  e.u_ = u_;
  e.shift_ = cells;
  const Grid& g = *grid_;
  e.bits_.assign(bits_.size(), 0);
  for (CellIndex c = 0; c < g.cell_count(); ++c) {
    int ix, iy, iv;
    g.unflat(c, ix, iy, iv);
    e.bits_[size_t(c)] =
        contains_cell(ix - cells[0], iy - cells[1], iv - cells[2]) ? 1 : 0;
  }
  return e;
}

namespace {

int rounded_radius(double delta, double h) {
  if (delta < 0) throw std::domain_error("morphology: delta must be nonnegative");
  return int(std::ceil(delta / h - 1e-9));
}

}  // namespace

CellSet CellSet::supconvolve(double delta) const {
  int r = rounded_radius(delta, grid_->h);
  CellSet e;
  e.op_ = Op::dilate;
  e.grid_ = grid_;
  e.src_ = std::make_shared<CellSet>(*this);
  e.dom_ = dom_;
  e.u_ = u_;
  e.morph_r_ = r;
  const Grid& g = *grid_;
  auto offs = ball_offsets(g.n, r);
  e.bits_.assign(bits_.size(), 0);
#pragma omp parallel for schedule(static)
  for (CellIndex c = 0; c < g.cell_count(); ++c) {
    int ix, iy, iv;
    g.unflat(c, ix, iy, iv);
    uint8_t m = 0;
    for (auto& o : offs) {
      if (contains_cell(ix - o[0], iy - o[1], iv - o[2])) {
        m = 1;
        break;
      }
    }
    e.bits_[size_t(c)] = m;
  }
  return e;
}

CellSet CellSet::subconvolve(double delta) const {
  int r = rounded_radius(delta, grid_->h);
  CellSet e;
  e.op_ = Op::erode;
  e.grid_ = grid_;
  e.src_ = std::make_shared<CellSet>(*this);
  e.dom_ = dom_;
  e.u_ = u_;
  e.morph_r_ = r;
  const Grid& g = *grid_;
  auto offs = ball_offsets(g.n, r);
  e.bits_.assign(bits_.size(), 0);
#pragma omp parallel for schedule(static)
  for (CellIndex c = 0; c < g.cell_count(); ++c) {
    int ix, iy, iv;
    g.unflat(c, ix, iy, iv);
    uint8_t m = 1;
    for (auto& o : offs) {
      if (!contains_cell(ix - o[0], iy - o[1], iv - o[2])) {
        m = 0;
        break;
      }
    }
    e.bits_[size_t(c)] = m;
  }
  return e;
}

ClosureDesc CellSet::closure_desc() const {
  ClosureDesc cd;
  switch (op_) {
    case Op::base:
      cd.dom = dom_.get();
      cd.u = u_.get();
      cd.ok = true;
      return cd;
    case Op::complement: {
      cd = src_->closure_desc();
      cd.flipped = !cd.flipped;
      return cd;
    }
    case Op::translate: {
      cd = src_->closure_desc();
      cd.vshift += shift_[2] * grid_->h;
      cd.hshift_x += shift_[0] * grid_->h;
      cd.hshift_y += shift_[1] * grid_->h;
      return cd;
    }
    default:
      cd.ok = false;
      return cd;
  }
}

std::vector<CellIndex> region_cells(const CylinderDomain& dom, const Grid& g, RegionKind kind,
                                    const RegionParams& p, bool* empty_flag) {
  std::vector<CellIndex> out;
  for (CellIndex c = 0; c < g.cell_count(); ++c) {
    int ix, iy, iv;
    g.unflat(c, ix, iy, iv);
    double x = g.center(0, ix), y = g.n == 3 ? g.center(1, iy) : 0.0;
    double z = g.center(2, iv);
    double rh = (g.n == 3) ? std::hypot(x, y) : std::abs(x);
    bool in = false;
    switch (kind) {
      case RegionKind::Omega:
        in = dom.contains(x, y);
        break;
      case RegionKind::OmegaEta:
        in = dom.interior_distance(x, y) > p.eta;
        break;
      case RegionKind::CR:
        in = rh < p.R;
        break;
      case RegionKind::DREta:
        in = (rh < p.R && !dom.contains(x, y)) || dom.interior_distance(x, y) > 2.0 * p.eta;
        break;
      case RegionKind::PTrap: {
        if (p.R <= 0 || p.lambda <= 0) throw std::invalid_argument("region: bad trap parameters");
        in = rh <= p.lambda * p.R &&
             std::abs(z) <= p.R - std::sqrt(std::max(0.0, p.R * p.R - rh * rh));
        break;
      }
      case RegionKind::PGraph: {
        if (p.L <= 0 || p.C_o <= 0) throw std::invalid_argument("region: bad graph parameters");
        in = rh <= p.L && std::abs(z) <= p.C_o * std::pow(rh, 1.0 + p.alpha);
        break;
      }
    }
    if (in) out.push_back(c);
  }
  if (empty_flag) *empty_flag = out.empty();
  return out;
}

}  // namespace nlms
