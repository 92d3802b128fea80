#include "nlms/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace nlms {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_raster_p5(const std::string& path, const CellSet& e) {
  const Grid& g = e.grid();
  if (g.n != 2)
    throw std::invalid_argument("raster: only n=2 configurations have a 2-d raster");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("raster: cannot open " + path);
  int w = g.count[0], hgt = g.count[2];
  f << "P5\n" << w << " " << hgt << "\n255\n";
  std::vector<uint8_t> row(static_cast<size_t>(w));
  for (int iv = hgt - 1; iv >= 0; --iv) {
    for (int ix = 0; ix < w; ++ix) row[size_t(ix)] = e.bit(g.flat(ix, 0, iv)) ? 255 : 0;
    f.write(reinterpret_cast<const char*>(row.data()), w);
  }
}

RasterData read_raster_p5(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("raster: cannot open " + path);
  std::string magic;
  f >> magic;
  if (magic != "P5") throw std::runtime_error("raster: not a P5 file");
  RasterData r;
  int maxval;
  f >> r.width >> r.height >> maxval;
  f.get();
  if (maxval != 255) throw std::runtime_error("raster: unexpected maxval");
  r.bytes.resize(size_t(r.width) * size_t(r.height));
  f.read(reinterpret_cast<char*>(r.bytes.data()), std::streamsize(r.bytes.size()));
  if (!f) throw std::runtime_error("raster: truncated file");
  return r;
}

void write_raster_meta(const std::string& path, const CellSet& e, const CylinderDomain& dom,
                       const ExteriorGraphData& u) {
  const Grid& g = e.grid();
  std::ostringstream os;
  os << "n = " << g.n << "\n";
  os << "h = " << fmt_double(g.h) << "\n";
  os << "horiz_cells = " << g.count[0] << "\n";
  os << "vert_cells = " << g.count[2] << "\n";
  os << "lo_x = " << fmt_double(g.lo[0]) << "\n";
  os << "lo_y = " << fmt_double(g.lo[1]) << "\n";
  os << "lo_v = " << fmt_double(g.lo[2]) << "\n";
  os << "omega = " << dom.describe() << "\n";
  os << "exterior = " << u.spec() << "\n";
  os << "u_samples =";
  for (int ix = 0; ix < g.count[0]; ++ix) {
    double x = g.center(0, ix);
    if (dom.contains(x, 0.0)) continue;
    os << " " << fmt_double(x) << ":" << fmt_double(u(x, 0.0));
  }
  os << "\n";
  write_text_file(path, os.str());
}

MetaData read_raster_meta(const std::string& path) {
  std::istringstream is(read_text_file(path));
  MetaData m;
  std::string line;
  while (std::getline(is, line)) {
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq);
    std::string val = line.substr(eq + 1);
    auto trim = [](std::string& s) {
      while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
      while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.pop_back();
    };
    trim(key);
    trim(val);
    if (key == "n") m.n = std::stoi(val);
    else if (key == "h") m.h = std::stod(val);
    else if (key == "horiz_cells") m.horiz_cells = std::stoi(val);
    else if (key == "vert_cells") m.vert_cells = std::stoi(val);
    else if (key == "lo_x") m.lo[0] = std::stod(val);
    else if (key == "lo_y") m.lo[1] = std::stod(val);
    else if (key == "lo_v") m.lo[2] = std::stod(val);
    else if (key == "omega") m.omega = val;
    else if (key == "u_samples") {
      std::istringstream vs(val);
      std::string tok;
      while (vs >> tok) {
        auto colon = tok.find(':');
        if (colon == std::string::npos) continue;
        m.u_samples.emplace_back(std::stod(tok.substr(0, colon)),
                                 std::stod(tok.substr(colon + 1)));
      }
    }
  }
  return m;
}

CellSet load_cellset(const std::string& raster_path, const std::string& meta_path,
                     std::shared_ptr<const CylinderDomain> dom,
                     std::shared_ptr<const ExteriorGraphData> u) {
  MetaData m = read_raster_meta(meta_path);
  RasterData r = read_raster_p5(raster_path);
  if (r.width != m.horiz_cells || r.height != m.vert_cells)
    throw std::runtime_error("raster and sidecar dimensions disagree");
  auto grid = std::make_shared<Grid>(m.n, m.h, std::array<int, 3>{m.horiz_cells, 1, m.vert_cells},
                                     m.lo);
  std::vector<uint8_t> bits(size_t(grid->cell_count()), 0);
  for (int iv = 0; iv < m.vert_cells; ++iv)
    for (int ix = 0; ix < m.horiz_cells; ++ix) {
      uint8_t byte = r.bytes[size_t(m.vert_cells - 1 - iv) * size_t(m.horiz_cells) + size_t(ix)];
      bits[size_t(grid->flat(ix, 0, iv))] = byte >= 128 ? 1 : 0;
    }
  return CellSet::base(grid, std::move(dom), std::move(u), bits);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvWriter::add_row(const std::vector<std::string>& fields) {
  if (fields.size() != header_.size())
    throw std::invalid_argument("csv: row width does not match header");
  rows_.push_back(fields);
}

void CsvWriter::write(const std::string& path) const {
  std::ostringstream os;
  for (size_t i = 0; i < header_.size(); ++i) os << (i ? "," : "") << header_[i];
  os << "\n";
  for (auto& row : rows_) {
    for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }
  write_text_file(path, os.str());
}

}  // namespace nlms
