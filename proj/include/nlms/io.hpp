// Raster, sidecar, CSV and report emission.  All output is deterministic:
// the same inputs produce byte-identical files.
#pragma once

#include <string>
#include <vector>

#include "nlms/geometry.hpp"
#include "nlms/types.hpp"

namespace nlms {

// Deterministic float formatting used in every text artifact.
std::string fmt_double(double v);

// Binary P5 raster, one byte per cell, 255 = member.  Rows are vertical
// levels top to bottom, columns in canonical column order.
void write_raster_p5(const std::string& path, const CellSet& e);

struct RasterData {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> bytes;  // row-major, top row first
};
RasterData read_raster_p5(const std::string& path);

// Sidecar metadata document (key = value lines).
void write_raster_meta(const std::string& path, const CellSet& e, const CylinderDomain& dom,
                       const ExteriorGraphData& u);

struct MetaData {
  int n = 2;
  double h = 0;
  int horiz_cells = 0, vert_cells = 0;
  std::array<double, 3> lo{0, 0, 0};
  std::string omega;
  std::vector<std::pair<double, double>> u_samples;
};
MetaData read_raster_meta(const std::string& path);

// Reconstructs the window configuration from a raster + sidecar pair.
CellSet load_cellset(const std::string& raster_path, const std::string& meta_path,
                     std::shared_ptr<const CylinderDomain> dom,
                     std::shared_ptr<const ExteriorGraphData> u);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// CSV writer: header row then data rows, fields formatted with fmt_double.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void add_row(const std::vector<std::string>& fields);
  void write(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace nlms
