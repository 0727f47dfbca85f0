#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace csmw {

// Grayscale raster held as doubles, row-major. Values are unconstrained in
// memory; quantization to [0,255] happens on save.
struct Image {
  int rows = 0;
  int cols = 0;
  std::vector<double> px;

  Image() = default;
  Image(int r, int c) : rows(r), cols(c), px(static_cast<std::size_t>(r) * c, 0.0) {}

  double& at(int r, int c) { return px[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return px[static_cast<std::size_t>(r) * cols + c]; }
  std::int64_t size() const { return static_cast<std::int64_t>(rows) * cols; }
};

// Loads an 8-bit grayscale image. PGM (P5, maxval 255) is the canonical
// format; 8-bit grayscale PNG is accepted as a convenience.
Image load_image(const std::string& path);

// Writes binary PGM with header "P5\n<width> <height>\n255\n". Samples are
// clamped to [0,255] and rounded half up.
void save_image_pgm(const Image& img, const std::string& path);

std::uint8_t quantize_u8(double v);

enum class ScanAxis { Columns, Rows };
enum class ScanStrategy { Natural, Boustrophedon };

// 1-D scan of an image plus enough context to invert it.
struct ScanSignal {
  std::vector<double> samples;
  int rows = 0;
  int cols = 0;
  ScanAxis axis = ScanAxis::Columns;
  ScanStrategy strategy = ScanStrategy::Natural;
};

// Column-wise scans stack columns left to right, row-wise scans stack rows
// top to bottom. Boustrophedon reverses every odd-numbered line (0-based).
ScanSignal scan_image(const Image& img, ScanAxis axis, ScanStrategy strategy);
Image unscan_image(const ScanSignal& sig);

// vec(X) in column-major order, and its inverse.
std::vector<double> vec_column_major(const Image& img);
Image image_from_vec(const std::vector<double>& v, int rows, int cols);

}  // namespace csmw
