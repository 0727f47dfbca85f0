#include "csmw/image.hpp"

#include <png.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>

namespace csmw {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& why) {
  throw std::invalid_argument(path + ": " + why);
}

int read_pgm_token(std::istream& in, const std::string& path) {
  // skip whitespace and '#' comments, then parse a decimal token
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  if (c == EOF || !std::isdigit(c)) fail(path, "malformed PGM header");
  int value = 0;
  while (c != EOF && std::isdigit(c)) {
    value = value * 10 + (c - '0');
    if (value > 1 << 30) fail(path, "PGM header value out of range");
    c = in.get();
  }
  if (c != EOF) in.unget();
  return value;
}

Image load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open");
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (magic[0] != 'P' || magic[1] != '5') fail(path, "not a binary PGM (P5)");
  int width = read_pgm_token(in, path);
  int height = read_pgm_token(in, path);
  int maxval = read_pgm_token(in, path);
  if (width <= 0 || height <= 0) fail(path, "bad PGM dimensions");
  if (maxval != 255) fail(path, "only maxval 255 PGM is supported");
  in.get();  // single whitespace byte after the header
  std::vector<unsigned char> raw(static_cast<std::size_t>(width) * height);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size()) fail(path, "truncated PGM data");
  Image img(height, width);
  for (std::size_t i = 0; i < raw.size(); ++i) img.px[i] = static_cast<double>(raw[i]);
  return img;
}

Image load_png(const std::string& path) {
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> fp(std::fopen(path.c_str(), "rb"), std::fclose);
  if (!fp) fail(path, "cannot open");
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) fail(path, "png init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    fail(path, "png init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(path, "png decode failed");
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);
  png_uint_32 width = png_get_image_width(png, info);
  png_uint_32 height = png_get_image_height(png, info);
  png_byte color = png_get_color_type(png, info);
  png_byte depth = png_get_bit_depth(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (depth == 16) png_set_strip_16(png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (color == PNG_COLOR_TYPE_RGB || color == PNG_COLOR_TYPE_RGB_ALPHA ||
      color == PNG_COLOR_TYPE_PALETTE) {
    png_set_rgb_to_gray_fixed(png, 1, -1, -1);
  }
  png_read_update_info(png, info);
  if (png_get_rowbytes(png, info) != width) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(path, "PNG did not reduce to 8-bit grayscale");
  }
  Image img(static_cast<int>(height), static_cast<int>(width));
  std::vector<unsigned char> row(width);
  for (png_uint_32 r = 0; r < height; ++r) {
    png_read_row(png, row.data(), nullptr);
    for (png_uint_32 c = 0; c < width; ++c) img.at(static_cast<int>(r), static_cast<int>(c)) = row[c];
  }
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

}  // namespace

Image load_image(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) fail(path, "cannot open");
  unsigned char sig[2] = {0, 0};
  probe.read(reinterpret_cast<char*>(sig), 2);
  probe.close();
  if (sig[0] == 'P' && sig[1] == '5') return load_pgm(path);
  if (sig[0] == 0x89 && sig[1] == 'P') return load_png(path);
  fail(path, "unrecognized image format (want PGM P5 or grayscale PNG)");
}

std::uint8_t quantize_u8(double v) {
  if (!(v > 0.0)) return 0;  // NaN and negatives clamp to 0
  if (v >= 255.0) return 255;
  return static_cast<std::uint8_t>(std::floor(v + 0.5));
}

void save_image_pgm(const Image& img, const std::string& path) {
  if (img.rows <= 0 || img.cols <= 0) throw std::invalid_argument("save_image_pgm: empty image");
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open for writing");
  out << "P5\n" << img.cols << " " << img.rows << "\n255\n";
  std::vector<unsigned char> raw(img.px.size());
  for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = quantize_u8(img.px[i]);
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) fail(path, "write failed");
}

ScanSignal scan_image(const Image& img, ScanAxis axis, ScanStrategy strategy) {
  ScanSignal sig;
  sig.rows = img.rows;
  sig.cols = img.cols;
  sig.axis = axis;
  sig.strategy = strategy;
  sig.samples.reserve(static_cast<std::size_t>(img.size()));
  const bool boustro = strategy == ScanStrategy::Boustrophedon;
  if (axis == ScanAxis::Columns) {
    for (int c = 0; c < img.cols; ++c) {
      const bool rev = boustro && (c % 2 == 1);
      for (int i = 0; i < img.rows; ++i) {
        int r = rev ? img.rows - 1 - i : i;
        sig.samples.push_back(img.at(r, c));
      }
    }
  } else {
    for (int r = 0; r < img.rows; ++r) {
      const bool rev = boustro && (r % 2 == 1);
      for (int i = 0; i < img.cols; ++i) {
        int c = rev ? img.cols - 1 - i : i;
        sig.samples.push_back(img.at(r, c));
      }
    }
  }
  return sig;
}

Image unscan_image(const ScanSignal& sig) {
  if (sig.samples.size() != static_cast<std::size_t>(sig.rows) * sig.cols)
    throw std::invalid_argument("unscan_image: sample count does not match shape");
  Image img(sig.rows, sig.cols);
  const bool boustro = sig.strategy == ScanStrategy::Boustrophedon;
  std::size_t k = 0;
  if (sig.axis == ScanAxis::Columns) {
    for (int c = 0; c < img.cols; ++c) {
      const bool rev = boustro && (c % 2 == 1);
      for (int i = 0; i < img.rows; ++i, ++k) {
        int r = rev ? img.rows - 1 - i : i;
        img.at(r, c) = sig.samples[k];
      }
    }
  } else {
    for (int r = 0; r < img.rows; ++r) {
      const bool rev = boustro && (r % 2 == 1);
      for (int i = 0; i < img.cols; ++i, ++k) {
        int c = rev ? img.cols - 1 - i : i;
        img.at(r, c) = sig.samples[k];
      }
    }
  }
  return img;
}

std::vector<double> vec_column_major(const Image& img) {
  std::vector<double> v(static_cast<std::size_t>(img.size()));
  std::size_t k = 0;
  for (int c = 0; c < img.cols; ++c)
    for (int r = 0; r < img.rows; ++r) v[k++] = img.at(r, c);
  return v;
}

Image image_from_vec(const std::vector<double>& v, int rows, int cols) {
  if (v.size() != static_cast<std::size_t>(rows) * cols)
    throw std::invalid_argument("image_from_vec: size mismatch");
  Image img(rows, cols);
  std::size_t k = 0;
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) img.at(r, c) = v[k++];
  return img;
}

}  // namespace csmw
