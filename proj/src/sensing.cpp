#include "csmw/sensing.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "csmw/kernels.hpp"
#include "csmw/rng.hpp"

namespace csmw {

namespace {

void check_shape(int rows, int cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("sensing: non-positive shape");
}

void check_block_fit(const DenseSensing& d, int rows, int cols) {
  if (d.block < 1) throw std::invalid_argument("sensing: block must be positive");
  if (rows % d.block != 0 || cols % d.block != 0)
    throw std::invalid_argument("sensing: block " + std::to_string(d.block) +
                                " does not divide " + std::to_string(rows) + "x" +
                                std::to_string(cols));
}

}  // namespace

std::string dense_kind_name(DenseKind kind) {
  return kind == DenseKind::Gaussian ? "gaussian" : "bernoulli";
}

DenseKind dense_kind_from_name(const std::string& name) {
  if (name == "gaussian") return DenseKind::Gaussian;
  if (name == "bernoulli") return DenseKind::Bernoulli;
  throw std::invalid_argument("unknown dense sensing kind: " + name);
}

SampleMask make_pci(int rows, int cols, double ratio, std::uint64_t seed) {
  check_shape(rows, cols);
  if (!(ratio > 0.0) || ratio > 1.0) throw std::invalid_argument("sensing: ratio must be in (0,1]");
  const std::size_t n = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  const std::size_t m =
      static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n)));
  if (m < 1 || m > n) throw std::invalid_argument("sensing: measurement count out of range");
  SplitMix64 rng(seed);
  SampleMask mask;
  const std::vector<std::int64_t> picks =
      sample_without_replacement(static_cast<std::int64_t>(n), static_cast<std::int64_t>(m), rng);
  mask.omega.assign(picks.begin(), picks.end());
  mask.rows = rows;
  mask.cols = cols;
  mask.seed = seed;
  return mask;
}

std::vector<double> sense_pci(const Image& img, const SampleMask& mask) {
  if (img.rows != mask.rows || img.cols != mask.cols)
    throw std::invalid_argument("sensing: mask/image shape mismatch");
  const std::vector<double> v = vec_column_major(img);
  std::vector<double> y(mask.omega.size());
  for (std::size_t i = 0; i < mask.omega.size(); ++i) y[i] = v[mask.omega[i]];
  return y;
}

Image embed_zeros(const std::vector<double>& y, const SampleMask& mask) {
  if (y.size() != mask.omega.size())
    throw std::invalid_argument("sensing: measurement length does not match mask");
  std::vector<double> v(static_cast<std::size_t>(mask.rows) * mask.cols, 0.0);
  for (std::size_t i = 0; i < mask.omega.size(); ++i) v[mask.omega[i]] = y[i];
  return image_from_vec(v, mask.rows, mask.cols);
}

DenseSensing make_dense(DenseKind kind, int rows, int cols, double ratio, int block,
                        std::uint64_t seed) {
  check_shape(rows, cols);
  if (!(ratio > 0.0) || ratio > 1.0) throw std::invalid_argument("sensing: ratio must be in (0,1]");
  DenseSensing d;
  d.kind = kind;
  d.block = block;
  d.ratio = ratio;
  d.seed = seed;
  check_block_fit(d, rows, cols);
  const int b2 = block * block;
  d.block_meas = static_cast<int>(std::llround(ratio * b2));
  if (d.block_meas < 1) throw std::invalid_argument("sensing: ratio too small for block size");
  const double scale = 1.0 / std::sqrt(static_cast<double>(b2) * ratio);
  d.phi.resize(static_cast<std::size_t>(d.block_meas) * b2);
  SplitMix64 rng(seed);
  if (kind == DenseKind::Gaussian) {
    for (double& v : d.phi) v = scale * rng.next_gauss();
  } else {
    for (double& v : d.phi) v = (rng.next_u64() >> 63) ? scale : -scale;
  }
  return d;
}

std::vector<double> sense_dense(const Image& img, const DenseSensing& d) {
  check_block_fit(d, img.rows, img.cols);
  const int b = d.block;
  const int b2 = b * b;
  const int brows = img.rows / b;
  const int bcols = img.cols / b;
  std::vector<double> y(static_cast<std::size_t>(brows) * bcols * d.block_meas);
  std::vector<double> vb(static_cast<std::size_t>(b2));
  std::size_t out = 0;
  for (int br = 0; br < brows; ++br)
    for (int bc = 0; bc < bcols; ++bc) {
      for (int c = 0; c < b; ++c)
        for (int r = 0; r < b; ++r)
          vb[static_cast<std::size_t>(c) * b + r] = img.at(br * b + r, bc * b + c);
      kern::ops().gemv(static_cast<std::size_t>(d.block_meas), static_cast<std::size_t>(b2),
                       d.phi.data(), vb.data(), y.data() + out);
      out += static_cast<std::size_t>(d.block_meas);
    }
  return y;
}

Image adjoint_dense(const std::vector<double>& y, const DenseSensing& d, int rows, int cols) {
  check_block_fit(d, rows, cols);
  const int b = d.block;
  const int b2 = b * b;
  const int brows = rows / b;
  const int bcols = cols / b;
  if (y.size() != static_cast<std::size_t>(brows) * bcols * d.block_meas)
    throw std::invalid_argument("sensing: measurement length does not match block grid");
  Image img;
  img.rows = rows;
  img.cols = cols;
  img.px.assign(static_cast<std::size_t>(rows) * cols, 0.0);
  std::vector<double> vb(static_cast<std::size_t>(b2));
  std::size_t in = 0;
  for (int br = 0; br < brows; ++br)
    for (int bc = 0; bc < bcols; ++bc) {
      vb.assign(vb.size(), 0.0);
      kern::ops().gemv_t_acc(static_cast<std::size_t>(d.block_meas),
                             static_cast<std::size_t>(b2), d.phi.data(), y.data() + in, vb.data());
      in += static_cast<std::size_t>(d.block_meas);
      for (int c = 0; c < b; ++c)
        for (int r = 0; r < b; ++r)
          img.at(br * b + r, bc * b + c) = vb[static_cast<std::size_t>(c) * b + r];
    }
  return img;
}

void save_mask(const SampleMask& mask, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << "PCIMASK " << mask.rows << ' ' << mask.cols << ' ' << mask.omega.size() << '\n';
  for (std::size_t idx : mask.omega) os << idx << '\n';
  if (!os) throw std::runtime_error("write failed: " + path);
}

SampleMask load_mask(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  std::string magic;
  std::size_t m = 0;
  SampleMask mask;
  if (!(is >> magic >> mask.rows >> mask.cols >> m) || magic != "PCIMASK")
    throw std::runtime_error("not a mask file: " + path);
  check_shape(mask.rows, mask.cols);
  const std::size_t n = static_cast<std::size_t>(mask.rows) * mask.cols;
  mask.omega.resize(m);
  std::size_t prev = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!(is >> mask.omega[i])) throw std::runtime_error("truncated mask file: " + path);
    if (mask.omega[i] >= n || (i > 0 && mask.omega[i] <= prev))
      throw std::runtime_error("mask indices not strictly increasing in range: " + path);
    prev = mask.omega[i];
  }
  return mask;
}

void save_measurements(const MeasurementSet& meas, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  char head[160];
  std::snprintf(head, sizeof head, "MEAS %d %d %zu %s %.17g %llu %d\n", meas.rows, meas.cols,
                meas.values.size(), meas.kind.c_str(), meas.ratio,
                static_cast<unsigned long long>(meas.seed), meas.block);
  os << head;
  os.write(reinterpret_cast<const char*>(meas.values.data()),
           static_cast<std::streamsize>(meas.values.size() * sizeof(double)));
  if (!os) throw std::runtime_error("write failed: " + path);
}

MeasurementSet load_measurements(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  std::string magic;
  std::size_t m = 0;
  unsigned long long seed = 0;
  MeasurementSet meas;
  if (!(is >> magic >> meas.rows >> meas.cols >> m >> meas.kind >> meas.ratio >> seed >>
        meas.block) ||
      magic != "MEAS")
    throw std::runtime_error("not a measurement file: " + path);
  meas.seed = seed;
  is.ignore(1);
  meas.values.resize(m);
  is.read(reinterpret_cast<char*>(meas.values.data()),
          static_cast<std::streamsize>(m * sizeof(double)));
  if (!is) throw std::runtime_error("truncated measurement file: " + path);
  return meas;
}

}  // namespace csmw
