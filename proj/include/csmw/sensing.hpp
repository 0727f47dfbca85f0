#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "csmw/image.hpp"

// Measurement operators. The pixel-coordinate-indexed (PCI) sampler gathers a
// random subset of pixel values from the column-major vectorized image — no
// arithmetic, so its adjoint is the zero-filled scatter. Dense baselines sense
// fixed-size blocks with one shared random matrix per configuration.

namespace csmw {

struct SampleMask {
  std::vector<std::size_t> omega;  // strictly increasing indices into vec(X)
  int rows = 0, cols = 0;
  std::uint64_t seed = 0;
};

enum class DenseKind { Gaussian, Bernoulli };

std::string dense_kind_name(DenseKind kind);
DenseKind dense_kind_from_name(const std::string& name);

struct DenseSensing {
  DenseKind kind = DenseKind::Gaussian;
  int block = 0;          // block edge length
  double ratio = 0.0;     // measurements per block = round(ratio * block^2)
  std::uint64_t seed = 0;
  int block_meas = 0;     // rows of phi
  std::vector<double> phi;  // block_meas x block^2, row-major, shared by all blocks
};

SampleMask make_pci(int rows, int cols, double ratio, std::uint64_t seed);
std::vector<double> sense_pci(const Image& img, const SampleMask& mask);
Image embed_zeros(const std::vector<double>& y, const SampleMask& mask);

DenseSensing make_dense(DenseKind kind, int rows, int cols, double ratio, int block,
                        std::uint64_t seed);
std::vector<double> sense_dense(const Image& img, const DenseSensing& d);
// Exact adjoint of sense_dense for an image of the given shape.
Image adjoint_dense(const std::vector<double>& y, const DenseSensing& d, int rows, int cols);

// Text format: "PCIMASK <m> <n> <M>" then M ascending indices, one per line.
void save_mask(const SampleMask& mask, const std::string& path);
SampleMask load_mask(const std::string& path);

// Binary 64-bit floats preceded by a one-line text header carrying shape,
// sensing kind, ratio, seed, and block edge (0 for PCI).
struct MeasurementSet {
  int rows = 0, cols = 0;
  std::string kind;  // "pci" | "gaussian" | "bernoulli"
  double ratio = 0.0;
  std::uint64_t seed = 0;
  int block = 0;
  std::vector<double> values;
};

void save_measurements(const MeasurementSet& meas, const std::string& path);
MeasurementSet load_measurements(const std::string& path);

}  // namespace csmw
