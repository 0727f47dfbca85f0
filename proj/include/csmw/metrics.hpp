#pragma once

#include <vector>

#include "csmw/image.hpp"

namespace csmw {

// Mean squared error between two images of identical shape.
double mse(const Image& a, const Image& b);

struct QualityReport {
  double psnr_db = 0.0;  // +infinity when mse == 0
  double mse = 0.0;
  double peak = 255.0;
};

// Peak signal-to-noise ratio in dB against an 8-bit peak of 255:
// 10*log10(255^2 / mse). Images are compared as real-valued, no clamping.
QualityReport psnr(const Image& reference, const Image& reconstructed);
double psnr_db(const Image& reference, const Image& reconstructed);

}  // namespace csmw
