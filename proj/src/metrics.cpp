#include "csmw/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace csmw {

double mse(const Image& a, const Image& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw std::invalid_argument("mse: image shapes differ");
  if (a.px.empty()) throw std::invalid_argument("mse: empty images");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.px.size(); ++i) {
    const double d = a.px[i] - b.px[i];
    acc += d * d;
  }
  return acc / static_cast<double>(a.px.size());
}

QualityReport psnr(const Image& reference, const Image& reconstructed) {
  QualityReport r;
  r.mse = mse(reference, reconstructed);
  r.psnr_db = r.mse == 0.0 ? std::numeric_limits<double>::infinity()
                           : 10.0 * std::log10(r.peak * r.peak / r.mse);
  return r;
}

double psnr_db(const Image& reference, const Image& reconstructed) {
  return psnr(reference, reconstructed).psnr_db;
}

}  // namespace csmw
