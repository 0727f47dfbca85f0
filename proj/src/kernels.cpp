#include "csmw/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

namespace csmw::kern {

namespace {

void scalar_axpy(int n, double a, const double* x, double* y) {
  for (int i = 0; i < n; ++i) y[i] += a * x[i];
}

double scalar_dot(int n, const double* x, const double* y) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void scalar_scal(int n, double a, double* x) {
  for (int i = 0; i < n; ++i) x[i] *= a;
}

void scalar_soft_threshold(int n, double kappa, const double* x, double* z) {
  for (int i = 0; i < n; ++i) {
    double v = x[i];
    double m = std::fabs(v) - kappa;
    z[i] = m > 0.0 ? (v > 0.0 ? m : -m) : 0.0;
  }
}

void scalar_gemv(int m, int n, const double* a, const double* x, double* y) {
  for (int r = 0; r < m; ++r) {
    const double* row = a + static_cast<long>(r) * n;
    double acc = 0.0;
    for (int c = 0; c < n; ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
}

void scalar_gemv_t_acc(int m, int n, const double* a, const double* x, double* y) {
  for (int r = 0; r < m; ++r) {
    const double* row = a + static_cast<long>(r) * n;
    double xr = x[r];
    for (int c = 0; c < n; ++c) y[c] += xr * row[c];
  }
}

}  // namespace

const Ops scalar_ops = {
    scalar_axpy, scalar_dot, scalar_scal, scalar_soft_threshold,
    scalar_gemv, scalar_gemv_t_acc, "scalar",
};

#if !defined(CSMW_HAVE_AVX2)
bool avx2_available() { return false; }
const Ops* avx2_ops_or_null() { return nullptr; }
#endif

const Ops& ops() {
  static const Ops* table = [] {
    const char* forced = std::getenv("CSMW_KERNELS");
    if (forced && std::strcmp(forced, "scalar") == 0) return &scalar_ops;
    if (const Ops* v = avx2_ops_or_null()) return v;
    return &scalar_ops;
  }();
  return *table;
}

}  // namespace csmw::kern
