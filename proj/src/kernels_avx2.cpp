#include "csmw/kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace csmw::kern {

namespace {

void avx2_axpy(int n, double a, const double* x, double* y) {
  int i = 0;
  __m256d va = _mm256_set1_pd(a);
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    __m256d vx = _mm256_loadu_pd(x + i);
    vy = _mm256_add_pd(vy, _mm256_mul_pd(va, vx));
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

double avx2_dot(int n, const double* x, const double* y) {
  __m256d acc = _mm256_setzero_pd();
  int i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  double buf[4];
  _mm256_storeu_pd(buf, acc);
  double s = buf[0] + buf[1] + buf[2] + buf[3];
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void avx2_scal(int n, double a, double* x) {
  int i = 0;
  __m256d va = _mm256_set1_pd(a);
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) x[i] *= a;
}

void avx2_soft_threshold(int n, double kappa, const double* x, double* z) {
  int i = 0;
  const __m256d vk = _mm256_set1_pd(kappa);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d signmask = _mm256_set1_pd(-0.0);
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    __m256d sign = _mm256_and_pd(v, signmask);
    __m256d mag = _mm256_andnot_pd(signmask, v);
    __m256d shr = _mm256_max_pd(_mm256_sub_pd(mag, vk), zero);
    _mm256_storeu_pd(z + i, _mm256_or_pd(shr, sign));
  }
  for (; i < n; ++i) {
    double v = x[i];
    double m = std::fabs(v) - kappa;
    z[i] = m > 0.0 ? (v > 0.0 ? m : -m) : 0.0;
  }
}

void avx2_gemv(int m, int n, const double* a, const double* x, double* y) {
  for (int r = 0; r < m; ++r) {
    const double* row = a + static_cast<long>(r) * n;
    __m256d acc = _mm256_setzero_pd();
    int c = 0;
    for (; c + 4 <= n; c += 4) {
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(row + c), _mm256_loadu_pd(x + c)));
    }
    double buf[4];
    _mm256_storeu_pd(buf, acc);
    double s = buf[0] + buf[1] + buf[2] + buf[3];
    for (; c < n; ++c) s += row[c] * x[c];
    y[r] = s;
  }
}

void avx2_gemv_t_acc(int m, int n, const double* a, const double* x, double* y) {
  for (int r = 0; r < m; ++r) {
    const double* row = a + static_cast<long>(r) * n;
    avx2_axpy(n, x[r], row, y);
  }
}

const Ops avx2_table = {
    avx2_axpy, avx2_dot, avx2_scal, avx2_soft_threshold,
    avx2_gemv, avx2_gemv_t_acc, "avx2",
};

}  // namespace

bool avx2_available() { return __builtin_cpu_supports("avx2"); }

const Ops* avx2_ops_or_null() { return avx2_available() ? &avx2_table : nullptr; }

}  // namespace csmw::kern
