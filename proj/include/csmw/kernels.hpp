#pragma once

// Low-level dense kernels used by the transform and solver inner loops.
// A scalar reference implementation always exists; an AVX2 variant is
// compiled on x86-64 and selected at runtime. kern::ops() returns the
// dispatched table; the per-backend tables stay visible so equivalence
// tests can compare implementations directly.

namespace csmw::kern {

struct Ops {
  // y[i] += a * x[i]
  void (*axpy)(int n, double a, const double* x, double* y);
  // sum x[i] * y[i]
  double (*dot)(int n, const double* x, const double* y);
  // x[i] *= a
  void (*scal)(int n, double a, double* x);
  // z[i] = sign(x[i]) * max(|x[i]| - kappa, 0)
  void (*soft_threshold)(int n, double kappa, const double* x, double* z);
  // y = A x, A row-major m x n
  void (*gemv)(int m, int n, const double* a, const double* x, double* y);
  // y += A^T x, A row-major m x n, y has n entries
  void (*gemv_t_acc)(int m, int n, const double* a, const double* x, double* y);
  const char* name;
};

extern const Ops scalar_ops;

bool avx2_available();
const Ops* avx2_ops_or_null();

// Dispatched table: AVX2 when the CPU supports it, unless the environment
// variable CSMW_KERNELS=scalar forces the reference path.
const Ops& ops();

}  // namespace csmw::kern
