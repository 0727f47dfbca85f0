#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "csmw/pyramid.hpp"
#include "csmw/sensing.hpp"

// Equality-constrained basis pursuit: min ||s||_1 subject to y = As, driven
// only by forward/adjoint applications of A. The solver is an alternating-
// direction splitting: each iteration projects onto the constraint set (a
// conjugate-gradient solve on A A^T, warm-started across iterations), then
// soft-thresholds, then updates the running dual estimate.

namespace csmw {

struct LinearOperator {
  std::size_t range_dim = 0;   // measurement count M
  std::size_t domain_dim = 0;  // coefficient count N
  std::function<std::vector<double>(const std::vector<double>&)> forward;
  std::function<std::vector<double>(const std::vector<double>&)> adjoint;
};

struct SolverConfig {
  int max_iters = 500;
  double feas_tol = 1e-4;    // relative constraint residual ||y-As||/||y||
  double dual_tol = 1e-6;    // relative change of the iterate between sweeps
  double penalty = 1.0;      // coupling parameter rho; threshold is 1/rho
  double noise_sigma = 0.0;  // >0 relaxes the constraint to ||y-As|| <= sigma
  int cg_max_iters = 200;
  double cg_tol = 1e-10;     // relative tolerance inside the projection solve
  std::uint64_t seed = 0;    // reserved for randomized variants; unused
  bool trace = false;        // record per-iteration feasibility
};

struct SolveReport {
  int iterations = 0;
  double residual = 0.0;  // final ||y-As||/||y||, absolute when ||y||=0
  double l1_norm = 0.0;
  double seconds = 0.0;
  bool converged = false;
  std::vector<double> residual_history;  // filled when cfg.trace
};

struct SolveResult {
  std::vector<double> coeffs;
  SolveReport report;
};

SolveResult solve_bp(const LinearOperator& A, const std::vector<double>& y,
                     const SolverConfig& cfg);

// A = (sensing) ∘ (synthesis): forward maps coefficients to measurements via
// synthesis_apply; adjoint is the exact transpose. The PCI variant never
// materializes a matrix.
LinearOperator build_operator(const SampleMask& mask, const DecompositionPlan& plan);
LinearOperator build_operator(const DenseSensing& dense, int rows, int cols,
                              const DecompositionPlan& plan);

}  // namespace csmw
