#include "csmw/bpsolver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "csmw/kernels.hpp"
#include "csmw/rng.hpp"

namespace csmw {

namespace {

double norm2(const std::vector<double>& v) {
  return std::sqrt(kern::ops().dot(v.size(), v.data(), v.data()));
}

// CG on the normal system (A A^T) mu = b, warm-started from mu.
void cg_normal(const LinearOperator& A, const std::vector<double>& b, std::vector<double>& mu,
               double tol, int max_iters) {
  const std::size_t m = b.size();
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    mu.assign(m, 0.0);
    return;
  }
  auto apply = [&](const std::vector<double>& w) { return A.forward(A.adjoint(w)); };
  std::vector<double> r = apply(mu);
  for (std::size_t i = 0; i < m; ++i) r[i] = b[i] - r[i];
  std::vector<double> p = r;
  double rs = kern::ops().dot(m, r.data(), r.data());
  for (int it = 0; it < max_iters; ++it) {
    if (std::sqrt(rs) <= tol * bnorm) break;
    const std::vector<double> ap = apply(p);
    const double p_ap = kern::ops().dot(m, p.data(), ap.data());
    if (!(p_ap > 0.0)) break;  // PSD curvature exhausted
    const double alpha = rs / p_ap;
    kern::ops().axpy(m, alpha, p.data(), mu.data());
    kern::ops().axpy(m, -alpha, ap.data(), r.data());
    const double rs_new = kern::ops().dot(m, r.data(), r.data());
    const double beta = rs_new / rs;
    for (std::size_t i = 0; i < m; ++i) p[i] = r[i] + beta * p[i];
    rs = rs_new;
  }
}

void check_operator(const LinearOperator& A) {
  if (A.range_dim == 0 || A.domain_dim == 0 || !A.forward || !A.adjoint)
    throw std::invalid_argument("solver: operator is incomplete");
#ifndef NDEBUG
  SplitMix64 rng(0x9e3779b97f4a7c15ull);
  std::vector<double> s(A.domain_dim), w(A.range_dim);
  for (double& v : s) v = rng.next_gauss();
  for (double& v : w) v = rng.next_gauss();
  const std::vector<double> as = A.forward(s);
  const std::vector<double> atw = A.adjoint(w);
  const double lhs = kern::ops().dot(w.size(), as.data(), w.data());
  const double rhs = kern::ops().dot(s.size(), s.data(), atw.data());
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
  if (std::abs(lhs - rhs) > 1e-8 * scale)
    throw std::logic_error("solver: operator fails the adjoint dot-test");
#endif
}

}  // namespace

SolveResult solve_bp(const LinearOperator& A, const std::vector<double>& y,
                     const SolverConfig& cfg) {
  check_operator(A);
  if (y.size() != A.range_dim)
    throw std::invalid_argument("solver: measurement length does not match operator");
  for (double v : y)
    if (!std::isfinite(v)) throw std::invalid_argument("solver: non-finite measurements");
  if (cfg.max_iters < 1 || !(cfg.feas_tol > 0.0) || !(cfg.dual_tol > 0.0) ||
      !(cfg.penalty > 0.0) || cfg.noise_sigma < 0.0)
    throw std::invalid_argument("solver: invalid configuration");

  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = A.domain_dim;
  const std::size_t m = A.range_dim;
  const double ynorm = norm2(y);
  const double feas_scale = ynorm > 0.0 ? ynorm : 1.0;
  const double kappa = 1.0 / cfg.penalty;

  std::vector<double> z = A.adjoint(y);
  std::vector<double> u(n, 0.0), x(n), v(n), z_old(n);
  std::vector<double> mu(m, 0.0);

  SolveResult res;
  res.report.converged = false;
  std::vector<double> best_z = z;
  double best_feas = std::numeric_limits<double>::infinity();
  double feas = 0.0;

  int it = 0;
  while (it < cfg.max_iters) {
    ++it;
    for (std::size_t i = 0; i < n; ++i) v[i] = z[i] - u[i];

    // project v onto the constraint set along the row space of A
    std::vector<double> r = A.forward(v);
    for (std::size_t i = 0; i < m; ++i) r[i] -= y[i];
    const double rnorm = norm2(r);
    x = v;
    if (rnorm > cfg.noise_sigma) {
      if (cfg.noise_sigma > 0.0)
        kern::ops().scal(m, 1.0 - cfg.noise_sigma / rnorm, r.data());
      cg_normal(A, r, mu, cfg.cg_tol, cfg.cg_max_iters);
      const std::vector<double> corr = A.adjoint(mu);
      kern::ops().axpy(n, -1.0, corr.data(), x.data());
    }

    z_old.swap(z);
    for (std::size_t i = 0; i < n; ++i) v[i] = x[i] + u[i];
    z.resize(n);
    kern::ops().soft_threshold(n, kappa, v.data(), z.data());
    for (std::size_t i = 0; i < n; ++i) u[i] += x[i] - z[i];

    std::vector<double> az = A.forward(z);
    for (std::size_t i = 0; i < m; ++i) az[i] -= y[i];
    const double az_norm = norm2(az);
    feas = std::max(0.0, az_norm - cfg.noise_sigma) / feas_scale;
    if (cfg.trace) res.report.residual_history.push_back(feas);
    if (feas < best_feas) {
      best_feas = feas;
      best_z = z;
    }

    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = z[i] - z_old[i];
      diff += d * d;
    }
    const double znorm = norm2(z);
    const double rel_change = std::sqrt(diff) / (znorm > 0.0 ? znorm : 1.0);
    if (feas <= cfg.feas_tol && rel_change <= cfg.dual_tol) {
      res.report.converged = true;
      break;
    }
  }

  if (!res.report.converged) {
    z = best_z;
    feas = best_feas;
  }
  res.coeffs = std::move(z);
  res.report.iterations = it;
  res.report.residual = feas;
  double l1 = 0.0;
  for (double c : res.coeffs) l1 += std::abs(c);
  res.report.l1_norm = l1;
  res.report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

LinearOperator build_operator(const SampleMask& mask, const DecompositionPlan& plan) {
  validate_plan(plan, mask.rows, mask.cols);
  LinearOperator A;
  A.range_dim = mask.omega.size();
  A.domain_dim = static_cast<std::size_t>(mask.rows) * mask.cols;
  const int rows = mask.rows, cols = mask.cols;
  A.forward = [mask, plan, rows, cols](const std::vector<double>& s) {
    return sense_pci(synthesis_apply(s, plan, rows, cols), mask);
  };
  A.adjoint = [mask, plan](const std::vector<double>& w) {
    return synthesis_adjoint(embed_zeros(w, mask), plan);
  };
  return A;
}

LinearOperator build_operator(const DenseSensing& dense, int rows, int cols,
                              const DecompositionPlan& plan) {
  validate_plan(plan, rows, cols);
  if (rows % dense.block != 0 || cols % dense.block != 0)
    throw std::invalid_argument("solver: block does not divide image shape");
  LinearOperator A;
  const std::size_t blocks =
      static_cast<std::size_t>(rows / dense.block) * (cols / dense.block);
  A.range_dim = blocks * dense.block_meas;
  A.domain_dim = static_cast<std::size_t>(rows) * cols;
  A.forward = [dense, plan, rows, cols](const std::vector<double>& s) {
    return sense_dense(synthesis_apply(s, plan, rows, cols), dense);
  };
  A.adjoint = [dense, plan, rows, cols](const std::vector<double>& w) {
    return synthesis_adjoint(adjoint_dense(w, dense, rows, cols), plan);
  };
  return A;
}

}  // namespace csmw
