// End-to-end acceptance checks. Each criterion prints exactly one PASS/FAIL
// line with measured numbers; the process exits nonzero if any fail.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "csmw/bpsolver.hpp"
#include "csmw/filterbank.hpp"
#include "csmw/lifting.hpp"
#include "csmw/matched.hpp"
#include "csmw/metrics.hpp"
#include "csmw/pyramid.hpp"
#include "csmw/rng.hpp"
#include "csmw/sensing.hpp"

using namespace csmw;

namespace {

int g_failures = 0;

void report(int idx, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", idx, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double elapsed(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

LiftingChain random_chain(SplitMix64& rng, int max_stages = 3) {
  LiftingChain chain;
  const int stages = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_stages)));
  for (int s = 0; s < stages; ++s) {
    LiftingStage st;
    st.predict.resize(2 * (1 + rng.next_below(2)));
    st.update.resize(2 * (1 + rng.next_below(2)));
    // modest tap range: three compounded stages per axis stay well conditioned
    for (auto& v : st.predict) v = rng.next_unit() - 0.5;
    for (auto& v : st.update) v = rng.next_unit() - 0.5;
    chain.push_back(st);
  }
  return chain;
}

Image make_kind(int kind, int n) {
  Image img;
  img.rows = img.cols = n;
  img.px.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      double v = 0.0;
      if (kind == 0) {  // slowly varying blend
        v = 128 + 55 * std::cos(6.28318 * r / n) * std::cos(6.28318 * c / n) +
            35 * std::sin(6.28318 * 2 * r / n + 0.7) + 20 * std::cos(6.28318 * 2 * c / n + 1.3);
      } else if (kind == 1) {  // gradient with a band and a disc
        v = 40 + 1.5 * r + 1.0 * c;
        if (r > 2 * c - 20 && r < 2 * c + 4) v += 70;
        const double dx = r - 0.7 * n, dy = c - 0.3 * n;
        if (dx * dx + dy * dy < 0.02 * n * n) v += 50;
      } else {  // mid-frequency texture
        v = 128 + 40 * std::sin(6.28318 * 5 * r / n) * std::cos(6.28318 * 3 * c / n) +
            30 * std::sin(6.28318 * 2 * (r + c) / n) + 25 * std::cos(6.28318 * 7 * c / n + 1.0);
      }
      img.at(r, c) = std::min(255.0, std::max(0.0, v));
    }
  return img;
}

DecompositionPlan make_plan(Strategy strat, int levels, const LiftingChain& col,
                            const LiftingChain& row) {
  DecompositionPlan plan;
  plan.strategy = strat;
  plan.levels = levels;
  plan.col_chain = col;
  plan.row_chain = row;
  return plan;
}

// ---- dense least squares (Householder QR), the oracle for criterion 5 ----

bool lstsq(std::vector<std::vector<double>> A, std::vector<double> b, std::vector<double>& x) {
  const std::size_t m = A.size();
  const std::size_t n = A.empty() ? 0 : A[0].size();
  if (m < n) return false;
  for (std::size_t k = 0; k < n; ++k) {
    double nrm = 0.0;
    for (std::size_t i = k; i < m; ++i) nrm += A[i][k] * A[i][k];
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) return false;
    if (A[k][k] > 0) nrm = -nrm;
    std::vector<double> v(m, 0.0);
    for (std::size_t i = k; i < m; ++i) v[i] = A[i][k];
    v[k] -= nrm;
    double vtv = 0.0;
    for (std::size_t i = k; i < m; ++i) vtv += v[i] * v[i];
    if (vtv == 0.0) return false;
    for (std::size_t j = k; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t i = k; i < m; ++i) dot += v[i] * A[i][j];
      const double f = 2.0 * dot / vtv;
      for (std::size_t i = k; i < m; ++i) A[i][j] -= f * v[i];
    }
    double dot = 0.0;
    for (std::size_t i = k; i < m; ++i) dot += v[i] * b[i];
    const double f = 2.0 * dot / vtv;
    for (std::size_t i = k; i < m; ++i) b[i] -= f * v[i];
  }
  x.assign(n, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    double acc = b[k];
    for (std::size_t j = k + 1; j < n; ++j) acc -= A[k][j] * x[j];
    if (A[k][k] == 0.0) return false;
    x[k] = acc / A[k][k];
  }
  return true;
}

std::vector<double> smooth_signal(std::size_t len, SplitMix64& rng) {
  std::vector<double> x(len);
  const double f1 = 1.0 + 3.0 * rng.next_unit();
  const double f2 = 4.0 + 5.0 * rng.next_unit();
  const double p1 = 6.28 * rng.next_unit();
  const double p2 = 6.28 * rng.next_unit();
  for (std::size_t i = 0; i < len; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(len);
    x[i] = 100.0 + 50.0 * std::cos(6.28318 * f1 * u + p1) + 20.0 * std::sin(6.28318 * f2 * u + p2) +
           2.0 * (rng.next_unit() - 0.5);
  }
  return x;
}

ScanSignal make_scan(std::vector<double> samples) {
  ScanSignal scan;
  scan.rows = static_cast<int>(samples.size());
  scan.cols = 1;
  scan.axis = ScanAxis::Columns;
  scan.strategy = ScanStrategy::Natural;
  scan.samples = std::move(samples);
  return scan;
}

bool predict_oracle(const std::vector<double>& x, int lt, const std::vector<double>& dref,
                    std::vector<double>& t) {
  std::vector<double> e, o;
  lazy_split(x, e, o);
  const std::int64_t L = static_cast<std::int64_t>(x.size());
  const std::int64_t dlen = static_cast<std::int64_t>(o.size());
  const std::int64_t half = lt / 2;
  std::vector<std::vector<double>> rows;
  std::vector<double> target;
  for (std::int64_t n = std::max<std::int64_t>(0, half - 1);
       n <= std::min<std::int64_t>(dlen - 1, (L - 1 - lt) / 2); ++n) {
    std::vector<double> row(static_cast<std::size_t>(lt));
    for (int k = 0; k < lt; ++k)
      row[static_cast<std::size_t>(k)] = e[static_cast<std::size_t>(n - half + 1 + k)];
    rows.push_back(row);
    target.push_back(o[static_cast<std::size_t>(n)] - dref[static_cast<std::size_t>(n)]);
  }
  return lstsq(rows, target, t);
}

bool update_oracle(const std::vector<double>& x, const std::vector<double>& t, int ls,
                   const Filter& f0, std::vector<double>& s) {
  std::vector<double> e, o;
  lazy_split(x, e, o);
  const std::vector<double> d = apply_predict(e, o, t);
  const std::int64_t L = static_cast<std::int64_t>(x.size());
  const std::int64_t dlen = static_cast<std::int64_t>(d.size());
  const std::int64_t half = ls / 2;
  const std::int64_t f_lo = f0.support_start;
  const std::int64_t f_hi = f0.support_start + static_cast<std::int64_t>(f0.taps.size()) - 1;
  std::vector<std::vector<double>> rows;
  std::vector<double> target;
  for (std::int64_t n = 0; n < L; ++n) {
    const std::int64_t j_min = (n - f_hi) >= 0 ? (n - f_hi + 1) / 2 : -((f_hi - n) / 2);
    const std::int64_t j_max = (n - f_lo) >= 0 ? (n - f_lo) / 2 : -((f_lo - n + 1) / 2);
    if (j_min < half || j_max > dlen - half || j_max < j_min) continue;
    double base = 0.0;
    std::vector<double> g(static_cast<std::size_t>(ls), 0.0);
    for (std::int64_t j = j_min; j <= j_max; ++j) {
      const double w = f0.taps[static_cast<std::size_t>((n - 2 * j) - f_lo)];
      base += w * e[static_cast<std::size_t>(j)];
      for (int i = 0; i < ls; ++i)
        g[static_cast<std::size_t>(i)] += w * d[static_cast<std::size_t>(j + half - 1 - i)];
    }
    rows.push_back(g);
    target.push_back(x[static_cast<std::size_t>(n)] - base);
  }
  return lstsq(rows, target, s);
}

// ---------------------------------------------------------------------------

void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  SplitMix64 rng(101);
  double worst = 0.0;
  for (std::size_t len = 2; len <= 256; ++len) {
    const LiftingChain chain = random_chain(rng);
    std::vector<double> x(len);
    for (auto& v : x) v = 255.0 * rng.next_unit();
    std::vector<double> a, d;
    forward_1d(x, chain, a, d);
    const std::vector<double> back = inverse_1d(a, d, chain);
    double scale = 1e-300, err = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      scale = std::max(scale, std::fabs(x[i]));
      err = std::max(err, std::fabs(back[i] - x[i]));
    }
    worst = std::max(worst, err / scale);
  }
  const std::pair<int, int> shapes[] = {{16, 16}, {33, 31}, {48, 64}, {64, 64}};
  for (const auto& [rows, cols] : shapes)
    for (int levels = 1; levels <= 3; ++levels)
      for (Strategy strat : {Strategy::RPyramid, Strategy::LPyramid})
        for (LRule rule : {LRule::RecursiveL, LRule::LatestTrio}) {
          const LiftingChain col = random_chain(rng);
          const LiftingChain row = random_chain(rng);
          DecompositionPlan plan = make_plan(strat, levels, col, row);
          plan.l_rule = rule;
          Image img;
          img.rows = rows;
          img.cols = cols;
          img.px.resize(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
          for (auto& v : img.px) v = 255.0 * rng.next_unit();
          const Image back = inverse_2d(forward_2d(img, plan));
          double scale = 1e-300, err = 0.0;
          for (std::size_t i = 0; i < img.px.size(); ++i) {
            scale = std::max(scale, std::fabs(img.px[i]));
            err = std::max(err, std::fabs(back.px[i] - img.px[i]));
          }
          worst = std::max(worst, err / scale);
        }
  const double secs = elapsed(t0);
  report(1, worst <= 1e-10 && secs < 10.0,
         fmt("perfect reconstruction, 1-d lengths 2-256 and 2-d grids to 64x64 at levels 1-3: "
             "max rel err %.2e (tol 1e-10) in %.1fs (budget 10s)",
             worst, secs));
}

void criterion_2() {
  const auto t0 = std::chrono::steady_clock::now();
  const LiftingChain chain{{{0.5028, 0.4941}, {0.2858, 0.2790}}};
  const Filterbank fb = compose_filterbank(chain);
  const double h0[5] = {-0.1412, 0.2858, 0.7185, 0.2790, -0.1403};
  const double h1[3] = {-0.4941, 1.0000, -0.5028};
  double worst = 0.0;
  bool shape_ok = fb.h0.taps.size() == 5 && fb.h1.taps.size() == 3 && fb.h0.support_start == -2 &&
                  fb.h1.support_start == -2;
  if (shape_ok) {
    for (int i = 0; i < 5; ++i)
      worst = std::max(worst, std::fabs(fb.h0.taps[static_cast<std::size_t>(i)] - h0[i]));
    for (int i = 0; i < 3; ++i)
      worst = std::max(worst, std::fabs(fb.h1.taps[static_cast<std::size_t>(i)] - h1[i]));
  }
  const double secs = elapsed(t0);
  report(2, shape_ok && worst <= 5e-4 && secs < 1.0,
         fmt("pinned single-stage tap pattern reproduced: max tap err %.2e (tol 5e-4) in %.3fs",
             worst, secs));
}

void criterion_3() {
  const Filterbank fb = compose_filterbank(chain_bior53());
  const std::vector<double> h0 = {-0.125, 0.25, 0.75, 0.25, -0.125};
  const std::vector<double> h1 = {-0.5, 1.0, -0.5};
  const std::vector<double> f0 = {0.5, 1.0, 0.5};
  const std::vector<double> f1 = {-0.125, -0.25, 0.75, -0.25, -0.125};
  double worst = 0.0;
  bool ok = fb.h0.support_start == -2 && fb.h1.support_start == -2 && fb.f0.support_start == -1 &&
            fb.f1.support_start == -1 && fb.h0.taps.size() == 5 && fb.h1.taps.size() == 3 &&
            fb.f0.taps.size() == 3 && fb.f1.taps.size() == 5;
  if (ok) {
    for (std::size_t i = 0; i < 5; ++i) worst = std::max(worst, std::fabs(fb.h0.taps[i] - h0[i]));
    for (std::size_t i = 0; i < 3; ++i) worst = std::max(worst, std::fabs(fb.h1.taps[i] - h1[i]));
    for (std::size_t i = 0; i < 3; ++i) worst = std::max(worst, std::fabs(fb.f0.taps[i] - f0[i]));
    for (std::size_t i = 0; i < 5; ++i) worst = std::max(worst, std::fabs(fb.f1.taps[i] - f1[i]));
  }
  report(3, ok && worst <= 1e-14,
         fmt("5/3 bank composes to the closed-form taps: max err %.2e (tol 1e-14)", worst));
}

void criterion_4() {
  SplitMix64 rng(404);
  double worst = 0.0;
  const auto dot_gap = [&](const std::vector<double>& ax, const std::vector<double>& w,
                           const std::vector<double>& s, const std::vector<double>& atw) {
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) lhs += ax[i] * w[i];
    for (std::size_t i = 0; i < s.size(); ++i) rhs += s[i] * atw[i];
    return std::fabs(lhs - rhs) / std::max({std::fabs(lhs), std::fabs(rhs), 1.0});
  };

  for (int i = 0; i < 100; ++i) {  // 1-d synthesis transpose
    const std::size_t len = 8 + rng.next_below(121);
    const LiftingChain chain = random_chain(rng);
    std::vector<double> a((len + 1) / 2), d(len / 2), y(len);
    for (auto& v : a) v = rng.next_gauss();
    for (auto& v : d) v = rng.next_gauss();
    for (auto& v : y) v = rng.next_gauss();
    std::vector<double> aa, da;
    transpose_inverse_1d(y, chain, aa, da);
    const std::vector<double> rec = inverse_1d(a, d, chain);
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t k = 0; k < len; ++k) lhs += rec[k] * y[k];
    for (std::size_t k = 0; k < a.size(); ++k) rhs += a[k] * aa[k];
    for (std::size_t k = 0; k < d.size(); ++k) rhs += d[k] * da[k];
    worst = std::max(worst, std::fabs(lhs - rhs) / std::max({std::fabs(lhs), std::fabs(rhs), 1.0}));
  }

  const std::pair<int, int> shapes[] = {{12, 14}, {16, 16}, {24, 20}, {32, 32}};
  for (int i = 0; i < 100; ++i) {  // 2-d synthesis adjoint
    const auto [rows, cols] = shapes[i % 4];
    const LiftingChain col2 = random_chain(rng, 2);
    const LiftingChain row2 = random_chain(rng, 2);
    DecompositionPlan plan = make_plan(i % 2 ? Strategy::LPyramid : Strategy::RPyramid,
                                       1 + static_cast<int>(rng.next_below(2)), col2, row2);
    const std::size_t n = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
    std::vector<double> s(n);
    for (auto& v : s) v = rng.next_gauss();
    Image y;
    y.rows = rows;
    y.cols = cols;
    y.px.resize(n);
    for (auto& v : y.px) v = rng.next_gauss();
    worst = std::max(worst, dot_gap(synthesis_apply(s, plan, rows, cols).px, y.px, s,
                                    synthesis_adjoint(y, plan)));
  }

  for (int i = 0; i < 100; ++i) {  // pixel gather/scatter
    const int rows = 5 + static_cast<int>(rng.next_below(28));
    const int cols = 5 + static_cast<int>(rng.next_below(28));
    const SampleMask mask = make_pci(rows, cols, 0.2 + 0.7 * rng.next_unit(), 9000 + static_cast<std::uint64_t>(i));
    Image x;
    x.rows = rows;
    x.cols = cols;
    x.px.resize(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
    for (auto& v : x.px) v = rng.next_gauss();
    std::vector<double> w(mask.omega.size());
    for (auto& v : w) v = rng.next_gauss();
    worst = std::max(worst, dot_gap(sense_pci(x, mask), w, x.px, embed_zeros(w, mask).px));
  }

  for (int i = 0; i < 100; ++i) {  // full measurement operator
    const LiftingChain col2 = random_chain(rng, 2);
    const LiftingChain row2 = random_chain(rng, 2);
    DecompositionPlan plan =
        make_plan(i % 2 ? Strategy::LPyramid : Strategy::RPyramid, 2, col2, row2);
    const SampleMask mask = make_pci(16, 16, 0.5, 5000 + static_cast<std::uint64_t>(i));
    const LinearOperator A = build_operator(mask, plan);
    std::vector<double> s(A.domain_dim), w(A.range_dim);
    for (auto& v : s) v = rng.next_gauss();
    for (auto& v : w) v = rng.next_gauss();
    worst = std::max(worst, dot_gap(A.forward(s), w, s, A.adjoint(w)));
  }

  report(4, worst <= 1e-8,
         fmt("adjoint dot-tests, 100 random instances per operator family: max rel gap %.2e "
             "(tol 1e-8)",
             worst));
}

void criterion_5() {
  SplitMix64 rng(505);
  double worst = 0.0;
  bool oracle_ok = true;
  for (int i = 0; i < 20; ++i) {
    const std::size_t len = (i % 3 == 0) ? 64 : (i % 3 == 1 ? 127 : 256);
    const int lt = (i % 2) ? 4 : 2;
    const std::vector<double> x = smooth_signal(len, rng);
    std::vector<double> dref(len / 2);
    for (auto& v : dref) v = 10.0 * (rng.next_unit() - 0.5);
    const std::vector<double> got = fit_predict(make_scan(x), lt, dref);
    std::vector<double> want;
    oracle_ok = oracle_ok && predict_oracle(x, lt, dref, want);
    double scale = 1e-12;
    for (double v : want) scale = std::max(scale, std::fabs(v));
    for (std::size_t k = 0; k < want.size(); ++k)
      worst = std::max(worst, std::fabs(got[k] - want[k]) / scale);

    const int ls = (i % 2) ? 2 : 4;
    const std::vector<double> t = {0.45, 0.55};
    const Filter f0 = compose_filterbank({{t, {0.0, 0.0}}}).f0;
    const std::vector<double> sgot = fit_update(make_scan(x), t, ls, f0);
    std::vector<double> swant;
    oracle_ok = oracle_ok && update_oracle(x, t, ls, f0, swant);
    scale = 1e-12;
    for (double v : swant) scale = std::max(scale, std::fabs(v));
    for (std::size_t k = 0; k < swant.size(); ++k)
      worst = std::max(worst, std::fabs(sgot[k] - swant[k]) / scale);
  }

  std::vector<double> ramp(64);
  for (std::size_t i = 0; i < 64; ++i) ramp[i] = static_cast<double>(i);
  std::vector<double> a, dref;
  forward_1d(ramp, chain_bior53(), a, dref);
  const std::vector<double> t = fit_predict(make_scan(ramp), 2, dref);
  const double ramp_err = std::max(std::fabs(t[0] - 0.5), std::fabs(t[1] - 0.5));

  report(5, oracle_ok && worst <= 1e-8 && ramp_err <= 1e-10,
         fmt("tap fits match a dense QR oracle: max rel err %.2e (tol 1e-8); ramp predictor "
             "err %.2e (tol 1e-10)",
             worst, ramp_err));
}

void criterion_6() {
  // explicit 6x8 sensing matrix, wrapped matrix-free
  std::vector<double> mat(48);
  SplitMix64 rng(1);
  for (auto& v : mat) v = rng.next_gauss() / std::sqrt(6.0);
  LinearOperator A;
  A.range_dim = 6;
  A.domain_dim = 8;
  A.forward = [&mat](const std::vector<double>& s) {
    std::vector<double> y(6, 0.0);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 8; ++j) y[static_cast<std::size_t>(i)] += mat[static_cast<std::size_t>(i) * 8 + j] * s[static_cast<std::size_t>(j)];
    return y;
  };
  A.adjoint = [&mat](const std::vector<double>& y) {
    std::vector<double> s(8, 0.0);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 8; ++j) s[static_cast<std::size_t>(j)] += mat[static_cast<std::size_t>(i) * 8 + j] * y[static_cast<std::size_t>(i)];
    return s;
  };

  SolverConfig cfg;
  cfg.max_iters = 2000;
  cfg.feas_tol = 1e-8;
  cfg.dual_tol = 1e-8;
  int recovered = 0;
  double worst = 0.0;
  for (std::size_t j = 0; j < 8; ++j)
    for (double value : {3.0, -3.0}) {
      std::vector<double> truth(8, 0.0);
      truth[j] = value;
      const SolveResult res = solve_bp(A, A.forward(truth), cfg);
      double err = 0.0;
      for (std::size_t k = 0; k < 8; ++k) err = std::max(err, std::fabs(res.coeffs[k] - truth[k]));
      worst = std::max(worst, err / std::fabs(value));
      if (err < 1e-3 * std::fabs(value)) ++recovered;
    }

  // scale equivariance on a 2-sparse instance
  std::vector<double> truth(8, 0.0);
  truth[2] = 2.5;
  truth[5] = -1.0;
  const std::vector<double> y = A.forward(truth);
  SolverConfig ecfg;
  ecfg.max_iters = 6000;
  ecfg.feas_tol = 1e-10;
  ecfg.dual_tol = 1e-12;
  const SolveResult base = solve_bp(A, y, ecfg);
  double peak = 0.0;
  for (double v : base.coeffs) peak = std::max(peak, std::fabs(v));
  double equi_err = 0.0;
  for (double alpha : {2.0, -1.0}) {
    std::vector<double> ys(y);
    for (auto& v : ys) v *= alpha;
    const SolveResult scaled = solve_bp(A, ys, ecfg);
    for (std::size_t i = 0; i < 8; ++i)
      equi_err = std::max(equi_err, std::fabs(scaled.coeffs[i] - alpha * base.coeffs[i]) / peak);
  }

  // a full observation pins the solution to the analysis coefficients
  const Image img = make_kind(0, 8);
  const DecompositionPlan plan =
      make_plan(Strategy::RPyramid, 2, chain_bior53(), chain_bior53());
  const SampleMask mask = make_pci(8, 8, 1.0, 4);
  SolverConfig fcfg;
  fcfg.max_iters = 3000;
  fcfg.feas_tol = 1e-8;
  fcfg.dual_tol = 1e-8;
  fcfg.penalty = 10.0;
  const SolveResult full = solve_bp(build_operator(mask, plan), sense_pci(img, mask), fcfg);

  report(6,
         recovered == 16 && equi_err <= 1e-6 && full.report.residual <= fcfg.feas_tol,
         fmt("solver recovery: 1-sparse %d/16 exact (worst rel err %.2e, tol 1e-3); scale "
             "equivariance err %.2e (tol 1e-6); full-observation residual %.2e (tol 1e-8)",
             recovered, worst, equi_err, full.report.residual));
}

void criterion_7() {
  const Image img = make_kind(0, 64);
  SolverConfig cfg;
  cfg.max_iters = 200;
  cfg.feas_tol = 1e-6;
  cfg.dual_tol = 1e-8;
  int wins = 0;
  double lmin = 1e9, lmax = -1e9, rmin = 1e9, rmax = -1e9;
  for (int i = 0; i < 10; ++i) {
    const SampleMask mask = make_pci(64, 64, 0.5, 300 + static_cast<std::uint64_t>(i));
    const std::vector<double> y = sense_pci(img, mask);
    double ps[2];
    int k = 0;
    for (Strategy strat : {Strategy::LPyramid, Strategy::RPyramid}) {
      const DecompositionPlan plan = make_plan(strat, 3, chain_bior53(), chain_bior53());
      const SolveResult res = solve_bp(build_operator(mask, plan), y, cfg);
      ps[k++] = psnr(synthesis_apply(res.coeffs, plan, 64, 64), img).psnr_db;
    }
    if (ps[0] >= ps[1]) ++wins;
    lmin = std::min(lmin, ps[0]);
    lmax = std::max(lmax, ps[0]);
    rmin = std::min(rmin, ps[1]);
    rmax = std::max(rmax, ps[1]);
  }
  report(7, wins >= 8,
         fmt("low-frequency 64x64 at 50%% sampling: L-pyramid beats R-pyramid in %d/10 trials "
             "(need >= 8); L %.1f-%.1f dB vs R %.1f-%.1f dB",
             wins, lmin, lmax, rmin, rmax));
}

void criterion_8() {
  const auto t0 = std::chrono::steady_clock::now();
  SolverConfig cfg;
  cfg.max_iters = 300;
  cfg.feas_tol = 1e-6;
  cfg.dual_tol = 1e-8;
  const double ratios[3] = {0.1, 0.3, 0.5};
  const DecompositionPlan tmpl =
      make_plan(Strategy::LPyramid, 3, chain_bior53(), chain_bior53());
  int cells_won = 0;
  double best_gap_low = -1e9;
  std::string table;
  for (int kind = 0; kind < 3; ++kind) {
    const Image img = make_kind(kind, 64);
    for (int ri = 0; ri < 3; ++ri) {
      const SampleMask mask =
          make_pci(64, 64, ratios[ri], 700 + static_cast<std::uint64_t>(kind * 3 + ri));
      const std::vector<double> y = sense_pci(img, mask);

      const SolveResult plain = solve_bp(build_operator(mask, tmpl), y, cfg);
      const double psnr_bior = psnr(synthesis_apply(plain.coeffs, tmpl, 64, 64), img).psnr_db;

      const Image coarse = coarse_estimate(y, mask, tmpl, cfg);
      const MatchedDesign design = design_matched(coarse, 2, 2, 1);
      const MatchedResult matched = reconstruct_matched(y, mask, design, tmpl, cfg);
      const double psnr_matched = psnr(matched.image, img).psnr_db;

      if (psnr_matched >= psnr_bior) ++cells_won;
      if (ri == 0) best_gap_low = std::max(best_gap_low, psnr_matched - psnr_bior);
      table += fmt(" img%d@%.1f %.2f/%.2f", kind, ratios[ri], psnr_matched, psnr_bior);
    }
  }
  const double secs = elapsed(t0);
  const bool pass = cells_won == 9 && best_gap_low >= 3.0 && secs < 300.0;
  report(8, pass,
         fmt("matched vs 5/3 on 3 images x ratios {0.1,0.3,0.5}: matched >= 5/3 in %d/9 cells "
             "(need 9), best gap at 0.1 is %.2f dB (need >= 3), %.0fs (budget 300s); "
             "matched/plain dB:%s",
             cells_won, best_gap_low, secs, table.c_str()));
}

void criterion_9() {
  const Image img = make_kind(0, 64);
  SolverConfig cfg;
  cfg.max_iters = 200;
  cfg.feas_tol = 1e-12;  // force the full iteration budget on both runs
  cfg.dual_tol = 1e-14;
  const DecompositionPlan plan =
      make_plan(Strategy::LPyramid, 3, chain_bior53(), chain_bior53());
  const SampleMask mask = make_pci(64, 64, 0.5, 1);
  const SolveResult rp = solve_bp(build_operator(mask, plan), sense_pci(img, mask), cfg);
  const DenseSensing dense = make_dense(DenseKind::Gaussian, 64, 64, 0.5, 8, 1);
  const SolveResult rd =
      solve_bp(build_operator(dense, 64, 64, plan), sense_dense(img, dense), cfg);
  const double ratio = rp.report.seconds / rd.report.seconds;
  report(9, ratio < 0.5,
         fmt("pixel sampling solves faster than dense blocks at 64x64, 50%%: %.2fs vs %.2fs, "
             "ratio %.3f (need < 0.5)",
             rp.report.seconds, rd.report.seconds, ratio));
}

void criterion_10() {
  const Image img = make_kind(1, 64);
  SolverConfig cfg;
  cfg.max_iters = 200;
  cfg.feas_tol = 1e-6;
  cfg.dual_tol = 1e-8;
  const DecompositionPlan plan =
      make_plan(Strategy::LPyramid, 3, chain_bior53(), chain_bior53());
  double sum = 0.0, dmin = 1e9, dmax = -1e9;
  for (int i = 0; i < 10; ++i) {
    const SampleMask mask = make_pci(64, 64, 0.5, 400 + static_cast<std::uint64_t>(i));
    const SolveResult rp = solve_bp(build_operator(mask, plan), sense_pci(img, mask), cfg);
    const double psnr_p = psnr(synthesis_apply(rp.coeffs, plan, 64, 64), img).psnr_db;
    const DenseSensing dense =
        make_dense(DenseKind::Gaussian, 64, 64, 0.5, 8, 400 + static_cast<std::uint64_t>(i));
    const SolveResult rd =
        solve_bp(build_operator(dense, 64, 64, plan), sense_dense(img, dense), cfg);
    const double psnr_d = psnr(synthesis_apply(rd.coeffs, plan, 64, 64), img).psnr_db;
    const double diff = psnr_d - psnr_p;
    sum += diff;
    dmin = std::min(dmin, diff);
    dmax = std::max(dmax, diff);
  }
  const double mean = sum / 10.0;
  report(10, mean >= -1.0 && mean <= 6.0,
         fmt("dense Gaussian minus pixel sampling at 50%%, 5/3 bank, 10 trials: mean %.2f dB "
             "(window [-1, 6]), per-trial range [%.2f, %.2f]",
             mean, dmin, dmax));
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  if (g_failures > 0) std::printf("%d of 10 criteria failed\n", g_failures);
  return g_failures > 0 ? 1 : 0;
}
