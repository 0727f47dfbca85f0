#include "csmw/matched.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace csmw {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  return (a % b != 0 && (a < 0) != (b < 0)) ? q - 1 : q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

// Eigenvalue extents of a small symmetric matrix by cyclic Jacobi rotations.
void jacobi_extents(std::vector<double> a, int k, double& lmin, double& lmax) {
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0, diag = 0.0;
    for (int p = 0; p < k; ++p) {
      diag += std::abs(a[static_cast<std::size_t>(p) * k + p]);
      for (int q = p + 1; q < k; ++q) off += std::abs(a[static_cast<std::size_t>(p) * k + q]);
    }
    if (off <= 1e-15 * (diag + 1e-300)) break;
    for (int p = 0; p < k; ++p)
      for (int q = p + 1; q < k; ++q) {
        const double apq = a[static_cast<std::size_t>(p) * k + q];
        if (apq == 0.0) continue;
        const double app = a[static_cast<std::size_t>(p) * k + p];
        const double aqq = a[static_cast<std::size_t>(q) * k + q];
        const double theta = 0.5 * (aqq - app) / apq;
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int i = 0; i < k; ++i) {
          const double aip = a[static_cast<std::size_t>(i) * k + p];
          const double aiq = a[static_cast<std::size_t>(i) * k + q];
          a[static_cast<std::size_t>(i) * k + p] = c * aip - s * aiq;
          a[static_cast<std::size_t>(i) * k + q] = s * aip + c * aiq;
        }
        for (int j = 0; j < k; ++j) {
          const double apj = a[static_cast<std::size_t>(p) * k + j];
          const double aqj = a[static_cast<std::size_t>(q) * k + j];
          a[static_cast<std::size_t>(p) * k + j] = c * apj - s * aqj;
          a[static_cast<std::size_t>(q) * k + j] = s * apj + c * aqj;
        }
      }
  }
  lmin = a[0];
  lmax = a[0];
  for (int i = 1; i < k; ++i) {
    lmin = std::min(lmin, a[static_cast<std::size_t>(i) * k + i]);
    lmax = std::max(lmax, a[static_cast<std::size_t>(i) * k + i]);
  }
}

// In-place lower Cholesky factor; false when not positive definite.
bool cholesky(std::vector<double>& a, int k) {
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j <= i; ++j) {
      double sum = a[static_cast<std::size_t>(i) * k + j];
      for (int p = 0; p < j; ++p)
        sum -= a[static_cast<std::size_t>(i) * k + p] * a[static_cast<std::size_t>(j) * k + p];
      if (i == j) {
        if (!(sum > 0.0)) return false;
        a[static_cast<std::size_t>(i) * k + j] = std::sqrt(sum);
      } else {
        a[static_cast<std::size_t>(i) * k + j] = sum / a[static_cast<std::size_t>(j) * k + j];
      }
    }
  }
  return true;
}

void cholesky_solve(const std::vector<double>& l, int k, const std::vector<double>& b,
                    std::vector<double>& x) {
  x = b;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < i; ++j) x[static_cast<std::size_t>(i)] -= l[static_cast<std::size_t>(i) * k + j] * x[static_cast<std::size_t>(j)];
    x[static_cast<std::size_t>(i)] /= l[static_cast<std::size_t>(i) * k + i];
  }
  for (int i = k - 1; i >= 0; --i) {
    for (int j = i + 1; j < k; ++j) x[static_cast<std::size_t>(i)] -= l[static_cast<std::size_t>(j) * k + i] * x[static_cast<std::size_t>(j)];
    x[static_cast<std::size_t>(i)] /= l[static_cast<std::size_t>(i) * k + i];
  }
}

// Normal-equation solve with a rank gate, a tiny stabilizing ridge, and two
// refinement steps that cancel the ridge bias. Returns false (caller falls
// back) when the Gram spectrum indicates rank deficiency.
bool solve_normal(const std::vector<double>& gram, const std::vector<double>& rhs, int k,
                  std::vector<double>& x) {
  double trace = 0.0;
  for (int i = 0; i < k; ++i) trace += gram[static_cast<std::size_t>(i) * k + i];
  if (!(trace > 0.0) || !std::isfinite(trace)) return false;
  double lmin = 0.0, lmax = 0.0;
  jacobi_extents(gram, k, lmin, lmax);
  if (!(lmax > 0.0) || lmin <= 1e-8 * lmax) return false;
  std::vector<double> l = gram;
  const double ridge = 1e-10 * trace;
  for (int i = 0; i < k; ++i) l[static_cast<std::size_t>(i) * k + i] += ridge;
  if (!cholesky(l, k)) return false;
  cholesky_solve(l, k, rhs, x);
  std::vector<double> r(static_cast<std::size_t>(k)), d(static_cast<std::size_t>(k));
  for (int step = 0; step < 2; ++step) {
    for (int i = 0; i < k; ++i) {
      double acc = rhs[static_cast<std::size_t>(i)];
      for (int j = 0; j < k; ++j)
        acc -= gram[static_cast<std::size_t>(i) * k + j] * x[static_cast<std::size_t>(j)];
      r[static_cast<std::size_t>(i)] = acc;
    }
    cholesky_solve(l, k, r, d);
    for (int i = 0; i < k; ++i) x[static_cast<std::size_t>(i)] += d[static_cast<std::size_t>(i)];
  }
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

std::vector<double> center_pad(int len, double value) {
  std::vector<double> taps(static_cast<std::size_t>(len), 0.0);
  taps[static_cast<std::size_t>(len / 2 - 1)] = value;
  taps[static_cast<std::size_t>(len / 2)] = value;
  return taps;
}

void check_fit_len(int len, const char* what) {
  if (len < 2 || len % 2 != 0)
    throw std::invalid_argument(std::string("fit: ") + what + " length must be even and >= 2");
}

// min_t || C t - (d_cur - dref) ||^2 over interior rows; C's row at n holds
// the Lt even-lattice neighbors of odd sample 2n+1.
std::vector<double> fit_predict_streams(const std::vector<double>& a_cur,
                                        const std::vector<double>& d_cur, int lt,
                                        const std::vector<double>& dref) {
  const std::int64_t elen = static_cast<std::int64_t>(a_cur.size());
  const std::int64_t dlen = static_cast<std::int64_t>(d_cur.size());
  const std::int64_t L = elen + dlen;
  const std::int64_t half = lt / 2;
  const std::int64_t n_lo = std::max<std::int64_t>(0, half - 1);
  const std::int64_t n_hi = std::min<std::int64_t>(dlen - 1, (L - 1 - lt) / 2);
  std::vector<double> gram(static_cast<std::size_t>(lt) * lt, 0.0);
  std::vector<double> rhs(static_cast<std::size_t>(lt), 0.0);
  std::vector<double> row(static_cast<std::size_t>(lt));
  std::int64_t rows = 0;
  for (std::int64_t n = n_lo; n <= n_hi; ++n) {
    for (int k = 0; k < lt; ++k)
      row[static_cast<std::size_t>(k)] = a_cur[static_cast<std::size_t>(n - half + 1 + k)];
    const double tau = d_cur[static_cast<std::size_t>(n)] - dref[static_cast<std::size_t>(n)];
    for (int i = 0; i < lt; ++i) {
      for (int j = 0; j < lt; ++j)
        gram[static_cast<std::size_t>(i) * lt + j] +=
            row[static_cast<std::size_t>(i)] * row[static_cast<std::size_t>(j)];
      rhs[static_cast<std::size_t>(i)] += row[static_cast<std::size_t>(i)] * tau;
    }
    ++rows;
  }
  if (rows == 0) throw std::invalid_argument("fit: no interior rows for the predict system");
  std::vector<double> t;
  if (!solve_normal(gram, rhs, lt, t)) t = center_pad(lt, 0.5);
  return t;
}

// min_s sum_n (x1[n] - x[n])^2 with x1 = f0 * upsample(a_prev + s (*) d_new),
// restricted to samples whose windows stay inside both streams.
std::vector<double> fit_update_streams(const std::vector<double>& x_scan,
                                       const std::vector<double>& a_prev,
                                       const std::vector<double>& d_new, int ls,
                                       const Filter& f0) {
  const std::int64_t elen = static_cast<std::int64_t>(a_prev.size());
  const std::int64_t dlen = static_cast<std::int64_t>(d_new.size());
  const std::int64_t L = static_cast<std::int64_t>(x_scan.size());
  if (elen + dlen != L) throw std::invalid_argument("fit: stream lengths do not match the scan");
  if (f0.taps.empty()) throw std::invalid_argument("fit: empty synthesis lowpass");
  const std::int64_t half = ls / 2;
  const std::int64_t f_lo = f0.support_start;
  const std::int64_t f_hi = f0.support_start + static_cast<std::int64_t>(f0.taps.size()) - 1;
  std::vector<double> gram(static_cast<std::size_t>(ls) * ls, 0.0);
  std::vector<double> rhs(static_cast<std::size_t>(ls), 0.0);
  std::vector<double> g(static_cast<std::size_t>(ls));
  std::int64_t rows = 0;
  for (std::int64_t n = 0; n < L; ++n) {
    const std::int64_t j_min = ceil_div(n - f_hi, 2);
    const std::int64_t j_max = floor_div(n - f_lo, 2);
    if (j_min < half || j_max > dlen - half || j_max < j_min) continue;
    double base = 0.0;
    std::fill(g.begin(), g.end(), 0.0);
    for (std::int64_t j = j_min; j <= j_max; ++j) {
      const double w = f0.taps[static_cast<std::size_t>((n - 2 * j) - f_lo)];
      base += w * a_prev[static_cast<std::size_t>(j)];
      for (int i = 0; i < ls; ++i)
        g[static_cast<std::size_t>(i)] += w * d_new[static_cast<std::size_t>(j + half - 1 - i)];
    }
    const double tau = x_scan[static_cast<std::size_t>(n)] - base;
    for (int i = 0; i < ls; ++i) {
      for (int j = 0; j < ls; ++j)
        gram[static_cast<std::size_t>(i) * ls + j] +=
            g[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(j)];
      rhs[static_cast<std::size_t>(i)] += g[static_cast<std::size_t>(i)] * tau;
    }
    ++rows;
  }
  if (rows == 0) throw std::invalid_argument("fit: no interior rows for the update system");
  std::vector<double> s;
  if (!solve_normal(gram, rhs, ls, s)) s = center_pad(ls, 0.25);
  return s;
}

LiftingChain design_direction(const Image& img, ScanAxis axis, int lt, int ls, int stages) {
  const ScanSignal scan = scan_image(img, axis, ScanStrategy::Boustrophedon);
  const std::vector<double>& x = scan.samples;
  if (static_cast<std::int64_t>(x.size()) < 2 * static_cast<std::int64_t>(lt))
    throw std::invalid_argument("design: scan shorter than 2*Lt");
  std::vector<double> a, dcur;
  lazy_split(x, a, dcur);
  std::vector<double> a53, dref;
  forward_1d(x, chain_bior53(), a53, dref);
  LiftingChain chain;
  for (int st = 0; st < stages; ++st) {
    const std::vector<double> t = fit_predict_streams(a, dcur, lt, dref);
    std::vector<double> dnew = apply_predict(a, dcur, t);
    LiftingChain probe = chain;
    probe.push_back({t, {0.0, 0.0}});
    const Filter f0new = compose_filterbank(probe).f0;
    const std::vector<double> s = fit_update_streams(x, a, dnew, ls, f0new);
    std::vector<double> anew = apply_update(a, dnew, s);
    chain.push_back({t, s});
    a = std::move(anew);
    dcur = std::move(dnew);
  }
  return chain;
}

std::string format_taps(const std::vector<double>& taps) {
  std::string out;
  char buf[40];
  for (std::size_t i = 0; i < taps.size(); ++i) {
    std::snprintf(buf, sizeof buf, i == 0 ? "%.17g" : " %.17g", taps[i]);
    out += buf;
  }
  return out;
}

std::vector<double> parse_taps(std::istringstream& in, const std::string& path) {
  std::vector<double> taps;
  double v = 0.0;
  while (in >> v) taps.push_back(v);
  if (taps.empty() || taps.size() % 2 != 0)
    throw std::runtime_error("malformed tap line in design file: " + path);
  return taps;
}

}  // namespace

StageSignals make_stage_signals(const ScanSignal& scan, const LiftingChain& chain) {
  StageSignals sig;
  sig.scan = scan;
  forward_1d(scan.samples, chain, sig.approx, sig.detail);
  std::vector<double> a53;
  forward_1d(scan.samples, chain_bior53(), a53, sig.detail_ref);
  sig.upsampled.assign(scan.samples.size(), 0.0);
  for (std::size_t i = 0; i < sig.approx.size(); ++i) sig.upsampled[2 * i] = sig.approx[i];
  sig.lowpass_rec = inverse_1d(sig.approx, std::vector<double>(sig.detail.size(), 0.0), chain);
  return sig;
}

Image coarse_estimate(const std::vector<double>& y, const SampleMask& mask,
                      const DecompositionPlan& plan53, const SolverConfig& cfg,
                      SolveReport* report) {
  const LinearOperator A = build_operator(mask, plan53);
  SolveResult r = solve_bp(A, y, cfg);
  if (report) *report = r.report;
  return synthesis_apply(r.coeffs, plan53, mask.rows, mask.cols);
}

std::vector<double> fit_predict(const ScanSignal& scan, int lt, const std::vector<double>& dref) {
  check_fit_len(lt, "predict");
  if (static_cast<std::int64_t>(scan.samples.size()) < 2 * static_cast<std::int64_t>(lt))
    throw std::invalid_argument("fit: scan shorter than 2*Lt");
  std::vector<double> e, o;
  lazy_split(scan.samples, e, o);
  if (dref.size() != o.size())
    throw std::invalid_argument("fit: reference detail length does not match the scan");
  return fit_predict_streams(e, o, lt, dref);
}

std::vector<double> fit_update(const ScanSignal& scan, const std::vector<double>& t, int ls,
                               const Filter& f0new) {
  check_fit_len(ls, "update");
  check_fit_len(static_cast<int>(t.size()), "predict");
  std::vector<double> e, o;
  lazy_split(scan.samples, e, o);
  const std::vector<double> d = apply_predict(e, o, t);
  return fit_update_streams(scan.samples, e, d, ls, f0new);
}

MatchedDesign design_matched(const Image& estimate, int lt, int ls, int stages) {
  check_fit_len(lt, "predict");
  check_fit_len(ls, "update");
  if (stages < 1) throw std::invalid_argument("design: stages must be >= 1");
  MatchedDesign d;
  d.lt = lt;
  d.ls = ls;
  d.stages = stages;
  d.col_chain = design_direction(estimate, ScanAxis::Columns, lt, ls, stages);
  d.row_chain = design_direction(estimate, ScanAxis::Rows, lt, ls, stages);
  d.col_filterbank = compose_filterbank(d.col_chain);
  d.row_filterbank = compose_filterbank(d.row_chain);
  return d;
}

MatchedResult reconstruct_matched(const std::vector<double>& y, const SampleMask& mask,
                                  const MatchedDesign& design, const DecompositionPlan& tmpl,
                                  const SolverConfig& cfg) {
  DecompositionPlan plan = tmpl;
  plan.col_chain = design.col_chain;
  plan.row_chain = design.row_chain;
  const LinearOperator A = build_operator(mask, plan);
  SolveResult r = solve_bp(A, y, cfg);
  MatchedResult out;
  out.report = r.report;
  out.image = synthesis_apply(r.coeffs, plan, mask.rows, mask.cols);
  return out;
}

void save_design(const MatchedDesign& design, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  char head[160];
  std::snprintf(head, sizeof head, "MATCHEDDESIGN lt=%d ls=%d stages=%d ratio=%.17g seed=%llu\n",
                design.lt, design.ls, design.stages, design.source_ratio,
                static_cast<unsigned long long>(design.seed));
  os << head;
  const struct {
    const char* name;
    const LiftingChain& chain;
    const Filterbank& fb;
  } dirs[2] = {{"[column]", design.col_chain, design.col_filterbank},
               {"[row]", design.row_chain, design.row_filterbank}};
  for (const auto& dir : dirs) {
    os << dir.name << '\n';
    for (const LiftingStage& st : dir.chain) {
      os << "predict: " << format_taps(st.predict) << '\n';
      os << "update: " << format_taps(st.update) << '\n';
    }
    write_filterbank_csv(os, dir.fb);
  }
  if (!os) throw std::runtime_error("write failed: " + path);
}

MatchedDesign load_design(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(is, line) || line.rfind("MATCHEDDESIGN ", 0) != 0)
    throw std::runtime_error("not a design file: " + path);
  MatchedDesign d;
  {
    std::istringstream head(line.substr(14));
    std::string kv;
    unsigned long long seed = 0;
    while (head >> kv) {
      const std::size_t eq = kv.find('=');
      if (eq == std::string::npos) throw std::runtime_error("malformed design header: " + path);
      const std::string key = kv.substr(0, eq);
      const std::string val = kv.substr(eq + 1);
      if (key == "lt") d.lt = std::stoi(val);
      else if (key == "ls") d.ls = std::stoi(val);
      else if (key == "stages") d.stages = std::stoi(val);
      else if (key == "ratio") d.source_ratio = std::stod(val);
      else if (key == "seed") { seed = std::stoull(val); d.seed = seed; }
      else throw std::runtime_error("unknown design header key '" + key + "': " + path);
    }
  }
  LiftingChain* chain = nullptr;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line == "[column]") {
      chain = &d.col_chain;
    } else if (line == "[row]") {
      chain = &d.row_chain;
    } else if (line.rfind("predict: ", 0) == 0) {
      if (!chain) throw std::runtime_error("tap line before direction header: " + path);
      if (!chain->empty() && chain->back().update.empty())
        throw std::runtime_error("predict line without preceding update: " + path);
      std::istringstream in(line.substr(9));
      chain->push_back({parse_taps(in, path), {}});
    } else if (line.rfind("update: ", 0) == 0) {
      if (!chain || chain->empty() || !chain->back().update.empty())
        throw std::runtime_error("update line without matching predict: " + path);
      std::istringstream in(line.substr(8));
      chain->back().update = parse_taps(in, path);
    }
    // h0/h1/f0/f1 rows are re-derived from the chains below
  }
  if (d.col_chain.empty() || d.row_chain.empty() || d.col_chain.back().update.empty() ||
      d.row_chain.back().update.empty())
    throw std::runtime_error("incomplete design file: " + path);
  d.col_filterbank = compose_filterbank(d.col_chain);
  d.row_filterbank = compose_filterbank(d.row_chain);
  return d;
}

}  // namespace csmw
