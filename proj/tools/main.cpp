// csmw — compressive-sensing image reconstruction with lifting wavelets.
//
// Subcommands:
//   sense        sample an image (PCI pixel mask or dense block matrix)
//   design       fit matched predict/update taps from saved measurements
//   reconstruct  basis-pursuit reconstruction from saved measurements
//   experiment   factorial sweep (images x ratios x matrices x wavelets) -> CSV
//
// Exit codes: 0 success, 1 input error, 2 numerical failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "csmw/bpsolver.hpp"
#include "csmw/filterbank.hpp"
#include "csmw/image.hpp"
#include "csmw/lifting.hpp"
#include "csmw/matched.hpp"
#include "csmw/metrics.hpp"
#include "csmw/pyramid.hpp"
#include "csmw/sensing.hpp"

namespace {

using namespace csmw;

struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int auto_levels(int rows, int cols) {
  const int m = std::min(rows, cols);
  if (m >= 256) return 4;
  if (m >= 16) return 3;
  return 1;
}

Strategy parse_strategy(const std::string& s) {
  if (s == "r-pyramid") return Strategy::RPyramid;
  if (s == "l-pyramid") return Strategy::LPyramid;
  throw std::invalid_argument("unknown strategy '" + s + "' (want r-pyramid | l-pyramid)");
}

LRule parse_l_rule(const std::string& s) {
  if (s == "recursive-l") return LRule::RecursiveL;
  if (s == "latest-trio") return LRule::LatestTrio;
  throw std::invalid_argument("unknown l-rule '" + s + "' (want recursive-l | latest-trio)");
}

DecompositionPlan make_plan(const std::string& wavelet, const std::string& strategy,
                            const std::string& l_rule, int levels, int rows, int cols) {
  DecompositionPlan p;
  p.strategy = parse_strategy(strategy);
  p.l_rule = parse_l_rule(l_rule);
  p.levels = levels > 0 ? levels : auto_levels(rows, cols);
  p.col_chain = chain_by_name(wavelet);
  p.row_chain = p.col_chain;
  validate_plan(p, rows, cols);
  return p;
}

std::string path_stem(const std::string& path) {
  const std::size_t slash = path.find_last_of('/');
  const std::size_t dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path;
  return path.substr(0, dot);
}

void ensure_finite(const std::vector<double>& v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw numerical_error(std::string(what) + " contains non-finite values");
}

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_psnr(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string fmt_ratio(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

constexpr const char* kCsvHeader =
    "image,ratio,matrix,wavelet,strategy,levels,trial,iterations,residual,seconds,psnr_db";

// ---------------------------------------------------------------------------
// Measurement bundle: a measurement file plus, for PCI, its mask file. Dense
// operators are rebuilt from the recorded kind/ratio/block/seed.

struct Measured {
  MeasurementSet ms;
  SampleMask mask;

  bool is_pci() const { return ms.kind == "pci"; }

  LinearOperator op(const DecompositionPlan& plan) const {
    if (is_pci()) return build_operator(mask, plan);
    const DenseSensing d =
        make_dense(dense_kind_from_name(ms.kind), ms.rows, ms.cols, ms.ratio, ms.block, ms.seed);
    return build_operator(d, ms.rows, ms.cols, plan);
  }
};

Measured load_measured(const std::string& meas_path, const std::string& mask_path) {
  Measured m;
  m.ms = load_measurements(meas_path);
  if (m.is_pci()) {
    if (mask_path.empty())
      throw std::invalid_argument("PCI measurements need --mask (the sampled positions)");
    m.mask = load_mask(mask_path);
    if (m.mask.rows != m.ms.rows || m.mask.cols != m.ms.cols ||
        m.mask.omega.size() != m.ms.values.size())
      throw std::invalid_argument("mask and measurement files disagree on geometry");
  }
  return m;
}

void append_report_row(const std::string& path, const std::string& row) {
  bool need_header = true;
  {
    std::ifstream probe(path);
    std::string first;
    if (probe && std::getline(probe, first) && !first.empty()) need_header = false;
  }
  std::ofstream os(path, std::ios::app);
  if (!os) throw std::runtime_error("cannot open report for append: " + path);
  if (need_header) os << kCsvHeader << '\n';
  os << row << '\n';
}

// ---------------------------------------------------------------------------
// sense

struct SenseArgs {
  std::string image;
  double ratio = 0.5;
  std::string matrix = "pci";
  std::uint64_t seed = 0;
  int block = 8;
  std::string measurements;  // default <image stem>.meas
  std::string mask;          // default <image stem>.mask (PCI only)
};

int cmd_sense(const SenseArgs& a) {
  const Image img = load_image(a.image);
  const std::string meas_path =
      a.measurements.empty() ? path_stem(a.image) + ".meas" : a.measurements;
  const auto t0 = std::chrono::steady_clock::now();
  MeasurementSet ms;
  ms.rows = img.rows;
  ms.cols = img.cols;
  ms.kind = a.matrix;
  ms.ratio = a.ratio;
  ms.seed = a.seed;
  if (a.matrix == "pci") {
    const SampleMask mask = make_pci(img.rows, img.cols, a.ratio, a.seed);
    ms.block = 0;
    ms.values = sense_pci(img, mask);
    save_mask(mask, a.mask.empty() ? path_stem(a.image) + ".mask" : a.mask);
  } else {
    const DenseSensing d =
        make_dense(dense_kind_from_name(a.matrix), img.rows, img.cols, a.ratio, a.block, a.seed);
    ms.block = a.block;
    ms.values = sense_dense(img, d);
  }
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
  save_measurements(ms, meas_path);
  std::cout << "M=" << ms.values.size() << " N=" << img.size() << " seconds=" << fmt_g17(dt.count())
            << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// design

struct DesignArgs {
  std::string measurements;
  std::string mask;
  std::string output;  // default <measurements stem>.design
  std::string strategy = "l-pyramid";
  std::string l_rule = "recursive-l";
  int levels = 0;
  int lt = 2, ls = 2, stages = 1;
  SolverConfig solver;
};

MatchedDesign run_design(const Measured& m, const DesignArgs& a, Image* coarse_out,
                         SolveReport* coarse_report) {
  const DecompositionPlan plan53 =
      make_plan("bior53", a.strategy, a.l_rule, a.levels, m.ms.rows, m.ms.cols);
  Image coarse;
  SolveReport rep;
  if (m.is_pci()) {
    coarse = coarse_estimate(m.ms.values, m.mask, plan53, a.solver, &rep);
  } else {
    const LinearOperator A = m.op(plan53);
    SolveResult r = solve_bp(A, m.ms.values, a.solver);
    rep = r.report;
    coarse = synthesis_apply(r.coeffs, plan53, m.ms.rows, m.ms.cols);
  }
  ensure_finite(coarse.px, "coarse estimate");
  MatchedDesign design = design_matched(coarse, a.lt, a.ls, a.stages);
  design.source_ratio = m.ms.ratio;
  design.seed = m.ms.seed;
  if (coarse_out) *coarse_out = std::move(coarse);
  if (coarse_report) *coarse_report = rep;
  return design;
}

int cmd_design(const DesignArgs& a) {
  const Measured m = load_measured(a.measurements, a.mask);
  SolveReport rep;
  const MatchedDesign design = run_design(m, a, nullptr, &rep);
  const std::string out = a.output.empty() ? path_stem(a.measurements) + ".design" : a.output;
  save_design(design, out);
  std::ifstream echo(out);
  std::cout << echo.rdbuf();
  std::cout << "coarse: iterations=" << rep.iterations << " residual=" << fmt_g17(rep.residual)
            << " seconds=" << fmt_g17(rep.seconds) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// reconstruct

struct ReconstructArgs {
  std::string measurements;
  std::string mask;
  std::string wavelet = "bior53";
  std::string strategy = "l-pyramid";
  std::string l_rule = "recursive-l";
  int levels = 0;
  std::string output;  // default <measurements stem>.recon.pgm
  std::string report;
  std::string reference;
  std::string design_path;
  bool auto_design = false;
  std::string design_output;
  int lt = 2, ls = 2, stages = 1;
  SolverConfig solver;
};

int cmd_reconstruct(const ReconstructArgs& a) {
  const Measured m = load_measured(a.measurements, a.mask);
  const int rows = m.ms.rows, cols = m.ms.cols;
  Image recon;
  SolveReport rep;
  int extra_iters = 0;
  double extra_seconds = 0.0;
  double coarse_psnr = std::nan("");

  if (a.wavelet == "matched") {
    MatchedDesign design;
    if (a.auto_design) {
      DesignArgs da;
      da.strategy = a.strategy;
      da.l_rule = a.l_rule;
      da.levels = a.levels;
      da.lt = a.lt;
      da.ls = a.ls;
      da.stages = a.stages;
      da.solver = a.solver;
      Image coarse;
      SolveReport coarse_rep;
      design = run_design(m, da, &coarse, &coarse_rep);
      extra_iters = coarse_rep.iterations;
      extra_seconds = coarse_rep.seconds;
      if (!a.reference.empty()) coarse_psnr = psnr_db(load_image(a.reference), coarse);
      if (!a.design_output.empty()) save_design(design, a.design_output);
    } else if (!a.design_path.empty()) {
      design = load_design(a.design_path);
    } else {
      throw std::invalid_argument("--wavelet matched needs --design or --auto-design");
    }
    const DecompositionPlan tmpl =
        make_plan("bior53", a.strategy, a.l_rule, a.levels, rows, cols);
    if (m.is_pci()) {
      MatchedResult res = reconstruct_matched(m.ms.values, m.mask, design, tmpl, a.solver);
      recon = std::move(res.image);
      rep = res.report;
    } else {
      DecompositionPlan plan = tmpl;
      plan.col_chain = design.col_chain;
      plan.row_chain = design.row_chain;
      const LinearOperator A = m.op(plan);
      SolveResult r = solve_bp(A, m.ms.values, a.solver);
      rep = r.report;
      recon = synthesis_apply(r.coeffs, plan, rows, cols);
    }
  } else {
    const DecompositionPlan plan = make_plan(a.wavelet, a.strategy, a.l_rule, a.levels, rows, cols);
    const LinearOperator A = m.op(plan);
    SolveResult r = solve_bp(A, m.ms.values, a.solver);
    rep = r.report;
    recon = synthesis_apply(r.coeffs, plan, rows, cols);
  }
  if (!std::isfinite(rep.residual)) throw numerical_error("solver residual is non-finite");
  ensure_finite(recon.px, "reconstruction");

  const std::string out =
      a.output.empty() ? path_stem(a.measurements) + ".recon.pgm" : a.output;
  save_image_pgm(recon, out);

  double p = std::nan("");
  if (!a.reference.empty()) p = psnr_db(load_image(a.reference), recon);

  const int iters = rep.iterations + extra_iters;
  const double seconds = rep.seconds + extra_seconds;
  std::cout << "iterations=" << iters << " residual=" << fmt_g17(rep.residual)
            << " seconds=" << fmt_g17(seconds) << " converged=" << (rep.converged ? "yes" : "no");
  if (!std::isnan(coarse_psnr)) std::cout << " coarse_psnr_db=" << fmt_psnr(coarse_psnr);
  if (!std::isnan(p)) std::cout << " psnr_db=" << fmt_psnr(p);
  std::cout << '\n';

  if (!a.report.empty()) {
    const int levels = a.levels > 0 ? a.levels : auto_levels(rows, cols);
    std::ostringstream row;
    row << (a.reference.empty() ? a.measurements : a.reference) << ',' << fmt_ratio(m.ms.ratio)
        << ',' << m.ms.kind << ',' << a.wavelet << ',' << a.strategy << ',' << levels << ",0,"
        << iters << ',' << fmt_g17(rep.residual) << ',' << fmt_g17(seconds) << ',' << fmt_psnr(p);
    append_report_row(a.report, row.str());
  }
  return 0;
}

// ---------------------------------------------------------------------------
// experiment

struct ExperimentConfig {
  std::vector<std::string> images;
  std::vector<double> ratios;
  std::vector<std::string> matrices;
  std::vector<std::string> wavelets;
  std::string strategy = "l-pyramid";
  std::string l_rule = "recursive-l";
  int levels = 0;  // 0 = per-image default
  int trials = 10;
  std::uint64_t seed = 0;
  std::string output = "experiment.csv";
  int block = 8;
  int lt = 2, ls = 2, stages = 1;
  SolverConfig solver;
};

void apply_config_key(ExperimentConfig& cfg, const std::string& key, const std::string& val) {
  if (key == "image") cfg.images.push_back(val);
  else if (key == "ratio") cfg.ratios.push_back(std::stod(val));
  else if (key == "matrix") cfg.matrices.push_back(val);
  else if (key == "wavelet") cfg.wavelets.push_back(val);
  else if (key == "strategy") cfg.strategy = val;
  else if (key == "l_rule") cfg.l_rule = val;
  else if (key == "levels") cfg.levels = std::stoi(val);
  else if (key == "trials") cfg.trials = std::stoi(val);
  else if (key == "seed") cfg.seed = std::stoull(val);
  else if (key == "output") cfg.output = val;
  else if (key == "block") cfg.block = std::stoi(val);
  else if (key == "lt") cfg.lt = std::stoi(val);
  else if (key == "ls") cfg.ls = std::stoi(val);
  else if (key == "stages") cfg.stages = std::stoi(val);
  else if (key == "max_iters") cfg.solver.max_iters = std::stoi(val);
  else if (key == "feas_tol") cfg.solver.feas_tol = std::stod(val);
  else if (key == "dual_tol") cfg.solver.dual_tol = std::stod(val);
  else if (key == "penalty") cfg.solver.penalty = std::stod(val);
  else if (key == "noise_sigma") cfg.solver.noise_sigma = std::stod(val);
  else if (key == "cg_max_iters") cfg.solver.cg_max_iters = std::stoi(val);
  else if (key == "cg_tol") cfg.solver.cg_tol = std::stod(val);
  else throw std::invalid_argument("unknown config key: " + key);
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open config: " + path);
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = line.substr(0, eq);
    std::string val = line.substr(eq + 1);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
    const auto vfirst = val.find_first_not_of(" \t");
    val = vfirst == std::string::npos ? std::string() : val.substr(vfirst);
    try {
      apply_config_key(cfg, key, val);
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception&) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": bad value for " + key);
    }
  }
  return cfg;
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.images.empty()) throw std::invalid_argument("config needs at least one image");
  if (cfg.ratios.empty()) throw std::invalid_argument("config needs at least one ratio");
  if (cfg.matrices.empty()) throw std::invalid_argument("config needs at least one matrix");
  if (cfg.wavelets.empty()) throw std::invalid_argument("config needs at least one wavelet");
  if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
  for (double r : cfg.ratios)
    if (!(r > 0.0) || r > 1.0) throw std::invalid_argument("ratios must lie in (0, 1]");
  for (const std::string& m : cfg.matrices)
    if (m != "pci" && m != "gaussian" && m != "bernoulli")
      throw std::invalid_argument("unknown matrix kind: " + m);
  for (const std::string& w : cfg.wavelets)
    if (w != "db2" && w != "db4" && w != "bior53" && w != "matched")
      throw std::invalid_argument("unknown wavelet: " + w);
  parse_strategy(cfg.strategy);
  parse_l_rule(cfg.l_rule);
}

struct TrialOutcome {
  int iterations = 0;
  double residual = 0.0;
  double seconds = 0.0;
  double psnr = 0.0;
};

TrialOutcome run_trial(const Image& img, double ratio, const std::string& matrix,
                       const std::string& wavelet, const ExperimentConfig& cfg, int levels,
                       std::uint64_t seed) {
  const DecompositionPlan plan = make_plan(wavelet == "matched" ? "bior53" : wavelet, cfg.strategy,
                                           cfg.l_rule, levels, img.rows, img.cols);
  TrialOutcome out;
  Image recon;
  if (matrix == "pci") {
    const SampleMask mask = make_pci(img.rows, img.cols, ratio, seed);
    const std::vector<double> y = sense_pci(img, mask);
    if (wavelet == "matched") {
      SolveReport rep1;
      const Image coarse = coarse_estimate(y, mask, plan, cfg.solver, &rep1);
      MatchedDesign design = design_matched(coarse, cfg.lt, cfg.ls, cfg.stages);
      design.source_ratio = ratio;
      design.seed = seed;
      MatchedResult res = reconstruct_matched(y, mask, design, plan, cfg.solver);
      out.iterations = rep1.iterations + res.report.iterations;
      out.seconds = rep1.seconds + res.report.seconds;
      out.residual = res.report.residual;
      recon = std::move(res.image);
    } else {
      const LinearOperator A = build_operator(mask, plan);
      SolveResult r = solve_bp(A, y, cfg.solver);
      out.iterations = r.report.iterations;
      out.seconds = r.report.seconds;
      out.residual = r.report.residual;
      recon = synthesis_apply(r.coeffs, plan, img.rows, img.cols);
    }
  } else {
    const DenseSensing d = make_dense(dense_kind_from_name(matrix), img.rows, img.cols, ratio,
                                      cfg.block, seed);
    const std::vector<double> y = sense_dense(img, d);
    const auto solve_with = [&](const DecompositionPlan& p) {
      const LinearOperator A = build_operator(d, img.rows, img.cols, p);
      return solve_bp(A, y, cfg.solver);
    };
    if (wavelet == "matched") {
      SolveResult r1 = solve_with(plan);
      const Image coarse = synthesis_apply(r1.coeffs, plan, img.rows, img.cols);
      const MatchedDesign design = design_matched(coarse, cfg.lt, cfg.ls, cfg.stages);
      DecompositionPlan planm = plan;
      planm.col_chain = design.col_chain;
      planm.row_chain = design.row_chain;
      SolveResult r2 = solve_with(planm);
      out.iterations = r1.report.iterations + r2.report.iterations;
      out.seconds = r1.report.seconds + r2.report.seconds;
      out.residual = r2.report.residual;
      recon = synthesis_apply(r2.coeffs, planm, img.rows, img.cols);
    } else {
      SolveResult r = solve_with(plan);
      out.iterations = r.report.iterations;
      out.seconds = r.report.seconds;
      out.residual = r.report.residual;
      recon = synthesis_apply(r.coeffs, plan, img.rows, img.cols);
    }
  }
  if (!std::isfinite(out.residual)) throw numerical_error("solver residual is non-finite");
  ensure_finite(recon.px, "reconstruction");
  out.psnr = psnr_db(img, recon);
  return out;
}

int cmd_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  std::ofstream os(cfg.output);
  if (!os) throw std::invalid_argument("cannot open output: " + cfg.output);
  os << kCsvHeader << '\n';

  for (const std::string& image_path : cfg.images) {
    const Image img = load_image(image_path);
    const int levels = cfg.levels > 0 ? cfg.levels : auto_levels(img.rows, img.cols);
    for (double ratio : cfg.ratios)
      for (const std::string& matrix : cfg.matrices)
        for (const std::string& wavelet : cfg.wavelets) {
          // Per-trial values as they round-trip through the CSV text, so the
          // aggregate row recomputes exactly from the written rows.
          std::vector<double> iters, residuals, seconds, psnrs;
          const std::string cell_prefix = image_path + ',' + fmt_ratio(ratio) + ',' + matrix +
                                          ',' + wavelet + ',' + cfg.strategy + ',' +
                                          std::to_string(levels) + ',';
          for (int t = 0; t < cfg.trials; ++t) {
            std::string row = cell_prefix + std::to_string(t) + ',';
            try {
              const TrialOutcome o =
                  run_trial(img, ratio, matrix, wavelet, cfg, levels, cfg.seed + t);
              const std::string res_s = fmt_g17(o.residual);
              const std::string sec_s = fmt_g17(o.seconds);
              const std::string psnr_s = fmt_psnr(o.psnr);
              row += std::to_string(o.iterations) + ',' + res_s + ',' + sec_s + ',' + psnr_s;
              iters.push_back(o.iterations);
              residuals.push_back(std::strtod(res_s.c_str(), nullptr));
              seconds.push_back(std::strtod(sec_s.c_str(), nullptr));
              psnrs.push_back(std::strtod(psnr_s.c_str(), nullptr));
            } catch (const std::exception& e) {
              row += "nan,nan,nan,nan";
              std::cerr << "cell failed (" << cell_prefix << "trial " << t << "): " << e.what()
                        << '\n';
            }
            os << row << '\n';
          }
          const auto mean = [](const std::vector<double>& v) {
            if (v.empty()) return std::nan("");
            double s = 0.0;
            for (double x : v) s += x;
            return s / static_cast<double>(v.size());
          };
          const auto stdev = [&](const std::vector<double>& v) {
            if (v.size() < 2) return 0.0;
            const double m = mean(v);
            double s = 0.0;
            for (double x : v) s += (x - m) * (x - m);
            return std::sqrt(s / static_cast<double>(v.size() - 1));
          };
          os << cell_prefix << "mean," << fmt_g17(mean(iters)) << ',' << fmt_g17(mean(residuals))
             << ',' << fmt_g17(mean(seconds)) << ',' << fmt_g17(mean(psnrs)) << '\n';
          char line[256];
          std::snprintf(line, sizeof line,
                        "%s ratio=%g %s %s psnr=%.2f+-%.2f dB seconds=%.3f+-%.3f (%zu/%d trials)",
                        image_path.c_str(), ratio, matrix.c_str(), wavelet.c_str(), mean(psnrs),
                        stdev(psnrs), mean(seconds), stdev(seconds), psnrs.size(), cfg.trials);
          std::cout << line << '\n';
        }
  }
  if (!os) throw std::runtime_error("write failed: " + cfg.output);
  std::cout << "wrote " << cfg.output << '\n';
  return 0;
}

void add_solver_flags(CLI::App* cmd, SolverConfig& cfg) {
  cmd->add_option("--max-iters", cfg.max_iters, "solver iteration cap")->capture_default_str();
  cmd->add_option("--feas-tol", cfg.feas_tol, "relative feasibility tolerance")
      ->capture_default_str();
  cmd->add_option("--dual-tol", cfg.dual_tol, "relative iterate-change tolerance")
      ->capture_default_str();
  cmd->add_option("--penalty", cfg.penalty, "splitting penalty rho")->capture_default_str();
  cmd->add_option("--noise-sigma", cfg.noise_sigma, "allowed measurement misfit (0 = equality)")
      ->capture_default_str();
  cmd->add_option("--cg-max-iters", cfg.cg_max_iters, "projection CG iteration cap")
      ->capture_default_str();
  cmd->add_option("--cg-tol", cfg.cg_tol, "projection CG tolerance")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"compressive-sensing image reconstruction with lifting wavelets"};
  app.require_subcommand(1);

  SenseArgs sense;
  CLI::App* c_sense = app.add_subcommand("sense", "sample an image into a measurement file");
  c_sense->add_option("--image", sense.image, "input image (PGM or 8-bit gray PNG)")->required();
  c_sense->add_option("--ratio", sense.ratio, "sampling ratio in (0,1]")->required();
  c_sense->add_option("--matrix", sense.matrix, "pci | gaussian | bernoulli")
      ->capture_default_str();
  c_sense->add_option("--seed", sense.seed, "RNG seed")->capture_default_str();
  c_sense->add_option("--block", sense.block, "block edge for dense matrices")
      ->capture_default_str();
  c_sense->add_option("--measurements", sense.measurements, "output measurement file");
  c_sense->add_option("--mask", sense.mask, "output mask file (PCI)");

  DesignArgs design;
  CLI::App* c_design = app.add_subcommand("design", "fit matched wavelet taps from measurements");
  c_design->add_option("--measurements", design.measurements, "measurement file")->required();
  c_design->add_option("--mask", design.mask, "mask file (required for PCI measurements)");
  c_design->add_option("--output", design.output, "output design file");
  c_design->add_option("--strategy", design.strategy, "r-pyramid | l-pyramid")
      ->capture_default_str();
  c_design->add_option("--l-rule", design.l_rule, "recursive-l | latest-trio")
      ->capture_default_str();
  c_design->add_option("--levels", design.levels, "decomposition levels (0 = auto)")
      ->capture_default_str();
  c_design->add_option("--lt", design.lt, "predict tap count (even)")->capture_default_str();
  c_design->add_option("--ls", design.ls, "update tap count (even)")->capture_default_str();
  c_design->add_option("--stages", design.stages, "lifting stages to fit")->capture_default_str();
  add_solver_flags(c_design, design.solver);

  ReconstructArgs rec;
  CLI::App* c_rec = app.add_subcommand("reconstruct", "basis-pursuit reconstruction");
  c_rec->add_option("--measurements", rec.measurements, "measurement file")->required();
  c_rec->add_option("--mask", rec.mask, "mask file (required for PCI measurements)");
  c_rec->add_option("--wavelet", rec.wavelet, "db2 | db4 | bior53 | matched")
      ->capture_default_str();
  c_rec->add_option("--strategy", rec.strategy, "r-pyramid | l-pyramid")->capture_default_str();
  c_rec->add_option("--l-rule", rec.l_rule, "recursive-l | latest-trio")->capture_default_str();
  c_rec->add_option("--levels", rec.levels, "decomposition levels (0 = auto)")
      ->capture_default_str();
  c_rec->add_option("--output", rec.output, "output image (PGM)");
  c_rec->add_option("--report", rec.report, "CSV file to append a report row to");
  c_rec->add_option("--reference", rec.reference, "original image for PSNR");
  c_rec->add_option("--design", rec.design_path, "matched design file");
  c_rec->add_flag("--auto-design", rec.auto_design, "fit the matched design from a coarse pass");
  c_rec->add_option("--design-output", rec.design_output, "save the auto-fitted design here");
  c_rec->add_option("--lt", rec.lt, "predict tap count for --auto-design")->capture_default_str();
  c_rec->add_option("--ls", rec.ls, "update tap count for --auto-design")->capture_default_str();
  c_rec->add_option("--stages", rec.stages, "stages for --auto-design")->capture_default_str();
  add_solver_flags(c_rec, rec.solver);

  std::string exp_config;
  ExperimentConfig exp;
  CLI::App* c_exp = app.add_subcommand("experiment", "factorial sweep to CSV");
  c_exp->add_option("--config", exp_config, "key=value config file (repeated keys make lists)");
  c_exp->add_option("--image", exp.images, "image path (repeatable)");
  c_exp->add_option("--ratio", exp.ratios, "sampling ratio (repeatable)");
  c_exp->add_option("--matrix", exp.matrices, "pci | gaussian | bernoulli (repeatable)");
  c_exp->add_option("--wavelet", exp.wavelets, "db2 | db4 | bior53 | matched (repeatable)");
  c_exp->add_option("--strategy", exp.strategy, "r-pyramid | l-pyramid")->capture_default_str();
  c_exp->add_option("--l-rule", exp.l_rule, "recursive-l | latest-trio")->capture_default_str();
  c_exp->add_option("--levels", exp.levels, "decomposition levels (0 = auto)")
      ->capture_default_str();
  c_exp->add_option("--trials", exp.trials, "repetitions per cell")->capture_default_str();
  c_exp->add_option("--seed", exp.seed, "base seed; trial i uses seed+i")->capture_default_str();
  c_exp->add_option("--output", exp.output, "output CSV path")->capture_default_str();
  c_exp->add_option("--block", exp.block, "block edge for dense matrices")->capture_default_str();
  c_exp->add_option("--lt", exp.lt, "matched predict tap count")->capture_default_str();
  c_exp->add_option("--ls", exp.ls, "matched update tap count")->capture_default_str();
  c_exp->add_option("--stages", exp.stages, "matched stages")->capture_default_str();
  add_solver_flags(c_exp, exp.solver);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*c_sense) return cmd_sense(sense);
    if (*c_design) return cmd_design(design);
    if (*c_rec) return cmd_reconstruct(rec);
    if (*c_exp) {
      ExperimentConfig cfg;
      if (!exp_config.empty()) cfg = parse_config_file(exp_config);
      const auto overridden = [&](const std::string& name) { return c_exp->count(name) > 0; };
      if (exp_config.empty()) {
        cfg = exp;
      } else {
        if (overridden("--image")) cfg.images = exp.images;
        if (overridden("--ratio")) cfg.ratios = exp.ratios;
        if (overridden("--matrix")) cfg.matrices = exp.matrices;
        if (overridden("--wavelet")) cfg.wavelets = exp.wavelets;
        if (overridden("--strategy")) cfg.strategy = exp.strategy;
        if (overridden("--l-rule")) cfg.l_rule = exp.l_rule;
        if (overridden("--levels")) cfg.levels = exp.levels;
        if (overridden("--trials")) cfg.trials = exp.trials;
        if (overridden("--seed")) cfg.seed = exp.seed;
        if (overridden("--output")) cfg.output = exp.output;
        if (overridden("--block")) cfg.block = exp.block;
        if (overridden("--lt")) cfg.lt = exp.lt;
        if (overridden("--ls")) cfg.ls = exp.ls;
        if (overridden("--stages")) cfg.stages = exp.stages;
        if (overridden("--max-iters")) cfg.solver.max_iters = exp.solver.max_iters;
        if (overridden("--feas-tol")) cfg.solver.feas_tol = exp.solver.feas_tol;
        if (overridden("--dual-tol")) cfg.solver.dual_tol = exp.solver.dual_tol;
        if (overridden("--penalty")) cfg.solver.penalty = exp.solver.penalty;
        if (overridden("--noise-sigma")) cfg.solver.noise_sigma = exp.solver.noise_sigma;
        if (overridden("--cg-max-iters")) cfg.solver.cg_max_iters = exp.solver.cg_max_iters;
        if (overridden("--cg-tol")) cfg.solver.cg_tol = exp.solver.cg_tol;
      }
      return cmd_experiment(cfg);
    }
  } catch (const numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::logic_error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
