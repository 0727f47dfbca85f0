#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "csmw/bpsolver.hpp"
#include "csmw/filterbank.hpp"
#include "csmw/image.hpp"
#include "csmw/lifting.hpp"
#include "csmw/pyramid.hpp"
#include "csmw/sensing.hpp"

// Image-matched wavelet design. Three stages: (1) a coarse reconstruction
// from the partial measurements with the standard 5/3 wavelet, (2) per scan
// direction, least-squares fitting of predict taps against the 5/3 detail
// reference followed by update taps that make the lowpass synthesis branch
// reproduce the coarse signal, (3) a final basis-pursuit solve with the
// matched chains. Fits use interior samples only — rows whose windows would
// need boundary extension are dropped — and fall back to the 5/3 taps
// (center-padded) when the normal system is rank-deficient.

namespace csmw {

struct MatchedDesign {
  LiftingChain col_chain;
  LiftingChain row_chain;
  Filterbank col_filterbank;  // compose_filterbank(col_chain)
  Filterbank row_filterbank;
  int lt = 2;
  int ls = 2;
  int stages = 1;
  double source_ratio = 0.0;  // sampling ratio behind the coarse estimate
  std::uint64_t seed = 0;
};

// Intermediate signals of one design stage, kept for inspection: the scanned
// coarse estimate, its predicted detail and updated approximation under the
// fitted chain, the fixed 5/3 detail reference, and the lowpass-branch
// synthesis (approximation upsampled, then reconstructed with details zeroed).
struct StageSignals {
  ScanSignal scan;
  std::vector<double> detail;
  std::vector<double> detail_ref;
  std::vector<double> approx;
  std::vector<double> upsampled;
  std::vector<double> lowpass_rec;
};

StageSignals make_stage_signals(const ScanSignal& scan, const LiftingChain& chain);

Image coarse_estimate(const std::vector<double>& y, const SampleMask& mask,
                      const DecompositionPlan& plan53, const SolverConfig& cfg = {},
                      SolveReport* report = nullptr);

// Least-squares predict taps: min_t ||(odd - C t) - dref||^2 over interior
// rows, where C's row at n holds the Lt even-lattice neighbors of odd sample
// 2n+1. dref must have the scan's detail length.
std::vector<double> fit_predict(const ScanSignal& scan, int lt, const std::vector<double>& dref);

// Least-squares update taps: the lowpass synthesis branch built from the
// predicted detail and f0new (the synthesis lowpass composed after the
// predict step) is fitted to the scan itself over interior samples.
std::vector<double> fit_update(const ScanSignal& scan, const std::vector<double>& t, int ls,
                               const Filter& f0new);

MatchedDesign design_matched(const Image& estimate, int lt, int ls, int stages);

struct MatchedResult {
  Image image;
  SolveReport report;
};

// Final solve with the design's chains substituted into the plan template
// (strategy/levels/l_rule are taken from the template).
MatchedResult reconstruct_matched(const std::vector<double>& y, const SampleMask& mask,
                                  const MatchedDesign& design, const DecompositionPlan& tmpl,
                                  const SolverConfig& cfg = {});

// Text format: a header line with lt/ls/stages/ratio/seed, then per direction
// "predict:"/"update:" tap lines per stage followed by the composed
// h0/h1/f0/f1 CSV rows.
void save_design(const MatchedDesign& design, const std::string& path);
MatchedDesign load_design(const std::string& path);

}  // namespace csmw
