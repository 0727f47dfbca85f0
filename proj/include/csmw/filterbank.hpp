#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "csmw/lifting.hpp"

// Equivalent four-filter view of a lifting chain. Composition starts from the
// lazy bank (H0=1, H1=z, F0=1, F1=z^-1) and folds in one stage at a time:
// each predict updates the analysis highpass and synthesis lowpass, each
// update then uses the already-modified highpass pair. Perfect reconstruction
// therefore holds by construction.

namespace csmw {

// FIR filter as an impulse response with explicit support: taps[k] multiplies
// x[support_start + k]. Analysis applies out[n] = sum_k h[k]*x[2n - (support_start + k)].
struct Filter {
  std::int64_t support_start = 0;
  std::vector<double> taps;
};

struct Filterbank {
  Filter h0;  // analysis lowpass
  Filter h1;  // analysis highpass
  Filter f0;  // synthesis lowpass
  Filter f1;  // synthesis highpass
};

Filterbank compose_filterbank(const LiftingChain& chain);

// One CSV row: name,support_start,tap0,tap1,...
std::string filter_csv_row(const std::string& name, const Filter& f);
void write_filterbank_csv(std::ostream& os, const Filterbank& fb);

}  // namespace csmw
