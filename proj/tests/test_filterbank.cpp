#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "csmw/filterbank.hpp"
#include "csmw/lifting.hpp"
#include "csmw/rng.hpp"

using namespace csmw;

namespace {

// H(z) = sum_k taps[k] * z^-(support_start + k)
double eval(const Filter& f, double z) {
  double acc = 0.0;
  for (std::size_t k = 0; k < f.taps.size(); ++k)
    acc += f.taps[k] * std::pow(z, -static_cast<double>(f.support_start + static_cast<std::int64_t>(k)));
  return acc;
}

LiftingChain random_chain(SplitMix64& rng, int stages) {
  LiftingChain chain;
  for (int s = 0; s < stages; ++s) {
    LiftingStage st;
    st.predict.resize(2 * (1 + rng.next_below(2)));
    st.update.resize(2 * (1 + rng.next_below(2)));
    for (auto& v : st.predict) v = 1.6 * rng.next_unit() - 0.8;
    for (auto& v : st.update) v = 1.6 * rng.next_unit() - 0.8;
    chain.push_back(st);
  }
  return chain;
}

std::vector<double> trimmed(const std::vector<double>& taps) {
  double peak = 0.0;
  for (double t : taps) peak = std::max(peak, std::fabs(t));
  std::size_t lo = 0, hi = taps.size();
  while (lo < hi && std::fabs(taps[lo]) < 1e-12 * peak) ++lo;
  while (hi > lo && std::fabs(taps[hi - 1]) < 1e-12 * peak) --hi;
  return {taps.begin() + static_cast<std::ptrdiff_t>(lo),
          taps.begin() + static_cast<std::ptrdiff_t>(hi)};
}

void check_proportional(const std::vector<double>& got, const std::vector<double>& want,
                        double tol) {
  REQUIRE(got.size() == want.size());
  std::size_t peak = 0;
  for (std::size_t i = 0; i < want.size(); ++i)
    if (std::fabs(want[i]) > std::fabs(want[peak])) peak = i;
  const double gain = got[peak] / want[peak];
  for (std::size_t i = 0; i < got.size(); ++i)
    CHECK(got[i] == doctest::Approx(gain * want[i]).epsilon(tol).scale(std::fabs(gain)));
}

}  // namespace

TEST_CASE("legall 5/3 composes exactly") {
  const Filterbank fb = compose_filterbank(chain_bior53());
  REQUIRE(fb.h0.taps.size() == 5);
  CHECK(fb.h0.support_start == -2);
  const double h0[5] = {-0.125, 0.25, 0.75, 0.25, -0.125};
  for (int i = 0; i < 5; ++i) CHECK(std::fabs(fb.h0.taps[static_cast<std::size_t>(i)] - h0[i]) < 1e-14);
  REQUIRE(fb.h1.taps.size() == 3);
  CHECK(fb.h1.support_start == -2);
  const double h1[3] = {-0.5, 1.0, -0.5};
  for (int i = 0; i < 3; ++i) CHECK(std::fabs(fb.h1.taps[static_cast<std::size_t>(i)] - h1[i]) < 1e-14);
  REQUIRE(fb.f0.taps.size() == 3);
  CHECK(fb.f0.support_start == -1);
  const double f0[3] = {0.5, 1.0, 0.5};
  for (int i = 0; i < 3; ++i) CHECK(std::fabs(fb.f0.taps[static_cast<std::size_t>(i)] - f0[i]) < 1e-14);
}

TEST_CASE("single-stage taps land in the Table-I pattern") {
  const LiftingChain chain{{{0.5028, 0.4941}, {0.2858, 0.2790}}};
  const Filterbank fb = compose_filterbank(chain);
  const double h0[5] = {-0.1412, 0.2858, 0.7185, 0.2790, -0.1403};
  const double h1[3] = {-0.4941, 1.0, -0.5028};
  REQUIRE(fb.h0.taps.size() == 5);
  REQUIRE(fb.h1.taps.size() == 3);
  for (int i = 0; i < 5; ++i) CHECK(std::fabs(fb.h0.taps[static_cast<std::size_t>(i)] - h0[i]) < 5e-4);
  for (int i = 0; i < 3; ++i) CHECK(std::fabs(fb.h1.taps[static_cast<std::size_t>(i)] - h1[i]) < 5e-4);
  // highpass is [-t1, 1, -t0] exactly
  CHECK(fb.h1.taps[0] == doctest::Approx(-chain[0].predict[1]).epsilon(1e-15));
  CHECK(fb.h1.taps[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(fb.h1.taps[2] == doctest::Approx(-chain[0].predict[0]).epsilon(1e-15));
}

TEST_CASE("empty chain composes to the lazy bank") {
  const Filterbank fb = compose_filterbank({});
  CHECK(fb.h0.support_start == 0);
  CHECK(fb.h0.taps == std::vector<double>{1.0});
  CHECK(fb.h1.support_start == -1);
  CHECK(fb.h1.taps == std::vector<double>{1.0});
  CHECK(fb.f0.support_start == 0);
  CHECK(fb.f0.taps == std::vector<double>{1.0});
  CHECK(fb.f1.support_start == 1);
  CHECK(fb.f1.taps == std::vector<double>{1.0});
}

TEST_CASE("db2 and db4 chains compose to the classical lowpass up to gain") {
  const double root3 = std::sqrt(3.0);
  const double db2_ref[4] = {(1 + root3) / (4 * std::numbers::sqrt2),
                             (3 + root3) / (4 * std::numbers::sqrt2),
                             (3 - root3) / (4 * std::numbers::sqrt2),
                             (1 - root3) / (4 * std::numbers::sqrt2)};
  const Filterbank db2 = compose_filterbank(chain_db2());
  std::vector<double> got = trimmed(db2.h0.taps);
  std::vector<double> want(db2_ref, db2_ref + 4);
  std::reverse(want.begin(), want.end());
  check_proportional(got, want, 1e-10);

  const double db4_ref[8] = {0.2303778133088965,    0.7148465705529157,
                             0.6308807679298589,    -0.027983769416859854,
                             -0.18703481171909309,  0.030841381835560764,
                             0.0328830116668852,    -0.010597401785069032};
  const Filterbank db4 = compose_filterbank(chain_db4());
  check_proportional(trimmed(db4.h0.taps), std::vector<double>(db4_ref, db4_ref + 8), 1e-10);
}

TEST_CASE("perfect-reconstruction and alias-cancellation identities") {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const Filterbank fb = compose_filterbank(random_chain(rng, 1 + trial % 3));
    for (double z : {0.7, 1.31, -0.9, 1.9}) {
      const double pr = eval(fb.h0, z) * eval(fb.f0, z) + eval(fb.h1, z) * eval(fb.f1, z);
      CHECK(pr == doctest::Approx(2.0).epsilon(1e-9));
      const double alias =
          eval(fb.h0, -z) * eval(fb.f0, z) + eval(fb.h1, -z) * eval(fb.f1, z);
      CHECK(std::fabs(alias) < 1e-9 * std::max(1.0, std::fabs(pr)));
    }
  }
}

TEST_CASE("composed filters agree with the lifting transform away from edges") {
  SplitMix64 rng(9);
  for (int trial = 0; trial < 12; ++trial) {
    const LiftingChain chain = random_chain(rng, 1 + trial % 2);
    const Filterbank fb = compose_filterbank(chain);
    const std::size_t len = 64;
    std::vector<double> x(len);
    for (auto& v : x) v = 2.0 * rng.next_unit() - 1.0;
    std::vector<double> a, d;
    forward_1d(x, chain, a, d);
    const auto direct = [&](const Filter& f, std::size_t n) {
      double acc = 0.0;
      for (std::size_t k = 0; k < f.taps.size(); ++k) {
        const std::int64_t j = f.support_start + static_cast<std::int64_t>(k);
        const std::int64_t idx = 2 * static_cast<std::int64_t>(n) - j;
        REQUIRE(idx >= 0);
        REQUIRE(idx < static_cast<std::int64_t>(len));
        acc += f.taps[k] * x[static_cast<std::size_t>(idx)];
      }
      return acc;
    };
    const auto interior = [&](const Filter& f, std::size_t stream_len) {
      const std::int64_t hi = f.support_start + static_cast<std::int64_t>(f.taps.size()) - 1;
      const std::int64_t lo = f.support_start;
      const std::int64_t n0 = (hi + 1) / 2 + (hi > 0 ? 0 : 0);
      const std::int64_t n1 = (static_cast<std::int64_t>(len) - 1 + lo) / 2;
      return std::pair<std::int64_t, std::int64_t>{std::max<std::int64_t>(0, n0),
                                                   std::min<std::int64_t>(static_cast<std::int64_t>(stream_len) - 1, n1)};
    };
    const auto [a0, a1] = interior(fb.h0, a.size());
    for (std::int64_t n = a0; n <= a1; ++n)
      CHECK(a[static_cast<std::size_t>(n)] ==
            doctest::Approx(direct(fb.h0, static_cast<std::size_t>(n))).epsilon(1e-10));
    const auto [d0, d1] = interior(fb.h1, d.size());
    for (std::int64_t n = d0; n <= d1; ++n)
      CHECK(d[static_cast<std::size_t>(n)] ==
            doctest::Approx(direct(fb.h1, static_cast<std::size_t>(n))).epsilon(1e-10));
  }
}

TEST_CASE("csv rows") {
  const Filterbank fb = compose_filterbank(chain_bior53());
  CHECK(filter_csv_row("h1", fb.h1) == "h1,-2,-0.5,1,-0.5");
  CHECK(filter_csv_row("f0", fb.f0) == "f0,-1,0.5,1,0.5");
  std::ostringstream os;
  write_filterbank_csv(os, fb);
  const std::string text = os.str();
  CHECK(text.find("h0,-2,-0.125,0.25,0.75,0.25,-0.125\n") != std::string::npos);
  CHECK(text.find("f1,") != std::string::npos);
}
