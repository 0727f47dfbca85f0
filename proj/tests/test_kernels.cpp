#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "csmw/kernels.hpp"
#include "csmw/rng.hpp"

using namespace csmw;

namespace {

std::vector<double> randvec(int n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> v(static_cast<std::size_t>(n));
  for (auto& x : v) x = 2.0 * rng.next_unit() - 1.0;
  return v;
}

}  // namespace

TEST_CASE("scalar axpy/dot/scal reference semantics") {
  const auto& k = kern::scalar_ops;
  std::vector<double> x{1.0, -2.0, 3.0};
  std::vector<double> y{0.5, 0.5, 0.5};
  k.axpy(3, 2.0, x.data(), y.data());
  CHECK(y[0] == doctest::Approx(2.5));
  CHECK(y[1] == doctest::Approx(-3.5));
  CHECK(y[2] == doctest::Approx(6.5));
  CHECK(k.dot(3, x.data(), x.data()) == doctest::Approx(14.0));
  k.scal(3, -1.0, y.data());
  CHECK(y[2] == doctest::Approx(-6.5));
}

TEST_CASE("soft threshold shrinks toward zero") {
  const auto& k = kern::scalar_ops;
  std::vector<double> x{3.0, -3.0, 0.4, -0.4, 0.0};
  std::vector<double> z(5);
  k.soft_threshold(5, 0.5, x.data(), z.data());
  CHECK(z[0] == doctest::Approx(2.5));
  CHECK(z[1] == doctest::Approx(-2.5));
  CHECK(z[2] == 0.0);
  CHECK(z[3] == 0.0);
  CHECK(z[4] == 0.0);
}

TEST_CASE("gemv and gemv_t_acc against index loops") {
  const auto& k = kern::scalar_ops;
  const int m = 5, n = 7;
  const auto a = randvec(m * n, 1);
  const auto x = randvec(n, 2);
  const auto w = randvec(m, 3);
  std::vector<double> y(m, 0.0);
  k.gemv(m, n, a.data(), x.data(), y.data());
  for (int i = 0; i < m; ++i) {
    double want = 0.0;
    for (int j = 0; j < n; ++j) want += a[static_cast<std::size_t>(i) * n + j] * x[j];
    CHECK(y[i] == doctest::Approx(want).epsilon(1e-12));
  }
  std::vector<double> g(n, 1.0);
  k.gemv_t_acc(m, n, a.data(), w.data(), g.data());
  for (int j = 0; j < n; ++j) {
    double want = 1.0;
    for (int i = 0; i < m; ++i) want += a[static_cast<std::size_t>(i) * n + j] * w[i];
    CHECK(g[j] == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("avx2 table matches scalar on awkward lengths") {
  const kern::Ops* v = kern::avx2_ops_or_null();
  if (!v) return;  // non-AVX2 host: dispatch falls back to scalar
  for (int n : {1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 64, 233}) {
    auto x = randvec(n, 10 + n);
    auto y0 = randvec(n, 20 + n);
    auto y1 = y0;
    kern::scalar_ops.axpy(n, 1.75, x.data(), y0.data());
    v->axpy(n, 1.75, x.data(), y1.data());
    for (int i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y0[i]).epsilon(1e-14));

    CHECK(v->dot(n, x.data(), y1.data()) ==
          doctest::Approx(kern::scalar_ops.dot(n, x.data(), y0.data())).epsilon(1e-12));

    auto z0 = x, z1 = x;
    kern::scalar_ops.scal(n, -0.3, z0.data());
    v->scal(n, -0.3, z1.data());
    for (int i = 0; i < n; ++i) CHECK(z1[i] == doctest::Approx(z0[i]).epsilon(1e-14));

    std::vector<double> s0(static_cast<std::size_t>(n)), s1(static_cast<std::size_t>(n));
    kern::scalar_ops.soft_threshold(n, 0.25, x.data(), s0.data());
    v->soft_threshold(n, 0.25, x.data(), s1.data());
    for (int i = 0; i < n; ++i) CHECK(s1[i] == doctest::Approx(s0[i]).epsilon(1e-14));
  }
  for (int m : {1, 3, 8}) {
    for (int n : {1, 5, 16, 19}) {
      auto a = randvec(m * n, 100 + m * n);
      auto x = randvec(n, 200 + n);
      auto w = randvec(m, 300 + m);
      std::vector<double> y0(static_cast<std::size_t>(m)), y1(static_cast<std::size_t>(m));
      kern::scalar_ops.gemv(m, n, a.data(), x.data(), y0.data());
      v->gemv(m, n, a.data(), x.data(), y1.data());
      for (int i = 0; i < m; ++i) CHECK(y1[i] == doctest::Approx(y0[i]).epsilon(1e-12));
      std::vector<double> g0(static_cast<std::size_t>(n), 0.5), g1(static_cast<std::size_t>(n), 0.5);
      kern::scalar_ops.gemv_t_acc(m, n, a.data(), w.data(), g0.data());
      v->gemv_t_acc(m, n, a.data(), w.data(), g1.data());
      for (int j = 0; j < n; ++j) CHECK(g1[j] == doctest::Approx(g0[j]).epsilon(1e-12));
    }
  }
}

TEST_CASE("dispatch picks a real table") {
  const auto& k = kern::ops();
  CHECK(k.name != nullptr);
  const std::string name = k.name;
  CHECK((name == "scalar" || name == "avx2"));
  if (!kern::avx2_available()) CHECK(name == "scalar");
}
