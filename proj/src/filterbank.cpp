#include "csmw/filterbank.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace csmw {

namespace {

// Laurent polynomial: c[i] multiplies z^(lo+i). Exact zeros are trimmed so
// that supports stay tight; analysis filters map to taps via H(z) = sum h[j] z^-j.
struct Poly {
  std::int64_t lo = 0;
  std::vector<double> c;
};

Poly trim(Poly p) {
  std::size_t b = 0;
  std::size_t e = p.c.size();
  while (b < e && p.c[b] == 0.0) ++b;
  while (e > b && p.c[e - 1] == 0.0) --e;
  if (b == e) return {};
  return {p.lo + static_cast<std::int64_t>(b),
          std::vector<double>(p.c.begin() + b, p.c.begin() + e)};
}

// a + scale*b
Poly add_scaled(const Poly& a, double scale, const Poly& b) {
  if (b.c.empty()) return a;
  if (a.c.empty()) {
    Poly r = b;
    for (double& v : r.c) v *= scale;
    return trim(r);
  }
  const std::int64_t lo = std::min(a.lo, b.lo);
  const std::int64_t hi = std::max(a.lo + static_cast<std::int64_t>(a.c.size()),
                                   b.lo + static_cast<std::int64_t>(b.c.size()));
  Poly r{lo, std::vector<double>(static_cast<std::size_t>(hi - lo), 0.0)};
  for (std::size_t i = 0; i < a.c.size(); ++i)
    r.c[static_cast<std::size_t>(a.lo - lo) + i] += a.c[i];
  for (std::size_t i = 0; i < b.c.size(); ++i)
    r.c[static_cast<std::size_t>(b.lo - lo) + i] += scale * b.c[i];
  return trim(r);
}

Poly mul(const Poly& a, const Poly& b) {
  if (a.c.empty() || b.c.empty()) return {};
  Poly r{a.lo + b.lo, std::vector<double>(a.c.size() + b.c.size() - 1, 0.0)};
  for (std::size_t i = 0; i < a.c.size(); ++i)
    for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  return trim(r);
}

// P(z) -> P(z^2)
Poly upsample2(const Poly& p) {
  if (p.c.empty()) return p;
  Poly r{2 * p.lo, std::vector<double>(2 * p.c.size() - 1, 0.0)};
  for (std::size_t i = 0; i < p.c.size(); ++i) r.c[2 * i] = p.c[i];
  return r;
}

// T(z) = sum_i t[i] z^(i - Lt/2 + 1)
Poly predict_poly(const std::vector<double>& t) {
  return trim({1 - static_cast<std::int64_t>(t.size()) / 2, t});
}

// S(z) = sum_i s[i] z^(Ls/2 - 1 - i)
Poly update_poly(const std::vector<double>& s) {
  std::vector<double> rev(s.rbegin(), s.rend());
  return trim({-static_cast<std::int64_t>(s.size()) / 2, std::move(rev)});
}

Filter to_filter(const Poly& p) {
  if (p.c.empty()) return {};
  Filter f;
  f.support_start = -(p.lo + static_cast<std::int64_t>(p.c.size()) - 1);
  f.taps.assign(p.c.rbegin(), p.c.rend());
  return f;
}

}  // namespace

Filterbank compose_filterbank(const LiftingChain& chain) {
  validate_chain(chain);
  Poly h0{0, {1.0}};
  Poly h1{1, {1.0}};
  Poly f0{0, {1.0}};
  Poly f1{-1, {1.0}};
  for (const LiftingStage& st : chain) {
    const Poly t2 = upsample2(predict_poly(st.predict));
    h1 = add_scaled(h1, -1.0, mul(h0, t2));
    f0 = add_scaled(f0, 1.0, mul(f1, t2));
    const Poly s2 = upsample2(update_poly(st.update));
    h0 = add_scaled(h0, 1.0, mul(h1, s2));
    f1 = add_scaled(f1, -1.0, mul(f0, s2));
  }
  return {to_filter(h0), to_filter(h1), to_filter(f0), to_filter(f1)};
}

std::string filter_csv_row(const std::string& name, const Filter& f) {
  std::string row = name;
  char buf[48];
  std::snprintf(buf, sizeof buf, ",%lld", static_cast<long long>(f.support_start));
  row += buf;
  for (double v : f.taps) {
    std::snprintf(buf, sizeof buf, ",%.17g", v);
    row += buf;
  }
  return row;
}

void write_filterbank_csv(std::ostream& os, const Filterbank& fb) {
  os << filter_csv_row("h0", fb.h0) << '\n'
     << filter_csv_row("h1", fb.h1) << '\n'
     << filter_csv_row("f0", fb.f0) << '\n'
     << filter_csv_row("f1", fb.f1) << '\n';
}

}  // namespace csmw
