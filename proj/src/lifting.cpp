#include "csmw/lifting.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "csmw/kernels.hpp"

namespace csmw {

namespace {

void check_streams(const std::vector<double>& even, const std::vector<double>& odd) {
  if (even.empty()) throw std::invalid_argument("lifting: empty even stream");
  if (even.size() != odd.size() && even.size() != odd.size() + 1)
    throw std::invalid_argument("lifting: even/odd stream sizes do not interleave");
}

void check_taps(const std::vector<double>& taps, const char* what) {
  if (taps.size() < 2 || taps.size() % 2 != 0)
    throw std::invalid_argument(std::string("lifting: ") + what + " taps must have even length >= 2");
  for (double v : taps)
    if (!std::isfinite(v)) throw std::invalid_argument(std::string("lifting: non-finite ") + what + " tap");
}

// Even-stream index of full-rate position q (q reflected to an even position).
inline std::size_t even_at(std::int64_t q, std::int64_t len) {
  return static_cast<std::size_t>(reflect_index(q, len) / 2);
}

// Odd-stream index of full-rate position q. Callers guarantee the odd stream
// is non-empty, so the reflected position is odd.
inline std::size_t odd_at(std::int64_t q, std::int64_t len) {
  return static_cast<std::size_t>((reflect_index(q, len) - 1) / 2);
}

// detail[n] -= sum_k t[k] * x[2n - Lt + 2 + 2k], x indexed on the full-rate
// lattice with reflection; sign=-1 gives the forward predict, +1 undoes it.
void predict_inplace(const std::vector<double>& even, std::vector<double>& detail,
                     const std::vector<double>& t, double sign) {
  const std::int64_t elen = static_cast<std::int64_t>(even.size());
  const std::int64_t dlen = static_cast<std::int64_t>(detail.size());
  const std::int64_t L = elen + dlen;
  const std::int64_t half = static_cast<std::int64_t>(t.size()) / 2;
  const std::int64_t lt = static_cast<std::int64_t>(t.size());
  if (dlen == 0) return;

  std::int64_t lo = half - 1 > 0 ? half - 1 : 0;
  if (lo > dlen) lo = dlen;
  std::int64_t hi = elen - half < dlen ? elen - half : dlen;
  if (hi < lo) hi = lo;

  for (std::int64_t n = 0; n < lo; ++n) {
    double acc = 0.0;
    for (std::int64_t k = 0; k < lt; ++k)
      acc += t[static_cast<std::size_t>(k)] * even[even_at(2 * n - lt + 2 + 2 * k, L)];
    detail[static_cast<std::size_t>(n)] += sign * acc;
  }
  if (hi > lo) {
    const std::size_t cnt = static_cast<std::size_t>(hi - lo);
    for (std::int64_t k = 0; k < lt; ++k)
      kern::ops().axpy(cnt, sign * t[static_cast<std::size_t>(k)],
                       even.data() + (lo - half + 1 + k), detail.data() + lo);
  }
  for (std::int64_t n = hi; n < dlen; ++n) {
    double acc = 0.0;
    for (std::int64_t k = 0; k < lt; ++k)
      acc += t[static_cast<std::size_t>(k)] * even[even_at(2 * n - lt + 2 + 2 * k, L)];
    detail[static_cast<std::size_t>(n)] += sign * acc;
  }
}

// approx[n] += sum_i s[i] * detail[n + Ls/2 - 1 - i], detail indexed via its
// full-rate positions with reflection; sign=+1 forward, -1 undoes it.
void update_inplace(std::vector<double>& approx, const std::vector<double>& detail,
                    const std::vector<double>& s, double sign) {
  const std::int64_t elen = static_cast<std::int64_t>(approx.size());
  const std::int64_t dlen = static_cast<std::int64_t>(detail.size());
  const std::int64_t L = elen + dlen;
  const std::int64_t half = static_cast<std::int64_t>(s.size()) / 2;
  const std::int64_t ls = static_cast<std::int64_t>(s.size());
  if (dlen == 0) return;

  std::int64_t lo = half < elen ? half : elen;
  std::int64_t hi = dlen - half + 1 < elen ? dlen - half + 1 : elen;
  if (hi < lo) hi = lo;

  for (std::int64_t n = 0; n < lo; ++n) {
    double acc = 0.0;
    for (std::int64_t i = 0; i < ls; ++i)
      acc += s[static_cast<std::size_t>(i)] * detail[odd_at(2 * (n + half - 1 - i) + 1, L)];
    approx[static_cast<std::size_t>(n)] += sign * acc;
  }
  if (hi > lo) {
    const std::size_t cnt = static_cast<std::size_t>(hi - lo);
    for (std::int64_t i = 0; i < ls; ++i)
      kern::ops().axpy(cnt, sign * s[static_cast<std::size_t>(i)],
                       detail.data() + (lo + half - 1 - i), approx.data() + lo);
  }
  for (std::int64_t n = hi; n < elen; ++n) {
    double acc = 0.0;
    for (std::int64_t i = 0; i < ls; ++i)
      acc += s[static_cast<std::size_t>(i)] * detail[odd_at(2 * (n + half - 1 - i) + 1, L)];
    approx[static_cast<std::size_t>(n)] += sign * acc;
  }
}

// Adjoint of predict_inplace's read pattern: even_adj[src] += sign*t[k]*d[n].
void predict_transpose_acc(std::vector<double>& even_adj, const std::vector<double>& d,
                           const std::vector<double>& t, double sign) {
  const std::int64_t elen = static_cast<std::int64_t>(even_adj.size());
  const std::int64_t dlen = static_cast<std::int64_t>(d.size());
  const std::int64_t L = elen + dlen;
  const std::int64_t lt = static_cast<std::int64_t>(t.size());
  for (std::int64_t n = 0; n < dlen; ++n)
    for (std::int64_t k = 0; k < lt; ++k)
      even_adj[even_at(2 * n - lt + 2 + 2 * k, L)] +=
          sign * t[static_cast<std::size_t>(k)] * d[static_cast<std::size_t>(n)];
}

// Adjoint of update_inplace's read pattern: d_adj[src] += sign*s[i]*a[n].
void update_transpose_acc(std::vector<double>& d_adj, const std::vector<double>& a,
                          const std::vector<double>& s, double sign) {
  const std::int64_t elen = static_cast<std::int64_t>(a.size());
  const std::int64_t dlen = static_cast<std::int64_t>(d_adj.size());
  const std::int64_t L = elen + dlen;
  const std::int64_t half = static_cast<std::int64_t>(s.size()) / 2;
  const std::int64_t ls = static_cast<std::int64_t>(s.size());
  if (dlen == 0) return;
  for (std::int64_t n = 0; n < elen; ++n)
    for (std::int64_t i = 0; i < ls; ++i)
      d_adj[odd_at(2 * (n + half - 1 - i) + 1, L)] +=
          sign * s[static_cast<std::size_t>(i)] * a[static_cast<std::size_t>(n)];
}

}  // namespace

std::int64_t reflect_index(std::int64_t q, std::int64_t len) {
  if (len <= 1) return 0;
  while (q < 0 || q > len - 1) {
    if (q < 0) q = -q;
    if (q > len - 1) q = 2 * (len - 1) - q;
  }
  return q;
}

void lazy_split(const std::vector<double>& x, std::vector<double>& even, std::vector<double>& odd) {
  const std::size_t n = x.size();
  even.resize((n + 1) / 2);
  odd.resize(n / 2);
  for (std::size_t i = 0; i < even.size(); ++i) even[i] = x[2 * i];
  for (std::size_t i = 0; i < odd.size(); ++i) odd[i] = x[2 * i + 1];
}

std::vector<double> lazy_merge(const std::vector<double>& even, const std::vector<double>& odd) {
  check_streams(even, odd);
  std::vector<double> x(even.size() + odd.size());
  for (std::size_t i = 0; i < even.size(); ++i) x[2 * i] = even[i];
  for (std::size_t i = 0; i < odd.size(); ++i) x[2 * i + 1] = odd[i];
  return x;
}

std::vector<double> apply_predict(const std::vector<double>& even, const std::vector<double>& odd,
                                  const std::vector<double>& t, Boundary) {
  check_streams(even, odd);
  check_taps(t, "predict");
  std::vector<double> detail = odd;
  predict_inplace(even, detail, t, -1.0);
  return detail;
}

std::vector<double> apply_update(const std::vector<double>& even, const std::vector<double>& detail,
                                 const std::vector<double>& s, Boundary) {
  check_streams(even, detail);
  check_taps(s, "update");
  std::vector<double> approx = even;
  update_inplace(approx, detail, s, 1.0);
  return approx;
}

void validate_chain(const LiftingChain& chain) {
  // a zero-stage chain is the lazy transform
  for (const LiftingStage& st : chain) {
    check_taps(st.predict, "predict");
    check_taps(st.update, "update");
  }
}

void forward_1d(const std::vector<double>& x, const LiftingChain& chain,
                std::vector<double>& approx, std::vector<double>& detail, Boundary) {
  if (x.empty()) throw std::invalid_argument("lifting: empty input");
  validate_chain(chain);
  lazy_split(x, approx, detail);
  for (const LiftingStage& st : chain) {
    predict_inplace(approx, detail, st.predict, -1.0);
    update_inplace(approx, detail, st.update, 1.0);
  }
}

std::vector<double> inverse_1d(const std::vector<double>& approx, const std::vector<double>& detail,
                               const LiftingChain& chain, Boundary) {
  check_streams(approx, detail);
  validate_chain(chain);
  std::vector<double> even = approx;
  std::vector<double> odd = detail;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    update_inplace(even, odd, it->update, -1.0);
    predict_inplace(even, odd, it->predict, 1.0);
  }
  return lazy_merge(even, odd);
}

void transpose_inverse_1d(const std::vector<double>& y, const LiftingChain& chain,
                          std::vector<double>& approx_adj, std::vector<double>& detail_adj,
                          Boundary) {
  if (y.empty()) throw std::invalid_argument("lifting: empty input");
  validate_chain(chain);
  lazy_split(y, approx_adj, detail_adj);
  for (const LiftingStage& st : chain) {
    predict_transpose_acc(approx_adj, detail_adj, st.predict, 1.0);
    update_transpose_acc(detail_adj, approx_adj, st.update, -1.0);
  }
}

LiftingChain chain_bior53() {
  return {{{0.5, 0.5}, {0.25, 0.25}}};
}

LiftingChain chain_db2() {
  const double r3 = std::sqrt(3.0);
  return {
      {{0.0, 0.0}, {r3, 0.0}},
      {{(r3 - 2.0) / 4.0, r3 / 4.0, 0.0, 0.0}, {-1.0, 0.0, 0.0, 0.0}},
  };
}

LiftingChain chain_db4() {
  return {
      {{0.0, 0.0}, {0.0, -0.3222758880002811}},
      {{-0.7346312579208226, -0.29195312600347534},
       {0.17267310081004808, -0.5400282834197139, 0.0, 0.0}},
      {{-0.06472423932208017, 0.36483834388117864, 0.0, 0.0, 0.0, 0.0}, {0.0, 0.0}},
      {{1.0, 0.0}, {1.0, 0.0}},
      {{0.0, 1.0, 0.0, -0.03262364945797306}, {0.0, 0.0}},
  };
}

LiftingChain chain_by_name(const std::string& name) {
  if (name == "bior53") return chain_bior53();
  if (name == "db2") return chain_db2();
  if (name == "db4") return chain_db4();
  throw std::invalid_argument("unknown wavelet chain: " + name);
}

}  // namespace csmw
