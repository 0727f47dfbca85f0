#pragma once

#include <cstdint>
#include <string>
#include <vector>

// One-dimensional lifting transforms. A chain is a list of predict/update
// stages applied after a single lazy split; every chain is perfectly
// invertible by construction, with no normalization stage (gain 1).
//
// Predict taps t (even length Lt) subtract from each odd sample a combination
// of its Lt nearest even neighbours:
//     detail[n] = odd[n] - sum_k t[k] * x[2n - Lt + 2 + 2k]
// Update taps s (even length Ls) add detail context back onto even samples:
//     approx[n] = even[n] + sum_i s[i] * detail[n + Ls/2 - 1 - i]
// Out-of-range positions reflect with whole-sample symmetry on the full-rate
// sample lattice (x[-k] = x[k], x[L-1+k] = x[L-1-k]).

namespace csmw {

// Extension rule for samples referenced outside the signal. Only whole-sample
// symmetric reflection is supported; the enum pins the convention at call
// sites and leaves room for half-sample/periodic variants.
enum class Boundary { WholeSampleSymmetric };

struct LiftingStage {
  std::vector<double> predict;  // even length >= 2
  std::vector<double> update;   // even length >= 2
};

using LiftingChain = std::vector<LiftingStage>;

// Built-in chains. bior53 is the LeGall 5/3 pair; db2/db4 are unnormalized
// lifting factorizations of the Daubechies 4- and 8-tap filters (equal to the
// classical filters up to a constant gain per branch).
LiftingChain chain_bior53();
LiftingChain chain_db2();
LiftingChain chain_db4();
LiftingChain chain_by_name(const std::string& name);  // "bior53" | "db2" | "db4"

void validate_chain(const LiftingChain& chain);

// Whole-sample symmetric reflection of position q into [0, len).
std::int64_t reflect_index(std::int64_t q, std::int64_t len);

void lazy_split(const std::vector<double>& x, std::vector<double>& even, std::vector<double>& odd);
std::vector<double> lazy_merge(const std::vector<double>& even, const std::vector<double>& odd);

std::vector<double> apply_predict(const std::vector<double>& even, const std::vector<double>& odd,
                                  const std::vector<double>& t,
                                  Boundary boundary = Boundary::WholeSampleSymmetric);
std::vector<double> apply_update(const std::vector<double>& even, const std::vector<double>& detail,
                                 const std::vector<double>& s,
                                 Boundary boundary = Boundary::WholeSampleSymmetric);

void forward_1d(const std::vector<double>& x, const LiftingChain& chain,
                std::vector<double>& approx, std::vector<double>& detail,
                Boundary boundary = Boundary::WholeSampleSymmetric);
std::vector<double> inverse_1d(const std::vector<double>& approx, const std::vector<double>& detail,
                               const LiftingChain& chain,
                               Boundary boundary = Boundary::WholeSampleSymmetric);

// Adjoint of inverse_1d as a linear map R^L -> R^L: y maps to the pair
// (approx_adj, detail_adj) such that <inverse_1d(a,d), y> = <a, approx_adj> +
// <d, detail_adj> for all a, d.
void transpose_inverse_1d(const std::vector<double>& y, const LiftingChain& chain,
                          std::vector<double>& approx_adj, std::vector<double>& detail_adj,
                          Boundary boundary = Boundary::WholeSampleSymmetric);

}  // namespace csmw
