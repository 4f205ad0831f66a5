#pragma once

#include <optional>
#include <vector>

#include "trk/bias.hpp"
#include "trk/tensor.hpp"

namespace trk::rank {

// |E over u_1..u_d in U of chi(T(u_1+v_1, ..., u_d+v_d))| for a direct
// sum decomposition F_p^n = U + V and shifts v_j in V. The character
// average is reduced to an exact length-p histogram of argument values;
// for p = 2 the magnitude |N_0 - N_1| / 2^(d dim U) is exact, for p > 2
// it is evaluated in extended precision with error well under 1e-9.
struct CosetBias {
  std::uint32_t p = 2;
  std::vector<std::uint64_t> histogram;        // N_c for c in F_p
  std::uint32_t denom_exp = 0;                 // d * dim U
  std::optional<BiasValue> exact;              // p == 2 only
  long double magnitude = 0.0L;                // always set
};

CosetBias coset_bias(const algebra::Tensor& T,
                     const std::vector<std::vector<algebra::Fp>>& U_basis,
                     const std::vector<std::vector<algebra::Fp>>& V_basis,
                     const std::vector<std::vector<algebra::Fp>>& shifts);

}  // namespace trk::rank
