#pragma once

#include <optional>
#include <vector>

#include "trk/tensor.hpp"

namespace trk::rank {

// Hard guard for the exponential-cost oracle below.
inline constexpr std::size_t kPrankMaxEntries = 12;

// All tensors of the given shape that factor as a product of two nonzero
// forms on complementary variable blocks, deduplicated and sorted by
// entry pattern. Micro shapes only (total entries <= kPrankMaxEntries).
std::vector<algebra::Tensor> rank1_generators(const algebra::PrimeField& field,
                                              const algebra::Tensor::Axes& axes);

struct PrankResult {
  std::optional<int> rank;  // nullopt: exceeds r_max
  int r_max = 0;
};

// Exact partition rank by breadth-first closure over sums of generators.
// Micro shapes only.
PrankResult partition_rank(const algebra::Tensor& T, int r_max);

}  // namespace trk::rank
