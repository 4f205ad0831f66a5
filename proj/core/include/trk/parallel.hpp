#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace trk::parallel {

// Worker count from TRK_THREADS, else 1. Results never depend on it.
int default_threads();

// Splits [0, n) into contiguous chunks, runs `chunk_sum(begin, end)` on
// each (possibly on worker threads) and adds the partial sums in chunk
// order. Integer addition makes the result identical for any degree.
std::uint64_t chunked_sum(std::uint64_t n, int threads,
                          const std::function<std::uint64_t(std::uint64_t, std::uint64_t)>& chunk_sum);

// Chunked scan for the smallest index satisfying `first_in_chunk`, which
// must return the first hit inside [begin, end) or nullopt. The global
// minimum over chunks equals the sequential scan result.
std::optional<std::uint64_t> chunked_first(
    std::uint64_t n, int threads,
    const std::function<std::optional<std::uint64_t>(std::uint64_t, std::uint64_t)>& first_in_chunk);

// Runs fn(i) for i in [0, n) distributed over chunks. fn must only write
// to slots owned by its index.
void chunked_for(std::uint64_t n, int threads, const std::function<void(std::uint64_t)>& fn);

}  // namespace trk::parallel
