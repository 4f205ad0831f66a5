#include "trk/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace trk::parallel {

int default_threads() {
  if (const char* env = std::getenv("TRK_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 1;
}

namespace {

struct Chunk {
  std::uint64_t begin, end;
};

std::vector<Chunk> make_chunks(std::uint64_t n, int threads) {
  const std::uint64_t k = std::max<std::uint64_t>(1, std::min<std::uint64_t>(n, static_cast<std::uint64_t>(std::max(threads, 1))));
  std::vector<Chunk> chunks;
  chunks.reserve(k);
  for (std::uint64_t i = 0; i < k; ++i) {
    chunks.push_back({n * i / k, n * (i + 1) / k});
  }
  return chunks;
}

template <typename Result, typename Fn>
std::vector<Result> run_chunks(const std::vector<Chunk>& chunks, const Fn& fn) {
  std::vector<Result> results(chunks.size());
  if (chunks.size() == 1) {
    results[0] = fn(chunks[0].begin, chunks[0].end);
    return results;
  }
  std::vector<std::thread> workers;
  workers.reserve(chunks.size());
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    workers.emplace_back([&, i] { results[i] = fn(chunks[i].begin, chunks[i].end); });
  }
  for (auto& w : workers) w.join();
  return results;
}

}  // namespace

std::uint64_t chunked_sum(std::uint64_t n, int threads,
                          const std::function<std::uint64_t(std::uint64_t, std::uint64_t)>& chunk_sum) {
  if (n == 0) return 0;
  std::uint64_t total = 0;
  for (std::uint64_t part : run_chunks<std::uint64_t>(make_chunks(n, threads), chunk_sum)) total += part;
  return total;
}

std::optional<std::uint64_t> chunked_first(
    std::uint64_t n, int threads,
    const std::function<std::optional<std::uint64_t>(std::uint64_t, std::uint64_t)>& first_in_chunk) {
  if (n == 0) return std::nullopt;
  const auto hits = run_chunks<std::optional<std::uint64_t>>(make_chunks(n, threads), first_in_chunk);
  for (const auto& h : hits) {
    if (h) return h;  // chunks are ordered, first hit wins
  }
  return std::nullopt;
}

void chunked_for(std::uint64_t n, int threads, const std::function<void(std::uint64_t)>& fn) {
  if (n == 0) return;
  run_chunks<int>(make_chunks(n, threads), [&](std::uint64_t b, std::uint64_t e) {
    for (std::uint64_t i = b; i < e; ++i) fn(i);
    return 0;
  });
}

}  // namespace trk::parallel
