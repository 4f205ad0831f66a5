#include "trk/prank.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "trk/errors.hpp"

namespace trk::rank {

using algebra::Fp;
using algebra::PrimeField;
using algebra::Tensor;

namespace {

// Entries packed base-p into a 64-bit key; valid because the guard keeps
// total entries <= 12 and p <= 7 fits in 3 bits per entry.
std::uint64_t pack_key(const std::vector<Fp>& entries, std::uint32_t p) {
  std::uint64_t key = 0;
  for (std::size_t i = entries.size(); i-- > 0;) key = key * p + entries[i];
  return key;
}

void check_guard(const PrimeField& field, const Tensor::Axes& axes) {
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.size();
  if (total > kPrankMaxEntries) {
    throw ResourceGuardError("partition-rank oracle limited to " + std::to_string(kPrankMaxEntries) + " entries");
  }
  if (total * std::log2(static_cast<double>(field.p())) > 40.0) {
    throw ResourceGuardError("partition-rank oracle domain too large for this field");
  }
}

// All nonzero tensors over the given axes, by counting in base p.
std::vector<std::vector<Fp>> all_nonzero_entry_patterns(std::uint32_t p, std::size_t total) {
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < total; ++i) count *= p;
  std::vector<std::vector<Fp>> out;
  out.reserve(count - 1);
  for (std::uint64_t idx = 1; idx < count; ++idx) {
    std::vector<Fp> entries(total);
    std::uint64_t rem = idx;
    for (std::size_t i = 0; i < total; ++i) {
      entries[i] = static_cast<Fp>(rem % p);
      rem /= p;
    }
    out.push_back(std::move(entries));
  }
  return out;
}

}  // namespace

std::vector<Tensor> rank1_generators(const PrimeField& field, const Tensor::Axes& axes) {
  const int d = static_cast<int>(axes.size());
  if (d < 2) throw DomainError("partition rank needs order >= 2");
  check_guard(field, axes);
  const std::uint32_t p = field.p();

  std::size_t total = 1;
  std::vector<std::size_t> sizes;
  for (const auto& a : axes) {
    sizes.push_back(a.size());
    total *= a.size();
  }

  std::unordered_set<std::uint64_t> seen;
  std::vector<Tensor> out;

  // Bipartitions of the axis set; fixing axis 0 in the first block
  // enumerates each unordered partition once.
  for (std::uint32_t mask = 1; mask < (1u << d); ++mask) {
    if (!(mask & 1u)) continue;
    if (mask == (1u << d) - 1) continue;
    std::vector<int> left, right;
    for (int j = 0; j < d; ++j) {
      if (mask & (1u << j)) left.push_back(j); else right.push_back(j);
    }

    std::size_t left_total = 1, right_total = 1;
    for (int j : left) left_total *= sizes[static_cast<std::size_t>(j)];
    for (int j : right) right_total *= sizes[static_cast<std::size_t>(j)];

    const auto left_forms = all_nonzero_entry_patterns(p, left_total);
    const auto right_forms = all_nonzero_entry_patterns(p, right_total);

    std::vector<std::size_t> pos(static_cast<std::size_t>(d));
    for (const auto& lf : left_forms) {
      for (const auto& rf : right_forms) {
        std::vector<Fp> entries(total);
        for (std::size_t i = 0; i < total; ++i) {
          std::size_t rem = i;
          for (std::size_t j = sizes.size(); j-- > 0;) {
            pos[j] = rem % sizes[j];
            rem /= sizes[j];
          }
          std::size_t li = 0, ri = 0;
          for (int j : left) li = li * sizes[static_cast<std::size_t>(j)] + pos[static_cast<std::size_t>(j)];
          for (int j : right) ri = ri * sizes[static_cast<std::size_t>(j)] + pos[static_cast<std::size_t>(j)];
          entries[i] = field.mul(lf[li], rf[ri]);
        }
        const std::uint64_t key = pack_key(entries, p);
        if (seen.insert(key).second) {
          out.emplace_back(field, axes, std::move(entries));
        }
      }
    }
  }

  std::sort(out.begin(), out.end(), [p](const Tensor& a, const Tensor& b) {
    return pack_key(a.entries(), p) < pack_key(b.entries(), p);
  });
  return out;
}

PrankResult partition_rank(const Tensor& T, int r_max) {
  check_guard(T.field(), T.axes());
  PrankResult res;
  res.r_max = r_max;
  if (T.is_zero()) {
    res.rank = 0;
    return res;
  }
  const std::uint32_t p = T.field().p();
  const std::uint64_t target = pack_key(T.entries(), p);

  const auto gens = rank1_generators(T.field(), T.axes());
  std::vector<std::uint64_t> gen_keys;
  gen_keys.reserve(gens.size());
  for (const auto& g : gens) gen_keys.push_back(pack_key(g.entries(), p));

  // Breadth-first closure: level k holds every sum of k generators.
  std::unordered_set<std::uint64_t> reached;
  std::vector<Tensor> level{Tensor::zeros(T.field(), T.axes())};
  reached.insert(pack_key(level[0].entries(), p));

  for (int depth = 1; depth <= r_max; ++depth) {
    std::vector<Tensor> next;
    for (const Tensor& base : level) {
      for (const Tensor& g : gens) {
        Tensor sum = base + g;
        const std::uint64_t key = pack_key(sum.entries(), p);
        if (key == target) {
          res.rank = depth;
          return res;
        }
        if (reached.insert(key).second) next.push_back(std::move(sum));
      }
    }
    if (next.empty()) break;  // closure saturated without reaching T
    level = std::move(next);
  }
  return res;
}

}  // namespace trk::rank
