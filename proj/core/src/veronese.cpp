#include "trk/veronese.hpp"

#include <numeric>

#include "trk/errors.hpp"

namespace trk::algebra {

Tensor veronese(const PrimeField& field, const std::vector<Fp>& x, int d) {
  if (d < 1) throw DomainError("order must be >= 1");
  const int n = static_cast<int>(x.size());
  if (n < 1) throw ShapeError("empty vector");
  Tensor out = Tensor::zeros_cube(field, d, n);
  const std::size_t total = out.size();
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rem = i;
    Fp v = 1;
    for (int j = d; j-- > 0;) {
      v = field.mul(v, x[rem % static_cast<std::size_t>(n)]);
      rem /= static_cast<std::size_t>(n);
    }
    out.set_flat(i, v);
  }
  return out;
}

std::uint64_t monomial_count(int n, int d) {
  // C(n+d-1, d)
  std::uint64_t num = 1, den = 1;
  for (int i = 1; i <= d; ++i) {
    num *= static_cast<std::uint64_t>(n + d - i);
    den *= static_cast<std::uint64_t>(i);
  }
  return num / den;
}

std::vector<std::vector<int>> monomial_multisets(int n, int d) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(d), 0);
  while (true) {
    out.push_back(cur);
    int j = d - 1;
    while (j >= 0 && cur[static_cast<std::size_t>(j)] == n - 1) --j;
    if (j < 0) break;
    const int v = ++cur[static_cast<std::size_t>(j)];
    for (int k = j + 1; k < d; ++k) cur[static_cast<std::size_t>(k)] = v;
  }
  return out;
}

Fp multiset_arrangements_mod(const PrimeField& field, const std::vector<int>& multiset) {
  // d! / prod(m_i!) as an exact 64-bit integer (d stays small), then
  // reduced. The multiset is sorted, so equal values form runs; dividing
  // by the running run length as we extend each run yields the
  // multinomial incrementally: prod over i of i / run_len(i).
  std::uint64_t value = 1;
  std::uint64_t run_len = 0;
  for (std::size_t i = 0; i < multiset.size(); ++i) {
    run_len = (i > 0 && multiset[i] == multiset[i - 1]) ? run_len + 1 : 1;
    value = value * (i + 1) / run_len;  // C(i+1 choose run) pattern keeps this exact
  }
  return static_cast<Fp>(value % field.p());
}

std::vector<Fp> monomial_vector(const PrimeField& field, const std::vector<Fp>& x, int d) {
  if (field.p() <= static_cast<std::uint32_t>(d)) {
    throw DomainError("compressed monomial coordinates need p > d");
  }
  const int n = static_cast<int>(x.size());
  const auto multisets = monomial_multisets(n, d);
  std::vector<Fp> out;
  out.reserve(multisets.size());
  for (const auto& ms : multisets) {
    Fp v = 1;
    for (int idx : ms) v = field.mul(v, x[static_cast<std::size_t>(idx)]);
    out.push_back(v);
  }
  return out;
}

}  // namespace trk::algebra
