#pragma once

#include <cstdint>
#include <vector>

#include "trk/tensor.hpp"

namespace trk::algebra {

// x tensor x ... tensor x (d times), on principal axes of size |x|.
Tensor veronese(const PrimeField& field, const std::vector<Fp>& x, int d);

// C(n+d-1, d).
std::uint64_t monomial_count(int n, int d);

// All size-d multisets of {0, ..., n-1} as sorted index tuples, in lex
// order. Coordinate system for degree-d monomials and symmetric tensors.
std::vector<std::vector<int>> monomial_multisets(int n, int d);

// Number of distinct arrangements of the multiset, mod p.
Fp multiset_arrangements_mod(const PrimeField& field, const std::vector<int>& multiset);

// Compressed Veronese coordinates (x^alpha over all multisets alpha).
// Requires p > d so that the compressed representation is faithful;
// otherwise the full veronese() tensor path applies.
std::vector<Fp> monomial_vector(const PrimeField& field, const std::vector<Fp>& x, int d);

}  // namespace trk::algebra
