#pragma once

#include <optional>
#include <vector>

#include "trk/fpmatrix.hpp"
#include "trk/tensor.hpp"

namespace trk::algebra {

// Ordered list of tensors sharing field, order and axes, used for V, W
// and intermediate spans. `normalized` means pairwise distinct lex leads
// with each lead entry scaled to 1.
struct SubspaceBasis {
  std::vector<Tensor> tensors;
  bool normalized = false;

  SubspaceBasis() = default;
  explicit SubspaceBasis(std::vector<Tensor> ts, bool norm = false);

  std::size_t size() const { return tensors.size(); }
  const Tensor& operator[](std::size_t i) const { return tensors[i]; }
};

struct EliminationResult {
  SubspaceBasis basis;
  // Set when the input tensors were linearly dependent; the returned
  // basis is then smaller than the input.
  bool dependent_input = false;
  // Row i of `transform` expresses basis.tensors[i] in the input tensors.
  std::vector<std::vector<Fp>> transform;
};

// Gaussian elimination of tensors viewed as vectors, pivoting on lex
// leads. Output spans the same space, is sorted by lex lead, has pairwise
// distinct leads and each lead entry equal to 1 (canonical RREF).
EliminationResult gaussian_eliminate(const SubspaceBasis& input, bool want_transform = true);

// Coordinates of t in the span of `basis`, or nullopt if t lies outside.
std::optional<std::vector<Fp>> coordinates_in(const SubspaceBasis& basis, const Tensor& t);

std::size_t rank_of(const SubspaceBasis& basis);

// Flatten tensors into the rows of a matrix.
FpMatrix as_rows(const SubspaceBasis& basis);

}  // namespace trk::algebra
