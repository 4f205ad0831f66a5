#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "trk/field.hpp"

namespace trk::algebra {

// Dense order-d tensor over F_p with labeled axes.
//
// Each axis carries a strictly increasing list of positive integer labels
// (typically 1..n, but arbitrary subsets after restriction). Entries are
// stored row-major with the first axis most significant, so storage order
// coincides with lexicographic order on label tuples and the lex lead of
// a nonzero tensor is its first nonzero stored entry.
class Tensor {
 public:
  using Axes = std::vector<std::vector<int>>;

  Tensor(PrimeField field, Axes axes, std::vector<Fp> entries);

  static Tensor zeros(PrimeField field, Axes axes);
  // Principal shape: every axis is {1, ..., n}.
  static Tensor zeros_cube(PrimeField field, int order, int n);
  // Single entry `value` at the given label tuple.
  static Tensor unit(PrimeField field, Axes axes, const std::vector<int>& coord, Fp value = 1);

  const PrimeField& field() const { return field_; }
  int order() const { return static_cast<int>(axes_.size()); }
  const Axes& axes() const { return axes_; }
  const std::vector<int>& axis(int j) const { return axes_[static_cast<std::size_t>(j)]; }
  std::size_t axis_size(int j) const { return axes_[static_cast<std::size_t>(j)].size(); }
  std::size_t size() const { return entries_.size(); }
  const std::vector<Fp>& entries() const { return entries_; }
  bool is_zero() const;
  bool is_cube() const;       // all axes share one label list
  bool is_principal() const;  // all axes equal {1..n}
  bool is_symmetric() const;  // invariant under leg permutations (needs is_cube)

  bool same_shape(const Tensor& o) const {
    return field_ == o.field_ && axes_ == o.axes_;
  }

  // Entry access by label tuple / by flat index.
  Fp at(std::span<const int> labels) const;
  Fp at_flat(std::size_t i) const { return entries_[i]; }
  void set(std::span<const int> labels, Fp v);
  void set_flat(std::size_t i, Fp v) { entries_[i] = v; }

  std::size_t flat_index(std::span<const int> labels) const;
  std::vector<int> labels_of_flat(std::size_t i) const;

  // Multilinear evaluation: sum of T[i_1..i_d] x_1[i_1] ... x_d[i_d].
  // xs[j] is positional, one coefficient per label of axis j.
  Fp evaluate(const std::vector<std::vector<Fp>>& xs) const;
  // T(x, x, ..., x) for a cube tensor.
  Fp evaluate_diag(const std::vector<Fp>& x) const;

  // Contract the last axis with x, yielding an order-(d-1) tensor.
  Tensor contract_last(const std::vector<Fp>& x) const;

  // Principal restriction to S x ... x S. Requires a cube tensor.
  Tensor restrict_principal(const std::vector<int>& S) const;
  // Rectangular restriction to S_1 x ... x S_d.
  Tensor restrict_rect(const Axes& subsets) const;

  // Relabel the j-th leg by a bijection of axis j's label set onto itself.
  // perms[j][k] is the image of the k-th label of axis j.
  Tensor permute_legs(const std::vector<std::vector<int>>& perms) const;

  // First nonzero coordinate in lex order, or nullopt for the zero tensor.
  std::optional<std::vector<int>> lex_lead() const;

  Fp inner_product(const Tensor& o) const;

  // Sum over all d! leg permutations of the entry pattern.
  Tensor symmetrized() const;

  Tensor operator+(const Tensor& o) const;
  Tensor operator-(const Tensor& o) const;
  Tensor scaled(Fp c) const;
  bool operator==(const Tensor& o) const {
    return same_shape(o) && entries_ == o.entries_;
  }

 private:
  PrimeField field_;
  Axes axes_;
  std::vector<std::size_t> strides_;
  std::vector<Fp> entries_;

  void init_strides();
  std::size_t position_in_axis(int j, int label) const;
};

}  // namespace trk::algebra
