#include "trk/basis.hpp"

#include "trk/errors.hpp"

namespace trk::algebra {

SubspaceBasis::SubspaceBasis(std::vector<Tensor> ts, bool norm) : tensors(std::move(ts)), normalized(norm) {
  for (std::size_t i = 1; i < tensors.size(); ++i) {
    if (!tensors[i].same_shape(tensors[0])) throw ShapeError("basis members must share field, order and axes");
  }
}

FpMatrix as_rows(const SubspaceBasis& basis) {
  if (basis.tensors.empty()) throw ShapeError("empty basis");
  const Tensor& first = basis.tensors[0];
  FpMatrix m(first.field(), basis.size(), first.size());
  for (std::size_t r = 0; r < basis.size(); ++r) {
    for (std::size_t c = 0; c < first.size(); ++c) m.at(r, c) = basis.tensors[r].at_flat(c);
  }
  return m;
}

EliminationResult gaussian_eliminate(const SubspaceBasis& input, bool want_transform) {
  if (input.tensors.empty()) throw ShapeError("empty basis");
  const Tensor& first = input.tensors[0];
  const FpMatrix::Rref red = as_rows(input).rref(want_transform);

  EliminationResult out;
  out.dependent_input = red.rank < input.size();
  std::vector<Tensor> rows;
  rows.reserve(red.rank);
  for (std::size_t r = 0; r < red.rank; ++r) {
    std::vector<Fp> entries(first.size());
    for (std::size_t c = 0; c < first.size(); ++c) entries[c] = red.mat.at(r, c);
    rows.emplace_back(first.field(), first.axes(), std::move(entries));
    if (want_transform) out.transform.push_back(red.transform->row(r));
  }
  out.basis = SubspaceBasis(std::move(rows), true);
  return out;
}

std::optional<std::vector<Fp>> coordinates_in(const SubspaceBasis& basis, const Tensor& t) {
  if (basis.tensors.empty()) return t.is_zero() ? std::optional<std::vector<Fp>>({}) : std::nullopt;
  if (!t.same_shape(basis.tensors[0])) throw ShapeError("shape mismatch");
  // Columns are the basis tensors.
  FpMatrix m(t.field(), t.size(), basis.size());
  for (std::size_t c = 0; c < basis.size(); ++c) {
    for (std::size_t r = 0; r < t.size(); ++r) m.at(r, c) = basis.tensors[c].at_flat(r);
  }
  std::vector<Fp> rhs(t.size());
  for (std::size_t r = 0; r < t.size(); ++r) rhs[r] = t.at_flat(r);
  return m.solve(rhs);
}

std::size_t rank_of(const SubspaceBasis& basis) {
  if (basis.tensors.empty()) return 0;
  return as_rows(basis).rank();
}

}  // namespace trk::algebra
