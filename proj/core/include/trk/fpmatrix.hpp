#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "trk/field.hpp"

namespace trk::algebra {

// Dense matrix over F_p. Row-major storage, sized for desk-scale
// elimination (a few hundred rows/columns).
class FpMatrix {
 public:
  FpMatrix(PrimeField field, std::size_t rows, std::size_t cols)
      : field_(field), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

  const PrimeField& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Fp at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
  Fp& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }

  std::vector<Fp> row(std::size_t r) const {
    return {a_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
            a_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
  }
  void set_row(std::size_t r, const std::vector<Fp>& v);

  // Reduced row-echelon form. `transform` (when requested) satisfies
  // transform * input == rref, with rows beyond `rank` spanning the
  // left kernel of the input.
  struct Rref {
    FpMatrix mat;
    std::vector<std::size_t> pivot_cols;
    std::size_t rank = 0;
    std::optional<FpMatrix> transform;
  };
  Rref rref(bool want_transform = false) const;

  std::size_t rank() const { return rref(false).rank; }

  // One solution of A x = b with free variables set to zero, or nullopt
  // if the system is inconsistent.
  std::optional<std::vector<Fp>> solve(const std::vector<Fp>& b) const;

  std::vector<Fp> apply(const std::vector<Fp>& x) const;  // A x

 private:
  PrimeField field_;
  std::size_t rows_, cols_;
  std::vector<Fp> a_;
};

}  // namespace trk::algebra
