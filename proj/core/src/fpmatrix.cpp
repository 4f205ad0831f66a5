#include "trk/fpmatrix.hpp"

#include "trk/errors.hpp"

namespace trk::algebra {

void FpMatrix::set_row(std::size_t r, const std::vector<Fp>& v) {
  if (v.size() != cols_) throw ShapeError("row length mismatch");
  for (std::size_t c = 0; c < cols_; ++c) at(r, c) = v[c];
}

FpMatrix::Rref FpMatrix::rref(bool want_transform) const {
  Rref out{*this, {}, 0, std::nullopt};
  FpMatrix& m = out.mat;
  std::optional<FpMatrix> tf;
  if (want_transform) {
    tf.emplace(field_, rows_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) tf->at(i, i) = 1;
  }

  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < cols_ && pivot_row < rows_; ++col) {
    std::size_t sel = pivot_row;
    while (sel < rows_ && m.at(sel, col) == 0) ++sel;
    if (sel == rows_) continue;

    if (sel != pivot_row) {
      for (std::size_t c = 0; c < cols_; ++c) std::swap(m.at(sel, c), m.at(pivot_row, c));
      if (tf) {
        for (std::size_t c = 0; c < rows_; ++c) std::swap(tf->at(sel, c), tf->at(pivot_row, c));
      }
    }

    const Fp inv = field_.inv(m.at(pivot_row, col));
    if (inv != 1) {
      for (std::size_t c = col; c < cols_; ++c) m.at(pivot_row, c) = field_.mul(m.at(pivot_row, c), inv);
      if (tf) {
        for (std::size_t c = 0; c < rows_; ++c) tf->at(pivot_row, c) = field_.mul(tf->at(pivot_row, c), inv);
      }
    }

    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pivot_row) continue;
      const Fp factor = m.at(r, col);
      if (factor == 0) continue;
      for (std::size_t c = col; c < cols_; ++c) {
        m.at(r, c) = field_.sub(m.at(r, c), field_.mul(factor, m.at(pivot_row, c)));
      }
      if (tf) {
        for (std::size_t c = 0; c < rows_; ++c) {
          tf->at(r, c) = field_.sub(tf->at(r, c), field_.mul(factor, tf->at(pivot_row, c)));
        }
      }
    }

    out.pivot_cols.push_back(col);
    ++pivot_row;
  }
  out.rank = pivot_row;
  out.transform = std::move(tf);
  return out;
}

std::optional<std::vector<Fp>> FpMatrix::solve(const std::vector<Fp>& b) const {
  if (b.size() != rows_) throw ShapeError("rhs length mismatch");
  // Eliminate on [A | b].
  FpMatrix aug(field_, rows_, cols_ + 1);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) aug.at(r, c) = at(r, c);
    aug.at(r, cols_) = b[r];
  }
  const Rref red = aug.rref(false);
  std::vector<Fp> x(cols_, 0);
  for (std::size_t i = 0; i < red.rank; ++i) {
    const std::size_t pc = red.pivot_cols[i];
    if (pc == cols_) return std::nullopt;  // pivot in the rhs column
    x[pc] = red.mat.at(i, cols_);
  }
  return x;
}

std::vector<Fp> FpMatrix::apply(const std::vector<Fp>& x) const {
  if (x.size() != cols_) throw ShapeError("vector length mismatch");
  std::vector<Fp> y(rows_, 0);
  for (std::size_t r = 0; r < rows_; ++r) {
    std::uint64_t acc = 0;
    for (std::size_t c = 0; c < cols_; ++c) {
      acc += static_cast<std::uint64_t>(at(r, c)) * x[c];
    }
    y[r] = static_cast<Fp>(acc % field_.p());
  }
  return y;
}

}  // namespace trk::algebra
