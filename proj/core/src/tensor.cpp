#include "trk/tensor.hpp"

#include <algorithm>
#include <numeric>

#include "trk/errors.hpp"

namespace trk::algebra {

namespace {

void check_axis_labels(const std::vector<int>& axis) {
  if (axis.empty()) throw ShapeError("empty axis");
  int prev = 0;
  for (int label : axis) {
    if (label <= prev) throw ShapeError("axis labels must be strictly increasing positive integers");
    prev = label;
  }
}

}  // namespace

Tensor::Tensor(PrimeField field, Axes axes, std::vector<Fp> entries)
    : field_(field), axes_(std::move(axes)), entries_(std::move(entries)) {
  if (axes_.empty()) throw ShapeError("tensor needs at least one axis");
  std::size_t total = 1;
  for (const auto& axis : axes_) {
    check_axis_labels(axis);
    total *= axis.size();
  }
  if (entries_.size() != total) throw ShapeError("entry count does not match axis sizes");
  for (Fp& e : entries_) {
    if (e >= field_.p()) e %= field_.p();
  }
  init_strides();
}

void Tensor::init_strides() {
  strides_.assign(axes_.size(), 1);
  for (std::size_t j = axes_.size(); j-- > 1;) {
    strides_[j - 1] = strides_[j] * axes_[j].size();
  }
}

Tensor Tensor::zeros(PrimeField field, Axes axes) {
  std::size_t total = 1;
  for (const auto& axis : axes) total *= axis.size();
  return Tensor(field, std::move(axes), std::vector<Fp>(total, 0));
}

Tensor Tensor::zeros_cube(PrimeField field, int order, int n) {
  if (order < 1 || n < 1) throw ShapeError("order and size must be positive");
  std::vector<int> axis(static_cast<std::size_t>(n));
  std::iota(axis.begin(), axis.end(), 1);
  return zeros(field, Axes(static_cast<std::size_t>(order), axis));
}

Tensor Tensor::unit(PrimeField field, Axes axes, const std::vector<int>& coord, Fp value) {
  Tensor t = zeros(field, std::move(axes));
  t.set(coord, value);
  return t;
}

bool Tensor::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](Fp e) { return e == 0; });
}

bool Tensor::is_cube() const {
  return std::all_of(axes_.begin(), axes_.end(), [&](const auto& a) { return a == axes_[0]; });
}

bool Tensor::is_principal() const {
  if (!is_cube()) return false;
  for (std::size_t k = 0; k < axes_[0].size(); ++k) {
    if (axes_[0][k] != static_cast<int>(k) + 1) return false;
  }
  return true;
}

std::size_t Tensor::position_in_axis(int j, int label) const {
  const auto& axis = axes_[static_cast<std::size_t>(j)];
  auto it = std::lower_bound(axis.begin(), axis.end(), label);
  if (it == axis.end() || *it != label) {
    throw DomainError("label " + std::to_string(label) + " not on axis " + std::to_string(j + 1));
  }
  return static_cast<std::size_t>(it - axis.begin());
}

std::size_t Tensor::flat_index(std::span<const int> labels) const {
  if (labels.size() != axes_.size()) throw ShapeError("coordinate arity mismatch");
  std::size_t idx = 0;
  for (std::size_t j = 0; j < axes_.size(); ++j) {
    idx += strides_[j] * position_in_axis(static_cast<int>(j), labels[j]);
  }
  return idx;
}

std::vector<int> Tensor::labels_of_flat(std::size_t i) const {
  std::vector<int> labels(axes_.size());
  for (std::size_t j = 0; j < axes_.size(); ++j) {
    labels[j] = axes_[j][(i / strides_[j]) % axes_[j].size()];
  }
  return labels;
}

Fp Tensor::at(std::span<const int> labels) const { return entries_[flat_index(labels)]; }

void Tensor::set(std::span<const int> labels, Fp v) { entries_[flat_index(labels)] = v % field_.p(); }

Fp Tensor::evaluate(const std::vector<std::vector<Fp>>& xs) const {
  if (xs.size() != axes_.size()) throw ShapeError("need one vector per axis");
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (xs[j].size() != axes_[j].size()) throw ShapeError("vector length does not match axis " + std::to_string(j + 1));
  }
  Tensor cur = *this;
  for (std::size_t j = xs.size(); j-- > 1;) {
    cur = cur.contract_last(xs[j]);
  }
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < cur.entries_.size(); ++i) {
    acc += static_cast<std::uint64_t>(cur.entries_[i]) * xs[0][i];
  }
  return static_cast<Fp>(acc % field_.p());
}

Fp Tensor::evaluate_diag(const std::vector<Fp>& x) const {
  if (!is_cube()) throw ShapeError("diagonal evaluation needs a cube tensor");
  return evaluate(std::vector<std::vector<Fp>>(axes_.size(), x));
}

Tensor Tensor::contract_last(const std::vector<Fp>& x) const {
  if (axes_.size() < 2) throw ShapeError("contract_last needs order >= 2");
  const std::size_t last = axes_.back().size();
  if (x.size() != last) throw ShapeError("vector length does not match last axis");
  Axes out_axes(axes_.begin(), axes_.end() - 1);
  Tensor out = zeros(field_, std::move(out_axes));
  const std::uint64_t p = field_.p();
  for (std::size_t i = 0; i < out.entries_.size(); ++i) {
    std::uint64_t acc = 0;
    const std::size_t base = i * last;
    for (std::size_t k = 0; k < last; ++k) {
      acc += static_cast<std::uint64_t>(entries_[base + k]) * x[k];
    }
    out.entries_[i] = static_cast<Fp>(acc % p);
  }
  return out;
}

Tensor Tensor::restrict_principal(const std::vector<int>& S) const {
  if (!is_cube()) throw DomainError("principal restriction needs equal axes");
  return restrict_rect(Axes(axes_.size(), S));
}

Tensor Tensor::restrict_rect(const Axes& subsets) const {
  if (subsets.size() != axes_.size()) throw ShapeError("need one subset per axis");
  for (std::size_t j = 0; j < subsets.size(); ++j) {
    check_axis_labels(subsets[j]);
    for (int label : subsets[j]) {
      if (!std::binary_search(axes_[j].begin(), axes_[j].end(), label)) {
        throw DomainError("restriction label " + std::to_string(label) + " not on axis " + std::to_string(j + 1));
      }
    }
  }
  Tensor out = zeros(field_, subsets);
  std::vector<int> labels(axes_.size());
  for (std::size_t i = 0; i < out.entries_.size(); ++i) {
    out.entries_[i] = entries_[flat_index(out.labels_of_flat(i))];
  }
  return out;
}

Tensor Tensor::permute_legs(const std::vector<std::vector<int>>& perms) const {
  if (perms.size() != axes_.size()) throw ShapeError("need one permutation per axis");
  for (std::size_t j = 0; j < perms.size(); ++j) {
    if (perms[j].size() != axes_[j].size()) throw DomainError("permutation arity mismatch on axis " + std::to_string(j + 1));
    std::vector<int> image = perms[j];
    std::sort(image.begin(), image.end());
    if (image != axes_[j]) throw DomainError("permutation is not a bijection of axis " + std::to_string(j + 1));
  }
  Tensor out = zeros(field_, axes_);
  std::vector<int> target(axes_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i] == 0) continue;
    for (std::size_t j = 0; j < axes_.size(); ++j) {
      const std::size_t pos = (i / strides_[j]) % axes_[j].size();
      target[j] = perms[j][pos];
    }
    out.entries_[out.flat_index(target)] = entries_[i];
  }
  return out;
}

std::optional<std::vector<int>> Tensor::lex_lead() const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i] != 0) return labels_of_flat(i);
  }
  return std::nullopt;
}

Fp Tensor::inner_product(const Tensor& o) const {
  if (!same_shape(o)) throw ShapeError("inner product needs identical shapes");
  std::uint64_t acc = 0;
  const std::uint64_t p = field_.p();
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    acc += static_cast<std::uint64_t>(entries_[i]) * o.entries_[i];
    if (acc >= (std::uint64_t{1} << 62)) acc %= p;
  }
  return static_cast<Fp>(acc % p);
}

Tensor Tensor::symmetrized() const {
  if (!is_cube()) throw ShapeError("symmetrization needs equal axes");
  const int d = order();
  std::vector<std::size_t> perm(static_cast<std::size_t>(d));
  std::iota(perm.begin(), perm.end(), 0);
  Tensor out = zeros(field_, axes_);
  std::vector<std::size_t> pos(static_cast<std::size_t>(d));
  std::vector<std::size_t> ppos(static_cast<std::size_t>(d));
  do {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      for (std::size_t j = 0; j < pos.size(); ++j) pos[j] = (i / strides_[j]) % axes_[j].size();
      for (std::size_t j = 0; j < pos.size(); ++j) ppos[j] = pos[perm[j]];
      std::size_t src = 0;
      for (std::size_t j = 0; j < ppos.size(); ++j) src += strides_[j] * ppos[j];
      out.entries_[i] = field_.add(out.entries_[i], entries_[src]);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

bool Tensor::is_symmetric() const {
  if (!is_cube()) return false;
  const int d = order();
  std::vector<std::size_t> perm(static_cast<std::size_t>(d));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::size_t> pos(static_cast<std::size_t>(d));
  while (std::next_permutation(perm.begin(), perm.end())) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      for (std::size_t j = 0; j < pos.size(); ++j) pos[j] = (i / strides_[j]) % axes_[j].size();
      std::size_t src = 0;
      for (std::size_t j = 0; j < pos.size(); ++j) src += strides_[j] * pos[perm[j]];
      if (entries_[i] != entries_[src]) return false;
    }
  }
  return true;
}

Tensor Tensor::operator+(const Tensor& o) const {
  if (!same_shape(o)) throw ShapeError("addition needs identical shapes");
  Tensor out = *this;
  for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = field_.add(entries_[i], o.entries_[i]);
  return out;
}

Tensor Tensor::operator-(const Tensor& o) const {
  if (!same_shape(o)) throw ShapeError("subtraction needs identical shapes");
  Tensor out = *this;
  for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = field_.sub(entries_[i], o.entries_[i]);
  return out;
}

Tensor Tensor::scaled(Fp c) const {
  Tensor out = *this;
  for (Fp& e : out.entries_) e = field_.mul(e, c);
  return out;
}

}  // namespace trk::algebra
