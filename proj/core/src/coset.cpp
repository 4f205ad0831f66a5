#include "trk/coset.hpp"

#include <cmath>
#include <complex>

#include "trk/errors.hpp"
#include "trk/fpmatrix.hpp"

namespace trk::rank {

using algebra::Fp;
using algebra::FpMatrix;
using algebra::Tensor;

namespace {

// y = shift + sum of coeff[i] * basis[i].
std::vector<Fp> coset_point(const algebra::PrimeField& field, const std::vector<Fp>& shift,
                            const std::vector<std::vector<Fp>>& basis, std::uint64_t idx) {
  std::vector<Fp> y = shift;
  const std::uint32_t p = field.p();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Fp c = static_cast<Fp>(idx % p);
    idx /= p;
    if (c == 0) continue;
    for (std::size_t k = 0; k < y.size(); ++k) y[k] = field.add(y[k], field.mul(c, basis[i][k]));
  }
  return y;
}

// Histogram of T(y_1, ..., y_d) over y_j in v_j + U, accumulated
// recursively: contract the last leg per coset point, and close the
// last level in O(n) using linearity of the remaining functional on U.
void histogram_rec(const Tensor& T, const std::vector<std::vector<Fp>>& U,
                   const std::vector<std::vector<Fp>>& shifts, std::size_t leg,
                   std::vector<std::uint64_t>& hist) {
  const auto& field = T.field();
  const std::uint32_t p = field.p();
  if (leg == 0) {
    // T is a functional now; over the coset its values are either
    // constant or uniform depending on whether it kills U.
    std::uint64_t u_count = 1;
    for (std::size_t i = 0; i < U.size(); ++i) u_count *= p;
    std::vector<std::vector<Fp>> arg(1);
    bool kills_U = true;
    for (const auto& u : U) {
      arg[0] = u;
      if (T.evaluate(arg) != 0) {
        kills_U = false;
        break;
      }
    }
    if (kills_U) {
      arg[0] = shifts[0];
      hist[T.evaluate(arg)] += u_count;
    } else {
      for (std::uint32_t c = 0; c < p; ++c) hist[c] += u_count / p;
    }
    return;
  }
  std::uint64_t u_count = 1;
  for (std::size_t i = 0; i < U.size(); ++i) u_count *= p;
  for (std::uint64_t idx = 0; idx < u_count; ++idx) {
    const std::vector<Fp> y = coset_point(field, shifts[leg], U, idx);
    histogram_rec(T.contract_last(y), U, shifts, leg - 1, hist);
  }
}

bool in_span(const algebra::PrimeField& field, const std::vector<std::vector<Fp>>& basis,
             const std::vector<Fp>& v) {
  if (basis.empty()) {
    for (Fp c : v) {
      if (c != 0) return false;
    }
    return true;
  }
  FpMatrix m(field, v.size(), basis.size());
  for (std::size_t c = 0; c < basis.size(); ++c) {
    for (std::size_t r = 0; r < v.size(); ++r) m.at(r, c) = basis[c][r];
  }
  return m.solve(v).has_value();
}

}  // namespace

CosetBias coset_bias(const Tensor& T, const std::vector<std::vector<Fp>>& U_basis,
                     const std::vector<std::vector<Fp>>& V_basis,
                     const std::vector<std::vector<Fp>>& shifts) {
  const auto& field = T.field();
  const std::uint32_t p = field.p();
  const int d = T.order();
  if (!T.is_cube()) throw ShapeError("coset bias needs a cube tensor");
  const std::size_t n = T.axis_size(0);

  for (const auto& u : U_basis) {
    if (u.size() != n) throw ShapeError("U basis vector length mismatch");
  }
  for (const auto& v : V_basis) {
    if (v.size() != n) throw ShapeError("V basis vector length mismatch");
  }
  if (U_basis.size() + V_basis.size() != n) {
    throw DomainError("U and V do not decompose the space: dimensions do not add up");
  }
  {
    FpMatrix stacked(field, U_basis.size() + V_basis.size(), n);
    std::size_t r = 0;
    for (const auto& u : U_basis) stacked.set_row(r++, u);
    for (const auto& v : V_basis) stacked.set_row(r++, v);
    if (stacked.rank() != n) throw DomainError("U and V do not decompose the space: not complementary");
  }
  if (shifts.size() != static_cast<std::size_t>(d)) throw ShapeError("need one shift per leg");
  for (const auto& v : shifts) {
    if (v.size() != n) throw ShapeError("shift length mismatch");
    if (!in_span(field, V_basis, v)) throw DomainError("shift outside span(V)");
  }

  const std::uint32_t dim_u = static_cast<std::uint32_t>(U_basis.size());
  const std::uint32_t denom_exp = static_cast<std::uint32_t>(d) * dim_u;
  if (static_cast<double>(denom_exp) * std::log2(static_cast<double>(p)) >= 62.0) {
    throw ResourceGuardError("coset enumeration domain exceeds 2^62 tuples");
  }

  CosetBias out;
  out.p = p;
  out.denom_exp = denom_exp;
  out.histogram.assign(p, 0);
  histogram_rec(T, U_basis, shifts, static_cast<std::size_t>(d) - 1, out.histogram);

  if (p == 2) {
    const std::uint64_t n0 = out.histogram[0], n1 = out.histogram[1];
    out.exact = BiasValue(BigInt(n0 >= n1 ? n0 - n1 : n1 - n0), p, denom_exp);
    out.magnitude = static_cast<long double>(out.exact->num.convert_to<double>()) /
                    std::pow(2.0L, static_cast<long double>(denom_exp));
  } else {
    std::complex<long double> z(0.0L, 0.0L);
    const long double tau = 2.0L * std::acos(-1.0L);
    long double total = 0.0L;
    for (std::uint32_t c = 0; c < p; ++c) total += static_cast<long double>(out.histogram[c]);
    for (std::uint32_t c = 0; c < p; ++c) {
      const long double angle = tau * static_cast<long double>(c) / static_cast<long double>(p);
      z += static_cast<long double>(out.histogram[c]) *
           std::complex<long double>(std::cos(angle), std::sin(angle));
    }
    out.magnitude = std::abs(z) / total;
  }
  return out;
}

}  // namespace trk::rank
