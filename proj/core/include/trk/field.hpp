#pragma once

#include <cstdint>

#include "trk/errors.hpp"

namespace trk::algebra {

// Canonical residue in {0, ..., p-1}.
using Fp = std::uint32_t;

bool is_prime(std::uint64_t n);

// Arithmetic in the prime field F_p. Small moduli only; elements are
// canonical residues and every operation returns one.
class PrimeField {
 public:
  explicit PrimeField(Fp p) : p_(p) {
    if (p < 2 || !is_prime(p)) throw DomainError("modulus must be prime, got " + std::to_string(p));
  }

  Fp p() const { return p_; }

  Fp add(Fp a, Fp b) const {
    Fp s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Fp sub(Fp a, Fp b) const { return a >= b ? a - b : a + p_ - b; }
  Fp neg(Fp a) const { return a == 0 ? 0 : p_ - a; }
  Fp mul(Fp a, Fp b) const {
    return static_cast<Fp>((static_cast<std::uint64_t>(a) * b) % p_);
  }
  Fp pow(Fp a, std::uint64_t e) const;
  Fp inv(Fp a) const {
    if (a == 0) throw DomainError("inverse of zero");
    return pow(a, p_ - 2);
  }
  Fp div(Fp a, Fp b) const { return mul(a, inv(b)); }

  // Canonical residue of an arbitrary signed value.
  Fp reduce(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return static_cast<Fp>(r);
  }

  bool operator==(const PrimeField& o) const { return p_ == o.p_; }
  bool operator!=(const PrimeField& o) const { return p_ != o.p_; }

 private:
  Fp p_;
};

}  // namespace trk::algebra
