#include "trk/field.hpp"

namespace trk::algebra {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

Fp PrimeField::pow(Fp a, std::uint64_t e) const {
  std::uint64_t base = a % p_, acc = 1;
  while (e > 0) {
    if (e & 1) acc = acc * base % p_;
    base = base * base % p_;
    e >>= 1;
  }
  return static_cast<Fp>(acc);
}

}  // namespace trk::algebra
