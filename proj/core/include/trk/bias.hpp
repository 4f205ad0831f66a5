#pragma once

#include <cstdint>
#include <boost/multiprecision/cpp_int.hpp>

#include "trk/tensor.hpp"

namespace trk::rank {

using BigInt = boost::multiprecision::cpp_int;

// Exact bias M / p^K of a tensor. All decisions on bias values go through
// exact integer comparisons; the floating analytic rank is advisory.
struct BiasValue {
  BigInt num;        // M, 0 <= M <= p^K
  std::uint32_t p = 2;
  std::uint32_t exp = 0;  // K

  BiasValue() = default;
  BiasValue(BigInt m, std::uint32_t p_, std::uint32_t k);

  bool is_one() const;
  double value() const;
  // K - log_p(M); +inf when M = 0 (only possible for order-1 plumbing).
  double arank() const;

  bool operator==(const BiasValue& o) const {
    return num == o.num && p == o.p && exp == o.exp;
  }
};

// A rational threshold (base_num/base_den)^power on bias values,
// equivalently the analytic-rank threshold power * (-log_p of the base).
struct RankThreshold {
  std::uint64_t base_num = 1;
  std::uint64_t base_den = 1;
  std::uint32_t power = 0;

  RankThreshold with_power(std::uint32_t i) const { return {base_num, base_den, i}; }
  double value() const;
};

// The per-step bias shrink factor (p^d - (p-1)^d) / p^d in lowest terms,
// as a power-1 threshold.
RankThreshold bias_shrink_base(std::uint32_t p, int d);
// -log_p of the shrink base: the per-step analytic-rank increment.
double rank_increment(std::uint32_t p, int d);

// b <= (base_num/base_den)^power, by big-integer cross-multiplication.
bool bias_leq_threshold(const BiasValue& b, const RankThreshold& thr);
// a <= b as exact rationals.
bool bias_leq(const BiasValue& a, const BiasValue& b);
// a <= base * b where base is thr's base ratio (power ignored).
bool bias_leq_scaled(const BiasValue& a, const RankThreshold& thr, const BiasValue& b);
// b >= p^-r.
bool bias_geq_inverse_power(const BiasValue& b, std::uint32_t r);

BigInt pow_big(std::uint64_t base, std::uint32_t e);

// Exact bias of T, counting the tuples (x_2, ..., x_d) whose contracted
// linear functional T(., x_2, ..., x_d) vanishes identically; the inner
// character average over x_1 is exactly the zero-indicator of that
// functional, so no complex arithmetic is involved. K is the sum of the
// axis sizes j >= 2. Cost p^K: the enumeration may be partitioned over
// workers along the last axis, with a plain integer-sum reduction.
//
// Order 1 is supported as plumbing: the value is the zero fraction of the
// form itself, 1 for T = 0 and 1/p otherwise.
BiasValue bias(const algebra::Tensor& T, int threads = 1);

// Advisory float -log_p bias(T).
double analytic_rank(const algebra::Tensor& T, int threads = 1);

// Ordinary rank over F_p of an order-2 tensor, by row reduction.
int matrix_rank(const algebra::Tensor& M);

}  // namespace trk::rank
