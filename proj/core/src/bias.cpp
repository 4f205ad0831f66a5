#include "trk/bias.hpp"

#include <cmath>
#include <limits>

#include "trk/errors.hpp"
#include "trk/fpmatrix.hpp"
#include "trk/parallel.hpp"

namespace trk::rank {

using algebra::Fp;
using algebra::Tensor;

BigInt pow_big(std::uint64_t base, std::uint32_t e) {
  BigInt acc = 1;
  BigInt b = base;
  while (e > 0) {
    if (e & 1) acc *= b;
    b *= b;
    e >>= 1;
  }
  return acc;
}

BiasValue::BiasValue(BigInt m, std::uint32_t p_, std::uint32_t k) : num(std::move(m)), p(p_), exp(k) {
  if (num < 0 || num > pow_big(p, exp)) throw DomainError("bias numerator outside [0, p^exp]");
}

bool BiasValue::is_one() const { return num == pow_big(p, exp); }

double BiasValue::value() const {
  return num.convert_to<double>() / std::pow(static_cast<double>(p), static_cast<double>(exp));
}

double BiasValue::arank() const {
  if (num == 0) return std::numeric_limits<double>::infinity();
  // exp - log_p(num); advisory only, decisions use exact comparisons.
  return static_cast<double>(exp) - std::log(num.convert_to<double>()) / std::log(static_cast<double>(p));
}

double RankThreshold::value() const {
  return std::pow(static_cast<double>(base_num) / static_cast<double>(base_den), static_cast<double>(power));
}

RankThreshold bias_shrink_base(std::uint32_t p, int d) {
  if (d < 1) throw DomainError("order must be >= 1");
  std::uint64_t pd = 1, qd = 1;
  for (int i = 0; i < d; ++i) {
    pd *= p;
    qd *= (p - 1);
  }
  std::uint64_t num = pd - qd, den = pd;
  // p is prime and num = -(p-1)^d mod p is nonzero, so the fraction is
  // already in lowest terms; reduce defensively anyway.
  while (num % p == 0 && den % p == 0) {
    num /= p;
    den /= p;
  }
  return {num, den, 1};
}

double rank_increment(std::uint32_t p, int d) {
  const RankThreshold t = bias_shrink_base(p, d);
  return -std::log(static_cast<double>(t.base_num) / static_cast<double>(t.base_den)) / std::log(static_cast<double>(p));
}

bool bias_leq_threshold(const BiasValue& b, const RankThreshold& thr) {
  return b.num * pow_big(thr.base_den, thr.power) <= pow_big(thr.base_num, thr.power) * pow_big(b.p, b.exp);
}

bool bias_leq(const BiasValue& a, const BiasValue& b) {
  if (a.p != b.p) throw DomainError("bias comparison across different fields");
  return a.num * pow_big(b.p, b.exp) <= b.num * pow_big(a.p, a.exp);
}

bool bias_leq_scaled(const BiasValue& a, const RankThreshold& thr, const BiasValue& b) {
  if (a.p != b.p) throw DomainError("bias comparison across different fields");
  return a.num * thr.base_den * pow_big(b.p, b.exp) <= BigInt(thr.base_num) * b.num * pow_big(a.p, a.exp);
}

bool bias_geq_inverse_power(const BiasValue& b, std::uint32_t r) {
  return b.num * pow_big(b.p, r) >= pow_big(b.p, b.exp);
}

namespace {

// Mixed-radix decoding of a tuple index into a vector over F_p.
void decode_vector(std::uint64_t idx, std::uint32_t p, std::vector<Fp>& out) {
  for (std::size_t k = out.size(); k-- > 0;) {
    out[k] = static_cast<Fp>(idx % p);
    idx /= p;
  }
}

// Count of x over F_p^{cols} with M x = 0, by enumeration; the order-2
// base case of the contraction recursion.
std::uint64_t count_matrix_kernel_hits(const Tensor& M, std::uint64_t begin, std::uint64_t end) {
  const std::uint32_t p = M.field().p();
  const std::size_t rows = M.axis_size(0), cols = M.axis_size(1);
  const std::vector<Fp>& e = M.entries();
  std::vector<Fp> x(cols);
  std::uint64_t hits = 0;
  for (std::uint64_t idx = begin; idx < end; ++idx) {
    decode_vector(idx, p, x);
    bool zero = true;
    for (std::size_t r = 0; r < rows && zero; ++r) {
      std::uint64_t acc = 0;
      const std::size_t base = r * cols;
      for (std::size_t c = 0; c < cols; ++c) acc += static_cast<std::uint64_t>(e[base + c]) * x[c];
      zero = acc % p == 0;
    }
    if (zero) ++hits;
  }
  return hits;
}

std::uint64_t count_annihilators(const Tensor& T) {
  if (T.order() == 2) {
    std::uint64_t domain = 1;
    for (std::size_t k = 0; k < T.axis_size(1); ++k) domain *= T.field().p();
    return count_matrix_kernel_hits(T, 0, domain);
  }
  const std::size_t last = T.axis_size(T.order() - 1);
  std::uint64_t domain = 1;
  for (std::size_t k = 0; k < last; ++k) domain *= T.field().p();
  std::vector<Fp> x(last);
  std::uint64_t total = 0;
  for (std::uint64_t idx = 0; idx < domain; ++idx) {
    decode_vector(idx, T.field().p(), x);
    total += count_annihilators(T.contract_last(x));
  }
  return total;
}

}  // namespace

BiasValue bias(const Tensor& T, int threads) {
  const std::uint32_t p = T.field().p();
  const int d = T.order();

  if (d == 1) {
    const std::uint32_t a = static_cast<std::uint32_t>(T.axis_size(0));
    return BiasValue(pow_big(p, T.is_zero() ? a : a - 1), p, a);
  }

  std::uint32_t K = 0;
  for (int j = 1; j < d; ++j) K += static_cast<std::uint32_t>(T.axis_size(j));
  if (static_cast<double>(K) * std::log2(static_cast<double>(p)) >= 62.0) {
    throw ResourceGuardError("bias enumeration domain exceeds 2^62 tuples");
  }

  // Partition the outermost level (the last axis for d >= 3, the x_2
  // domain for matrices) across workers; partial counts add exactly.
  std::uint64_t outer = 1;
  const std::size_t last = T.axis_size(d - 1);
  for (std::size_t k = 0; k < last; ++k) outer *= p;

  std::uint64_t count = 0;
  if (d == 2) {
    count = parallel::chunked_sum(outer, threads, [&](std::uint64_t b, std::uint64_t e) {
      return count_matrix_kernel_hits(T, b, e);
    });
  } else {
    count = parallel::chunked_sum(outer, threads, [&](std::uint64_t b, std::uint64_t e) {
      std::vector<Fp> x(last);
      std::uint64_t part = 0;
      for (std::uint64_t idx = b; idx < e; ++idx) {
        decode_vector(idx, p, x);
        part += count_annihilators(T.contract_last(x));
      }
      return part;
    });
  }
  return BiasValue(BigInt(count), p, K);
}

double analytic_rank(const Tensor& T, int threads) { return bias(T, threads).arank(); }

int matrix_rank(const Tensor& M) {
  if (M.order() != 2) throw DomainError("matrix rank needs an order-2 tensor");
  algebra::FpMatrix m(M.field(), M.axis_size(0), M.axis_size(1));
  for (std::size_t r = 0; r < M.axis_size(0); ++r) {
    for (std::size_t c = 0; c < M.axis_size(1); ++c) {
      m.at(r, c) = M.at_flat(r * M.axis_size(1) + c);
    }
  }
  return static_cast<int>(m.rank());
}

}  // namespace trk::rank
