#include "trk/szemeredi.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "trk/errors.hpp"
#include "trk/fpmatrix.hpp"
#include "trk/parallel.hpp"
#include "trk/veronese.hpp"

namespace trk::szemeredi {

using algebra::FpMatrix;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

StreamRng::StreamRng(std::uint64_t seed, std::uint64_t stream)
    : eng_(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x51ED2701A9E53125ull))) {}

std::uint64_t StreamRng::next() { return eng_(); }

Fp StreamRng::uniform_mod(std::uint32_t p) {
  // Rejection keeps the draw unbiased and the stream portable: the
  // engine is bit-specified by the standard, distributions are not.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % p;
  std::uint64_t v = next();
  while (v >= limit) v = next();
  return static_cast<Fp>(v % p);
}

std::vector<std::vector<Fp>> sample_points(int n, const PrimeField& field, int count, StreamRng& rng) {
  std::vector<std::vector<Fp>> pts;
  pts.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    std::vector<Fp> x(static_cast<std::size_t>(n));
    for (auto& c : x) c = rng.uniform_mod(field.p());
    pts.push_back(std::move(x));
  }
  return pts;
}

bool veronese_independent(const PrimeField& field, const std::vector<std::vector<Fp>>& points, int d) {
  if (points.empty()) return true;
  const int n = static_cast<int>(points[0].size());
  const std::uint64_t m = algebra::monomial_count(n, d);
  if (points.size() > m) return false;  // pigeonhole
  FpMatrix mat(field, points.size(), m);
  for (std::size_t i = 0; i < points.size(); ++i) {
    mat.set_row(i, algebra::monomial_vector(field, points[i], d));
  }
  return mat.rank() == points.size();
}

Tensor construct_blocker(const PrimeField& field, const std::vector<std::vector<Fp>>& S, int k) {
  if (k < 3) throw DomainError("progression length must be >= 3");
  const int d = k - 1;
  if (field.p() < static_cast<std::uint32_t>(k)) throw DomainError("need p >= k");
  if (S.empty()) throw PreconditionError("empty difference set; pick any nonzero symmetric tensor instead");
  const int n = static_cast<int>(S[0].size());
  if (!veronese_independent(field, S, d)) {
    throw PreconditionError("power vectors of S are dependent");
  }

  // Solve sum over multisets alpha of (arrangements(alpha) * s^alpha) *
  // t_alpha = 1 for each s in S. Column scaling by the (invertible,
  // since p > d) arrangement counts keeps the system equivalent to the
  // monomial one, so independence of S makes it solvable.
  const auto multisets = algebra::monomial_multisets(n, d);
  FpMatrix mat(field, S.size(), multisets.size());
  for (std::size_t i = 0; i < S.size(); ++i) {
    const auto mono = algebra::monomial_vector(field, S[i], d);
    for (std::size_t c = 0; c < multisets.size(); ++c) {
      mat.at(i, c) = field.mul(mono[c], algebra::multiset_arrangements_mod(field, multisets[c]));
    }
  }
  const auto sol = mat.solve(std::vector<Fp>(S.size(), 1));
  if (!sol) throw InternalCheckError("blocker-system", "independent powers produced an unsolvable system");

  Tensor T = Tensor::zeros_cube(field, d, n);
  for (std::size_t c = 0; c < multisets.size(); ++c) {
    if ((*sol)[c] == 0) continue;
    // Spread the coefficient over every arrangement of the multiset.
    std::vector<int> labels(static_cast<std::size_t>(d));
    for (std::size_t j = 0; j < labels.size(); ++j) labels[j] = multisets[c][j] + 1;
    std::sort(labels.begin(), labels.end());
    do {
      T.set(labels, (*sol)[c]);
    } while (std::next_permutation(labels.begin(), labels.end()));
  }

  // Re-substitution: the defining constraints must hold exactly.
  for (const auto& s : S) {
    if (T.evaluate_diag(s) != 1) {
      throw InternalCheckError("blocker-system", "constructed tensor misses a constraint");
    }
  }
  return T;
}

std::vector<Fp> point_of_index(std::uint64_t idx, int n, std::uint32_t p) {
  std::vector<Fp> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    x[static_cast<std::size_t>(i)] = static_cast<Fp>(idx % p);
    idx /= p;
  }
  return x;
}

namespace {

std::uint64_t index_of_point(const std::vector<Fp>& x, std::uint32_t p) {
  std::uint64_t idx = 0;
  for (std::size_t i = x.size(); i-- > 0;) idx = idx * p + x[i];
  return idx;
}

// T(x,...,x) via the compressed monomial form; one pass per point.
struct DiagonalForm {
  std::vector<std::vector<int>> multisets;
  std::vector<Fp> weights;  // arrangements * coefficient
  const PrimeField* field;

  explicit DiagonalForm(const Tensor& T) : field(&T.field()) {
    const int d = T.order();
    const int n = static_cast<int>(T.axis_size(0));
    multisets = algebra::monomial_multisets(n, d);
    weights.reserve(multisets.size());
    std::vector<int> labels(static_cast<std::size_t>(d));
    for (const auto& ms : multisets) {
      for (std::size_t j = 0; j < labels.size(); ++j) labels[j] = ms[j] + 1;
      weights.push_back(field->mul(T.at(labels), algebra::multiset_arrangements_mod(*field, ms)));
    }
  }

  Fp operator()(const std::vector<Fp>& x) const {
    std::uint64_t acc = 0;
    for (std::size_t c = 0; c < multisets.size(); ++c) {
      if (weights[c] == 0) continue;
      Fp v = weights[c];
      for (int idx : multisets[c]) v = field->mul(v, x[static_cast<std::size_t>(idx)]);
      acc += v;
    }
    return static_cast<Fp>(acc % field->p());
  }
};

}  // namespace

bool ZeroSet::contains(const std::vector<Fp>& x) const {
  if (enumerated) {
    return member[index_of_point(x, blocker.field().p())] != 0;
  }
  return blocker.evaluate_diag(x) == 0;
}

ZeroSet zero_set(const Tensor& blocker, int k, std::uint64_t explicit_limit, int threads) {
  if (!blocker.is_principal()) throw ShapeError("blocker must be a principal tensor");
  if (blocker.order() != k - 1) throw ShapeError("blocker order must be k-1");
  ZeroSet A(blocker, k);
  const std::uint32_t p = blocker.field().p();

  double log_total = A.n * std::log2(static_cast<double>(p));
  if (log_total <= std::log2(static_cast<double>(explicit_limit))) {
    std::uint64_t total = 1;
    for (int i = 0; i < A.n; ++i) total *= p;
    A.enumerated = true;
    A.member.assign(total, 0);
    // The diagonal form is symmetric in the blocker's entries; using the
    // compressed monomial form keeps enumeration near-linear.
    const DiagonalForm form(blocker);
    const int n = A.n;
    parallel::chunked_for(total, threads, [&](std::uint64_t idx) {
      A.member[idx] = form(point_of_index(idx, n, p)) == 0 ? 1 : 0;
    });
    A.size = parallel::chunked_sum(total, threads, [&](std::uint64_t b, std::uint64_t e) {
      std::uint64_t c = 0;
      for (std::uint64_t i = b; i < e; ++i) c += A.member[i];
      return c;
    });
  }
  return A;
}

ApCheck verify_no_ap(const ZeroSet& A, const std::vector<std::vector<Fp>>& S, ApScanMode mode,
                     int threads, StreamRng* sample_rng) {
  const std::uint32_t p = A.blocker.field().p();
  const int k = A.k;
  ApCheck out;

  std::vector<std::vector<Fp>> diffs;
  for (const auto& s : S) {
    if (std::any_of(s.begin(), s.end(), [](Fp c) { return c != 0; })) diffs.push_back(s);
  }
  if (diffs.empty()) {
    out.mode = ApScanMode::Exhaustive;
    return out;  // no proper difference available: vacuously AP-free
  }

  std::uint64_t total = 1;
  bool overflow = false;
  for (int i = 0; i < A.n; ++i) {
    if (total > kExhaustiveScanLimit) {
      overflow = true;
      break;
    }
    total *= p;
  }
  const bool can_exhaust = A.enumerated && !overflow && total * diffs.size() <= kExhaustiveScanLimit;
  if (mode == ApScanMode::Exhaustive && !can_exhaust) {
    throw ResourceGuardError("exhaustive progression scan above the configured limit");
  }
  const bool exhaust = mode == ApScanMode::Exhaustive || (mode == ApScanMode::Auto && can_exhaust);

  const auto field = A.blocker.field();
  const auto run_progression = [&](const std::vector<Fp>& x, const std::vector<Fp>& s) {
    std::vector<Fp> y = x;
    for (int j = 0; j < k; ++j) {
      if (!A.contains(y)) return false;  // progression leaves A
      for (std::size_t c = 0; c < y.size(); ++c) y[c] = field.add(y[c], s[c]);
    }
    return true;  // full k-AP inside A
  };

  if (exhaust) {
    out.mode = ApScanMode::Exhaustive;
    for (const auto& s : diffs) {
      const auto hit = parallel::chunked_first(total, threads, [&](std::uint64_t b, std::uint64_t e) -> std::optional<std::uint64_t> {
        for (std::uint64_t idx = b; idx < e; ++idx) {
          if (run_progression(point_of_index(idx, A.n, p), s)) return idx;
        }
        return std::nullopt;
      });
      out.pairs_checked += total;
      if (hit) {
        out.ok = false;
        out.counterexample = {point_of_index(*hit, A.n, p), s};
        return out;
      }
    }
    return out;
  }

  out.mode = ApScanMode::Sampled;
  if (!sample_rng) throw PreconditionError("sampled progression scan needs an RNG");
  for (std::uint64_t i = 0; i < kSampledPairs; ++i) {
    std::vector<Fp> x(static_cast<std::size_t>(A.n));
    for (auto& c : x) c = sample_rng->uniform_mod(p);
    const auto& s = diffs[static_cast<std::size_t>(sample_rng->next() % diffs.size())];
    ++out.pairs_checked;
    if (run_progression(x, s)) {
      out.ok = false;
      out.counterexample = {x, s};
      return out;
    }
  }
  return out;
}

CwCheck chevalley_warning_check(const ZeroSet& A, std::uint32_t p) {
  CwCheck out;
  out.applicable = A.n > A.k - 1;
  if (!A.enumerated) return out;
  out.divisible = A.size % p == 0;
  out.nonempty = A.size >= p;
  double total = std::pow(static_cast<double>(p), static_cast<double>(A.n));
  out.density = static_cast<double>(A.size) / total;
  return out;
}

namespace {

int derived_sample_count(const SimParams& params, std::uint64_t m) {
  const double logp_n = std::log(static_cast<double>(params.n)) / std::log(static_cast<double>(params.p));
  double penalty = params.C_knob * logp_n * logp_n;
  for (int i = 0; i < params.k - 2; ++i) penalty *= static_cast<double>(params.n);
  const double s = static_cast<double>(m) - std::ceil(penalty);
  return s < 0 ? 0 : static_cast<int>(s);
}

double wall_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

void finalize_aggregates(SimReport& rep) {
  std::size_t indep = 0, apfree = 0, enumerated = 0;
  double density_sum = 0.0;
  for (const auto& tr : rep.trials) {
    if (tr.independent) ++indep;
    if (tr.independent && tr.ap_free) ++apfree;
    if (tr.set_enumerated) {
      ++enumerated;
      density_sum += tr.density;
    }
  }
  const double nt = static_cast<double>(rep.trials.size());
  rep.independence_rate = rep.trials.empty() ? 0.0 : static_cast<double>(indep) / nt;
  rep.ap_free_rate = indep == 0 ? 0.0 : static_cast<double>(apfree) / static_cast<double>(indep);
  rep.mean_density = enumerated == 0 ? 0.0 : density_sum / static_cast<double>(enumerated);
}

}  // namespace

SimReport independence_experiment(const SimParams& params) {
  const auto t0 = std::chrono::steady_clock::now();
  if (params.p < static_cast<std::uint32_t>(params.k)) throw PreconditionError("need p >= k");
  const PrimeField field(params.p);
  const int d = params.k - 1;

  SimReport rep;
  rep.params = params;
  rep.monomial_dim = algebra::monomial_count(params.n, d);
  rep.derived_samples = derived_sample_count(params, rep.monomial_dim);
  const int s = params.samples >= 0 ? params.samples : rep.derived_samples;
  rep.params.samples = s;
  const double m2 = static_cast<double>(rep.monomial_dim) * static_cast<double>(rep.monomial_dim);
  rep.independence_floor = std::pow(1.0 - 2.0 / m2, s);

  rep.trials.assign(static_cast<std::size_t>(params.trials), {});
  parallel::chunked_for(static_cast<std::uint64_t>(params.trials), params.threads, [&](std::uint64_t i) {
    StreamRng rng(params.seed, i);
    const auto pts = sample_points(params.n, field, s, rng);
    rep.trials[i].independent = veronese_independent(field, pts, d);
  });
  finalize_aggregates(rep);
  rep.wall_ms = wall_since(t0);
  return rep;
}

SimReport randomized_szemeredi_demo(const SimParams& params) {
  const auto t0 = std::chrono::steady_clock::now();
  if (params.p < static_cast<std::uint32_t>(params.k)) throw PreconditionError("need p >= k");
  const PrimeField field(params.p);
  const int d = params.k - 1;

  SimReport rep;
  rep.params = params;
  rep.monomial_dim = algebra::monomial_count(params.n, d);
  rep.derived_samples = derived_sample_count(params, rep.monomial_dim);
  const int s = params.samples >= 0 ? params.samples : rep.derived_samples;
  rep.params.samples = s;
  const double m2 = static_cast<double>(rep.monomial_dim) * static_cast<double>(rep.monomial_dim);
  rep.independence_floor = std::pow(1.0 - 2.0 / m2, s);

  rep.trials.assign(static_cast<std::size_t>(params.trials), {});
  // Trials are independent streams; worker count cannot change results.
  parallel::chunked_for(static_cast<std::uint64_t>(params.trials), params.threads, [&](std::uint64_t i) {
    TrialRecord& tr = rep.trials[i];
    StreamRng rng(params.seed, i);
    const auto S = sample_points(params.n, field, s, rng);
    tr.independent = veronese_independent(field, S, d);
    if (!tr.independent) return;

    Tensor blocker = Tensor::zeros_cube(field, d, params.n);
    if (s == 0) {
      // Any nonzero symmetric tensor works when there is nothing to block.
      blocker.set(std::vector<int>(static_cast<std::size_t>(d), 1), 1);
    } else {
      blocker = construct_blocker(field, S, params.k);
    }
    tr.blocker_found = true;

    const ZeroSet A = zero_set(blocker, params.k);
    tr.set_enumerated = A.enumerated;
    if (A.enumerated) {
      tr.set_size = A.size;
      tr.density = static_cast<double>(A.size) / std::pow(static_cast<double>(params.p), params.n);
    }

    const ApCheck ap = verify_no_ap(A, S, ApScanMode::Auto, 1, &rng);
    tr.ap_free = ap.ok;
    tr.ap_mode = ap.mode == ApScanMode::Exhaustive ? "exhaustive" : "sampled";

    const CwCheck cw = chevalley_warning_check(A, params.p);
    tr.cw_applicable = cw.applicable && A.enumerated;
    tr.cw_ok = tr.cw_applicable ? (cw.divisible && cw.nonempty) : false;
  });
  finalize_aggregates(rep);
  rep.wall_ms = wall_since(t0);
  return rep;
}

TailReport tail_bound_check(const SubspaceBasis& W, const rank::RankThreshold& floor, int threads,
                            std::uint64_t exact_limit, std::uint64_t mc_samples, std::uint64_t mc_seed) {
  if (W.tensors.empty()) throw PreconditionError("tail check needs a nonempty basis");
  const Tensor& first = W.tensors[0];
  const auto& field = first.field();
  const std::uint32_t p = field.p();
  const int d = first.order();
  const int n = static_cast<int>(first.axis_size(0));
  if (!first.is_principal()) throw PreconditionError("tail check needs principal tensors");
  for (const Tensor& w : W.tensors) {
    if (!w.is_symmetric()) throw PreconditionError("tail check needs symmetric tensors");
  }
  if (rank_of(W) != W.size()) throw PreconditionError("W basis is dependent");

  TailReport rep;
  const int m = static_cast<int>(W.size());
  rep.dim = m;

  // Mean bias over all p^m elements of W, one exact bias each. All share
  // the exponent K, so the mean is (sum of numerators) / p^(m+K).
  std::uint64_t combos = 1;
  for (int i = 0; i < m; ++i) combos *= p;
  rank::BigInt num_sum = 0;
  std::uint32_t K = 0;
  for (std::uint64_t idx = 0; idx < combos; ++idx) {
    Tensor elem = Tensor::zeros_cube(field, d, n);
    std::uint64_t rem = idx;
    for (int j = 0; j < m; ++j) {
      const Fp c = static_cast<Fp>(rem % p);
      rem /= p;
      if (c != 0) elem = elem + W.tensors[static_cast<std::size_t>(j)].scaled(c);
    }
    const rank::BiasValue b = rank::bias(elem, threads);
    num_sum += b.num;
    K = b.exp;
  }
  rep.mean_bias_num = num_sum.str();
  rep.mean_bias_exp = K;
  rep.mean_bias = num_sum.convert_to<double>() /
                  std::pow(static_cast<double>(p), static_cast<double>(m) + static_cast<double>(K));

  // Link (b): E bias <= 1/p^m + (1 - 1/p^m) rho^r, cross-multiplied:
  // num_sum * den^r <= p^K (den^r + (p^m - 1) num^r).
  const rank::BigInt den_r = rank::pow_big(floor.base_den, floor.power);
  const rank::BigInt num_r = rank::pow_big(floor.base_num, floor.power);
  const rank::BigInt pm = rank::pow_big(p, static_cast<std::uint32_t>(m));
  rep.mean_link_ok = num_sum * den_r <= rank::pow_big(p, K) * (den_r + (pm - 1) * num_r);

  // Membership probability of the diagonal power map in the orthogonal
  // complement of W.
  double log_total = n * std::log2(static_cast<double>(p));
  const bool exact = log_total <= std::log2(static_cast<double>(exact_limit));
  rep.exact = exact;
  const auto orthogonal_to_W = [&](const std::vector<Fp>& x) {
    for (const Tensor& w : W.tensors) {
      if (w.evaluate_diag(x) != 0) return false;
    }
    return true;
  };

  std::uint64_t hits = 0, draws = 0;
  if (exact) {
    std::uint64_t total = 1;
    for (int i = 0; i < n; ++i) total *= p;
    draws = total;
    hits = parallel::chunked_sum(total, threads, [&](std::uint64_t b, std::uint64_t e) {
      std::uint64_t c = 0;
      for (std::uint64_t idx = b; idx < e; ++idx) {
        if (orthogonal_to_W(point_of_index(idx, n, p))) ++c;
      }
      return c;
    });
    rep.membership_prob = static_cast<double>(hits) / static_cast<double>(total);

    // (a) exactly: hits^(2^(d-1)) p^(m+K) <= num_sum p^(n 2^(d-1)).
    const std::uint32_t e2 = 1u << (d - 1);
    rank::BigInt lhs = 1;
    for (std::uint32_t i = 0; i < e2; ++i) lhs *= hits;
    rep.power_link_ok =
        lhs * rank::pow_big(p, static_cast<std::uint32_t>(m) + K) <=
        num_sum * rank::pow_big(p, static_cast<std::uint32_t>(n) * e2);
  } else {
    StreamRng rng(mc_seed, 0x7a11);
    draws = mc_samples;
    for (std::uint64_t i = 0; i < mc_samples; ++i) {
      std::vector<Fp> x(static_cast<std::size_t>(n));
      for (auto& c : x) c = rng.uniform_mod(p);
      if (orthogonal_to_W(x)) ++hits;
    }
    rep.membership_prob = static_cast<double>(hits) / static_cast<double>(draws);
    rep.power_link_ok =
        std::pow(rep.membership_prob, std::pow(2.0, d - 1)) <= rep.mean_bias + 1e-9;
  }
  rep.ok = rep.power_link_ok && rep.mean_link_ok;
  return rep;
}

}  // namespace trk::szemeredi
