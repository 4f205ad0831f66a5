#include "trk/extract.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "trk/errors.hpp"

namespace trk::extract {

std::vector<int> MatchingId::base() const {
  std::vector<int> b;
  b.reserve(offsets.size() + 1);
  int k = 0;
  for (int j = 1; j <= order(); ++j) {
    if (j == zero_axis) {
      b.push_back(0);
    } else {
      b.push_back(offsets[static_cast<std::size_t>(k++)]);
    }
  }
  return b;
}

std::vector<std::vector<int>> matching_cells(const MatchingId& id, int n) {
  if (id.zero_axis < 1 || id.zero_axis > id.order()) throw DomainError("zero_axis out of range");
  for (int off : id.offsets) {
    if (off < 0) throw DomainError("negative matching offset");
  }
  const std::vector<int> base = id.base();
  int max_off = 0;
  for (int b : base) max_off = std::max(max_off, b);

  std::vector<std::vector<int>> cells;
  for (int i = 1; i + max_off <= n; ++i) {
    std::vector<int> cell(base.size());
    for (std::size_t j = 0; j < base.size(); ++j) cell[j] = base[j] + i;
    cells.push_back(std::move(cell));
  }
  return cells;
}

MatchingId cover_assign(const std::vector<int>& coord, int n) {
  if (coord.empty()) throw DomainError("empty coordinate");
  for (int c : coord) {
    if (c < 1 || c > n) throw DomainError("coordinate outside [n]^d");
  }
  const int mn = *std::min_element(coord.begin(), coord.end());
  MatchingId id;
  id.offsets.reserve(coord.size() - 1);
  bool zero_found = false;
  for (std::size_t j = 0; j < coord.size(); ++j) {
    const int off = coord[j] - mn;
    if (off == 0 && !zero_found) {
      id.zero_axis = static_cast<int>(j) + 1;
      zero_found = true;
    } else {
      id.offsets.push_back(off);
    }
  }
  return id;
}

std::vector<MatchingId> all_matchings(int n, int d) {
  std::vector<MatchingId> out;
  std::vector<int> offsets(static_cast<std::size_t>(d - 1), 0);
  for (int z = 1; z <= d; ++z) {
    std::fill(offsets.begin(), offsets.end(), 0);
    while (true) {
      out.push_back({z, offsets});
      int j = d - 2;
      while (j >= 0 && offsets[static_cast<std::size_t>(j)] == n - 1) {
        offsets[static_cast<std::size_t>(j)] = 0;
        --j;
      }
      if (j < 0) break;
      ++offsets[static_cast<std::size_t>(j)];
    }
  }
  return out;
}

PivotInfo pigeonhole_select(const std::vector<std::vector<int>>& leads, int n, int d, int t, int r) {
  if (t < 1 || r < 1 || t < r || n < t) throw PreconditionError("need n >= t >= r >= 1");
  std::uint64_t needed = static_cast<std::uint64_t>(t);
  for (int j = 1; j < d; ++j) needed *= static_cast<std::uint64_t>(n);
  if (leads.size() < needed) {
    throw PreconditionError("need at least t*n^(d-1) leads, got " + std::to_string(leads.size()));
  }
  {
    auto sorted = leads;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw PreconditionError("leads must be pairwise distinct");
    }
  }

  // Canonical cover: each lead goes to exactly one matching.
  std::map<MatchingId, std::vector<std::pair<int, std::size_t>>> groups;  // (f, lead index)
  for (std::size_t i = 0; i < leads.size(); ++i) {
    const auto& c = leads[i];
    if (static_cast<int>(c.size()) != d) throw PreconditionError("lead arity mismatch");
    const int f = *std::min_element(c.begin(), c.end());
    groups[cover_assign(c, n)].emplace_back(f, i);
  }

  // Largest group; ties break to the lex-least MatchingId, which the
  // ordered map yields for free.
  const std::map<MatchingId, std::vector<std::pair<int, std::size_t>>>::const_iterator best =
      std::max_element(groups.begin(), groups.end(), [](const auto& a, const auto& b) {
        return a.second.size() < b.second.size();
      });

  const int s = t / (d * r);
  const std::size_t rs = static_cast<std::size_t>(r) * static_cast<std::size_t>(s);
  const std::size_t quota = static_cast<std::size_t>((t + d - 1) / d);
  if (best->second.size() < quota) {
    throw InternalCheckError("pigeonhole-count",
                             "no matching holds ceil(t/d) = " + std::to_string(quota) + " leads");
  }
  if (rs == 0) throw PreconditionError("floor(t/(d*r)) = 0: requested subspace is empty");

  PivotInfo info;
  info.matching = best->first;
  auto picks = best->second;
  std::sort(picks.begin(), picks.end());
  picks.resize(rs);  // keep the rs smallest diagonal positions
  for (const auto& [f, idx] : picks) {
    info.f.push_back(f);
    info.selected.push_back(idx);
  }
  return info;
}

Tensor build_Q(const Tensor& T, const PivotInfo& pivot, int slot) {
  const int d = T.order();
  const std::size_t rs = pivot.f.size();
  const std::vector<int> base = pivot.matching.base();
  if (static_cast<int>(base.size()) != d) throw ShapeError("matching order mismatch");

  Tensor Q = Tensor::zeros_cube(T.field(), d, static_cast<int>(rs));
  std::vector<int> src(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < Q.size(); ++i) {
    const std::vector<int> idx = Q.labels_of_flat(i);
    for (int j = 0; j < d; ++j) {
      src[static_cast<std::size_t>(j)] =
          base[static_cast<std::size_t>(j)] + pivot.f[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)]) - 1];
    }
    Q.set_flat(i, T.at(src));
  }

  // The selection guarantees the lead sits on the diagonal cell `slot`
  // and that the restriction to [slot] is single-entry.
  const auto lead = Q.lex_lead();
  const std::vector<int> want(static_cast<std::size_t>(d), slot);
  if (!lead || *lead != want) {
    throw InternalCheckError("lead-pattern", "Q lead is not the diagonal cell " + std::to_string(slot));
  }
  std::vector<int> window(static_cast<std::size_t>(slot));
  std::iota(window.begin(), window.end(), 1);
  const Tensor below = Q.restrict_principal(window);
  for (std::size_t i = 0; i + 1 < below.size(); ++i) {
    if (below.at_flat(i) != 0) {
      throw InternalCheckError("lead-pattern", "restriction below the lead is not single-entry");
    }
  }
  return Q;
}

BoostResult lambda_boost(const Tensor& R, const Tensor& Q, const RankThreshold& shrink, int threads) {
  if (!R.same_shape(Q)) throw ShapeError("R and Q must share labels");
  if (!R.is_cube()) throw PreconditionError("boost step needs cube tensors");
  const auto& field = R.field();
  const std::uint32_t p = field.p();

  // Q must be supported on the single diagonal cell at the window's
  // last label.
  const std::size_t sz = R.axis_size(0);
  const std::vector<int> last_cell(static_cast<std::size_t>(R.order()), R.axis(0).back());
  if (Q.at(last_cell) == 0) throw PreconditionError("Q vanishes at the window's last diagonal cell");
  for (std::size_t i = 0; i + 1 < Q.size(); ++i) {
    if (Q.at_flat(i) != 0) throw PreconditionError("Q is supported outside the last diagonal cell");
  }

  BoostResult out;
  if (sz == 1) {
    out.base = BiasValue(1, p, 0);  // empty restriction: bias of the unit
  } else {
    std::vector<int> prefix(R.axis(0).begin(), R.axis(0).end() - 1);
    out.base = rank::bias(R.restrict_principal(prefix), threads);
  }

  bool have = false;
  for (Fp lambda = 0; lambda < p; ++lambda) {
    const BiasValue b = rank::bias(R + Q.scaled(lambda), threads);
    if (!have || (!(bias_leq(out.boosted, b)))) {  // strictly smaller wins; ties keep smallest lambda
      out.boosted = b;
      out.lambda = lambda;
      have = true;
    }
  }

  // Averaging over lambda guarantees a choice below base * shrink.
  if (!bias_leq_scaled(out.boosted, shrink, out.base)) {
    throw InternalCheckError("boost-averaging", "no lambda reached the shrink factor");
  }
  return out;
}

namespace {

std::uint64_t checked_pow(std::uint64_t base, int e, std::uint64_t cap) {
  std::uint64_t acc = 1;
  for (int i = 0; i < e; ++i) {
    if (acc > cap / base) throw ResourceGuardError("size overflow");
    acc *= base;
  }
  return acc;
}

}  // namespace

std::vector<std::vector<Fp>> projective_vectors(std::uint32_t p, int s) {
  std::vector<std::vector<Fp>> out;
  std::vector<Fp> v(static_cast<std::size_t>(s), 0);
  // First nonzero coordinate equal to 1; enumerate by leading position.
  for (int lead = 0; lead < s; ++lead) {
    std::fill(v.begin(), v.end(), 0);
    v[static_cast<std::size_t>(lead)] = 1;
    const int free = s - lead - 1;
    std::uint64_t count = 1;
    for (int i = 0; i < free; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      std::uint64_t rem = idx;
      for (int i = 0; i < free; ++i) {
        v[static_cast<std::size_t>(lead + 1 + i)] = static_cast<Fp>(rem % p);
        rem /= p;
      }
      out.push_back(v);
    }
  }
  return out;
}

ExtractionCertificate extract_subspace(const SubspaceBasis& V, int t, int r, int threads) {
  if (V.tensors.empty()) throw PreconditionError("empty basis");
  const Tensor& first = V.tensors[0];
  const auto& field = first.field();
  const std::uint32_t p = field.p();
  const int d = first.order();
  const int n = static_cast<int>(first.axis_size(0));
  if (d < 2) throw PreconditionError("extraction needs order >= 2");
  if (!first.is_principal()) throw PreconditionError("extraction needs principal tensors on [n]");
  if (!(n >= t && t >= r && r >= 1)) throw PreconditionError("need n >= t >= r >= 1");
  const int s = t / (d * r);
  if (s < 1) throw PreconditionError("floor(t/(d*r)) = 0: dimension guarantee is vacuous");

  // Echelonize; the certificate tracks everything in input coordinates.
  EliminationResult elim = gaussian_eliminate(V, true);
  const std::uint64_t needed = static_cast<std::uint64_t>(t) * checked_pow(static_cast<std::uint64_t>(n), d - 1, UINT64_MAX / 2);
  if (elim.basis.size() < needed) {
    throw PreconditionError("dim span(V) = " + std::to_string(elim.basis.size()) + " is below t*n^(d-1) = " + std::to_string(needed));
  }

  std::vector<std::vector<int>> leads;
  leads.reserve(elim.basis.size());
  for (const Tensor& Ti : elim.basis.tensors) {
    const auto lead = Ti.lex_lead();
    if (!lead) throw InternalCheckError("echelon", "zero tensor in echelon basis");
    leads.push_back(*lead);
  }

  PivotInfo pivot = pigeonhole_select(leads, n, d, t, r);
  const std::size_t rs = pivot.f.size();

  std::vector<Tensor> Q;
  Q.reserve(rs);
  for (std::size_t i = 0; i < rs; ++i) {
    Q.push_back(build_Q(elim.basis[pivot.selected[i]], pivot, static_cast<int>(i) + 1));
  }

  // Later Q's vanish on earlier intervals; this is what makes the
  // per-interval certificates cover every mixed element of W.
  for (int j = 0; j < s; ++j) {
    std::vector<int> I_j(static_cast<std::size_t>(r));
    std::iota(I_j.begin(), I_j.end(), j * r + 1);
    for (std::size_t i = static_cast<std::size_t>((j + 1) * r); i < rs; ++i) {
      if (!Q[i].restrict_principal(I_j).is_zero()) {
        throw InternalCheckError("block-triangular", "Q above interval " + std::to_string(j + 1) + " meets it");
      }
    }
  }

  const RankThreshold shrink = rank::bias_shrink_base(p, d);

  ExtractionCertificate cert;
  cert.p = p;
  cert.d = d;
  cert.n = n;
  cert.t = t;
  cert.r = r;
  cert.s = s;
  cert.matching = pivot.matching;
  cert.f = pivot.f;
  cert.selected = pivot.selected;
  cert.threshold = shrink.with_power(static_cast<std::uint32_t>(r));
  cert.input_basis = V;

  std::vector<Tensor> w_tensors;
  const std::size_t dim_v = V.size();

  for (int j = 0; j < s; ++j) {
    IntervalData interval;
    const std::size_t base_idx = static_cast<std::size_t>(j) * static_cast<std::size_t>(r);
    for (int i = 0; i < r; ++i) interval.members.push_back(base_idx + static_cast<std::size_t>(i) + 1);

    std::vector<Fp> mu(static_cast<std::size_t>(r), 0);
    mu[0] = 1;
    Tensor R = Q[base_idx];

    std::vector<int> window{static_cast<int>(base_idx) + 1};
    {
      // Base step: the 1-cube holding the lead entry.
      const BiasValue b0 = rank::bias(R.restrict_principal(window), threads);
      if (!bias_leq_threshold(b0, shrink.with_power(1))) {
        throw InternalCheckError("boost-chain", "base bias above the shrink factor");
      }
    }

    for (int i = 1; i < r; ++i) {
      const int next_label = static_cast<int>(base_idx) + i + 1;
      window.push_back(next_label);
      const BoostResult step =
          lambda_boost(R.restrict_principal(window), Q[base_idx + static_cast<std::size_t>(i)].restrict_principal(window), shrink, threads);
      interval.lambdas.push_back(step.lambda);
      mu[static_cast<std::size_t>(i)] = step.lambda;
      R = R + Q[base_idx + static_cast<std::size_t>(i)].scaled(step.lambda);
      if (!bias_leq_threshold(step.boosted, shrink.with_power(static_cast<std::uint32_t>(i) + 1))) {
        throw InternalCheckError("boost-chain", "interval " + std::to_string(j + 1) + " step " + std::to_string(i + 1) + " missed its bias bound");
      }
    }
    interval.R_coeffs = mu;

    // Lift: same combination of the echelon tensors, then re-express in
    // the input basis via the elimination transform.
    Tensor t_star = Tensor::zeros_cube(field, d, n);
    std::vector<Fp> input_coeffs(dim_v, 0);
    for (int i = 0; i < r; ++i) {
      const Fp c = mu[static_cast<std::size_t>(i)];
      if (c == 0) continue;
      const std::size_t row = pivot.selected[base_idx + static_cast<std::size_t>(i)];
      t_star = t_star + elim.basis[row].scaled(c);
      for (std::size_t k = 0; k < dim_v; ++k) {
        input_coeffs[k] = field.add(input_coeffs[k], field.mul(c, elim.transform[row][k]));
      }
    }
    interval.Tstar_coeffs = input_coeffs;

    // The lifted tensor restricted to the matching rectangle must read
    // back exactly as R.
    {
      const std::vector<int> base_coord = pivot.matching.base();
      std::vector<int> src(static_cast<std::size_t>(d));
      for (std::size_t idx = 0; idx < R.size(); ++idx) {
        const std::vector<int> q_labels = R.labels_of_flat(idx);
        for (int jj = 0; jj < d; ++jj) {
          src[static_cast<std::size_t>(jj)] =
              base_coord[static_cast<std::size_t>(jj)] + pivot.f[static_cast<std::size_t>(q_labels[static_cast<std::size_t>(jj)]) - 1];
        }
        if (t_star.at(src) != R.at_flat(idx)) {
          throw InternalCheckError("rectangle-lift", "lifted tensor does not restrict back to R");
        }
      }
    }

    w_tensors.push_back(std::move(t_star));
    cert.intervals.push_back(std::move(interval));
  }

  cert.W = SubspaceBasis(w_tensors);
  if (rank_of(cert.W) != static_cast<std::size_t>(s)) {
    throw InternalCheckError("interval-independence", "extracted tensors are dependent");
  }

  // Record the exact bias of every projective nonzero element; these are
  // the quantities the theorem bounds.
  for (const auto& coeffs : projective_vectors(p, s)) {
    Tensor elem = Tensor::zeros_cube(field, d, n);
    for (int j = 0; j < s; ++j) {
      if (coeffs[static_cast<std::size_t>(j)] != 0) {
        elem = elem + w_tensors[static_cast<std::size_t>(j)].scaled(coeffs[static_cast<std::size_t>(j)]);
      }
    }
    BiasValue b = rank::bias(elem, threads);
    if (!bias_leq_threshold(b, cert.threshold)) {
      throw InternalCheckError("certificate-element", "an element of W misses the rank floor");
    }
    cert.element_biases.push_back({coeffs, std::move(b)});
  }
  return cert;
}

VerifyReport verify_certificate(const ExtractionCertificate& cert, int threads) {
  VerifyReport rep;
  const auto fail = [&rep](const std::string& step, const std::string& detail) {
    rep.ok = false;
    rep.failed_step = step;
    rep.detail = detail;
    return rep;
  };

  // Parameters.
  if (!algebra::is_prime(cert.p)) return fail("params", "p is not prime");
  if (cert.d < 2 || cert.r < 1 || cert.t < cert.r || cert.n < cert.t) return fail("params", "need n >= t >= r >= 1, d >= 2");
  if (cert.s != cert.t / (cert.d * cert.r)) return fail("params", "s != floor(t/(d r))");
  const RankThreshold expect = rank::bias_shrink_base(cert.p, cert.d).with_power(static_cast<std::uint32_t>(cert.r));
  if (cert.threshold.base_num != expect.base_num || cert.threshold.base_den != expect.base_den ||
      cert.threshold.power != expect.power) {
    return fail("params", "threshold is not the shrink base to the power r");
  }

  // Shapes.
  if (cert.W.size() != static_cast<std::size_t>(cert.s)) return fail("shapes", "W size != s");
  if (cert.input_basis.tensors.empty()) return fail("shapes", "empty input basis");
  for (const Tensor& w : cert.W.tensors) {
    if (!w.is_principal() || w.order() != cert.d || static_cast<int>(w.axis_size(0)) != cert.n) {
      return fail("shapes", "W member is not a principal d-tensor on [n]");
    }
  }

  // Matching and pivot map.
  if (cert.f.size() != static_cast<std::size_t>(cert.r) * static_cast<std::size_t>(cert.s)) {
    return fail("matching-f", "f has wrong length");
  }
  for (std::size_t i = 1; i < cert.f.size(); ++i) {
    if (cert.f[i] <= cert.f[i - 1]) return fail("matching-f", "f is not strictly increasing");
  }
  {
    const std::vector<int> base = cert.matching.base();
    for (int fi : cert.f) {
      for (int b : base) {
        if (fi < 1 || b + fi > cert.n) return fail("matching-f", "pivot cell outside [n]^d");
      }
    }
  }

  // Membership: every W member must solve against the input basis.
  for (std::size_t j = 0; j < cert.W.size(); ++j) {
    if (!coordinates_in(cert.input_basis, cert.W[j])) {
      return fail("w-membership", "W[" + std::to_string(j + 1) + "] is outside span(V)");
    }
  }

  // Reconstruction from the recorded input-basis coefficients.
  if (cert.intervals.size() != static_cast<std::size_t>(cert.s)) return fail("w-reconstruction", "interval count != s");
  for (int j = 0; j < cert.s; ++j) {
    const auto& coeffs = cert.intervals[static_cast<std::size_t>(j)].Tstar_coeffs;
    if (coeffs.size() != cert.input_basis.size()) return fail("w-reconstruction", "coefficient arity mismatch");
    Tensor rebuilt = Tensor::zeros_cube(cert.W[0].field(), cert.d, cert.n);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      if (coeffs[k] != 0) rebuilt = rebuilt + cert.input_basis[k].scaled(coeffs[k]);
    }
    if (!(rebuilt == cert.W[static_cast<std::size_t>(j)])) {
      return fail("w-reconstruction", "W[" + std::to_string(j + 1) + "] does not match its coefficients");
    }
  }

  // Dimension.
  if (rank_of(cert.W) != static_cast<std::size_t>(cert.s)) return fail("w-dimension", "dim W != s");

  // Exact bias of every projective nonzero element.
  const auto reps = projective_vectors(cert.p, cert.s);
  if (cert.element_biases.size() != reps.size()) {
    return fail("element-bias", "expected " + std::to_string(reps.size()) + " recorded biases");
  }
  for (std::size_t e = 0; e < reps.size(); ++e) {
    Tensor elem = Tensor::zeros_cube(cert.W[0].field(), cert.d, cert.n);
    for (int j = 0; j < cert.s; ++j) {
      if (reps[e][static_cast<std::size_t>(j)] != 0) {
        elem = elem + cert.W[static_cast<std::size_t>(j)].scaled(reps[e][static_cast<std::size_t>(j)]);
      }
    }
    const BiasValue b = rank::bias(elem, threads);
    ++rep.elements_checked;
    if (cert.element_biases[e].coeffs != reps[e]) {
      return fail("element-bias", "recorded coefficient vector " + std::to_string(e) + " out of order");
    }
    if (!(b == cert.element_biases[e].bias)) {
      return fail("element-bias", "recorded bias mismatch at element " + std::to_string(e));
    }
    if (!bias_leq_threshold(b, cert.threshold)) {
      return fail("element-bias", "element " + std::to_string(e) + " exceeds the bias threshold");
    }
  }
  return rep;
}

}  // namespace trk::extract
