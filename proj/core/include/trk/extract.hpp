#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trk/basis.hpp"
#include "trk/bias.hpp"
#include "trk/tensor.hpp"

namespace trk::extract {

using algebra::Fp;
using algebra::SubspaceBasis;
using algebra::Tensor;
using rank::BiasValue;
using rank::RankThreshold;

// A diagonal matching of [n]^d: the cells base + (i,...,i), where base
// has a zero in slot `zero_axis` (1-based) and the remaining slots hold
// `offsets` (values in 0..n-1). No two cells share any axis coordinate.
struct MatchingId {
  int zero_axis = 1;
  std::vector<int> offsets;  // d-1 entries

  int order() const { return static_cast<int>(offsets.size()) + 1; }
  std::vector<int> base() const;  // d entries, 0-based, zero at zero_axis

  bool operator==(const MatchingId& o) const {
    return zero_axis == o.zero_axis && offsets == o.offsets;
  }
  bool operator<(const MatchingId& o) const {
    if (zero_axis != o.zero_axis) return zero_axis < o.zero_axis;
    return offsets < o.offsets;
  }
};

// Cells of the matching inside [n]^d, in diagonal order. Empty when the
// largest offset reaches n.
std::vector<std::vector<int>> matching_cells(const MatchingId& id, int n);

// The canonical matching containing `coord`: subtract min(coord)-1 from
// every entry to land on the matching's smallest cell. Total on [n]^d.
MatchingId cover_assign(const std::vector<int>& coord, int n);

// All valid MatchingIds for given n, d: exactly d * n^(d-1) of them.
std::vector<MatchingId> all_matchings(int n, int d);

// A matching holding many lex leads, with the selected pivots.
struct PivotInfo {
  MatchingId matching;
  std::vector<std::size_t> selected;  // indices into the lead list, f-sorted
  std::vector<int> f;                 // strictly increasing diagonal positions
};

// Pigeonhole over the canonical cover: some matching holds >= ceil(t/d)
// of the (pairwise distinct) leads; returns it with the rs = r*floor(t/(dr))
// smallest-f pivots. Ties between matchings break to the lex-least id.
PivotInfo pigeonhole_select(const std::vector<std::vector<int>>& leads, int n, int d, int t, int r);

// The rs x ... x rs tensor reading T at base + (f(i_1), ..., f(i_d)).
// Checks that slot `slot` (1-based position within the selection) is the
// lex lead and that the restriction below it is single-entry.
Tensor build_Q(const Tensor& T, const PivotInfo& pivot, int slot);

// One induction step: given R and Q on common labels (the current
// window), with Q supported only on the window's last diagonal cell,
// pick the lambda minimizing the exact bias of R + lambda Q (smallest
// lambda on ties). The returned bias is certified to be at most
// base * bias(R restricted below the window's last label), the
// constructive form of the averaging existence argument.
struct BoostResult {
  Fp lambda = 0;
  BiasValue boosted;  // bias(R + lambda Q)
  BiasValue base;     // bias of R minus the last label
};
BoostResult lambda_boost(const Tensor& R, const Tensor& Q, const RankThreshold& shrink, int threads = 1);

struct IntervalData {
  std::vector<std::size_t> members;   // positions in [rs] (1-based)
  std::vector<Fp> lambdas;            // r-1 chosen multipliers
  std::vector<Fp> R_coeffs;           // over Q_members
  std::vector<Fp> Tstar_coeffs;       // over the input basis
};

// Re-checkable record of one extraction run.
struct ExtractionCertificate {
  std::uint32_t p = 2;
  int d = 2, n = 0, t = 0, r = 1, s = 0;
  MatchingId matching;
  std::vector<int> f;                      // rs values
  std::vector<std::size_t> selected;       // echelon-basis rows on the matching
  std::vector<IntervalData> intervals;     // s entries
  RankThreshold threshold;                 // shrink base with power r
  // One exact bias per projective nonzero coefficient vector over W.
  struct ElementBias {
    std::vector<Fp> coeffs;
    BiasValue bias;
  };
  std::vector<ElementBias> element_biases;
  SubspaceBasis input_basis;  // V as supplied
  SubspaceBasis W;            // the extracted span
};

// The constructive pipeline: eliminate, pigeonhole onto one diagonal
// matching, build the Q tensors, run the per-interval boost induction
// and lift the results back into V. Every proof-step fact is asserted at
// runtime; failures raise InternalCheckError carrying the step name.
//
// Preconditions: principal d-tensors on [n], n >= t >= r >= 1,
// floor(t/(d r)) >= 1 and dim span(V) >= t n^(d-1).
ExtractionCertificate extract_subspace(const SubspaceBasis& V, int t, int r, int threads = 1);

struct VerifyReport {
  bool ok = true;
  std::string failed_step;  // empty when ok
  std::string detail;
  std::size_t elements_checked = 0;
};

// Independent re-check of a certificate: parameter sanity, W membership
// in span(V) by solving linear systems, dim(W) = s, and the exact bias
// of every projective nonzero element of W against the threshold and the
// recorded values. Stops at the first counterexample.
VerifyReport verify_certificate(const ExtractionCertificate& cert, int threads = 1);

// Projective representatives of F_p^s minus 0: first nonzero entry 1.
std::vector<std::vector<Fp>> projective_vectors(std::uint32_t p, int s);

}  // namespace trk::extract
