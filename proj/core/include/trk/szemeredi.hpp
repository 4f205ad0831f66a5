#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "trk/basis.hpp"
#include "trk/bias.hpp"
#include "trk/tensor.hpp"

namespace trk::szemeredi {

using algebra::Fp;
using algebra::PrimeField;
using algebra::SubspaceBasis;
using algebra::Tensor;

inline constexpr const char* kGeneratorId = "splitmix64/mt19937_64";

// Seedable stream RNG: stream i is mt19937_64 keyed by splitmix64-mixing
// (seed, i), so trials are independent and schedule-free.
class StreamRng {
 public:
  StreamRng(std::uint64_t seed, std::uint64_t stream);
  std::uint64_t next();
  Fp uniform_mod(std::uint32_t p);  // unbiased via rejection

 private:
  std::mt19937_64 eng_;
};

std::vector<std::vector<Fp>> sample_points(int n, const PrimeField& field, int count, StreamRng& rng);

// Linear independence of the degree-d powers of the points, decided on
// the compressed monomial coordinates (an equivalent representation).
// Requires p > d.
bool veronese_independent(const PrimeField& field, const std::vector<std::vector<Fp>>& points, int d);

// A nonzero symmetric (k-1)-tensor T with <T, s tensor-power (k-1)> = 1
// for every s in S, found by solving the linear system in monomial
// coordinates. Requires the powers of S independent and p >= k. The
// zero set of the associated form then blocks k-term progressions with
// differences in S; that property is established behaviorally by
// verify_no_ap, never assumed.
Tensor construct_blocker(const PrimeField& field, const std::vector<std::vector<Fp>>& S, int k);

// Zero set A = {x : T(x, ..., x) = 0} of a blocker form, enumerated
// explicitly when p^n is small enough and kept as a predicate otherwise.
struct ZeroSet {
  Tensor blocker;
  int k = 3;
  int n = 0;
  bool enumerated = false;
  std::vector<std::uint8_t> member;  // indexed by point index when enumerated
  std::uint64_t size = 0;            // |A| when enumerated

  ZeroSet(Tensor b, int k_) : blocker(std::move(b)), k(k_), n(static_cast<int>(blocker.axis_size(0))) {}

  bool contains(const std::vector<Fp>& x) const;
};

inline constexpr std::uint64_t kExplicitSetLimit = 1'000'000;     // points
inline constexpr std::uint64_t kExhaustiveScanLimit = 10'000'000; // points * |S|
inline constexpr std::uint64_t kSampledPairs = 100'000;

ZeroSet zero_set(const Tensor& blocker, int k, std::uint64_t explicit_limit = kExplicitSetLimit,
                 int threads = 1);

// Point index <-> coordinate vector, coordinate 0 least significant.
std::vector<Fp> point_of_index(std::uint64_t idx, int n, std::uint32_t p);

enum class ApScanMode { Auto, Exhaustive, Sampled };

struct ApCheck {
  bool ok = true;
  ApScanMode mode = ApScanMode::Exhaustive;
  std::uint64_t pairs_checked = 0;
  std::optional<std::pair<std::vector<Fp>, std::vector<Fp>>> counterexample;  // (x, s)
};

// No x and s in S\{0} with x, x+s, ..., x+(k-1)s all inside A. The
// "proper" reading is s != 0; with p >= k the k points are distinct.
ApCheck verify_no_ap(const ZeroSet& A, const std::vector<std::vector<Fp>>& S,
                     ApScanMode mode = ApScanMode::Auto, int threads = 1,
                     StreamRng* sample_rng = nullptr);

struct CwCheck {
  bool applicable = false;  // n > k-1
  bool divisible = false;   // |A| = 0 mod p
  bool nonempty = false;    // |A| >= p
  double density = 0.0;
};

CwCheck chevalley_warning_check(const ZeroSet& A, std::uint32_t p);

struct SimParams {
  std::uint32_t p = 5;
  int k = 3;          // progression length; the tensor order is k-1
  int n = 4;
  int samples = 0;    // |S|; when < 0, derived from C_knob (see below)
  int trials = 1;
  std::uint64_t seed = 0;
  double C_knob = 1.0;
  int threads = 1;
};

struct TrialRecord {
  bool independent = false;
  bool blocker_found = false;
  bool ap_free = false;
  std::string ap_mode;       // "exhaustive" / "sampled" / ""
  std::uint64_t set_size = 0;
  double density = 0.0;
  bool set_enumerated = false;
  bool cw_applicable = false;
  bool cw_ok = false;
};

struct SimReport {
  SimParams params;
  std::string generator = kGeneratorId;
  std::uint64_t monomial_dim = 0;   // m = C(n+k-2, k-1)
  int derived_samples = 0;          // m - ceil(C_knob (log_p n)^2 n^(k-2)) clamp 0
  double independence_floor = 0.0;  // (1 - 2/m^2)^s
  std::vector<TrialRecord> trials;
  double independence_rate = 0.0;
  double ap_free_rate = 0.0;   // among independent trials
  double mean_density = 0.0;   // among enumerated trials
  double wall_ms = 0.0;
};

// Repeated sampling + independence test (no blocker pipeline).
SimReport independence_experiment(const SimParams& params);

// Full per-trial pipeline: sample, test independence, build the blocker,
// enumerate its zero set, scan for progressions, divisibility check.
SimReport randomized_szemeredi_demo(const SimParams& params);

struct TailReport {
  bool ok = true;
  int dim = 0;                       // m = dim W
  std::string mean_bias_num;         // sum of bias numerators over W
  std::uint32_t mean_bias_exp = 0;   // over p^(m+exp)
  double mean_bias = 0.0;
  double membership_prob = 0.0;      // Pr_x[power of x orthogonal to W]
  bool exact = true;                 // exhaustive x-enumeration used
  bool power_link_ok = false;        // Pr <= (E bias)^(1/2^(d-1))
  bool mean_link_ok = false;         // E bias <= 1/p^m + (1-1/p^m) rho^r
};

// The two checkable links in the tail bound for the diagonal power map:
// (a) the membership probability against the mean-bias power, and
// (b) the mean bias against the certificate rank floor rho^r.
// W must be a basis of symmetric cube tensors.
TailReport tail_bound_check(const SubspaceBasis& W, const rank::RankThreshold& floor,
                            int threads = 1, std::uint64_t exact_limit = kExplicitSetLimit,
                            std::uint64_t mc_samples = kSampledPairs,
                            std::uint64_t mc_seed = 0);

}  // namespace trk::szemeredi
