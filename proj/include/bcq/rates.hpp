#pragma once

#include <functional>
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "bcq/model.hpp"

namespace bcq {

// omega: N |-> index, a claimed rate of divergence for the partial sums,
// i.e. sum_{i <= omega(N)} P[A_i] >= N for every checked N.
struct DivergenceRate {
  struct Linear {
    std::uint64_t k = 1;  // omega(N) = k*N
  };
  struct CeilDiv {
    Rat q1;  // omega(N) = ceil(N / q1), q1 > 0
  };
  struct Table {
    std::vector<Index> values;      // omega(1), omega(2), ...
    std::optional<Linear> tail;     // for N past the table, when present
  };
  std::variant<Linear, CeilDiv, Table> repr;

  // N >= 1; result >= 1.  Overflow and out-of-table queries are loud.
  Index omega(std::uint64_t N) const;
};

// phi: l |-> index with sum_{i=phi(l)}^m P[A_i] <= 2^{-l} for all m > phi(l).
struct ConvergenceRate {
  struct Affine {
    std::int64_t c = 1;  // phi(l) = l + c
  };
  struct Table {
    std::vector<Index> values;  // phi(0), phi(1), ...
  };
  std::variant<Affine, Table> repr;

  Index phi(std::uint64_t l) const;  // result >= 1
};

// phi(l, n): an index m >= n where the Chung-Erdos ratio b_m/a_m has come
// within 2^{-l} of 1.  Either a closed form or a model-driven search with a
// memo of found indices (synchronized; the model stays immutable).
class LiminfWitness {
 public:
  struct MaxPow2 {};    // phi(l, n) = max(n, 2^l)
  struct Identity {};   // phi(l, n) = n
  struct Searched {
    Index budget = 1u << 20;
  };
  using Repr = std::variant<MaxPow2, Identity, Searched>;

  explicit LiminfWitness(Repr repr) : repr_(std::move(repr)) {}
  LiminfWitness(const LiminfWitness&) = delete;
  LiminfWitness& operator=(const LiminfWitness&) = delete;

  const Repr& repr() const { return repr_; }

  // Throws SearchError if a Searched witness exhausts its budget.
  Index eval(const EventModel& model, std::uint64_t l, Index n) const;

 private:
  Repr repr_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<std::uint64_t, Index>, Index> memo_;
};

// g: index -> index with g(i) > i, the interval builder of the metastable
// formulation.
struct GFunction {
  struct Affine {
    std::uint64_t a = 1, c = 1;  // g(n) = a*n + c; a >= 1 and a + c >= 2
  };
  struct Power {
    std::uint32_t e = 2;  // g(n) = n^e, e >= 2
  };
  struct Table {
    std::vector<Index> values;  // g(1), g(2), ...
  };
  std::variant<Affine, Power, Table> repr;

  // Checks g(i) > i at every evaluation; overflow is loud.
  Index eval(Index i) const;
};

// --------------------------------------------------------------------------

struct RateCheckResult {
  bool pass = false;
  std::optional<std::uint64_t> first_failing_N;
  Rat sum_at_failure;  // the offending partial sum when failing

  explicit operator bool() const { return pass; }
};

// Verifies sum_{i<=omega(N)} P[A_i] >= N exactly for all N <= Nmax.
RateCheckResult check_divergence_rate(const EventModel& model, const DivergenceRate& omega,
                                      std::uint64_t Nmax);

// Least omega(N) per N <= Nmax, as a Table rate; minimality is by
// construction (the sum at omega(N)-1 is < N).  Throws BudgetError if the
// partial sums do not reach Nmax within index_budget.
DivergenceRate derive_divergence_rate(const EventModel& model, std::uint64_t Nmax,
                                      Index index_budget = 1u << 22);

struct TailBoundResult {
  bool pass = false;
  Rat tail_sum;          // sum_{i=n}^{omega(n+N-1)} P[A_i]
  Index window_lo = 0, window_hi = 0;
};

// The divergence lemma: a valid rate pushes every tail window past N.
TailBoundResult tail_divergence_bound(const EventModel& model, const DivergenceRate& omega,
                                      Index n, std::uint64_t N);

// Least m in [n, budget] with b_m/a_m <= 1 + 2^{-l}, decided exactly.
// Throws SearchError when no such m exists within budget (the liminf
// hypothesis may genuinely fail for the model).
Index derive_liminf_witness(const EventModel& model, std::uint64_t l, Index n, Index budget);

// g applied r times to start.
Index iterate_g(const GFunction& g, std::uint64_t r, Index start);

// g applied r times with saturation instead of overflow: nullopt means the
// value left the index range (any index is trivially below it).
std::optional<Index> iterate_g_saturating(const GFunction& g, std::uint64_t r, Index start);

struct MetastabilityViolation {
  Index k = 0, m = 0, n = 0;  // |x_m - x_n| >= 2^{-l} with m, n in [k, f(k)]
  Rat diff;
};

struct MetastabilityResult {
  std::optional<Index> k;  // least stable k when found
  std::vector<MetastabilityViolation> violations;  // one per failing k

  explicit operator bool() const { return k.has_value(); }
};

// Least k <= kmax such that |x_m - x_n| < 2^{-l} for all m, n in [k, f(k)].
MetastabilityResult check_metastability(const std::function<Rat(Index)>& x, std::uint64_t l,
                                        const GFunction& f, Index kmax);

}  // namespace bcq
