#pragma once

#include <mutex>
#include <optional>
#include <vector>

#include "bcq/sequence.hpp"

namespace bcq {

enum class ModelKind {
  NestedIntervals,      // A_i = [0, q_i] in the uniform unit interval
  IndependentBernoulli, // mutually independent, P[A_i] = p_i
  MutuallyExclusive,    // pairwise disjoint, running sums must stay <= 1
};

const char* to_string(ModelKind k);

// Default cap on exact counting-distribution sizes.
inline constexpr Index kDefaultCountCap = 4096;

struct SumStats {
  Index n = 0;
  Rat s;               // sum_{i<=n} P[A_i]
  Rat a;               // s^2
  Rat b;               // sum_{i,k<=n} P[A_i A_k]
  Rat off_diag_prod;   // sum_{i<k} P[A_i] P[A_k]
  Rat off_diag_joint;  // sum_{i<k} P[A_i A_k]
};

// Exact distribution of the counting variable eta_n = #{i <= n : A_i occurs}.
struct CountDistribution {
  Index n = 0;
  std::vector<Rat> pmf;  // index c = count, size n+1
  Rat mean;              // == sum of P[A_i]
  Rat variance;

  // P[eta_n <= x] for rational x.
  Rat cdf_leq(const Rat& x) const;
};

// An event sequence with exact closed-form probabilities.  Immutable and
// safe to share: the only mutable state is lazily extended validation of
// the sequence (monotone for nested, sums <= 1 for exclusive, range [0,1]
// for all), guarded by a mutex.
class EventModel {
 public:
  EventModel(ModelKind kind, Sequence seq);
  EventModel(const EventModel& o);  // copies start with fresh validation state
  EventModel(EventModel&&) = default;
  EventModel& operator=(const EventModel&) = delete;
  EventModel& operator=(EventModel&&) = default;

  ModelKind kind() const { return kind_; }
  const Sequence& sequence() const { return seq_; }

  // P[A_i], exact, in [0,1].
  Rat prob(Index i) const;
  // P[A_i A_k]; symmetric, joint(i,i) = prob(i).
  Rat joint(Index i, Index k) const;
  // P[union of A_i over n <= i <= m], exact.
  Rat union_prob(Index n, Index m) const;
  // The five partial sums at n (one-shot; use SumStatsAccumulator in loops).
  SumStats sum_stats(Index n) const;
  // Exact pmf of eta_n.
  CountDistribution count_distribution(Index n, Index cap = kDefaultCountCap) const;

 private:
  friend class SumStatsAccumulator;
  friend class UnionAccumulator;

  // Lazily extended validation state, shared by all queries.
  struct LazyCheck {
    std::mutex mu;
    Index validated_to = 0;
    Rat last_term;   // nested: q at validated_to
    Rat prefix_sum;  // exclusive: sum of p_i up to validated_to
  };

  // Extends term validation up to index i.
  void validate_to(Index i) const;

  ModelKind kind_;
  Sequence seq_;
  std::unique_ptr<LazyCheck> check_;
};

// Incremental sum statistics: advancing by one index is O(1) exact rational
// work.  Internally keeps integer numerators over a running common
// denominator D (a = S^2/D^2 and so on), so no per-step gcds on large
// operands are needed; canonical values are produced on export.
// Per-consumer object; the model itself stays immutable.
class SumStatsAccumulator {
 public:
  explicit SumStatsAccumulator(const EventModel& model);

  Index n() const { return n_; }
  void step();                 // advance to index n()+1
  void advance_to(Index n);    // no-op if already past

  SumStats stats() const;      // canonical export at current n
  Rat s() const;
  Rat ratio() const;           // a/b; requires s > 0
  bool has_positive_sum() const { return sgn(S_) > 0; }
  bool b_geq_a() const;        // decides b >= a without canonicalization

  // a/b as a non-canonical integer fraction, valid at the current n.
  struct RatioView {
    Int num, den;  // den > 0
    bool leq(const Rat& t) const { return num * t.den() <= t.num() * den; }
    bool geq(const Rat& t) const { return num * t.den() >= t.num() * den; }
  };
  // requires s > 0
  RatioView ratio_view() const;

 private:
  const EventModel* model_;
  ModelKind kind_;
  Index n_ = 0;
  Int d_{1};    // common denominator of p_1..p_n
  Int d2_{1};   // d_^2, maintained incrementally
  Int S_{0};    // s * d_
  Int QN_{0};   // (sum p_i^2) * d_^2
  Int OJ_{0};   // nested only: off_diag_joint * d_
};

// Incremental P[union over [start, end]] with fixed start and growing end.
class UnionAccumulator {
 public:
  UnionAccumulator(const EventModel& model, Index start);

  Index end() const { return end_; }
  void extend_to(Index end);  // no-op if already past
  // Union over [start, end]; Rat(0) while the window is empty.
  Rat value() const;
  // Independent models only: the complement product prod (1 - p_i).
  Rat complement() const;

 private:
  const EventModel* model_;
  ModelKind kind_;
  Index start_, end_;  // window is [start_, end_], empty when end_ < start_
  Int comp_num_{1}, comp_den_{1};  // independent: product of (pd-pn) / pd
  Rat sum_;                        // exclusive: running sum
};

}  // namespace bcq
