#include "bcq/model.hpp"

#include <algorithm>

namespace bcq {

const char* to_string(ModelKind k) {
  switch (k) {
    case ModelKind::NestedIntervals: return "nested";
    case ModelKind::IndependentBernoulli: return "independent";
    case ModelKind::MutuallyExclusive: return "exclusive";
  }
  return "?";
}

Rat CountDistribution::cdf_leq(const Rat& x) const {
  Rat acc(0);
  for (Index c = 0; c < pmf.size(); ++c) {
    if (Rat(static_cast<long>(c)) > x) break;
    acc += pmf[c];
  }
  return acc;
}

EventModel::EventModel(ModelKind kind, Sequence seq)
    : kind_(kind), seq_(std::move(seq)), check_(std::make_unique<LazyCheck>()) {}

EventModel::EventModel(const EventModel& o)
    : kind_(o.kind_), seq_(o.seq_), check_(std::make_unique<LazyCheck>()) {}

void EventModel::validate_to(Index i) const {
  LazyCheck& st = *check_;
  std::lock_guard<std::mutex> lock(st.mu);
  while (st.validated_to < i) {
    Index j = st.validated_to + 1;
    Rat t = seq_.at(j);
    if (t.sgn() < 0 || t > Rat(1)) {
      throw ModelInvariantError("term " + std::to_string(j) + " = " + t.to_string() +
                                " outside [0, 1]");
    }
    switch (kind_) {
      case ModelKind::NestedIntervals:
        if (t < st.last_term) {
          throw ModelInvariantError("nested sequence decreases at index " + std::to_string(j));
        }
        st.last_term = t;
        break;
      case ModelKind::MutuallyExclusive:
        st.prefix_sum += t;
        if (st.prefix_sum > Rat(1)) {
          throw ModelInvariantError("mutually exclusive probabilities sum to " +
                                    st.prefix_sum.to_string() + " > 1 by index " +
                                    std::to_string(j));
        }
        break;
      case ModelKind::IndependentBernoulli:
        break;
    }
    st.validated_to = j;
  }
}

Rat EventModel::prob(Index i) const {
  if (i == 0) throw ValidationError("prob: index must be >= 1");
  validate_to(i);
  return seq_.at(i);
}

Rat EventModel::joint(Index i, Index k) const {
  if (i == 0 || k == 0) throw ValidationError("joint: indices must be >= 1");
  validate_to(std::max(i, k));
  if (i == k) return seq_.at(i);
  switch (kind_) {
    case ModelKind::NestedIntervals:
      // [0, q_i] cap [0, q_k] = [0, q_min(i,k)]
      return seq_.at(std::min(i, k));
    case ModelKind::IndependentBernoulli:
      return seq_.at(i) * seq_.at(k);
    case ModelKind::MutuallyExclusive:
      return Rat(0);
  }
  throw Error("unreachable");
}

Rat EventModel::union_prob(Index n, Index m) const {
  if (n == 0 || n > m) throw ValidationError("union_prob: need 1 <= n <= m");
  UnionAccumulator acc(*this, n);
  acc.extend_to(m);
  return acc.value();
}

SumStats EventModel::sum_stats(Index n) const {
  if (n == 0) throw ValidationError("sum_stats: n must be >= 1");
  SumStatsAccumulator acc(*this);
  acc.advance_to(n);
  return acc.stats();
}

CountDistribution EventModel::count_distribution(Index n, Index cap) const {
  if (n == 0) throw ValidationError("count_distribution: n must be >= 1");
  validate_to(n);
  CountDistribution dist;
  dist.n = n;
  switch (kind_) {
    case ModelKind::IndependentBernoulli: {
      if (n > cap) {
        throw BudgetError("count_distribution: n = " + std::to_string(n) +
                          " exceeds cap " + std::to_string(cap));
      }
      // Poisson-binomial pmf by incremental convolution.
      std::vector<Rat> conv{Rat(1)};
      for (Index i = 1; i <= n; ++i) {
        Rat p = seq_.at(i);
        Rat q = Rat(1) - p;
        std::vector<Rat> next(conv.size() + 1);
        for (std::size_t c = 0; c < conv.size(); ++c) {
          if (!conv[c].is_zero()) {
            next[c] += conv[c] * q;
            next[c + 1] += conv[c] * p;
          }
        }
        conv = std::move(next);
      }
      dist.pmf = std::move(conv);
      break;
    }
    case ModelKind::NestedIntervals: {
      // eta_n is a staircase of the uniform point x: count c >= 1 happens on
      // (q_{n-c}, q_{n-c+1}] with q_0 = 0; count 0 on (q_n, 1].
      dist.pmf.assign(n + 1, Rat(0));
      dist.pmf[0] = Rat(1) - seq_.at(n);
      for (Index c = 1; c <= n; ++c) {
        Rat hi = seq_.at(n - c + 1);
        Rat lo = (c == n) ? Rat(0) : seq_.at(n - c);
        dist.pmf[c] = hi - lo;
      }
      break;
    }
    case ModelKind::MutuallyExclusive: {
      dist.pmf.assign(n + 1, Rat(0));
      Rat total(0);
      for (Index i = 1; i <= n; ++i) total += seq_.at(i);
      dist.pmf[1] = total;
      dist.pmf[0] = Rat(1) - total;
      break;
    }
  }
  Rat sum(0), m1(0), m2(0);
  for (Index c = 0; c < dist.pmf.size(); ++c) {
    const Rat& p = dist.pmf[c];
    sum += p;
    Rat rc(static_cast<long>(c));
    m1 += rc * p;
    m2 += rc * rc * p;
  }
  if (sum != Rat(1)) throw Error("count_distribution: pmf does not sum to 1");
  dist.mean = m1;
  dist.variance = m2 - m1 * m1;
  return dist;
}

// ---------------------------------------------------------------------------

SumStatsAccumulator::SumStatsAccumulator(const EventModel& model)
    : model_(&model), kind_(model.kind()) {}

void SumStatsAccumulator::step() {
  Index j = n_ + 1;
  Rat p = model_->prob(j);
  const Int& pn = p.num();
  const Int& pd = p.den();

  Int g;
  mpz_gcd(g.get_mpz_t(), d_.get_mpz_t(), pd.get_mpz_t());
  Int f = pd / g;
  if (f != 1) {
    // Rescale every numerator to the enlarged common denominator.
    d_ *= f;
    Int f2 = f * f;
    d2_ *= f2;
    S_ *= f;
    QN_ *= f2;
    if (kind_ == ModelKind::NestedIntervals) OJ_ *= f;
  }
  Int scale = d_ / pd;
  Int P = pn * scale;
  if (kind_ == ModelKind::NestedIntervals) {
    // new pairs (i, j), i < j, each contribute q_i: adds s_{j-1}
    OJ_ += S_;
  }
  S_ += P;
  QN_ += pn * pn * (d2_ / (pd * pd));
  n_ = j;
}

void SumStatsAccumulator::advance_to(Index n) {
  while (n_ < n) step();
}

Rat SumStatsAccumulator::s() const { return Rat(S_, d_); }

SumStats SumStatsAccumulator::stats() const {
  if (n_ == 0) throw ValidationError("sum_stats: n must be >= 1");
  SumStats st;
  st.n = n_;
  st.s = Rat(S_, d_);
  st.a = st.s * st.s;
  Int s2 = S_ * S_;
  st.off_diag_prod = Rat(s2 - QN_, 2 * d2_);
  switch (kind_) {
    case ModelKind::NestedIntervals:
      st.off_diag_joint = Rat(OJ_, d_);
      break;
    case ModelKind::IndependentBernoulli:
      st.off_diag_joint = st.off_diag_prod;
      break;
    case ModelKind::MutuallyExclusive:
      st.off_diag_joint = Rat(0);
      break;
  }
  st.b = st.s + Rat(2) * st.off_diag_joint;
  return st;
}

bool SumStatsAccumulator::b_geq_a() const {
  Int s2 = S_ * S_;
  switch (kind_) {
    case ModelKind::NestedIntervals:
      return (S_ + 2 * OJ_) * d_ >= s2;
    case ModelKind::IndependentBernoulli:
      // b - a = (S d + S^2 - QN)/d^2 - S^2/d^2
      return S_ * d_ >= QN_;
    case ModelKind::MutuallyExclusive:
      return d_ >= S_ || S_ == 0;  // s >= s^2 since s <= 1
  }
  throw Error("unreachable");
}

SumStatsAccumulator::RatioView SumStatsAccumulator::ratio_view() const {
  if (sgn(S_) <= 0) throw ValidationError("ratio: zero partial sum");
  RatioView v;
  switch (kind_) {
    case ModelKind::NestedIntervals:
      // a/b = S^2 / (d * (S + 2 OJ))
      v.num = S_ * S_;
      v.den = d_ * (S_ + 2 * OJ_);
      break;
    case ModelKind::IndependentBernoulli:
      // a/b = S^2 / (S d + S^2 - QN)
      v.num = S_ * S_;
      v.den = S_ * d_ + S_ * S_ - QN_;
      break;
    case ModelKind::MutuallyExclusive:
      // b = s, so a/b = s
      v.num = S_;
      v.den = d_;
      break;
  }
  return v;
}

Rat SumStatsAccumulator::ratio() const {
  RatioView v = ratio_view();
  return Rat(v.num, v.den);
}

// ---------------------------------------------------------------------------

UnionAccumulator::UnionAccumulator(const EventModel& model, Index start)
    : model_(&model), kind_(model.kind()), start_(start), end_(0), sum_(0) {
  if (start == 0) throw ValidationError("union window start must be >= 1");
  end_ = start - 1;
}

void UnionAccumulator::extend_to(Index end) {
  while (end_ < end) {
    Index j = end_ + 1;
    Rat p = model_->prob(j);
    switch (kind_) {
      case ModelKind::IndependentBernoulli:
        comp_num_ *= p.den() - p.num();
        comp_den_ *= p.den();
        break;
      case ModelKind::MutuallyExclusive:
        sum_ += p;
        if (sum_ > Rat(1)) {
          throw ModelInvariantError("mutually exclusive union over [" +
                                    std::to_string(start_) + ", " + std::to_string(j) +
                                    "] exceeds 1");
        }
        break;
      case ModelKind::NestedIntervals:
        break;  // union is just q_end, already validated monotone
    }
    end_ = j;
  }
}

Rat UnionAccumulator::value() const {
  if (end_ < start_) return Rat(0);
  switch (kind_) {
    case ModelKind::IndependentBernoulli:
      return Rat(comp_den_ - comp_num_, comp_den_);
    case ModelKind::MutuallyExclusive:
      return sum_;
    case ModelKind::NestedIntervals:
      return model_->prob(end_);
  }
  throw Error("unreachable");
}

Rat UnionAccumulator::complement() const {
  if (kind_ != ModelKind::IndependentBernoulli) {
    throw ValidationError("complement product defined for independent models only");
  }
  return Rat(comp_num_, comp_den_);
}

}  // namespace bcq
