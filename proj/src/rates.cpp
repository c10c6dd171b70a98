#include "bcq/rates.hpp"

#include <algorithm>

namespace bcq {

Index DivergenceRate::omega(std::uint64_t N) const {
  if (N == 0) throw ValidationError("omega is defined on positive integers");
  Index result = std::visit(
      [&](const auto& r) -> Index {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Linear>) {
          return checked_mul(r.k, N);
        } else if constexpr (std::is_same_v<T, CeilDiv>) {
          if (r.q1.sgn() <= 0) throw ValidationError("ceildiv rate needs q1 > 0");
          Int v = (Rat(Int(static_cast<unsigned long>(N)), Int(1)) / r.q1).ceil();
          if (!v.fits_ulong_p()) throw OverflowError("omega(N) out of index range");
          return static_cast<Index>(v.get_ui());
        } else {  // Table
          if (N <= r.values.size()) return r.values[N - 1];
          if (r.tail) return checked_mul(r.tail->k, N);
          throw ValidationError("omega table has no entry for N = " + std::to_string(N));
        }
      },
      repr);
  if (result == 0) throw ValidationError("omega(N) must be >= 1");
  return result;
}

Index ConvergenceRate::phi(std::uint64_t l) const {
  return std::visit(
      [&](const auto& r) -> Index {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Affine>) {
          std::int64_t v = static_cast<std::int64_t>(l) + r.c;
          if (v < 1) throw ValidationError("phi(l) must be >= 1");
          return static_cast<Index>(v);
        } else {
          if (l >= r.values.size()) {
            throw ValidationError("phi table has no entry for l = " + std::to_string(l));
          }
          if (r.values[l] == 0) throw ValidationError("phi(l) must be >= 1");
          return r.values[l];
        }
      },
      repr);
}

Index LiminfWitness::eval(const EventModel& model, std::uint64_t l, Index n) const {
  return std::visit(
      [&](const auto& r) -> Index {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, MaxPow2>) {
          if (l >= 63) throw OverflowError("2^l out of index range");
          return std::max<Index>(n, Index(1) << l);
        } else if constexpr (std::is_same_v<T, Identity>) {
          return n;
        } else {
          std::lock_guard<std::mutex> lock(mu_);
          auto key = std::make_pair(l, n);
          auto it = memo_.find(key);
          if (it != memo_.end()) return it->second;
          Index m = derive_liminf_witness(model, l, n, r.budget);
          memo_.emplace(key, m);
          return m;
        }
      },
      repr_);
}

Index GFunction::eval(Index i) const {
  if (i == 0) throw ValidationError("g is defined on positive integers");
  Index v = std::visit(
      [&](const auto& r) -> Index {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Affine>) {
          return checked_add(checked_mul(r.a, i), r.c);
        } else if constexpr (std::is_same_v<T, Power>) {
          Index acc = i;
          for (std::uint32_t t = 1; t < r.e; ++t) acc = checked_mul(acc, i);
          return acc;
        } else {
          if (i > r.values.size()) {
            throw ValidationError("g table has no entry for i = " + std::to_string(i));
          }
          return r.values[i - 1];
        }
      },
      repr);
  if (v <= i) {
    throw ValidationError("g(" + std::to_string(i) + ") = " + std::to_string(v) +
                          " violates g(i) > i");
  }
  return v;
}

RateCheckResult check_divergence_rate(const EventModel& model, const DivergenceRate& omega,
                                      std::uint64_t Nmax) {
  if (Nmax < 1) throw ValidationError("check_divergence_rate: Nmax must be >= 1");
  RateCheckResult res;
  SumStatsAccumulator acc(model);
  for (std::uint64_t N = 1; N <= Nmax; ++N) {
    Index w = omega.omega(N);
    // omega need not be monotone; never rewind the accumulator.
    Rat sum_at_w;
    if (w >= acc.n()) {
      acc.advance_to(w);
      sum_at_w = acc.s();
    } else {
      SumStatsAccumulator fresh(model);
      fresh.advance_to(w);
      sum_at_w = fresh.s();
    }
    if (sum_at_w < Rat(Int(static_cast<unsigned long>(N)), Int(1))) {
      res.pass = false;
      res.first_failing_N = N;
      res.sum_at_failure = sum_at_w;
      return res;
    }
  }
  res.pass = true;
  return res;
}

DivergenceRate derive_divergence_rate(const EventModel& model, std::uint64_t Nmax,
                                      Index index_budget) {
  if (Nmax < 1) throw ValidationError("derive_divergence_rate: Nmax must be >= 1");
  DivergenceRate::Table table;
  table.values.reserve(Nmax);
  SumStatsAccumulator acc(model);
  for (std::uint64_t N = 1; N <= Nmax; ++N) {
    const Rat target{Int(static_cast<unsigned long>(N)), Int(1)};
    while (acc.n() == 0 || acc.s() < target) {
      if (acc.n() >= index_budget) {
        throw BudgetError("partial sums did not reach N = " + std::to_string(N) +
                          " within index budget " + std::to_string(index_budget));
      }
      acc.step();
    }
    table.values.push_back(acc.n());
  }
  return DivergenceRate{std::move(table)};
}

TailBoundResult tail_divergence_bound(const EventModel& model, const DivergenceRate& omega,
                                      Index n, std::uint64_t N) {
  if (n == 0 || N == 0) throw ValidationError("tail_divergence_bound: need n, N >= 1");
  TailBoundResult res;
  res.window_lo = n;
  res.window_hi = omega.omega(checked_add(n, N - 1));
  Rat tail(0);
  for (Index i = n; i <= res.window_hi; ++i) tail += model.prob(i);
  res.tail_sum = tail;
  res.pass = tail >= Rat(Int(static_cast<unsigned long>(N)), Int(1));
  return res;
}

Index derive_liminf_witness(const EventModel& model, std::uint64_t l, Index n, Index budget) {
  if (n == 0) throw ValidationError("derive_liminf_witness: n must be >= 1");
  if (budget < n) throw ValidationError("derive_liminf_witness: budget below n");
  // b/a <= 1 + 2^{-l}  <=>  a/b >= 1/(1 + 2^{-l})
  const Rat inv_threshold = Rat(1) / (Rat(1) + Rat::pow2(-static_cast<long>(l)));
  SumStatsAccumulator acc(model);
  acc.advance_to(n - 1);
  for (Index m = n; m <= budget; ++m) {
    acc.step();
    if (!acc.has_positive_sum()) continue;  // ratio undefined on zero prefix
    if (acc.ratio_view().geq(inv_threshold)) return m;
  }
  throw SearchError("no index m in [" + std::to_string(n) + ", " + std::to_string(budget) +
                    "] has b_m/a_m <= 1 + 2^-" + std::to_string(l));
}

Index iterate_g(const GFunction& g, std::uint64_t r, Index start) {
  Index v = start;
  for (std::uint64_t i = 0; i < r; ++i) v = g.eval(v);
  return v;
}

std::optional<Index> iterate_g_saturating(const GFunction& g, std::uint64_t r, Index start) {
  Index v = start;
  for (std::uint64_t i = 0; i < r; ++i) {
    try {
      v = g.eval(v);
    } catch (const OverflowError&) {
      return std::nullopt;  // iterates only grow from here
    }
  }
  return v;
}

MetastabilityResult check_metastability(const std::function<Rat(Index)>& x, std::uint64_t l,
                                        const GFunction& f, Index kmax) {
  if (kmax < 1) throw ValidationError("check_metastability: kmax must be >= 1");
  const Rat eps = Rat::pow2(-static_cast<long>(l));
  MetastabilityResult res;
  for (Index k = 1; k <= kmax; ++k) {
    Index hi = f.eval(k);
    Index lo_arg = k, hi_arg = k;
    Rat lo_val = x(k), hi_val = x(k);
    for (Index j = k + 1; j <= hi; ++j) {
      Rat v = x(j);
      if (v < lo_val) {
        lo_val = v;
        lo_arg = j;
      } else if (v > hi_val) {
        hi_val = v;
        hi_arg = j;
      }
    }
    if (hi_val - lo_val < eps) {
      res.k = k;
      return res;
    }
    res.violations.push_back({k, hi_arg, lo_arg, hi_val - lo_val});
  }
  return res;
}

}  // namespace bcq
