#include "bcq/interval.hpp"

namespace bcq {

RatInterval exp_neg_enclosure(unsigned N, unsigned prec) {
  if (N < 1) throw ValidationError("exp_neg_enclosure: N must be >= 1");
  if (prec < 1) throw ValidationError("exp_neg_enclosure: prec must be >= 1");

  // Work to half the requested width so the enclosure is comfortably inside
  // its contract even after the reciprocal step.
  const Rat target = Rat::pow2(-(static_cast<long>(prec) + 1));
  const Rat rn(static_cast<long>(N));

  // S = sum_{k<=K} N^k / k!, t = N^K / K!.  Start at K = N + 1 so the
  // geometric tail bound below is valid (ratio N/(K+2) < 1).
  Rat s(1), t(1);
  Index k = 0;
  while (k < static_cast<Index>(N) + 1) {
    ++k;
    t = t * rn / Rat(static_cast<long>(k));
    s += t;
  }

  for (;;) {
    // Tail from term K+1 on:  t_{K+1} * (1 + N/(K+2) + (N/(K+2))^2 + ...)
    Rat tnext = t * rn / Rat(static_cast<long>(k) + 1);
    Rat bound = tnext * Rat(static_cast<long>(k) + 2) /
                Rat(static_cast<long>(k) + 2 - static_cast<long>(N));
    // e^N in [S, S + bound], so e^{-N} in [1/(S+bound), 1/S].
    Rat width = bound / (s * (s + bound));
    if (width <= target) {
      return RatInterval(Rat(1) / (s + bound), Rat(1) / s);
    }
    ++k;
    t = tnext;
    s += t;
  }
}

CompareResult compare_rational_vs_enclosed(
    const Rat& p, const std::function<RatInterval(unsigned)>& make_enclosure,
    unsigned max_prec) {
  for (unsigned prec = 4;; prec *= 2) {
    if (prec > max_prec) {
      throw BudgetError("comparison undecided at precision budget " +
                        std::to_string(max_prec) + " bits");
    }
    RatInterval e = make_enclosure(prec);
    if (p < e.lo) return {Ordering::Less, std::move(e), prec};
    if (p > e.hi) return {Ordering::Greater, std::move(e), prec};
  }
}

}  // namespace bcq
