#pragma once

#include <functional>

#include "bcq/rational.hpp"

namespace bcq {

// Rational interval enclosing a real number.
struct RatInterval {
  Rat lo, hi;

  RatInterval(Rat l, Rat h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo > hi) throw ValidationError("RatInterval: lo > hi");
  }

  Rat width() const { return hi - lo; }
  Rat mid() const { return (lo + hi) / 2; }
  bool contains(const Rat& x) const { return lo <= x && x <= hi; }
  // this entirely inside o
  bool inside(const RatInterval& o) const { return o.lo <= lo && hi <= o.hi; }
};

// Default cap on enclosure refinement, in bits.  Overridable per call and,
// in the CLI, via BCQ_PRECISION_BUDGET.
inline constexpr unsigned kDefaultPrecisionBudget = 512;

// Enclosure of e^{-N} of width at most 2^{-prec}, both endpoints in (0, 1).
// Computed as the reciprocal of a truncated Taylor series for e^N with an
// explicit rational bound on the dropped tail; entirely rational.
// Enclosures of the same N are nested as prec grows.
RatInterval exp_neg_enclosure(unsigned N, unsigned prec);

enum class Ordering { Less, Greater };

struct CompareResult {
  Ordering order;
  RatInterval enclosure;  // the refinement that decided the comparison
  unsigned prec;          // its precision parameter
};

// Decides p <> x for the real x enclosed by make_enclosure, by refining the
// enclosure with doubled precision until it separates from p.  Requires that
// p can never equal x (true for x = e^{-N}, which is irrational).  Throws
// BudgetError once prec would exceed max_prec: loud, never silently wrong.
CompareResult compare_rational_vs_enclosed(
    const Rat& p, const std::function<RatInterval(unsigned)>& make_enclosure,
    unsigned max_prec = kDefaultPrecisionBudget);

}  // namespace bcq
