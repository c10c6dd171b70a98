#pragma once

#include "bcq/rates.hpp"

namespace bcq::oracle {

// Brute-force reference computations on small instances.  These deliberately
// share no code with the closed forms they validate: unions and counting
// distributions come from explicit atom enumeration or interval
// decomposition, and the Kochen-Stone witness from a plain linear scan.

struct AtomSpace {
  struct Atom {
    Rat weight;
    std::vector<bool> membership;  // over events n..m, membership[i - n]
  };
  std::vector<Atom> atoms;  // weights >= 0, summing to exactly 1
};

// Finite decomposition of the sample space restricted to events n..m.
// Independent models enumerate all 2^(m-n+1) outcomes, so the window is
// capped at 16 events; nested and exclusive models decompose linearly.
AtomSpace enumerate_atoms(const EventModel& model, Index n, Index m);

// Exact union probability over [n, m] by atom enumeration.
Rat brute_union(const EventModel& model, Index n, Index m);

// Exact pmf of eta_n by atom enumeration over events 1..n.
CountDistribution brute_count_dist(const EventModel& model, Index n);

// Least n in (m, scan_limit] with
//   for all j in [n, g(n)]: P[union_{i=m+1}^n A_i] + 2^{-l} >= a_j/b_j,
// by scanning every candidate.  Throws SearchError when none qualifies.
Index min_witness_scan(const EventModel& model, Index m, std::uint64_t l, const GFunction& g,
                       Index scan_limit);

}  // namespace bcq::oracle
