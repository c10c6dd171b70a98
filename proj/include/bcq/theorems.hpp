#pragma once

#include <functional>
#include <utility>

#include "bcq/certificate.hpp"
#include "bcq/rates.hpp"

namespace bcq {

// Certificate-producing checkers.  Each one verifies the hypotheses of its
// theorem exactly, computes both sides of the concluded inequality exactly,
// and returns a Certificate with the margin.  Hypothesis failures yield a
// Fail verdict (the trace says why), precondition misuse throws.

// First Borel-Cantelli, quantitative: with phi a rate of convergence for the
// partial sums, P[union_{i=phi(l)}^m A_i] <= 2^{-l}.
Certificate first_bc(const EventModel& model, const ConvergenceRate& phi, std::uint64_t l,
                     Index m);

// Second Borel-Cantelli, quantitative: for mutually independent events whose
// partial sums diverge with rate omega,
//   P[union_{i=n}^{omega(n+N-1)} A_i] >= 1 - e^{-N}.
// The comparison against the transcendental right side is decided by
// adaptive enclosure refinement; exhausting the refinement budget gives an
// Undecided verdict.
Certificate second_bc(const EventModel& model, const DivergenceRate& omega, Index n,
                      std::uint64_t N, unsigned precision_budget = kDefaultPrecisionBudget);

// b_n >= a_n, cross-checked against the moments of the counting variable:
// b_n = M(eta_n^2) and a_n = M(eta_n)^2, both exactly.  The moment check
// runs when n <= cross_check_cap.
Certificate ratio_lower_bound(const EventModel& model, Index n,
                              Index cross_check_cap = kDefaultCountCap);

// The Chebyshev step: P[eta_n <= M/2] <= 4 D^2/M^2 exactly, and when
// D^2/M^2 <= 2^{-k} additionally P[eta_n <= M/2] <= 2^{-(k-2)}.
Certificate bk_tail_check(const EventModel& model, std::int64_t k, Index n_k);

// Quantitative Erdos-Renyi: builds the index chain n_1 = phi(1,1),
// n_k = phi(k, max(n_{k-1}, k)) up to m = max(omega(2n), l+3) and certifies
// P[union_{i=n}^{n_m} A_i] >= 1 - 2^{-l}.
Certificate erdos_renyi(const EventModel& model, const DivergenceRate& omega,
                        const LiminfWitness& phi, Index n, std::uint64_t l);

// Chung-Erdos inequality: P[union_{i<=n} A_i] >= a_n/b_n.
Certificate chung_erdos(const EventModel& model, Index n);

// Tail estimate behind the Kochen-Stone bound, at eps = 2^{-(l+1)}:
// for j past max(omega(ceil(2^{l+2} s_m)), m),
//   P[union_{i=m+1}^j A_i] + eps >= a_j/b_j.
Certificate ks_tail_estimate(const EventModel& model, const DivergenceRate& omega, Index m,
                             std::uint64_t l, Index j);

// The admissibility threshold of ks_tail_estimate: any j above it qualifies.
Index ks_tail_threshold(const EventModel& model, const DivergenceRate& omega, Index m,
                        std::uint64_t l);

// Quantitative Kochen-Stone: runs the iteration n_0 = max(omega(...), m+1),
// n_{r+1} = g(n_r) and returns the first iterate whose whole interval
// [n_r, g(n_r)] satisfies union + 2^{-l} >= a_j/b_j.  The theorem guarantees
// success within 2^{l+1} iterations; failure yields a Fail certificate
// (it would mean a bug or an invalid model/rate, not a theorem violation).
std::pair<Certificate, MetastableWitness> kochen_stone_meta(const EventModel& model,
                                                            const DivergenceRate& omega,
                                                            Index m, std::uint64_t l,
                                                            const GFunction& g);

// Full and off-diagonal Chung-Erdos ratios at n (Yan's comparison).
std::pair<Rat, Rat> yan_ratios(const EventModel& model, Index n);

struct WnStats {
  Rat u, v, w;
};

// The u_n, v_n, w_n sums of the nested-interval construction.
WnStats wn_stats(const EventModel& model, Index n);

// Extracts q_{phi_bound(0, l)} from a Specker-style sequence: any valid
// bounding function for the direct Kochen-Stone formulation doubles as a
// rate of convergence, which is exactly what this reduction exercises.
using PhiBound = std::function<Index(Index m, std::uint64_t l)>;
Rat specker_reduction(const Sequence& specker_seq, const PhiBound& phi_bound, std::uint64_t l);

// The minimal honest bounding function for a fully known finite enumeration:
// least idx > m with q_idx + 2^{-l} > q.  (Strict, so the bound cannot fire
// before an element carrying exactly 2^{-l} mass is revealed.)
Index specker_honest_phi(const Sequence& specker_seq, Index m, std::uint64_t l);

// The algebraic lemma closing the tail estimate: under the stated
// preconditions (including b >= 4 alpha/eps^2),
//   (sqrt(a) - sqrt(alpha))^2/(b - beta) + eps >= a/b.
// Square roots never get evaluated: the proof chain reduces the claim to
// (eps b)^2 >= 4 alpha a, which is certified in rational arithmetic.
Certificate ks_algebra_check(const Rat& a, const Rat& b, const Rat& alpha, const Rat& beta,
                             const Rat& eps);

// Certificate wrappers used by the CLI and the acceptance suite.
Certificate wn_limit_cert(const EventModel& model, Index n, const Rat& q_target,
                          const Rat& tol);
Certificate yan_ratios_cert(const EventModel& model, Index n, const Rat& tol);
Certificate specker_reduction_cert(const Sequence& specker_seq, std::uint64_t l);

}  // namespace bcq
