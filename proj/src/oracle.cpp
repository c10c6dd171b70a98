#include "bcq/oracle.hpp"

#include <algorithm>

namespace bcq::oracle {

namespace {

constexpr Index kMaxIndependentWindow = 16;

void fill_moments(CountDistribution& dist) {
  Rat sum(0), m1(0), m2(0);
  for (Index c = 0; c < dist.pmf.size(); ++c) {
    Rat rc(static_cast<long>(c));
    sum += dist.pmf[c];
    m1 += rc * dist.pmf[c];
    m2 += rc * rc * dist.pmf[c];
  }
  if (sum != Rat(1)) throw Error("oracle: atom weights do not sum to 1");
  dist.mean = m1;
  dist.variance = m2 - m1 * m1;
}

}  // namespace

AtomSpace enumerate_atoms(const EventModel& model, Index n, Index m) {
  if (n == 0 || n > m) throw ValidationError("enumerate_atoms: need 1 <= n <= m");
  const Index w = m - n + 1;
  AtomSpace space;

  switch (model.kind()) {
    case ModelKind::IndependentBernoulli: {
      if (w > kMaxIndependentWindow) {
        throw ValidationError("enumerate_atoms: independent window of " + std::to_string(w) +
                              " events is too large (max 16)");
      }
      std::vector<Rat> p;
      for (Index i = n; i <= m; ++i) p.push_back(model.prob(i));
      const std::uint64_t count = std::uint64_t(1) << w;
      space.atoms.reserve(count);
      for (std::uint64_t mask = 0; mask < count; ++mask) {
        AtomSpace::Atom atom;
        atom.weight = Rat(1);
        atom.membership.resize(w);
        for (Index b = 0; b < w; ++b) {
          const bool in = (mask >> b) & 1;
          atom.membership[b] = in;
          atom.weight *= in ? p[b] : Rat(1) - p[b];
        }
        space.atoms.push_back(std::move(atom));
      }
      break;
    }
    case ModelKind::NestedIntervals: {
      // Split [0, 1] at the distinct q values; the segment with upper
      // endpoint u lies in A_i exactly when u <= q_i.
      std::vector<Rat> q;
      for (Index i = n; i <= m; ++i) q.push_back(model.prob(i));
      std::vector<Rat> cuts = q;
      std::sort(cuts.begin(), cuts.end());
      cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
      Rat prev(0);
      auto add_segment = [&](const Rat& upper) {
        AtomSpace::Atom atom;
        atom.weight = upper - prev;
        atom.membership.resize(w);
        for (Index b = 0; b < w; ++b) atom.membership[b] = upper <= q[b];
        space.atoms.push_back(std::move(atom));
        prev = upper;
      };
      for (const Rat& v : cuts) {
        if (v > prev) add_segment(v);
      }
      if (prev < Rat(1)) add_segment(Rat(1));
      break;
    }
    case ModelKind::MutuallyExclusive: {
      Rat rest(1);
      for (Index i = n; i <= m; ++i) {
        AtomSpace::Atom atom;
        atom.weight = model.prob(i);
        atom.membership.resize(w);
        atom.membership[i - n] = true;
        rest -= atom.weight;
        space.atoms.push_back(std::move(atom));
      }
      AtomSpace::Atom none;
      none.weight = rest;
      none.membership.resize(w);
      space.atoms.push_back(std::move(none));
      break;
    }
  }
  return space;
}

Rat brute_union(const EventModel& model, Index n, Index m) {
  const AtomSpace space = enumerate_atoms(model, n, m);
  Rat total(0);
  for (const auto& atom : space.atoms) {
    if (std::any_of(atom.membership.begin(), atom.membership.end(), [](bool b) { return b; })) {
      total += atom.weight;
    }
  }
  return total;
}

CountDistribution brute_count_dist(const EventModel& model, Index n) {
  const AtomSpace space = enumerate_atoms(model, 1, n);
  CountDistribution dist;
  dist.n = n;
  dist.pmf.assign(n + 1, Rat(0));
  for (const auto& atom : space.atoms) {
    const auto count = static_cast<Index>(
        std::count(atom.membership.begin(), atom.membership.end(), true));
    dist.pmf[count] += atom.weight;
  }
  fill_moments(dist);
  return dist;
}

Index min_witness_scan(const EventModel& model, Index m, std::uint64_t l, const GFunction& g,
                       Index scan_limit) {
  if (m == 0) throw ValidationError("min_witness_scan: m must be >= 1");
  if (scan_limit <= m) throw ValidationError("min_witness_scan: scan_limit must exceed m");

  const Rat eps = Rat::pow2(-static_cast<long>(l));
  const Index first = m + 1;
  const Index count = scan_limit - m;  // candidates first .. scan_limit

  // Thresholds T(n) = P[union_{i=m+1}^n A_i] + 2^{-l}; non-decreasing in n.
  std::vector<Rat> threshold;
  threshold.reserve(count);
  {
    UnionAccumulator uni(model, first);
    for (Index n = first; n <= scan_limit; ++n) {
      uni.extend_to(n);
      threshold.push_back(uni.value() + eps);
    }
  }
  std::vector<Index> g_of(count);
  bool g_monotone = true;
  for (Index i = 0; i < count; ++i) {
    g_of[i] = g.eval(first + i);
    if (i > 0 && g_of[i] < g_of[i - 1]) g_monotone = false;
  }

  if (!g_monotone) {
    // Table-backed g need not be monotone; fall back to checking each
    // candidate window directly.
    for (Index i = 0; i < count; ++i) {
      const Index n = first + i;
      SumStatsAccumulator acc(model);
      acc.advance_to(n - 1);
      bool ok = true;
      for (Index j = n; j <= g_of[i] && ok; ++j) {
        acc.step();
        if (!acc.has_positive_sum()) continue;
        if (!acc.ratio_view().leq(threshold[i])) ok = false;
      }
      if (ok) return n;
    }
    throw SearchError("min_witness_scan: no witness within scan limit " +
                      std::to_string(scan_limit));
  }

  // Single forward pass over j.  For each j the candidates whose window
  // covers it form the interval [n_low(j), min(j, scan_limit)], and since
  // T is non-decreasing the failing ones are the prefix with T(n) < ratio_j.
  const Index j_max = g_of[count - 1];
  std::vector<std::int64_t> fail_diff(count + 1, 0);
  SumStatsAccumulator acc(model);
  acc.advance_to(first - 1);
  for (Index j = first; j <= j_max; ++j) {
    acc.step();
    if (!acc.has_positive_sum()) continue;
    const auto rv = acc.ratio_view();

    // least candidate index with g >= j
    const Index low =
        static_cast<Index>(std::lower_bound(g_of.begin(), g_of.end(), j) - g_of.begin());
    if (low >= count) continue;
    const Index high = std::min<Index>(j >= first ? j - first : 0, count - 1);
    if (low > high) continue;

    // least candidate index whose threshold already reaches ratio_j
    Index lo = 0, hi = count;
    while (lo < hi) {
      const Index mid = lo + (hi - lo) / 2;
      if (rv.leq(threshold[mid])) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    const Index split = lo;  // candidates below `split` fail at this j
    if (split > low) {
      const Index mark_hi = std::min<Index>(high, split - 1);
      if (low <= mark_hi) {
        fail_diff[low] += 1;
        fail_diff[mark_hi + 1] -= 1;
      }
    }
  }

  std::int64_t running = 0;
  for (Index i = 0; i < count; ++i) {
    running += fail_diff[i];
    if (running == 0) return first + i;
  }
  throw SearchError("min_witness_scan: no witness within scan limit " +
                    std::to_string(scan_limit));
}

}  // namespace bcq::oracle
