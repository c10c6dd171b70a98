#include "bcq/theorems.hpp"

#include <algorithm>
#include <limits>

#include "bcq/serialize.hpp"

namespace bcq {

namespace {

Rat pow2_neg(std::uint64_t l) { return Rat::pow2(-static_cast<long>(l)); }

// ceil(x) clamped below to 1, as an index; the omega argument of the
// Kochen-Stone estimates (omega's domain is the positive integers).
Index omega_arg_from(const Rat& x) {
  Int c = x.ceil();
  if (sgn(c) <= 0) return 1;
  if (!c.fits_ulong_p()) throw OverflowError("omega argument out of index range");
  return static_cast<Index>(c.get_ui());
}

}  // namespace

Certificate first_bc(const EventModel& model, const ConvergenceRate& phi, std::uint64_t l,
                     Index m) {
  const Index lo = phi.phi(l);
  if (m <= lo) {
    throw ValidationError("first_bc: need m > phi(l) = " + std::to_string(lo));
  }
  Rat hyp_sum(0);
  for (Index i = lo; i <= m; ++i) hyp_sum += model.prob(i);
  const Rat bound = pow2_neg(l);
  const Rat u = model.union_prob(lo, m);
  const bool hyp_ok = hyp_sum <= bound;
  const bool concl_ok = u <= bound;

  Certificate c;
  c.tag = TheoremTag::FirstBC;
  c.params = Json{{"model", to_json(model)}, {"phi", to_json(phi)}, {"l", l}, {"m", m}};
  c.lhs = bound;
  c.rhs = u;
  c.margin = bound - u;
  c.verdict = (hyp_ok && concl_ok) ? Verdict::Pass : Verdict::Fail;
  c.trace = Json{{"inequality", "2^-l >= P[union_{i=phi(l)}^{m} A_i]"},
                 {"phi_l", lo},
                 {"hypothesis_sum", hyp_sum.to_string()},
                 {"hypothesis_ok", hyp_ok},
                 {"conclusion_ok", concl_ok}};
  return c;
}

Certificate second_bc(const EventModel& model, const DivergenceRate& omega, Index n,
                      std::uint64_t N, unsigned precision_budget) {
  if (model.kind() != ModelKind::IndependentBernoulli) {
    throw ValidationError("second_bc: model must be mutually independent");
  }
  if (n == 0 || N == 0) throw ValidationError("second_bc: need n, N >= 1");
  if (N > std::numeric_limits<unsigned>::max()) {
    throw ValidationError("second_bc: N out of the enclosure's range");
  }
  const Index hi = omega.omega(checked_add(n, N - 1));
  if (hi < n) throw ValidationError("second_bc: omega(n+N-1) < n, not a valid rate");

  UnionAccumulator acc(model, n);
  acc.extend_to(hi);
  const Rat u = acc.value();
  const Rat comp = acc.complement();  // P[all complements] = 1 - u

  Certificate c;
  c.tag = TheoremTag::SecondBC;
  c.params =
      Json{{"model", to_json(model)}, {"omega", to_json(omega)}, {"n", n}, {"N", N}};
  c.lhs = u;
  c.trace = Json{{"inequality", "P[union_{i=n}^{omega(n+N-1)} A_i] >= 1 - e^-N"},
                 {"window", Json::array({n, hi})},
                 {"complement_product", comp.to_string()}};
  try {
    // u >= 1 - e^{-N}  <=>  complement product <= e^{-N}
    CompareResult cmp = compare_rational_vs_enclosed(
        comp, [&](unsigned prec) { return exp_neg_enclosure(static_cast<unsigned>(N), prec); },
        precision_budget);
    c.rhs = RatInterval(Rat(1) - cmp.enclosure.hi, Rat(1) - cmp.enclosure.lo);
    c.margin = cmp.enclosure.lo - comp;
    c.verdict = cmp.order == Ordering::Less ? Verdict::Pass : Verdict::Fail;
    c.trace["enclosure_prec"] = cmp.prec;
  } catch (const BudgetError& e) {
    RatInterval enc = exp_neg_enclosure(static_cast<unsigned>(N),
                                        precision_budget >= 4 ? precision_budget : 4);
    c.rhs = RatInterval(Rat(1) - enc.hi, Rat(1) - enc.lo);
    c.margin = Rat(0);
    c.verdict = Verdict::Undecided;
    c.trace["undecided"] = e.what();
  }
  return c;
}

Certificate ratio_lower_bound(const EventModel& model, Index n, Index cross_check_cap) {
  const SumStats st = model.sum_stats(n);
  if (st.s.is_zero()) throw ValidationError("ratio_lower_bound: zero partial sum");

  Certificate c;
  c.tag = TheoremTag::RatioLowerBound;
  c.params = Json{{"model", to_json(model)}, {"n", n}};
  c.lhs = st.b;
  c.rhs = st.a;
  c.margin = st.b - st.a;
  bool ok = st.b >= st.a;
  c.trace = Json{{"inequality", "b_n >= a_n"}, {"s", st.s.to_string()}};

  if (n <= cross_check_cap) {
    // b_n/a_n equals M(eta_n^2)/M(eta_n)^2: verify both numerator and
    // denominator against the counting distribution, exactly.
    const CountDistribution dist = model.count_distribution(n, cross_check_cap);
    Rat m2 = dist.variance + dist.mean * dist.mean;
    const bool moments_match = (m2 == st.b) && (dist.mean * dist.mean == st.a);
    ok = ok && moments_match;
    c.trace["moment_check"] = Json{{"M_eta", dist.mean.to_string()},
                                   {"M_eta_sq", m2.to_string()},
                                   {"match", moments_match}};
  }
  c.verdict = ok ? Verdict::Pass : Verdict::Fail;
  return c;
}

Certificate bk_tail_check(const EventModel& model, std::int64_t k, Index n_k) {
  const CountDistribution dist = model.count_distribution(n_k);
  if (dist.mean.is_zero()) throw ValidationError("bk_tail_check: zero mean");

  const Rat M = dist.mean;
  const Rat V = dist.variance;
  const Rat p_low = dist.cdf_leq(M / Rat(2));
  const Rat cheb = Rat(4) * V / (M * M);
  const bool cheb_ok = p_low <= cheb;

  // When D^2/M^2 has dropped below 2^{-k}, the Chebyshev bound turns into
  // the geometric tail 2^{-(k-2)} used to sum over the events B_k.
  const Rat ratio = V / (M * M);
  const bool ratio_cond = ratio <= Rat::pow2(-k);
  const Rat strong_bound = Rat::pow2(2 - k);
  const bool strong_ok = !ratio_cond || p_low <= strong_bound;

  Certificate c;
  c.tag = TheoremTag::BkTail;
  c.params = Json{{"model", to_json(model)}, {"k", k}, {"n_k", n_k}};
  c.lhs = cheb;
  c.rhs = p_low;
  c.margin = cheb - p_low;
  c.verdict = (cheb_ok && strong_ok) ? Verdict::Pass : Verdict::Fail;
  c.trace = Json{{"inequality", "4 D^2/M^2 >= P[eta <= M/2]"},
                 {"mean", M.to_string()},
                 {"variance", V.to_string()},
                 {"p_eta_leq_half_mean", p_low.to_string()},
                 {"variance_ratio_leq_2^-k", ratio_cond},
                 {"geometric_bound", strong_bound.to_string()},
                 {"geometric_ok", strong_ok}};
  return c;
}

Certificate erdos_renyi(const EventModel& model, const DivergenceRate& omega,
                        const LiminfWitness& phi, Index n, std::uint64_t l) {
  if (n == 0) throw ValidationError("erdos_renyi: n must be >= 1");

  Certificate c;
  c.tag = TheoremTag::ErdosRenyi;
  c.params = Json{{"model", to_json(model)},
                  {"omega", to_json(omega)},
                  {"phi", to_json(phi)},
                  {"n", n},
                  {"l", l}};
  c.trace = Json{{"inequality", "P[union_{i=n}^{n_m} A_i] >= 1 - 2^-l"}};

  const std::uint64_t two_n = checked_mul(2, n);
  const RateCheckResult omega_ok = check_divergence_rate(model, omega, two_n);
  c.trace["omega_validated_to"] = two_n;
  if (!omega_ok) {
    c.rhs = Rat(1) - pow2_neg(l);
    c.margin = Rat(-1);
    c.verdict = Verdict::Fail;
    c.trace["omega_failure_N"] = *omega_ok.first_failing_N;
    return c;
  }

  const Index omega_2n = omega.omega(two_n);
  const std::uint64_t m = std::max<std::uint64_t>(omega_2n, l + 3);
  c.trace["m"] = m;
  c.trace["omega_2n"] = omega_2n;

  // n_1 = phi(1,1), n_k = phi(k, max(n_{k-1}, k)); the chain is
  // non-decreasing, so one forward accumulator verifies every ratio.
  std::vector<Index> chain;
  chain.reserve(m);
  SumStatsAccumulator acc(model);
  bool chain_ok = true;
  Index prev = 0;
  for (std::uint64_t k = 1; k <= m && chain_ok; ++k) {
    const Index arg = std::max<Index>(prev, k);
    const Index nk = phi.eval(model, k, arg);
    chain.push_back(nk);
    if (nk < arg) {
      chain_ok = false;
      break;
    }
    acc.advance_to(nk);
    if (!acc.has_positive_sum()) {
      chain_ok = false;
      break;
    }
    // b/a <= 1 + 2^{-k}  <=>  a/b >= 1/(1 + 2^{-k})
    const Rat inv = Rat(1) / (Rat(1) + pow2_neg(k));
    if (!acc.ratio_view().geq(inv)) chain_ok = false;
    prev = nk;
  }
  c.trace["chain"] = chain;
  c.trace["chain_ok"] = chain_ok;

  const Rat rhs = Rat(1) - pow2_neg(l);
  if (!chain_ok || chain.size() < m || n > chain.back()) {
    c.rhs = rhs;
    c.margin = Rat(-1);
    c.verdict = Verdict::Fail;
    return c;
  }
  const Rat u = model.union_prob(n, chain.back());
  c.lhs = u;
  c.rhs = rhs;
  c.margin = u - rhs;
  c.verdict = u >= rhs ? Verdict::Pass : Verdict::Fail;
  return c;
}

Certificate chung_erdos(const EventModel& model, Index n) {
  const SumStats st = model.sum_stats(n);
  if (st.b.is_zero()) throw ValidationError("chung_erdos: degenerate all-zero prefix");
  const Rat ratio = st.a / st.b;
  const Rat u = model.union_prob(1, n);

  Certificate c;
  c.tag = TheoremTag::ChungErdos;
  c.params = Json{{"model", to_json(model)}, {"n", n}};
  c.lhs = u;
  c.rhs = ratio;
  c.margin = u - ratio;
  c.verdict = u >= ratio ? Verdict::Pass : Verdict::Fail;
  c.trace = Json{{"inequality", "P[union_{i<=n} A_i] >= a_n/b_n"},
                 {"a", st.a.to_string()},
                 {"b", st.b.to_string()}};
  return c;
}

Index ks_tail_threshold(const EventModel& model, const DivergenceRate& omega, Index m,
                        std::uint64_t l) {
  if (m == 0) throw ValidationError("ks_tail_threshold: m must be >= 1");
  SumStatsAccumulator pre(model);
  pre.advance_to(m);
  // 2 s_m / eps with eps = 2^{-(l+1)}, i.e. 2^{l+2} s_m
  const Index arg = omega_arg_from(pre.s() * Rat::pow2(static_cast<long>(l) + 2));
  return std::max(omega.omega(arg), m);
}

Certificate ks_tail_estimate(const EventModel& model, const DivergenceRate& omega, Index m,
                             std::uint64_t l, Index j) {
  if (m == 0) throw ValidationError("ks_tail_estimate: m must be >= 1");
  const Rat eps = pow2_neg(l + 1);

  SumStatsAccumulator pre(model);
  pre.advance_to(m);
  const Rat s_m = pre.s();
  // 2 s_m / eps = 2^{l+2} s_m
  const Index arg = omega_arg_from(s_m * Rat::pow2(static_cast<long>(l) + 2));
  const Index threshold = std::max(omega.omega(arg), m);
  if (j <= threshold) {
    throw ValidationError("ks_tail_estimate: need j > max(omega(" + std::to_string(arg) +
                          "), m) = " + std::to_string(threshold));
  }

  Certificate c;
  c.tag = TheoremTag::KSTailEstimate;
  c.params = Json{{"model", to_json(model)},
                  {"omega", to_json(omega)},
                  {"m", m},
                  {"l", l},
                  {"j", j}};
  c.trace = Json{{"inequality", "P[union_{i=m+1}^{j} A_i] + 2^-(l+1) >= a_j/b_j"},
                 {"epsilon", eps.to_string()},
                 {"omega_arg", arg},
                 {"threshold", threshold},
                 {"s_m", s_m.to_string()}};

  const RateCheckResult omega_ok = check_divergence_rate(model, omega, arg);
  if (!omega_ok) {
    c.margin = Rat(-1);
    c.verdict = Verdict::Fail;
    c.trace["omega_failure_N"] = *omega_ok.first_failing_N;
    return c;
  }

  const SumStats st = model.sum_stats(j);
  if (st.b.is_zero()) throw ValidationError("ks_tail_estimate: zero b_j");
  const Rat ratio = st.a / st.b;
  const Rat lhs = model.union_prob(m + 1, j) + eps;
  c.lhs = lhs;
  c.rhs = ratio;
  c.margin = lhs - ratio;
  c.verdict = lhs >= ratio ? Verdict::Pass : Verdict::Fail;
  return c;
}

std::pair<Certificate, MetastableWitness> kochen_stone_meta(const EventModel& model,
                                                            const DivergenceRate& omega,
                                                            Index m, std::uint64_t l,
                                                            const GFunction& g) {
  if (m == 0) throw ValidationError("kochen_stone_meta: m must be >= 1");
  if (l > 32) throw ValidationError("kochen_stone_meta: 2^{l+1} iterations infeasible");

  Certificate c;
  c.tag = TheoremTag::KochenStoneMeta;
  c.params = Json{{"model", to_json(model)},
                  {"omega", to_json(omega)},
                  {"m", m},
                  {"l", l},
                  {"g", to_json(g)}};
  c.trace = Json{
      {"inequality", "P[union_{i=m+1}^{n} A_i] + 2^-l >= a_j/b_j for all j in [n, g(n)]"}};

  MetastableWitness w;

  SumStatsAccumulator pre(model);
  pre.advance_to(m);
  const Rat s_m = pre.s();
  const Index arg = omega_arg_from(s_m * Rat::pow2(static_cast<long>(l) + 2));
  c.trace["omega_arg"] = arg;
  c.trace["s_m"] = s_m.to_string();

  const RateCheckResult omega_ok = check_divergence_rate(model, omega, arg);
  if (!omega_ok) {
    c.margin = Rat(-1);
    c.verdict = Verdict::Fail;
    c.trace["omega_failure_N"] = *omega_ok.first_failing_N;
    return {std::move(c), std::move(w)};
  }

  // The proof's iteration, with n_0 nudged to m+1 so the witness is > m.
  const Index n0 = std::max(omega.omega(arg), m + 1);
  const std::uint64_t rmax = std::uint64_t(1) << (l + 1);
  w.bound = iterate_g_saturating(g, rmax, n0);
  c.trace["n0"] = n0;
  c.trace["r_max"] = rmax;

  const Rat eps = pow2_neg(l);
  UnionAccumulator uni(model, m + 1);
  SumStatsAccumulator acc(model);
  Json iterates = Json::array();

  Index n_r = n0;
  for (std::uint64_t r = 0; r <= rmax; ++r) {
    const Index end = g.eval(n_r);
    uni.extend_to(n_r);
    const Rat T = uni.value() + eps;

    Json it{{"r", r}, {"n", n_r}, {"interval_end", end}, {"threshold", T.to_string()}};

    // Scan j over [n_r, end] left to right; the accumulator only moves
    // forward, and consecutive windows meet at end = n_{r+1}.
    acc.advance_to(n_r);
    std::optional<Index> violation;
    const Index window = end - n_r + 1;
    const bool full_margins = window <= MetastableWitness::kFullMarginWindow;

    std::vector<std::pair<Index, Rat>> margins;
    if (full_margins) margins.reserve(window);
    // Running maximum of a_j/b_j, kept as an exact integer fraction plus a
    // 2^-96 dyadic lower bound so that most comparisons stay cheap.
    Int best_num{0}, best_den{1}, best_dy{0};
    Index best_j = 0;
    const long kDyBits = 96;
    Int dy_scale;
    mpz_ui_pow_ui(dy_scale.get_mpz_t(), 2, kDyBits);

    for (Index j = n_r; j <= end; ++j) {
      if (j > acc.n()) acc.step();
      if (!acc.has_positive_sum()) {
        if (full_margins) margins.emplace_back(j, T);  // vacuous: ratio undefined
        continue;
      }
      auto rv = acc.ratio_view();
      if (!rv.leq(T)) {
        violation = j;
        break;
      }
      if (full_margins) {
        margins.emplace_back(j, T - Rat(rv.num, rv.den));
      }
      // track the maximum ratio for the certificate margin
      if (best_j == 0) {
        best_num = rv.num;
        best_den = rv.den;
        best_dy = best_num * dy_scale / best_den;
        best_j = j;
      } else {
        Int dy = rv.num * dy_scale / rv.den;
        // dy strictly above/below best_dy decides outright; ties need the
        // exact cross-multiplication.
        bool take = dy > best_dy ||
                    (dy == best_dy && rv.num * best_den > best_num * rv.den);
        if (take) {
          best_num = rv.num;
          best_den = rv.den;
          best_dy = dy;
          best_j = j;
        }
      }
    }

    if (!violation) {
      w.n = n_r;
      w.r = r;
      w.interval_end = end;
      w.window_size = window;
      if (full_margins) w.per_j_margins = std::move(margins);
      if (best_j != 0) {
        w.min_margin_j = best_j;
        w.min_margin = T - Rat(best_num, best_den);
        c.rhs = Rat(best_num, best_den);
      } else {
        // every j in the window had zero prefix sum
        w.min_margin_j = n_r;
        w.min_margin = T;
        c.rhs = Rat(0);
      }
      c.lhs = T;
      c.margin = w.min_margin;
      c.verdict = Verdict::Pass;
      it["witness"] = true;
      iterates.push_back(std::move(it));
      c.trace["iterates"] = std::move(iterates);
      c.trace["r"] = r;
      c.trace["bound"] = w.bound ? Json(*w.bound) : Json("overflow");
      return {std::move(c), std::move(w)};
    }

    it["violation_j"] = *violation;
    iterates.push_back(std::move(it));
    n_r = end;
  }

  // Unreachable for valid inputs: the theorem forces a witness by r = 2^{l+1}.
  c.margin = Rat(-1);
  c.verdict = Verdict::Fail;
  c.trace["iterates"] = std::move(iterates);
  c.trace["no_witness_within"] = rmax;
  return {std::move(c), std::move(w)};
}

std::pair<Rat, Rat> yan_ratios(const EventModel& model, Index n) {
  if (n < 2) throw ValidationError("yan_ratios: off-diagonal sums empty for n < 2");
  const SumStats st = model.sum_stats(n);
  if (st.b.is_zero()) throw ValidationError("yan_ratios: zero b_n");
  if (st.off_diag_joint.is_zero()) {
    throw ValidationError("yan_ratios: zero off-diagonal joint sum");
  }
  return {st.a / st.b, st.off_diag_prod / st.off_diag_joint};
}

WnStats wn_stats(const EventModel& model, Index n) {
  if (model.kind() != ModelKind::NestedIntervals) {
    throw ValidationError("wn_stats: defined for nested-interval models");
  }
  if (n < 2) throw ValidationError("wn_stats: n must be >= 2");

  std::vector<Rat> q;
  q.reserve(n);
  for (Index i = 1; i <= n; ++i) q.push_back(model.prob(i));

  // u_n = q_1 (q_2+...+q_n) + q_2 (q_3+...+q_n) + ... + q_{n-1} q_n,
  // accumulated exactly in the displayed order via suffix sums.
  std::vector<Rat> suffix(n + 1, Rat(0));
  for (Index i = n; i >= 1; --i) suffix[i - 1] = suffix[i] + q[i - 1];
  WnStats st;
  st.u = Rat(0);
  st.v = Rat(0);
  for (Index i = 1; i <= n - 1; ++i) {
    st.u += q[i - 1] * suffix[i];
    st.v += Rat(static_cast<long>(n - i)) * q[i - 1];
  }
  if (st.v.is_zero()) throw ValidationError("wn_stats: v_n = 0");
  st.w = st.u / st.v;
  return st;
}

Rat specker_reduction(const Sequence& specker_seq, const PhiBound& phi_bound,
                      std::uint64_t l) {
  (void)specker_seq.specker_spec();  // must be a Specker sequence
  const Index idx = phi_bound(0, l);
  if (idx == 0) throw ValidationError("specker_reduction: phi bound returned index 0");
  return specker_seq.at(idx);
}

Index specker_honest_phi(const Sequence& specker_seq, Index m, std::uint64_t l) {
  const auto& spec = specker_seq.specker_spec();
  const Rat q = specker_seq.specker_limit();
  const Rat eps = pow2_neg(l);

  // Candidates: m+1 and every later reveal step; q_idx only changes there.
  // The last candidate always works (everything revealed, eps > 0).
  Index cand = m + 1;
  std::size_t j = 0;
  for (;;) {
    if (specker_seq.at(cand) + eps > q) return cand;
    while (j < spec.reveal_steps.size() && spec.reveal_steps[j] <= cand) ++j;
    if (j >= spec.reveal_steps.size()) {
      throw Error("specker_honest_phi: no candidate satisfied the bound");  // unreachable
    }
    cand = spec.reveal_steps[j];
  }
}

Certificate ks_algebra_check(const Rat& a, const Rat& b, const Rat& alpha, const Rat& beta,
                             const Rat& eps) {
  std::string bad;
  auto expect = [&](bool ok, const char* what) {
    if (!ok) bad += std::string(bad.empty() ? "" : "; ") + what;
  };
  expect(a.sgn() > 0, "need a > 0");
  expect(a <= b, "need a <= b");
  expect(alpha.sgn() >= 0 && alpha < a, "need 0 <= alpha < a");
  expect(beta.sgn() >= 0 && beta < b, "need 0 <= beta < b");
  expect(eps.sgn() > 0, "need eps > 0");
  expect(b * eps * eps >= Rat(4) * alpha, "need b >= 4 alpha / eps^2");
  if (!bad.empty()) throw ValidationError("ks_algebra_check: " + bad);

  // (sqrt(a) - sqrt(alpha))^2/(b - beta) + eps >= a/b reduces along the
  // proof's chain to 2 sqrt(alpha a) <= eps b, i.e. (eps b)^2 >= 4 alpha a.
  const Rat lhs = (eps * b) * (eps * b);
  const Rat rhs = Rat(4) * alpha * a;

  Certificate c;
  c.tag = TheoremTag::KSAlgebra;
  c.params = Json{{"a", a.to_string()},
                  {"b", b.to_string()},
                  {"alpha", alpha.to_string()},
                  {"beta", beta.to_string()},
                  {"eps", eps.to_string()}};
  c.lhs = lhs;
  c.rhs = rhs;
  c.margin = lhs - rhs;
  c.verdict = lhs >= rhs ? Verdict::Pass : Verdict::Fail;
  c.trace = Json{{"inequality", "(eps b)^2 >= 4 alpha a"},
                 {"certifies", "(sqrt(a)-sqrt(alpha))^2/(b-beta) + eps >= a/b"}};
  return c;
}

Certificate wn_limit_cert(const EventModel& model, Index n, const Rat& q_target,
                          const Rat& tol) {
  const WnStats st = wn_stats(model, n);
  const Rat err = (st.w - q_target).abs();

  Certificate c;
  c.tag = TheoremTag::WnLimit;
  c.params = Json{{"model", to_json(model)},
                  {"n", n},
                  {"q", q_target.to_string()},
                  {"tol", tol.to_string()}};
  c.lhs = tol;
  c.rhs = err;
  c.margin = tol - err;
  c.verdict = err <= tol ? Verdict::Pass : Verdict::Fail;
  c.trace = Json{{"inequality", "tol >= |w_n - q|"},
                 {"u", st.u.to_string()},
                 {"v", st.v.to_string()},
                 {"w", st.w.to_string()}};
  return c;
}

Certificate yan_ratios_cert(const EventModel& model, Index n, const Rat& tol) {
  const auto [full, off] = yan_ratios(model, n);
  const Rat err = (full - off).abs();

  Certificate c;
  c.tag = TheoremTag::YanRatios;
  c.params = Json{{"model", to_json(model)}, {"n", n}, {"tol", tol.to_string()}};
  c.lhs = tol;
  c.rhs = err;
  c.margin = tol - err;
  c.verdict = err <= tol ? Verdict::Pass : Verdict::Fail;
  c.trace = Json{{"inequality", "tol >= |a_n/b_n - off_diag ratio|"},
                 {"full", full.to_string()},
                 {"off_diag", off.to_string()}};
  return c;
}

Certificate specker_reduction_cert(const Sequence& specker_seq, std::uint64_t l) {
  const auto& spec = specker_seq.specker_spec();
  const Rat q = specker_seq.specker_limit();
  const Index phi0l = specker_honest_phi(specker_seq, 0, l);
  const Rat extracted = specker_reduction(
      specker_seq, [&](Index m, std::uint64_t ll) { return specker_honest_phi(specker_seq, m, ll); },
      l);
  const Rat err = (extracted - q).abs();
  const Rat eps = pow2_neg(l);

  // Any element whose mass is at least 2^{-l} must have been revealed by
  // phi(0, l): that growth is the computational content of the reduction.
  Index heavy_step = 0;
  for (std::size_t j = 0; j < spec.enumeration.size(); ++j) {
    if (spec.enumeration[j] + 1 <= l) {
      heavy_step = std::max(heavy_step, spec.reveal_steps[j]);
    }
  }
  const bool growth_ok = phi0l >= heavy_step;

  Certificate c;
  c.tag = TheoremTag::SpeckerReduction;
  c.params = Json{{"sequence", to_json(specker_seq)}, {"l", l}};
  c.lhs = eps;
  c.rhs = err;
  c.margin = eps - err;
  c.verdict = (err <= eps && growth_ok) ? Verdict::Pass : Verdict::Fail;
  c.trace = Json{{"inequality", "2^-l >= |q_{phi(0,l)} - q|"},
                 {"q", q.to_string()},
                 {"phi_0_l", phi0l},
                 {"extracted", extracted.to_string()},
                 {"heaviest_relevant_reveal_step", heavy_step},
                 {"phi_reaches_reveal", growth_ok}};
  return c;
}

}  // namespace bcq
