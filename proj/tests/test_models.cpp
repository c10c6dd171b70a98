#include <doctest.h>

#include "bcq/model.hpp"
#include "test_util.hpp"

using namespace bcq;
using namespace bcq::testutil;

namespace {

// Naive reference for the five sums, straight from the definitions.
SumStats naive_sum_stats(const EventModel& m, Index n) {
  SumStats st;
  st.n = n;
  st.s = Rat(0);
  for (Index i = 1; i <= n; ++i) st.s += m.prob(i);
  st.a = st.s * st.s;
  st.b = Rat(0);
  for (Index i = 1; i <= n; ++i) {
    for (Index k = 1; k <= n; ++k) st.b += m.joint(i, k);
  }
  st.off_diag_prod = Rat(0);
  st.off_diag_joint = Rat(0);
  for (Index i = 1; i <= n; ++i) {
    for (Index k = i + 1; k <= n; ++k) {
      st.off_diag_prod += m.prob(i) * m.prob(k);
      st.off_diag_joint += m.joint(i, k);
    }
  }
  return st;
}

}  // namespace

TEST_CASE("prob on the worked examples") {
  CHECK(nested_ratio().prob(3) == Rat(3, 4));
  CHECK(fair_die(6).prob(10) == Rat(1, 6));
  CHECK(exclusive_geometric(Rat(1, 2)).prob(4) == Rat(1, 16));
  CHECK_THROWS_AS(nested_ratio().prob(0), ValidationError);
}

TEST_CASE("joint on the worked examples") {
  EventModel nested = nested_ratio();
  CHECK(nested.joint(2, 5) == Rat(2, 3));
  CHECK(nested.joint(5, 2) == Rat(2, 3));
  CHECK(independent_const(Rat(1, 2)).joint(3, 7) == Rat(1, 4));
  CHECK(exclusive_geometric(Rat(1, 2)).joint(1, 2) == Rat(0));
  CHECK(nested.joint(4, 4) == nested.prob(4));
}

TEST_CASE("union_prob on the worked examples") {
  CHECK(nested_ratio().union_prob(2, 5) == Rat(5, 6));
  EventModel table(ModelKind::IndependentBernoulli,
                   Sequence::table({Rat(1, 2), Rat(1, 3), Rat(1, 4)}));
  CHECK(table.union_prob(1, 3) == Rat(3, 4));
  CHECK(exclusive_geometric(Rat(1, 2)).union_prob(3, 10) == Rat(255, 1024));
  CHECK_THROWS_AS(table.union_prob(3, 2), ValidationError);
  CHECK_THROWS_AS(table.union_prob(0, 2), ValidationError);
}

TEST_CASE("sum_stats on the worked examples") {
  EventModel half = independent_const(Rat(1, 2));
  SumStats s2 = half.sum_stats(2);
  CHECK(s2.s == Rat(1));
  CHECK(s2.a == Rat(1));
  CHECK(s2.b == Rat(3, 2));

  SumStats s4 = half.sum_stats(4);
  CHECK(s4.a == Rat(4));
  CHECK(s4.b == Rat(5));
  CHECK(s4.b / s4.a == Rat(5, 4));

  // constant nested: a = n^2 q^2, b = n^2 q
  EventModel nc = nested_const(Rat(1, 3));
  for (Index n : {1, 2, 5, 9}) {
    SumStats st = nc.sum_stats(n);
    Rat nn(static_cast<long>(n));
    CHECK(st.a == nn * nn * Rat(1, 9));
    CHECK(st.b == nn * nn * Rat(1, 3));
  }
}

TEST_CASE("accumulator matches the naive definition sums") {
  SplitMix64 rng(42);
  std::vector<std::shared_ptr<EventModel>> models = stock_models();
  models.push_back(std::make_shared<EventModel>(nested_affine_half()));
  for (std::uint64_t i = 0; i < 6; ++i) {
    models.push_back(
        std::make_shared<EventModel>(random_table_model(kind_of_index(i), rng, 12)));
  }
  for (const auto& m : models) {
    SumStatsAccumulator acc(*m);
    for (Index n = 1; n <= 24; ++n) {
      acc.step();
      SumStats got = acc.stats();
      SumStats want = naive_sum_stats(*m, n);
      CHECK(got.s == want.s);
      CHECK(got.a == want.a);
      CHECK(got.b == want.b);
      CHECK(got.off_diag_prod == want.off_diag_prod);
      CHECK(got.off_diag_joint == want.off_diag_joint);
      CHECK(got.b == got.s + Rat(2) * got.off_diag_joint);
      if (!got.s.is_zero()) {
        CHECK(acc.ratio() == want.a / want.b);
        CHECK(acc.b_geq_a() == (want.b >= want.a));
        // the fast comparison view agrees with the canonical ratio
        CHECK(acc.ratio_view().leq(want.a / want.b));
        CHECK(acc.ratio_view().geq(want.a / want.b));
      }
    }
  }
}

TEST_CASE("count_distribution on the worked examples") {
  EventModel half = independent_const(Rat(1, 2));
  CountDistribution d = half.count_distribution(2);
  CHECK(d.pmf == std::vector<Rat>{Rat(1, 4), Rat(1, 2), Rat(1, 4)});
  CHECK(d.mean == Rat(1));
  CHECK(d.variance == Rat(1, 2));

  EventModel nested(ModelKind::NestedIntervals, Sequence::table({Rat(1, 2), Rat(2, 3)}));
  CountDistribution dn = nested.count_distribution(2);
  CHECK(dn.pmf == std::vector<Rat>{Rat(1, 3), Rat(1, 6), Rat(1, 2)});

  EventModel ones = independent_const(Rat(1));
  CountDistribution d5 = ones.count_distribution(5);
  CHECK(d5.pmf[5] == Rat(1));
  CHECK(d5.mean == Rat(5));
  CHECK(d5.variance == Rat(0));

  EventModel excl = exclusive_geometric(Rat(1, 2));
  CountDistribution de = excl.count_distribution(3);
  CHECK(de.pmf[0] == Rat(1, 8));
  CHECK(de.pmf[1] == Rat(7, 8));
  CHECK(de.pmf[2] == Rat(0));

  CHECK_THROWS_AS(half.count_distribution(50, 16), BudgetError);
}

TEST_CASE("count_distribution moments match the partial sums") {
  for (const auto& m : stock_models()) {
    SumStatsAccumulator acc(*m);
    for (Index n = 1; n <= 40; ++n) {
      acc.step();
      CountDistribution d = m->count_distribution(n);
      CHECK(d.mean == acc.stats().s);
      CHECK(d.variance.sgn() >= 0);
    }
  }
}

TEST_CASE("joint is symmetric and bounded for all stock models") {
  for (const auto& m : stock_models()) {
    for (Index i = 1; i <= 64; ++i) {
      for (Index k = i; k <= 64; ++k) {
        Rat j = m->joint(i, k);
        CHECK(j == m->joint(k, i));
        CHECK(j.sgn() >= 0);
        CHECK(j <= min(m->prob(i), m->prob(k)));
      }
    }
  }
}

TEST_CASE("union bounds and monotonicity (subadditivity)") {
  for (const auto& m : stock_models()) {
    for (Index n = 1; n <= 64; ++n) {
      Rat sum(0);
      Rat best(0);
      UnionAccumulator acc(*m, n);
      Rat prev(0);
      for (Index mm = n; mm <= 64; ++mm) {
        acc.extend_to(mm);
        Rat u = acc.value();
        sum += m->prob(mm);
        best = max(best, m->prob(mm));
        CHECK(u >= best);
        CHECK(u <= min(Rat(1), sum));
        CHECK(u >= prev);  // monotone in the upper end
        prev = u;
      }
    }
  }
}

TEST_CASE("b >= a on stock models up to 256") {
  for (const auto& m : stock_models()) {
    SumStatsAccumulator acc(*m);
    for (Index n = 1; n <= 256; ++n) {
      acc.step();
      CHECK(acc.b_geq_a());
    }
  }
}

TEST_CASE("model invariant violations are loud") {
  // mutually exclusive probabilities must keep prefix sums <= 1
  EventModel bad_excl(ModelKind::MutuallyExclusive, Sequence::constant(Rat(1, 2)));
  CHECK_THROWS_AS(bad_excl.union_prob(1, 3), ModelInvariantError);

  // nested sequences must be non-decreasing
  EventModel bad_nested(ModelKind::NestedIntervals,
                        Sequence::table({Rat(1, 2), Rat(1, 3)}));
  CHECK_THROWS_AS(bad_nested.prob(2), ModelInvariantError);

  // probabilities must stay inside [0, 1]
  EventModel bad_range(ModelKind::IndependentBernoulli, Sequence::constant(Rat(3, 2)));
  CHECK_THROWS_AS(bad_range.prob(1), ModelInvariantError);

  // tables without a tail reject indices past the prefix
  EventModel short_table(ModelKind::IndependentBernoulli, Sequence::table({Rat(1, 2)}));
  CHECK_THROWS_AS(short_table.prob(2), ValidationError);
}

TEST_CASE("specker sequences validate and evaluate") {
  Sequence s = Sequence::specker({2, 5, 3}, {1, 2, 3});
  CHECK(s.at(1) == Rat(1, 8));
  CHECK(s.at(2) == Rat(1, 8) + Rat(1, 64));
  CHECK(s.at(3) == Rat(13, 64));
  CHECK(s.at(100) == Rat(13, 64));
  CHECK(s.specker_limit() == Rat(13, 64));

  CHECK_THROWS_AS(Sequence::specker({2, 2}, {1, 2}), ValidationError);
  CHECK_THROWS_AS(Sequence::specker({1, 2}, {5, 3}), ValidationError);
  CHECK_THROWS_AS(Sequence::specker({1}, {1, 2}), ValidationError);

  // a specker sequence is a valid nested model (monotone, bounded)
  EventModel m(ModelKind::NestedIntervals, s);
  CHECK(m.union_prob(1, 50) == Rat(13, 64));
  CHECK(m.joint(1, 2) == Rat(1, 8));
}

TEST_CASE("affine reciprocal terms") {
  Sequence s = Sequence::affine_reciprocal(Rat(1, 2), Rat(1, 2), 1);
  CHECK(s.at(1) == Rat(1, 4));
  CHECK(s.at(3) == Rat(1, 2) - Rat(1, 8));
  EventModel m = nested_affine_half();
  CHECK(m.prob(1000) == Rat(1, 2) - Rat(1, 2002));
}
