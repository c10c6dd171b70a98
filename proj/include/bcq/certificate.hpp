#pragma once

#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "bcq/interval.hpp"

namespace bcq {

// Key order is kept as written so that serialized output is byte-stable.
using Json = nlohmann::ordered_json;

enum class TheoremTag {
  FirstBC,
  SecondBC,
  ErdosRenyi,
  ChungErdos,
  KSTailEstimate,
  KochenStoneMeta,
  YanRatios,
  WnLimit,
  SpeckerReduction,
  KSAlgebra,
  RatioLowerBound,
  BkTail,
};

const char* to_string(TheoremTag t);
TheoremTag theorem_tag_from_string(const std::string& s);

enum class Verdict { Pass, Fail, Undecided };

const char* to_string(Verdict v);

// Self-contained record of one theorem instance.  The certified inequality
// is always lhs >= rhs (stated explicitly in trace["inequality"]), so a
// Pass verdict implies margin >= 0 with exact endpoints.  Undecided happens
// only when a transcendental enclosure hits its refinement budget.
struct Certificate {
  TheoremTag tag = TheoremTag::FirstBC;
  Json params;
  std::variant<Rat, RatInterval> lhs{Rat(0)}, rhs{Rat(0)};
  Rat margin;
  Verdict verdict = Verdict::Fail;
  Json trace;

  bool pass() const { return verdict == Verdict::Pass; }
};

// Outcome of the Kochen-Stone metastable search: the index n whose interval
// [n, g(n)] is stable, how many g-iterations it took, and the margins.
struct MetastableWitness {
  Index n = 0;
  std::uint64_t r = 0;       // iteration count, <= 2^{l+1}
  Index interval_end = 0;    // g(n)
  // Margins union + 2^{-l} - a_j/b_j for j in [n, g(n)].  Kept in full for
  // windows up to kFullMarginWindow, otherwise only the minimum is kept.
  std::vector<std::pair<Index, Rat>> per_j_margins;
  Index min_margin_j = 0;
  Rat min_margin;
  Index window_size = 0;
  // g^(2^{l+1})(n_0); nullopt when the iterates leave the index range
  // (the bound then holds trivially for any representable witness).
  std::optional<Index> bound;

  static constexpr Index kFullMarginWindow = 4096;
};

Json to_json(const Certificate& c);
Json to_json(const MetastableWitness& w);
Certificate certificate_from_json(const Json& j);

}  // namespace bcq
