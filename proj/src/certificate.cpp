#include "bcq/certificate.hpp"

namespace bcq {

const char* to_string(TheoremTag t) {
  switch (t) {
    case TheoremTag::FirstBC: return "first-bc";
    case TheoremTag::SecondBC: return "second-bc";
    case TheoremTag::ErdosRenyi: return "erdos-renyi";
    case TheoremTag::ChungErdos: return "chung-erdos";
    case TheoremTag::KSTailEstimate: return "ks-tail-estimate";
    case TheoremTag::KochenStoneMeta: return "kochen-stone-meta";
    case TheoremTag::YanRatios: return "yan-ratios";
    case TheoremTag::WnLimit: return "wn-limit";
    case TheoremTag::SpeckerReduction: return "specker-reduction";
    case TheoremTag::KSAlgebra: return "ks-algebra";
    case TheoremTag::RatioLowerBound: return "ratio-lower-bound";
    case TheoremTag::BkTail: return "bk-tail";
  }
  return "?";
}

TheoremTag theorem_tag_from_string(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(TheoremTag::BkTail); ++i) {
    auto t = static_cast<TheoremTag>(i);
    if (s == to_string(t)) return t;
  }
  throw ValidationError("unknown theorem tag \"" + s + "\"");
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Undecided: return "undecided";
  }
  return "?";
}

namespace {

Json side_to_json(const std::variant<Rat, RatInterval>& side) {
  if (const auto* r = std::get_if<Rat>(&side)) return r->to_string();
  const auto& iv = std::get<RatInterval>(side);
  return Json{{"lo", iv.lo.to_string()}, {"hi", iv.hi.to_string()}};
}

std::variant<Rat, RatInterval> side_from_json(const Json& j) {
  if (j.is_string()) return Rat::from_string(j.get<std::string>());
  return RatInterval(Rat::from_string(j.at("lo").get<std::string>()),
                     Rat::from_string(j.at("hi").get<std::string>()));
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "pass") return Verdict::Pass;
  if (s == "fail") return Verdict::Fail;
  if (s == "undecided") return Verdict::Undecided;
  throw ValidationError("unknown verdict \"" + s + "\"");
}

}  // namespace

Json to_json(const Certificate& c) {
  return Json{{"theorem", to_string(c.tag)}, {"params", c.params},
              {"lhs", side_to_json(c.lhs)},  {"rhs", side_to_json(c.rhs)},
              {"margin", c.margin.to_string()}, {"verdict", to_string(c.verdict)},
              {"trace", c.trace}};
}

Certificate certificate_from_json(const Json& j) {
  Certificate c;
  c.tag = theorem_tag_from_string(j.at("theorem").get<std::string>());
  c.params = j.at("params");
  c.lhs = side_from_json(j.at("lhs"));
  c.rhs = side_from_json(j.at("rhs"));
  c.margin = Rat::from_string(j.at("margin").get<std::string>());
  c.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  c.trace = j.at("trace");
  return c;
}

Json to_json(const MetastableWitness& w) {
  Json margins;
  if (w.window_size <= MetastableWitness::kFullMarginWindow) {
    margins = Json::array();
    for (const auto& [j, m] : w.per_j_margins) {
      margins.push_back(Json{{"j", j}, {"margin", m.to_string()}});
    }
  } else {
    margins = Json{{"elided_window", w.window_size}};
  }
  Json out{{"n", w.n},
           {"r", w.r},
           {"interval_end", w.interval_end},
           {"min_margin_j", w.min_margin_j},
           {"min_margin", w.min_margin.to_string()},
           {"window_size", w.window_size},
           {"per_j_margins", margins}};
  if (w.bound) {
    out["bound"] = *w.bound;
  } else {
    out["bound"] = "overflow";
  }
  return out;
}

}  // namespace bcq
