#include "bcq/serialize.hpp"

namespace bcq {

namespace {

std::string require_string(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_string()) {
    throw ValidationError(std::string("expected string field \"") + key + "\"");
  }
  return j.at(key).get<std::string>();
}

Rat rat_field(const Json& j, const char* key) {
  const Json& v = j.at(key);
  if (v.is_number_integer()) return Rat(v.get<long>());
  if (v.is_string()) return Rat::from_string(v.get<std::string>());
  throw ValidationError(std::string("field \"") + key +
                        "\" must be an integer or a \"num/den\" string");
}

std::string kind_of(const Json& j) {
  if (!j.is_object()) throw ValidationError("expected a tagged object");
  return require_string(j, "kind");
}

}  // namespace

Json to_json(const Sequence& s) {
  return std::visit(
      [](const auto& n) -> Json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Sequence::Constant>) {
          return Json{{"kind", "constant"}, {"value", n.value.to_string()}};
        } else if constexpr (std::is_same_v<T, Sequence::Table>) {
          Json values = Json::array();
          for (const auto& v : n.prefix) values.push_back(v.to_string());
          Json out{{"kind", "table"}, {"values", values}};
          if (n.tail) out["tail"] = to_json(*n.tail);
          return out;
        } else if constexpr (std::is_same_v<T, Sequence::AffineReciprocal>) {
          return Json{{"kind", "affine_reciprocal"},
                      {"q", n.q.to_string()},
                      {"c", n.c.to_string()},
                      {"d", n.d}};
        } else if constexpr (std::is_same_v<T, Sequence::Ratio>) {
          return Json{{"kind", "ratio"}};
        } else {
          return Json{{"kind", "specker"},
                      {"enumeration", n.enumeration},
                      {"reveal_steps", n.reveal_steps}};
        }
      },
      s.node());
}

Sequence sequence_from_json(const Json& j) {
  const std::string kind = kind_of(j);
  if (kind == "constant") return Sequence::constant(rat_field(j, "value"));
  if (kind == "table") {
    std::vector<Rat> prefix;
    for (const auto& v : j.at("values")) {
      prefix.push_back(v.is_string() ? Rat::from_string(v.get<std::string>())
                                     : Rat(v.get<long>()));
    }
    std::shared_ptr<const Sequence> tail;
    if (j.contains("tail")) {
      tail = std::make_shared<const Sequence>(sequence_from_json(j.at("tail")));
    }
    return Sequence::table(std::move(prefix), std::move(tail));
  }
  if (kind == "affine_reciprocal") {
    return Sequence::affine_reciprocal(rat_field(j, "q"), rat_field(j, "c"),
                                       j.at("d").get<Index>());
  }
  if (kind == "ratio") return Sequence::ratio();
  if (kind == "specker") {
    return Sequence::specker(j.at("enumeration").get<std::vector<unsigned>>(),
                             j.at("reveal_steps").get<std::vector<Index>>());
  }
  throw ValidationError("unknown sequence kind \"" + kind + "\"");
}

Json to_json(const EventModel& m) {
  return Json{{"kind", to_string(m.kind())}, {"sequence", to_json(m.sequence())}};
}

std::shared_ptr<EventModel> model_from_json(const Json& j) {
  const std::string kind = kind_of(j);
  ModelKind mk;
  if (kind == "nested") {
    mk = ModelKind::NestedIntervals;
  } else if (kind == "independent") {
    mk = ModelKind::IndependentBernoulli;
  } else if (kind == "exclusive") {
    mk = ModelKind::MutuallyExclusive;
  } else {
    throw ValidationError("unknown model kind \"" + kind + "\"");
  }
  return std::make_shared<EventModel>(mk, sequence_from_json(j.at("sequence")));
}

Json to_json(const DivergenceRate& r) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, DivergenceRate::Linear>) {
          return Json{{"kind", "linear"}, {"k", v.k}};
        } else if constexpr (std::is_same_v<T, DivergenceRate::CeilDiv>) {
          return Json{{"kind", "ceildiv"}, {"q1", v.q1.to_string()}};
        } else {
          Json out{{"kind", "table"}, {"values", v.values}};
          if (v.tail) out["tail"] = Json{{"kind", "linear"}, {"k", v.tail->k}};
          return out;
        }
      },
      r.repr);
}

DivergenceRate divergence_rate_from_json(const Json& j) {
  const std::string kind = kind_of(j);
  if (kind == "linear") return {DivergenceRate::Linear{j.at("k").get<std::uint64_t>()}};
  if (kind == "ceildiv") return {DivergenceRate::CeilDiv{rat_field(j, "q1")}};
  if (kind == "table") {
    DivergenceRate::Table t;
    t.values = j.at("values").get<std::vector<Index>>();
    if (j.contains("tail")) {
      t.tail = DivergenceRate::Linear{j.at("tail").at("k").get<std::uint64_t>()};
    }
    return {std::move(t)};
  }
  throw ValidationError("unknown omega kind \"" + kind + "\"");
}

Json to_json(const ConvergenceRate& r) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ConvergenceRate::Affine>) {
          return Json{{"kind", "affine"}, {"c", v.c}};
        } else {
          return Json{{"kind", "table"}, {"values", v.values}};
        }
      },
      r.repr);
}

ConvergenceRate convergence_rate_from_json(const Json& j) {
  const std::string kind = kind_of(j);
  if (kind == "affine") return {ConvergenceRate::Affine{j.at("c").get<std::int64_t>()}};
  if (kind == "table") {
    return {ConvergenceRate::Table{j.at("values").get<std::vector<Index>>()}};
  }
  throw ValidationError("unknown phi kind \"" + kind + "\"");
}

Json to_json(const LiminfWitness& w) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, LiminfWitness::MaxPow2>) {
          return Json{{"kind", "max_pow2"}};
        } else if constexpr (std::is_same_v<T, LiminfWitness::Identity>) {
          return Json{{"kind", "identity"}};
        } else {
          return Json{{"kind", "searched"}, {"budget", v.budget}};
        }
      },
      w.repr());
}

std::unique_ptr<LiminfWitness> liminf_witness_from_json(const Json& j) {
  const std::string kind = kind_of(j);
  if (kind == "max_pow2") return std::make_unique<LiminfWitness>(LiminfWitness::MaxPow2{});
  if (kind == "identity") return std::make_unique<LiminfWitness>(LiminfWitness::Identity{});
  if (kind == "searched") {
    LiminfWitness::Searched s;
    if (j.contains("budget")) s.budget = j.at("budget").get<Index>();
    return std::make_unique<LiminfWitness>(s);
  }
  throw ValidationError("unknown liminf witness kind \"" + kind + "\"");
}

Json to_json(const GFunction& g) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GFunction::Affine>) {
          return Json{{"kind", "affine"}, {"a", v.a}, {"c", v.c}};
        } else if constexpr (std::is_same_v<T, GFunction::Power>) {
          return Json{{"kind", "power"}, {"e", v.e}};
        } else {
          return Json{{"kind", "table"}, {"values", v.values}};
        }
      },
      g.repr);
}

GFunction g_function_from_json(const Json& j) {
  const std::string kind = kind_of(j);
  if (kind == "affine") {
    GFunction::Affine a{j.at("a").get<std::uint64_t>(), j.at("c").get<std::uint64_t>()};
    if (a.a < 1 || a.a + a.c < 2) {
      throw ValidationError("affine g needs a >= 1 and a + c >= 2 so that g(i) > i");
    }
    return {a};
  }
  if (kind == "power") {
    GFunction::Power p{j.at("e").get<std::uint32_t>()};
    if (p.e < 2) throw ValidationError("power g needs exponent >= 2");
    return {p};
  }
  if (kind == "table") return {GFunction::Table{j.at("values").get<std::vector<Index>>()}};
  throw ValidationError("unknown g kind \"" + kind + "\"");
}

}  // namespace bcq
