#include "bcq/sequence.hpp"

#include <algorithm>
#include <set>

namespace bcq {

Sequence::Sequence(Node node) : node_(std::move(node)) {
  if (const auto* sp = std::get_if<Specker>(&node_)) {
    if (sp->enumeration.size() != sp->reveal_steps.size()) {
      throw ValidationError("Specker: enumeration and reveal_steps differ in length");
    }
    std::set<unsigned> seen;
    for (unsigned e : sp->enumeration) {
      if (!seen.insert(e).second) {
        throw ValidationError("Specker: repeated element " + std::to_string(e));
      }
    }
    Index prev = 1;
    for (Index s : sp->reveal_steps) {
      if (s < prev) throw ValidationError("Specker: reveal steps must be non-decreasing and >= 1");
      prev = s;
    }
    specker_cumulative_.reserve(sp->enumeration.size());
    Rat acc(0);
    for (unsigned e : sp->enumeration) {
      acc += Rat::pow2(-(static_cast<long>(e) + 1));
      specker_cumulative_.push_back(acc);
    }
  }
}

Sequence Sequence::geometric_prefix(const Rat& r, Index len) {
  std::vector<Rat> prefix;
  prefix.reserve(len);
  Rat v(1);
  for (Index i = 0; i < len; ++i) {
    v *= r;
    prefix.push_back(v);
  }
  return table(std::move(prefix), std::make_shared<const Sequence>(Constant{Rat(0)}));
}

Rat Sequence::at(Index i) const {
  if (i == 0) throw ValidationError("Sequence: indices are 1-based");
  return std::visit(
      [&](const auto& n) -> Rat {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, Table>) {
          if (i <= n.prefix.size()) return n.prefix[i - 1];
          if (!n.tail) {
            throw ValidationError("Sequence: index " + std::to_string(i) +
                                  " beyond table of length " +
                                  std::to_string(n.prefix.size()));
          }
          return n.tail->at(i - n.prefix.size());
        } else if constexpr (std::is_same_v<T, AffineReciprocal>) {
          Int idx = Int(static_cast<unsigned long>(i)) + Int(static_cast<unsigned long>(n.d));
          return n.q - n.c / Rat(idx, Int(1));
        } else if constexpr (std::is_same_v<T, Ratio>) {
          Int num(static_cast<unsigned long>(i));
          return Rat(num, num + 1);
        } else {  // Specker
          // number of elements revealed by step i
          auto it = std::upper_bound(n.reveal_steps.begin(), n.reveal_steps.end(), i);
          auto cnt = static_cast<std::size_t>(it - n.reveal_steps.begin());
          return cnt == 0 ? Rat(0) : specker_cumulative_[cnt - 1];
        }
      },
      node_);
}

const Sequence::Specker& Sequence::specker_spec() const {
  if (const auto* sp = std::get_if<Specker>(&node_)) return *sp;
  throw ValidationError("Sequence: not a Specker sequence");
}

Rat Sequence::specker_limit() const {
  const auto& sp = specker_spec();
  (void)sp;
  return specker_cumulative_.empty() ? Rat(0) : specker_cumulative_.back();
}

}  // namespace bcq
