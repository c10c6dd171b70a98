#pragma once

#include <memory>
#include <variant>
#include <vector>

#include "bcq/rational.hpp"

namespace bcq {

// Closed grammar of probability sequences (1-based).  A small term language
// rather than arbitrary callbacks, so that CLI configs are reproducible and
// certificates can embed the sequence verbatim.
class Sequence {
 public:
  struct Constant {
    Rat value;
  };
  // Explicit prefix, then an optional tail sequence for indices past it.
  // Without a tail, indices past the prefix are outside the domain.
  struct Table {
    std::vector<Rat> prefix;
    std::shared_ptr<const Sequence> tail;  // may be null
  };
  // term_i = q - c/(i + d)
  struct AffineReciprocal {
    Rat q, c;
    Index d = 0;
  };
  // term_i = i/(i+1)
  struct Ratio {};
  // Partial sums of a finite enumeration of distinct non-negative integers:
  // element e_j carries mass 2^{-(e_j+1)} and is revealed at reveal_steps[j]
  // (non-decreasing).  term_i = sum of masses revealed by step i.
  struct Specker {
    std::vector<unsigned> enumeration;
    std::vector<Index> reveal_steps;
  };

  using Node = std::variant<Constant, Table, AffineReciprocal, Ratio, Specker>;

  explicit Sequence(Node node);

  static Sequence constant(Rat v) { return Sequence(Constant{std::move(v)}); }
  static Sequence table(std::vector<Rat> prefix,
                        std::shared_ptr<const Sequence> tail = nullptr) {
    return Sequence(Table{std::move(prefix), std::move(tail)});
  }
  static Sequence affine_reciprocal(Rat q, Rat c, Index d) {
    return Sequence(AffineReciprocal{std::move(q), std::move(c), d});
  }
  static Sequence ratio() { return Sequence(Ratio{}); }
  static Sequence specker(std::vector<unsigned> enumeration,
                          std::vector<Index> reveal_steps) {
    return Sequence(Specker{std::move(enumeration), std::move(reveal_steps)});
  }
  // Convenience: prefix [r, r^2, ..., r^len] followed by constant 0.
  // Stands in for a geometric sequence at any finite scale.
  static Sequence geometric_prefix(const Rat& r, Index len);

  const Node& node() const { return node_; }

  // term_i, 1-based.  Throws ValidationError for i == 0 and for indices
  // outside a tail-less table.
  Rat at(Index i) const;

  bool is_specker() const { return std::holds_alternative<Specker>(node_); }
  const Specker& specker_spec() const;

  // Limit of a Specker sequence (the full mass) -- known to the test
  // harness because the enumeration is finite.
  Rat specker_limit() const;

 private:
  Node node_;
  std::vector<Rat> specker_cumulative_;  // cumulative masses in reveal order
};

}  // namespace bcq
