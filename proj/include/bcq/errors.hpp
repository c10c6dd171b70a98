#pragma once

#include <stdexcept>
#include <string>

namespace bcq {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad argument or violated precondition (reported with the offending value).
struct ValidationError : Error {
  using Error::Error;
};

// A model invariant failed on the queried range (e.g. mutually exclusive
// probabilities summing past 1, or a nested sequence that decreases).
struct ModelInvariantError : Error {
  using Error::Error;
};

// A search or refinement ran out of its configured budget.  Never a silent
// wrong answer: callers either propagate or map this to an Undecided verdict.
struct BudgetError : Error {
  using Error::Error;
};

// A semi-decidable search found nothing within its budget.
struct SearchError : Error {
  using Error::Error;
};

// Index arithmetic left the representable range.
struct OverflowError : Error {
  using Error::Error;
};

}  // namespace bcq
