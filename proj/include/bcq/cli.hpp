#pragma once

#include <string>

#include "bcq/certificate.hpp"

namespace bcq::cli {

// Exit code contract shared by every command.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUndecided = 2;
inline constexpr int kExitConfigError = 3;

struct Outcome {
  int exit_code = kExitConfigError;
  Json output;      // JSON commands: the document to write
  std::string csv;  // sweep: the table to write
  std::string error;  // non-empty on config/validation failure
};

// check <theorem>: one certificate per grid point of the config's params.
// Referenced rates are validated upfront over the ranges the grid needs;
// a validation failure aborts with kExitConfigError before any check runs.
Outcome run_check(const std::string& theorem, const Json& config);

// sweep <quantity> --axis <param> --range a..b
// Quantities: "die-power" (axis k), "first-bc-margin" (axis l), "wn" (axis n).
Outcome run_sweep(const std::string& quantity, const std::string& axis, std::uint64_t lo,
                  std::uint64_t hi, const Json& config);

// The Specker demonstration: for l = 1..L, the minimal honest bound
// phi(0, l), the extracted approximation of q, and its exact error.
Outcome run_specker(const Json& config);

// Oracle-vs-closed-form comparisons on seeded random windows.
Outcome run_oracle_diff(const Json& config);

}  // namespace bcq::cli
