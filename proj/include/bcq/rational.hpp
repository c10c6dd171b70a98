#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>

#include "bcq/errors.hpp"

namespace bcq {

using Index = std::uint64_t;
using Int = mpz_class;

// Exact rational number, always held in canonical form: denominator > 0,
// gcd(numerator, denominator) == 1.  Equality is therefore structural.
// All probability values in the library flow through this type; nothing in
// any decision path ever touches floating point.
class Rat {
 public:
  Rat() : num_(0), den_(1) {}
  Rat(long n) : num_(n), den_(1) {}  // NOLINT: implicit by design
  Rat(const Int& num, const Int& den);
  Rat(long num, long den) : Rat(Int(num), Int(den)) {}

  static Rat from_string(const std::string& s);  // "num/den" or "num", base 10
  // 2^e for any (possibly negative) exponent.
  static Rat pow2(long e);

  const Int& num() const { return num_; }
  const Int& den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  int sgn() const { return ::sgn(num_); }

  Rat operator-() const;
  Rat& operator+=(const Rat& o);
  Rat& operator-=(const Rat& o);
  Rat& operator*=(const Rat& o);
  Rat& operator/=(const Rat& o);

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) { return a.cmp(b) < 0; }
  friend bool operator>(const Rat& a, const Rat& b) { return a.cmp(b) > 0; }
  friend bool operator<=(const Rat& a, const Rat& b) { return a.cmp(b) <= 0; }
  friend bool operator>=(const Rat& a, const Rat& b) { return a.cmp(b) >= 0; }

  int cmp(const Rat& o) const;

  Rat abs() const;
  // x^e, e may be negative (then x != 0 required).
  Rat pow(long e) const;
  Int floor() const;
  Int ceil() const;

  // Canonical serialization, always "num/den" (e.g. "255/1024", "0/1").
  std::string to_string() const;
  // Display-only decimal rendering with `sig` significant digits
  // (round half away from zero).  Never used in any verdict.
  std::string decimal(int sig = 12) const;

  friend std::ostream& operator<<(std::ostream& os, const Rat& r);

 private:
  void canonicalize();

  Int num_, den_;
};

inline Rat min(const Rat& a, const Rat& b) { return a <= b ? a : b; }
inline Rat max(const Rat& a, const Rat& b) { return a >= b ? a : b; }

// Overflow-checked Index arithmetic (throws OverflowError).
Index checked_add(Index a, Index b);
Index checked_mul(Index a, Index b);

}  // namespace bcq
