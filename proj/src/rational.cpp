#include "bcq/rational.hpp"

#include <limits>
#include <ostream>
#include <sstream>

namespace bcq {

Rat::Rat(const Int& num, const Int& den) : num_(num), den_(den) {
  if (den_ == 0) throw ValidationError("Rat: zero denominator");
  canonicalize();
}

void Rat::canonicalize() {
  if (::sgn(den_) < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  Int g;
  mpz_gcd(g.get_mpz_t(), num_.get_mpz_t(), den_.get_mpz_t());
  if (g > 1) {
    mpz_divexact(num_.get_mpz_t(), num_.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
  }
}

Rat Rat::from_string(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(s), Int(1));
    return Rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
  } catch (const std::invalid_argument&) {
    throw ValidationError("Rat: cannot parse \"" + s + "\"");
  }
}

Rat Rat::pow2(long e) {
  Int p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e < 0 ? -e : e));
  return e >= 0 ? Rat(p, Int(1)) : Rat(Int(1), p);
}

Rat Rat::operator-() const {
  Rat r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

Rat& Rat::operator+=(const Rat& o) {
  num_ = num_ * o.den_ + o.num_ * den_;
  den_ *= o.den_;
  canonicalize();
  return *this;
}

Rat& Rat::operator-=(const Rat& o) {
  num_ = num_ * o.den_ - o.num_ * den_;
  den_ *= o.den_;
  canonicalize();
  return *this;
}

Rat& Rat::operator*=(const Rat& o) {
  num_ *= o.num_;
  den_ *= o.den_;
  canonicalize();
  return *this;
}

Rat& Rat::operator/=(const Rat& o) {
  if (o.num_ == 0) throw ValidationError("Rat: division by zero");
  num_ *= o.den_;
  den_ *= o.num_;
  canonicalize();
  return *this;
}

int Rat::cmp(const Rat& o) const {
  Int lhs = num_ * o.den_, rhs = o.num_ * den_;
  return ::cmp(lhs, rhs);
}

Rat Rat::abs() const {
  Rat r = *this;
  if (::sgn(r.num_) < 0) r.num_ = -r.num_;
  return r;
}

Rat Rat::pow(long e) const {
  if (e == 0) return Rat(1);
  bool invert = e < 0;
  unsigned long ue = static_cast<unsigned long>(invert ? -e : e);
  Int n, d;
  mpz_pow_ui(n.get_mpz_t(), num_.get_mpz_t(), ue);
  mpz_pow_ui(d.get_mpz_t(), den_.get_mpz_t(), ue);
  if (invert) {
    if (num_ == 0) throw ValidationError("Rat: 0 raised to a negative power");
    std::swap(n, d);
  }
  return Rat(n, d);
}

Int Rat::floor() const {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), num_.get_mpz_t(), den_.get_mpz_t());
  return q;
}

Int Rat::ceil() const {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), num_.get_mpz_t(), den_.get_mpz_t());
  return q;
}

std::string Rat::to_string() const {
  return num_.get_str() + "/" + den_.get_str();
}

std::string Rat::decimal(int sig) const {
  if (sig < 1) sig = 1;
  if (num_ == 0) return "0";
  const bool neg = ::sgn(num_) < 0;
  Int n = neg ? Int(-num_) : num_;

  // Decimal exponent e10 with 10^e10 <= n/den < 10^(e10+1).
  long e10 = static_cast<long>(mpz_sizeinbase(n.get_mpz_t(), 10)) -
             static_cast<long>(mpz_sizeinbase(den_.get_mpz_t(), 10));
  auto scaled_less_than_den = [&](long e) {
    // n < den * 10^e ?
    Int t;
    if (e >= 0) {
      mpz_ui_pow_ui(t.get_mpz_t(), 10, static_cast<unsigned long>(e));
      t *= den_;
      return n < t;
    }
    mpz_ui_pow_ui(t.get_mpz_t(), 10, static_cast<unsigned long>(-e));
    return n * t < den_;
  };
  while (scaled_less_than_den(e10)) --e10;
  while (!scaled_less_than_den(e10 + 1)) ++e10;

  // sig digits of n/den: round(n * 10^(sig-1-e10) / den), half away from zero.
  long shift = sig - 1 - e10;
  Int scaled = n;
  Int d = den_;
  if (shift >= 0) {
    Int t;
    mpz_ui_pow_ui(t.get_mpz_t(), 10, static_cast<unsigned long>(shift));
    scaled *= t;
  } else {
    Int t;
    mpz_ui_pow_ui(t.get_mpz_t(), 10, static_cast<unsigned long>(-shift));
    d *= t;
  }
  Int q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), scaled.get_mpz_t(), d.get_mpz_t());
  if (r * 2 >= d) q += 1;
  std::string digits = q.get_str();
  if (static_cast<int>(digits.size()) > sig) {  // rounding carried over
    digits.pop_back();
    ++e10;
  }

  std::string out;
  if (e10 >= 0 && e10 < sig) {
    out = digits.substr(0, static_cast<std::size_t>(e10) + 1);
    std::string frac = digits.substr(static_cast<std::size_t>(e10) + 1);
    if (!frac.empty()) out += "." + frac;
  } else if (e10 < 0 && e10 >= -5) {
    out = "0." + std::string(static_cast<std::size_t>(-e10 - 1), '0') + digits;
  } else {
    out = digits.substr(0, 1);
    if (digits.size() > 1) out += "." + digits.substr(1);
    out += "e" + std::to_string(e10);
  }
  return neg ? "-" + out : out;
}

std::ostream& operator<<(std::ostream& os, const Rat& r) {
  return os << r.to_string();
}

Index checked_add(Index a, Index b) {
  Index r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("index addition overflow");
  return r;
}

Index checked_mul(Index a, Index b) {
  Index r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("index multiplication overflow");
  return r;
}

}  // namespace bcq
