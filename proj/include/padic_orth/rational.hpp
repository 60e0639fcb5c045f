#pragma once

// Exact scalars and p-adic valuations.
//
// Coordinates live in Q, which is dense in Q_p; every algorithm in this
// library stays inside exact rationals. GMP's mpq_class keeps values in
// lowest terms with a positive denominator once canonicalized.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "padic_orth/error.hpp"

namespace padic_orth {

using Integer = mpz_class;
using Rational = mpq_class;

/// A validated prime. Primality is checked by trial division on construction.
class Prime {
 public:
  explicit Prime(unsigned long p) : value_(p), big_(p) {
    if (!is_prime(p)) {
      throw Error(ErrorKind::InvalidParameters, std::to_string(p) + " is not prime");
    }
  }

  unsigned long value() const noexcept { return value_; }
  const Integer& as_integer() const noexcept { return big_; }
  operator unsigned long() const noexcept { return value_; }

  friend bool operator==(const Prime& a, const Prime& b) noexcept { return a.value_ == b.value_; }

  static bool is_prime(unsigned long n) noexcept {
    if (n < 2) return false;
    for (unsigned long d = 2; d * d <= n; ++d) {
      if (n % d == 0) return false;
    }
    return true;
  }

 private:
  unsigned long value_;
  Integer big_;
};

/// An integer or +infinity; +infinity orders above every integer.
class ExtInt {
 public:
  constexpr ExtInt(long v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  static constexpr ExtInt infinity() { return ExtInt(); }

  constexpr bool is_infinite() const noexcept { return !value_.has_value(); }
  long value() const {
    if (!value_) throw Error(ErrorKind::InvalidParameters, "value() of infinite ExtInt");
    return *value_;
  }

  friend constexpr bool operator==(const ExtInt& a, const ExtInt& b) noexcept = default;
  friend constexpr std::strong_ordering operator<=>(const ExtInt& a, const ExtInt& b) noexcept {
    if (a.is_infinite() || b.is_infinite()) {
      return static_cast<int>(a.is_infinite()) <=> static_cast<int>(b.is_infinite());
    }
    return *a.value_ <=> *b.value_;
  }
  friend constexpr ExtInt operator+(const ExtInt& a, const ExtInt& b) noexcept {
    if (a.is_infinite() || b.is_infinite()) return infinity();
    return ExtInt(*a.value_ + *b.value_);
  }

  std::string to_string() const { return value_ ? std::to_string(*value_) : "inf"; }

 private:
  constexpr ExtInt() = default;
  std::optional<long> value_;
};

/// val_p of a nonzero integer.
inline long valuation(const Integer& z, const Prime& p) {
  if (sgn(z) == 0) throw Error(ErrorKind::InvalidParameters, "valuation of integer zero");
  if (p.value() == 2) return static_cast<long>(mpz_scan1(z.get_mpz_t(), 0));
  if (!mpz_divisible_ui_p(z.get_mpz_t(), p.value())) return 0;
  Integer rest;
  return static_cast<long>(mpz_remove(rest.get_mpz_t(), z.get_mpz_t(), p.as_integer().get_mpz_t()));
}

/// val_p(x) = val_p(numerator) - val_p(denominator); +infinity for zero.
inline ExtInt valuation(const Rational& x, const Prime& p) {
  if (sgn(x) == 0) return ExtInt::infinity();
  long v = 0;
  const Integer& num = x.get_num();
  const Integer& den = x.get_den();
  if (mpz_divisible_ui_p(num.get_mpz_t(), p.value())) v += valuation(num, p);
  if (mpz_divisible_ui_p(den.get_mpz_t(), p.value())) v -= valuation(den, p);
  return ExtInt(v);
}

/// p^k for any integer k (negative k gives 1/p^|k|).
inline Rational prime_power(const Prime& p, long k) {
  Integer pk;
  mpz_pow_ui(pk.get_mpz_t(), p.as_integer().get_mpz_t(), static_cast<unsigned long>(k < 0 ? -k : k));
  if (k >= 0) return Rational(pk);
  Rational r(Integer(1), pk);
  r.canonicalize();
  return r;
}

/// floor(x) as an integer.
inline Integer floor_of(const Rational& x) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

/// Canonical "a" or "a/b" text, lowest terms.
inline std::string to_string(const Rational& x) {
  Rational reduced = x;
  reduced.canonicalize();
  return reduced.get_str(10);
}

/// Parses "a", "-a", "a/b". Rejects zero denominators and stray characters.
inline Rational parse_rational(std::string_view text) {
  auto bad = [&] { return Error(ErrorKind::MalformedInput, "bad rational '" + std::string(text) + "'"); };
  if (text.empty()) throw bad();
  std::size_t slash = text.find('/');
  auto digits_ok = [](std::string_view s, bool allow_sign) {
    if (allow_sign && !s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s) {
      if (c < '0' || c > '9') return false;
    }
    return true;
  };
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!digits_ok(num, true) || !digits_ok(den, false)) throw bad();
  std::string num_s(num.front() == '+' ? num.substr(1) : num);
  Integer n(num_s, 10);
  Integer d(std::string(den), 10);
  if (sgn(d) == 0) throw bad();
  Rational r(n, d);
  r.canonicalize();
  return r;
}

}  // namespace padic_orth
