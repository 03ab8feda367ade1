// Infinite-precision naturals, integers and rationals. These are the value
// keepers behind every format and the ground truth for accuracy checks.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nrs {

/// Raised when an exact operation has no defined result (x/0, 0^-n, even
/// root of a negative value, ln of a nonpositive value).
class UndefinedOperation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Nonnegative integer of unbounded size.
class Natural {
 public:
  Natural() = default;
  Natural(unsigned long v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  explicit Natural(mpz_class v);

  const mpz_class& raw() const { return v_; }
  mpz_class& raw() { return v_; }

  std::size_t bit_length() const;
  bool is_zero() const { return sgn(v_) == 0; }
  bool bit(std::size_t i) const { return mpz_tstbit(v_.get_mpz_t(), i) != 0; }

  friend Natural operator+(const Natural& a, const Natural& b) { return Natural(mpz_class(a.v_ + b.v_)); }
  friend Natural operator*(const Natural& a, const Natural& b) { return Natural(mpz_class(a.v_ * b.v_)); }
  /// Throws UndefinedOperation when b > a.
  friend Natural operator-(const Natural& a, const Natural& b);
  friend Natural operator<<(const Natural& a, std::size_t s) { return Natural(mpz_class(a.v_ << s)); }
  friend Natural operator>>(const Natural& a, std::size_t s) { return Natural(mpz_class(a.v_ >> s)); }
  friend auto operator<=>(const Natural& a, const Natural& b) { return cmp(a.v_, b.v_) <=> 0; }
  friend bool operator==(const Natural& a, const Natural& b) { return a.v_ == b.v_; }

 private:
  mpz_class v_;
};

/// Sign-magnitude integer; division is euclidean (remainder always >= 0).
class Integer {
 public:
  Integer() = default;
  Integer(long v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  explicit Integer(mpz_class v) : v_(std::move(v)) {}
  Integer(bool negative, const Natural& magnitude);

  const mpz_class& raw() const { return v_; }
  bool negative() const { return sgn(v_) < 0; }
  Natural magnitude() const { return Natural(mpz_class(abs(v_))); }

  friend Integer operator+(const Integer& a, const Integer& b) { return Integer(mpz_class(a.v_ + b.v_)); }
  friend Integer operator-(const Integer& a, const Integer& b) { return Integer(mpz_class(a.v_ - b.v_)); }
  friend Integer operator*(const Integer& a, const Integer& b) { return Integer(mpz_class(a.v_ * b.v_)); }
  friend auto operator<=>(const Integer& a, const Integer& b) { return cmp(a.v_, b.v_) <=> 0; }
  friend bool operator==(const Integer& a, const Integer& b) { return a.v_ == b.v_; }

 private:
  mpz_class v_;
};

struct EuclidResult {
  Integer quotient;
  Natural remainder;
};

/// a = q*b + r with 0 <= r < |b|. Throws UndefinedOperation for b == 0.
EuclidResult euclid_divmod(const Integer& a, const Integer& b);

/// Canonical signed fraction: denominator > 0 and gcd(|num|, den) == 1.
class Rational {
 public:
  Rational() = default;
  Rational(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(const Integer& num, const Natural& den);
  explicit Rational(mpq_class q);
  explicit Rational(const mpz_class& z) : q_(z) {}

  const mpq_class& raw() const { return q_; }
  const mpz_class& numerator() const { return q_.get_num(); }
  const mpz_class& denominator() const { return q_.get_den(); }

  int sign() const { return sgn(q_); }
  bool is_zero() const { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }
  Rational abs() const { return Rational(mpq_class(::abs(q_))); }

  friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.q_ + b.q_)); }
  friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.q_ - b.q_)); }
  friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.q_ * b.q_)); }
  /// Throws UndefinedOperation when b == 0.
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const { return Rational(mpq_class(-q_)); }

  friend auto operator<=>(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) <=> 0; }
  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }

  /// a * 2^e, exact.
  Rational scaled_by_pow2(long e) const;

 private:
  mpq_class q_;
};

enum class RatOp { add, sub, mul, div };

Rational rat_arith(RatOp op, const Rational& a, const Rational& b);

/// Exact integer power; 0^negative throws UndefinedOperation.
Rational rat_pow(const Rational& a, long n);

enum class SeriesFunction { exp, ln, sin };

/// The k-th summand (k = 0, 1, ...) of the series used by taylor_eval:
///   exp: x^k/k!
///   sin: (-1)^k x^(2k+1)/(2k+1)!
///   ln:  2 z^(2k+1)/(2k+1), z = (x-1)/(x+1)
Rational series_term(SeriesFunction fun, const Rational& x, unsigned k);

/// Literal partial sum of the first `iterations` terms, in exact arithmetic.
/// No argument reduction is applied.
Rational taylor_eval(SeriesFunction fun, const Rational& x, unsigned iterations);

/// r with |r - a^(1/n)| < 2^-precision_bits * max(1, a^(1/n)), found by
/// Newton iteration on dyadic rationals.
Rational rat_root_approx(const Rational& a, unsigned n, unsigned precision_bits);

/// Nearest dyadic rational with `bits` significant bits (ties away from 0).
Rational round_to_significant_bits(const Rational& q, unsigned bits);

/// Floor of log2|q| for q != 0.
long floor_log2(const Rational& q);

/// log10|q| in long double precision; q must be nonzero. Valid for
/// magnitudes far outside the range of long double.
long double log10_abs(const Rational& q);

/// Parses "p", "-p/q", "333.74", "6.626070150e-34", "1e3" exactly.
/// Throws std::invalid_argument on malformed text.
Rational parse_rational(std::string_view text);

/// "p/q", or "p" for integers.
std::string to_string(const Rational& q);

/// Decimal rendering truncated (toward zero) to `decimals` fraction digits.
/// Magnitudes in [1e-3, 1e7) print positionally with trailing zeros
/// removed ("3.091", "100", "-0.827"); others print as "1.387e-17".
std::string format_truncated(const Rational& q, int decimals = 3);

/// Same convention applied to a double (used for accuracy figures).
std::string format_truncated(double v, int decimals = 3);

}  // namespace nrs
