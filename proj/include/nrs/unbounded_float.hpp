// Sign-magnitude binary floating point with an unbounded exponent range and
// a normalized mantissa. Every operation keeps the bits it produced beyond
// the working fraction size in an ordered rest-bit list so that a later
// rounding step sees the full result.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nrs/exact.hpp"

namespace nrs {

enum class RoundingMode { RZ, RE };

/// Bits that follow the mantissa LSB, most significant first.
///
/// The first `length` bits are explicit and equal to `bits` read as a
/// `length`-bit number. `sticky` records that some nonzero bit exists further
/// down (a nonterminating quotient or root, or an operand that was too far
/// below the result to be worth materializing).
struct RestBits {
  mpz_class bits;
  std::uint64_t length = 0;
  bool sticky = false;

  bool empty() const { return length == 0 && !sticky; }
  /// True iff any discarded information is nonzero.
  bool any() const { return sticky || sgn(bits) != 0; }
  std::vector<bool> explicit_bits() const;
};

class UnboundedFloat {
 public:
  /// Signed zero carrying the given fraction size.
  static UnboundedFloat zero(bool negative = false, std::uint32_t fraction_size = 0);

  /// (-1)^negative * 2^exponent * mantissa / 2^fraction_size.
  /// Throws std::invalid_argument unless mantissa has exactly
  /// fraction_size + 1 bits.
  static UnboundedFloat from_parts(bool negative, std::int64_t exponent, mpz_class mantissa,
                                   std::uint32_t fraction_size, RestBits rest = {});

  bool negative() const { return negative_; }
  bool is_zero() const { return zero_; }
  std::int64_t exponent() const { return exponent_; }
  const mpz_class& mantissa() const { return mantissa_; }
  std::uint32_t fraction_size() const { return fraction_size_; }
  const RestBits& rest() const { return rest_; }

  UnboundedFloat negated() const;
  UnboundedFloat abs() const;

  /// Mantissa as "1.0110" (binary, hidden bit first).
  std::string mantissa_string() const;

 private:
  bool negative_ = false;
  bool zero_ = true;
  std::int64_t exponent_ = 0;
  mpz_class mantissa_;
  std::uint32_t fraction_size_ = 0;
  RestBits rest_;

  friend UnboundedFloat normalize_scaled(mpz_class, std::int64_t, bool, bool, std::uint32_t);
};

enum class FcOp { add, sub, mul, div };

/// Exact add/sub/mul, and div with working_fs + 2 explicit quotient bits plus
/// a sticky marker. Division by zero throws UndefinedOperation. The result is
/// normalized to working_fs fraction bits and every further bit is kept in
/// rest_bits. Exception: an addend more than 4096 bits below the other
/// collapses into the sticky marker.
UnboundedFloat fc_arith(FcOp op, const UnboundedFloat& a, const UnboundedFloat& b, std::uint32_t working_fs);

/// Square root with working_fs + 2 explicit extra bits plus sticky.
/// Throws UndefinedOperation for negative input.
UnboundedFloat fc_sqrt(const UnboundedFloat& a, std::uint32_t working_fs);

/// Result of rounding a value at an absolute bit position.
struct LsbRounding {
  mpz_class magnitude;  ///< rounded |value| / 2^lsb
  bool inexact = false;
};

/// Rounds |a| to an integer multiple of 2^lsb.
LsbRounding round_at_lsb(const UnboundedFloat& a, std::int64_t lsb, RoundingMode mode);

struct Rounded {
  UnboundedFloat value;
  bool inexact = false;
};

/// Rounds the mantissa to target_fs fraction bits. RE looks at the first
/// dropped bit (guard) and the OR of everything below it (sticky), ties to
/// even; RZ truncates. A carry out of the mantissa renormalizes to 1.0 with
/// exponent + 1. The result has empty rest bits.
Rounded round_detail(const UnboundedFloat& a, std::uint32_t target_fs, RoundingMode mode);

inline UnboundedFloat round_to(const UnboundedFloat& a, std::uint32_t target_fs, RoundingMode mode) {
  return round_detail(a, target_fs, mode).value;
}

/// Normalized float with working_fs fraction bits; two explicit rest bits
/// and a sticky marker carry the remainder of the binary expansion.
UnboundedFloat from_rational(const Rational& x, std::uint32_t working_fs);

/// Exact value including explicit rest bits. Throws std::logic_error when the
/// sticky marker is set, since the value is then not known exactly.
Rational to_rational(const UnboundedFloat& a);

/// Three-way comparison of the represented values (explicit bits only).
int compare(const UnboundedFloat& a, const UnboundedFloat& b);

/// Builds a normalized float from S * 2^lsb (S signed, sticky meaning a
/// nonzero tail below bit 0 of S with the sign of S).
UnboundedFloat normalize_scaled(mpz_class s, std::int64_t lsb, bool sticky, bool negative_zero,
                                std::uint32_t working_fs);

}  // namespace nrs
