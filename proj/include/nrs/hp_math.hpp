// Elementary functions on exact inputs, evaluated with MPFR. Results are
// truncated to `precision` bits and carry a sticky marker when inexact, so a
// later rounding to any narrower format is correct.
#pragma once

#include <cstdint>

#include "nrs/exact.hpp"
#include "nrs/unbounded_float.hpp"

namespace nrs::hp {

enum class Fun { exp, ln, sin, sqrt, root, pow };

/// Exponent used for results beyond every format's range.
inline constexpr std::int64_t kHugeExponent = std::int64_t{1} << 60;

/// f(x) (or x^param for pow, x^(1/param) for root). Throws
/// UndefinedOperation outside the domain. Overflow gives a value with
/// exponent kHugeExponent and underflow one with -kHugeExponent.
UnboundedFloat eval(Fun f, const UnboundedFloat& x, std::uint32_t precision, const Rational& param = Rational(0));

/// Same, for an exact rational argument.
UnboundedFloat eval(Fun f, const Rational& x, std::uint32_t precision, const Rational& param = Rational(0));

UnboundedFloat pi(std::uint32_t precision);
UnboundedFloat euler_e(std::uint32_t precision);

/// The literal partial sum of taylor_eval's series, evaluated in floating
/// point with `precision` bits. Agrees with taylor_eval to about
/// precision - 8 bits relative to the largest term.
Rational partial_sum(SeriesFunction fun, const Rational& x, unsigned terms, std::uint32_t precision);

/// Value of an MPFR-backed result as an exact rational (sticky tail dropped).
Rational truncated_rational(const UnboundedFloat& v);

}  // namespace nrs::hp
