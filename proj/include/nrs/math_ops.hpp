// Arithmetic and elementary functions over any format, plus the
// decimal-accuracy metric.
#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "nrs/exact.hpp"
#include "nrs/formats.hpp"

namespace nrs {

enum class ArithOp { add, sub, mul, div };
enum class UnaryFun { sqrt, nth_root, inverse, exp, ln, sin, pow };

std::string_view op_name(ArithOp op);
ArithOp parse_op(std::string_view s);
std::string_view fun_name(UnaryFun f);
UnaryFun parse_fun(std::string_view s);

/// Extra bits used by elementary functions beyond the format's working precision.
inline constexpr std::uint32_t kFunctionGuardBits = 32;

/// Encoded value of a pattern (class, sign, bits).
Encoded as_encoded(const Format& f, std::uint64_t bits);
/// Exact value of a finite or zero encoded value; nullopt for specials.
std::optional<Rational> value_of(const Format& f, const Encoded& e);

Encoded nrs_arith(const Format& f, ArithOp op, const Encoded& a, const Encoded& b);
Encoded nrs_arith(const Format& f, ArithOp op, std::uint64_t a, std::uint64_t b);

/// `param` is n for nth_root and the exponent y for pow.
Encoded nrs_fun(const Format& f, UnaryFun fun, const Encoded& a, const Rational& param = Rational(0));
Encoded nrs_fun(const Format& f, UnaryFun fun, std::uint64_t a, const Rational& param = Rational(0));

struct AccuracyResult {
  enum class Kind { Exact, Digits, Wrong } kind = Kind::Wrong;
  double digits = 0.0;  ///< kMaxDigits for Exact, 0 for Wrong

  bool exact() const { return kind == Kind::Exact; }
};

inline constexpr double kMaxDigits = 16.0;

/// -log10|log10(computed/reference)| clamped to [0, 16]; Exact when equal,
/// Wrong when a special, a sign mismatch or a zero/nonzero mismatch.
AccuracyResult decimal_accuracy(const std::optional<Rational>& computed, const Rational& reference);

/// Digits for a known log10 ratio (clamped).
double digits_from_log10_ratio(long double log10_ratio);

}  // namespace nrs
