// Bit-level codecs for every concrete format: decode, encode, enumerate,
// pattern comparison.
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "nrs/descriptor.hpp"
#include "nrs/exact.hpp"
#include "nrs/tapered.hpp"
#include "nrs/unbounded_float.hpp"

namespace nrs {

enum class ValueClass { Finite, Zero, Inf, QNaN, SNaN, NaR, NR };

std::string_view class_name(ValueClass c);
/// QNaN, SNaN, NaR and NR.
inline bool is_error_class(ValueClass c) {
  return c == ValueClass::QNaN || c == ValueClass::SNaN || c == ValueClass::NaR || c == ValueClass::NR;
}

struct BitPattern {
  int width = 0;
  std::uint64_t bits = 0;
  friend bool operator==(const BitPattern&, const BitPattern&) = default;
};

/// Parses "0x..." or "0b..." ('_' separators allowed). Throws
/// std::invalid_argument when the literal is malformed or needs more than
/// `width` bits.
BitPattern parse_pattern(std::string_view text, int width);
std::string to_hex(const BitPattern& p);

/// Value 2^exponent * (1 + fraction / 2^fraction_bits) with a sign.
struct FiniteParts {
  bool negative = false;
  std::int64_t exponent = 0;
  std::uint64_t fraction = 0;
  int fraction_bits = 0;
};

/// Sub-fields as read from the pattern; absent fields are std::nullopt.
struct FieldView {
  int sign = 0;
  std::optional<std::int64_t> size_field;      ///< raw G / binaryG bits
  std::optional<std::int64_t> size_value;      ///< G, or the regime k
  std::optional<int> exponent_sign;
  std::optional<std::int64_t> exponent_size;   ///< es (may be -1)
  int exponent_bits_stored = 0;
  std::optional<std::int64_t> binary_exponent;
  std::optional<std::int64_t> biased_exponent; ///< floatp / ieee754 exponent field
  int fraction_size = 0;
  std::uint64_t fraction = 0;
};

struct DecodedValue {
  ValueClass cls = ValueClass::Zero;
  bool negative = false;
  FiniteParts parts;  ///< meaningful when cls == Finite
  FieldView fields;

  bool is_finite() const { return cls == ValueClass::Finite; }
  /// Exact value for Finite and Zero; throws std::domain_error otherwise.
  Rational value() const;
  /// Exact float with the given working fraction size (>= parts.fraction_bits).
  UnboundedFloat to_float(std::uint32_t working_fs) const;
};

/// Result of encoding: a class, the pattern when the format has one, and
/// whether the input was represented without rounding.
struct Encoded {
  ValueClass cls = ValueClass::Zero;
  bool negative = false;
  std::optional<std::uint64_t> bits;
  bool exact = false;
};

/// Tapered rounding used for results of arithmetic and elementary functions.
inline constexpr TaperedPolicy kArithmeticPolicy = TaperedPolicy::layout;
/// Tapered rounding used when converting a given value (constants, inputs).
inline constexpr TaperedPolicy kConversionPolicy = TaperedPolicy::working_then_truncate;

/// Codec bound to one descriptor. Cheap to copy; tapered layout tables are shared.
class Format {
 public:
  explicit Format(Descriptor d, TaperedPolicy arithmetic = kArithmeticPolicy,
                  TaperedPolicy conversion = kConversionPolicy);
  explicit Format(std::string_view text) : Format(parse_descriptor(text)) {}

  const Descriptor& descriptor() const { return desc_; }
  int width() const { return desc_.width(); }
  std::uint64_t mask() const;
  std::uint64_t pattern_count() const { return 1ULL << width(); }
  TaperedPolicy arithmetic_policy() const { return arithmetic_; }
  TaperedPolicy conversion_policy() const { return conversion_; }
  const TaperedLayout* layout() const { return layout_.get(); }

  /// Fraction size used for intermediate results of basic arithmetic.
  std::uint32_t working_fs() const;

  DecodedValue decode(std::uint64_t bits) const;
  /// Rounds a computed result (arithmetic policy).
  Encoded encode(const UnboundedFloat& v) const { return encode(v, arithmetic_); }
  Encoded encode(const UnboundedFloat& v, TaperedPolicy policy) const;
  /// Converts a given value (conversion policy).
  Encoded encode(const Rational& x) const;
  /// Class produced by an invalid operation (0/0, sqrt(-1), NaN operand).
  Encoded error_value() const;
  /// +-Inf for formats that have one, otherwise the overflow policy.
  Encoded infinity(bool negative) const;
  Encoded zero(bool negative = false) const;
  /// Encoding of a special input class (used by conversion).
  Encoded special(ValueClass c, bool negative) const;

 private:
  Descriptor desc_;
  TaperedPolicy arithmetic_;
  TaperedPolicy conversion_;
  std::shared_ptr<const TaperedLayout> layout_;

  DecodedValue decode_fixed(std::uint64_t bits) const;
  DecodedValue decode_float(std::uint64_t bits) const;
  DecodedValue decode_posit(std::uint64_t bits) const;
  DecodedValue decode_morris(std::uint64_t bits) const;
  Encoded encode_fixed(const UnboundedFloat& v) const;
  Encoded encode_floatp(const UnboundedFloat& v) const;
  Encoded encode_ieee(const UnboundedFloat& v) const;
};

DecodedValue decode(const Descriptor& d, const BitPattern& p);
Encoded encode(const Descriptor& d, const Rational& x);
Encoded encode(const Descriptor& d, const UnboundedFloat& x);

/// Refusal of an exhaustive workload that exceeds the configured width cap.
class WidthCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kDefaultEnumerationCap = 16;

/// Visits all 2^width patterns in increasing pattern order.
void enumerate(const Format& f, const std::function<void(std::uint64_t, const DecodedValue&)>& visit,
               int width_cap = kDefaultEnumerationCap);

enum class PatternOrder { less, equal, greater, unordered };

/// Orders two patterns by their integer encoding (two's complement for
/// posit, sign-magnitude otherwise). Special operands give `unordered`.
PatternOrder bit_compare(const Format& f, std::uint64_t p, std::uint64_t q);

/// Text for a decoded value: "1.387e-17", "0", "-0", "NaR", ...
std::string value_string(const DecodedValue& v);

}  // namespace nrs
