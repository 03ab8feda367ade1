// Integer-only arithmetic and encoding for narrow formats (width <= 20).
//
// Every finite value of a narrow format has at most 21 significant bits, so
// exact sums, products and long quotients fit in 128 bits. Encoding is a
// binary search in the sorted table of representable magnitudes; rounding
// decisions that cannot be settled in 128 bits fall back to Format::encode.
#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <vector>

#include "nrs/formats.hpp"
#include "nrs/math_ops.hpp"

namespace nrs {

/// Nonzero magnitude 2^exponent * mantissa / 2^127 (bit 127 of mantissa set).
/// `sticky` means the true value is strictly above the explicit bits.
struct WideValue {
  bool negative = false;
  bool zero = false;
  std::int64_t exponent = 0;
  unsigned __int128 mantissa = 0;
  bool sticky = false;

  /// Same value as an UnboundedFloat (used by the fallback path and tests).
  UnboundedFloat to_float() const;
};

struct FastEncoded {
  ValueClass cls = ValueClass::Zero;
  bool negative = false;
  std::uint64_t bits = 0;
  bool has_bits = true;
  bool exact = false;
  /// Value of the result for Finite results.
  std::int64_t exponent = 0;
  std::uint64_t mantissa = 0;  ///< top-aligned (bit 63 set)
};

class FastCodec {
 public:
  static constexpr int kMaxWidth = 20;

  explicit FastCodec(const Format& f);
  FastCodec(const FastCodec&) = delete;
  FastCodec& operator=(const FastCodec&) = delete;

  const Format& format() const { return format_; }

  /// Decoded operand cache entry.
  struct Operand {
    ValueClass cls = ValueClass::Zero;
    bool negative = false;
    std::int64_t exponent = 0;
    std::uint64_t mantissa = 0;  ///< integer mantissa with fraction_bits + 1 bits
    int fraction_bits = 0;
  };
  const Operand& operand(std::uint64_t bits) const { return ops_[bits]; }

  /// Exact result of a finite (or zero) pair; nullopt when an operand is
  /// special or the operation is a division by zero.
  std::optional<WideValue> exact_result(ArithOp op, const Operand& a, const Operand& b) const;

  /// Pattern nearest to x under the format's rounding and range policy.
  FastEncoded encode(const WideValue& x) const;

  /// Complete operation including special-operand handling (mirrors nrs_arith).
  FastEncoded arith(ArithOp op, std::uint64_t a, std::uint64_t b) const;

  /// Digits of agreement between a finite/zero result and the exact value.
  static double digits(const FastEncoded& r, const WideValue& exact);

  std::uint64_t fallback_count() const { return fallbacks_; }

 private:
  struct Entry {
    std::int64_t exponent = 0;
    std::uint64_t mantissa = 0;  ///< top-aligned
    std::uint64_t bits = 0;
    ValueClass cls = ValueClass::Finite;
    bool has_bits = true;
    bool even = true;
  };
  enum class Below { zero, clamp, nearest_zero };
  enum class Above { error, clamp };

  Format format_;
  std::vector<Operand> ops_;
  std::vector<Entry> table_[2];  ///< by sign, ascending magnitude
  Below below_ = Below::zero;
  Above above_ = Above::error;
  bool working_round_ = false;
  int working_bits_ = 0;
  RoundingMode mode_ = RoundingMode::RE;
  mutable std::atomic<std::uint64_t> fallbacks_{0};

  FastEncoded from_entry(const Entry& e, bool negative, bool exact) const;
  FastEncoded from_encoded(const Encoded& e) const;
  FastEncoded slow(const WideValue& x) const;
};

}  // namespace nrs
