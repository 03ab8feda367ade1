// Shared machinery of the tapered formats (posit and the Morris family):
// every format is flattened into a sorted table of exponent segments, each
// with a fixed fraction width and a fixed way of writing the prefix fields.
// Encoding a value becomes a bracket search on that table.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nrs/descriptor.hpp"
#include "nrs/unbounded_float.hpp"

namespace nrs {

/// Exponents first, first+step, ..., last share one field layout.
struct ExponentSegment {
  std::int64_t first = 0;
  std::int64_t last = 0;
  std::int64_t step = 1;      ///< 2^truncated, truncated = es - stored exponent bits
  int fraction_bits = 0;
  int exponent_bits = 0;      ///< stored exponent bits
  int truncated = 0;          ///< low exponent bits lost at the word end
  std::uint64_t prefix = 0;   ///< field bits between sign and exponent (G, exponent sign, regime)
  int prefix_bits = 0;
  std::int64_t base = 0;      ///< stored = (offset(E) - base) >> truncated
  bool magnitude_offset = false;  ///< offset(E) = |E| instead of E
  bool negate_stored = false;
  std::uint64_t alt_prefix = 0;   ///< used when the primary composition collides with a special pattern
  bool has_alt_prefix = false;
};

/// A point of the magnitude lattice: 2^exponent * (1 + fraction / 2^fraction_bits).
struct Slot {
  std::int64_t exponent = 0;
  std::uint64_t fraction = 0;
  int fraction_bits = 0;
};

/// How a tapered format turns a working value into a pattern.
enum class TaperedPolicy {
  /// Round once, at the fraction width of the layout that holds the value.
  layout,
  /// Round at the working precision (fraction size = bit-width) with the
  /// format's mode, then truncate into the layout.
  working_then_truncate,
};

struct FitResult {
  enum class Outcome { finite, zero, error } outcome = Outcome::finite;
  std::uint64_t bits = 0;
  bool exact = false;
};

class TaperedLayout {
 public:
  explicit TaperedLayout(const Descriptor& d);

  const Descriptor& descriptor() const { return desc_; }
  const std::vector<ExponentSegment>& segments() const { return segs_; }
  int width() const { return width_; }
  std::uint64_t zero_pattern() const { return 0; }
  std::uint64_t error_pattern() const { return error_; }

  /// Segment holding exponent E exactly, if any.
  const ExponentSegment* find(std::int64_t e) const;
  std::optional<std::int64_t> floor_exponent(std::int64_t e) const;
  std::optional<std::int64_t> next_exponent(std::int64_t e) const;

  std::optional<Slot> next(const Slot& s) const;
  std::optional<Slot> prev(const Slot& s) const;
  Slot slot_at(std::int64_t e, std::uint64_t fraction) const;

  /// Full pattern for a lattice point; nullopt when the point is shadowed by
  /// the zero or error pattern.
  std::optional<std::uint64_t> compose(bool negative, const Slot& s) const;

  /// Smallest / largest representable magnitude for the given sign.
  Slot min_slot(bool negative) const;
  Slot max_slot(bool negative) const;

  FitResult fit(const UnboundedFloat& v, RoundingMode mode, TaperedPolicy policy) const;

 private:
  Descriptor desc_;
  int width_ = 0;
  std::uint64_t error_ = 0;
  std::vector<ExponentSegment> segs_;

  std::uint64_t magnitude_bits(const ExponentSegment& seg, std::uint64_t prefix, const Slot& s) const;
  std::uint64_t apply_sign(bool negative, std::uint64_t magnitude) const;
  std::optional<Slot> valid_at_or_below(bool negative, std::optional<Slot> s) const;
  std::optional<Slot> valid_above(bool negative, const Slot& s) const;
};

/// Three-way compare of |v| with the lattice point (explicit and sticky bits of v honored).
int compare_with_slot(const UnboundedFloat& v, const Slot& s);

}  // namespace nrs
