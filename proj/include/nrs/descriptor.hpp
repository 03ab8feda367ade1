// Format identities: "posit:16:2:RE", "morrisunary:12:RE", "rational", ...
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "nrs/unbounded_float.hpp"

namespace nrs {

enum class Kind { fixedp, floatp, ieee754, posit, morris, morrisheb, morrisbias, morrisunary, rational };

/// Largest supported bit-width for any fixed-size format.
inline constexpr int kMaxWidth = 62;

/// Parse failure; the message names the offending token.
class DescriptorError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Descriptor {
  Kind kind = Kind::rational;
  /// fixedp: (is, fs); floatp/ieee754: (es, fs); posit: (size, es);
  /// morris kinds: (size, g); morrisunary: (size, -).
  int p1 = 0;
  int p2 = 0;
  RoundingMode rounding = RoundingMode::RE;

  /// Total bit-width; 0 for the rational oracle.
  int width() const;
  bool is_tapered() const;
  bool is_rational() const { return kind == Kind::rational; }
  std::string to_string() const;
  /// Human label in the style "MorrisUnary(12,RE)".
  std::string label() const;

  friend bool operator==(const Descriptor&, const Descriptor&) = default;
};

/// Grammar: kind[:p1[:p2]]:rounding, or "rational".
Descriptor parse_descriptor(std::string_view text);

std::string_view kind_name(Kind k);
std::string_view rounding_name(RoundingMode m);

}  // namespace nrs
