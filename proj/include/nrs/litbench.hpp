// Literature benchmark programs, each runnable in any format or in exact
// rational arithmetic.
#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nrs/exact.hpp"
#include "nrs/formats.hpp"
#include "nrs/math_ops.hpp"
#include "nrs/report.hpp"

namespace nrs {

/// A benchmark intermediate: a class plus, for Finite/Zero, its exact value.
struct BenchValue {
  ValueClass cls = ValueClass::Zero;
  bool negative = false;
  Rational q;
  std::optional<std::uint64_t> bits;  ///< pattern when computed in a format

  bool is_value() const { return cls == ValueClass::Finite || cls == ValueClass::Zero; }
  /// Value truncated to three decimals, or the class name for specials.
  std::string str() const;
};

/// Precision of references and of the oracle's irrational steps.
inline constexpr std::uint32_t kOracleBits = 256;

/// Arithmetic backend for the benchmarks: a format, or exact rationals
/// (irrational steps such as sqrt and exp are taken to kOracleBits).
class BenchContext {
 public:
  explicit BenchContext(const Format& f) : format_(f) {}
  static BenchContext oracle() { return BenchContext(); }

  bool is_oracle() const { return !format_.has_value(); }
  std::string label() const;

  BenchValue constant(const Rational& q) const;
  BenchValue constant(long v) const { return constant(Rational(v)); }
  BenchValue add(const BenchValue& a, const BenchValue& b) const { return arith(ArithOp::add, a, b); }
  BenchValue sub(const BenchValue& a, const BenchValue& b) const { return arith(ArithOp::sub, a, b); }
  BenchValue mul(const BenchValue& a, const BenchValue& b) const { return arith(ArithOp::mul, a, b); }
  BenchValue div(const BenchValue& a, const BenchValue& b) const { return arith(ArithOp::div, a, b); }
  BenchValue neg(const BenchValue& a) const;
  BenchValue abs(const BenchValue& a) const;
  BenchValue sqrt(const BenchValue& a) const { return fun(UnaryFun::sqrt, a); }
  BenchValue exp(const BenchValue& a) const { return fun(UnaryFun::exp, a); }
  BenchValue ln(const BenchValue& a) const { return fun(UnaryFun::ln, a); }
  BenchValue pow(const BenchValue& a, const Rational& p) const { return fun(UnaryFun::pow, a, p); }

 private:
  BenchContext() = default;
  BenchValue arith(ArithOp op, const BenchValue& a, const BenchValue& b) const;
  BenchValue fun(UnaryFun f, const BenchValue& a, const Rational& param = Rational(0)) const;
  BenchValue from_encoded(const Encoded& e) const;
  Encoded to_encoded(const BenchValue& v) const;

  std::optional<Format> format_;
};

/// Decimal accuracy of a benchmark value against a reference.
AccuracyResult accuracy_of(const BenchValue& v, const Rational& reference);

/// 2 * prod_{i=1..n} (2i)^2 / ((2i-1)(2i+1)).
BenchValue wallis(const BenchContext& c, int n);
/// Thirty single Wallis fractions 2/1, 2/3, 4/3, 4/5, ... paired into factors.
inline constexpr int kWallisFactors = 15;

/// u_n of the recurrence seeded with u0 = 2, u1 = -4.
BenchValue kahan(const BenchContext& c, int n);
/// Thirty iterations past the two seeds.
inline constexpr int kKahanIndex = 31;
BenchValue muller_h(const BenchContext& c, long x);
inline constexpr std::array<long, 4> kMullerPoints = {15, 16, 17, 9999};

inline constexpr long kRumpX = 77617;
inline constexpr long kRumpXAlternate = 77517;
BenchValue rump(const BenchContext& c, long x = kRumpX, long y = 33096);

BenchValue quadratic_r1(const BenchContext& c);
Rational quadratic_r1_reference();

std::pair<BenchValue, BenchValue> bailey(const BenchContext& c);

BenchValue thin_triangle(const BenchContext& c);
Rational thin_triangle_reference();

BenchValue gustafson_x(const BenchContext& c);
Rational gustafson_x_reference();

/// x^n through the context's power function, over n! accumulated by
/// repeated multiplication.
BenchValue power_factorial(const BenchContext& c, long x, long n);
Rational power_factorial_reference(long x, long n);

struct PhysicalConstant {
  const char* name;
  const char* literal;
};
inline constexpr std::array<PhysicalConstant, 5> kPhysicalConstants = {{
    {"planck", "6.626070150e-34"},
    {"avogadro", "6.02214076e23"},
    {"light", "299792458"},
    {"charge", "1.602176634e-19"},
    {"boltzmann", "1.380649e-23"},
}};

/// Accuracy of a constant after one conversion into the context.
AccuracyResult constant_accuracy(const BenchContext& c, const Rational& value);

std::vector<Descriptor> table4_descriptors();
std::vector<Descriptor> table5_descriptors();

struct LitbenchOptions {
  long rump_x = kRumpX;
};

/// Recurrence and cancellation benchmarks, one row per context (the oracle row last when requested).
Table table4(const std::vector<Descriptor>& descs, bool with_oracle, const LitbenchOptions& opt = {});
/// Thin triangle, x, x^n/n! and constant-conversion accuracies, one row per context.
Table table5(const std::vector<Descriptor>& descs);

}  // namespace nrs
