// Evaluation harness: value-set statistics, unary accuracy CDFs, exhaustive
// binary sweeps with color grids, and throughput.
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nrs/exact.hpp"
#include "nrs/formats.hpp"
#include "nrs/math_ops.hpp"

namespace nrs {

/// A workload larger than the configured cap was requested.
class WorkloadRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DynamicRange {
  Rational min_abs;
  Rational max1, max2, max3;  ///< the three largest distinct positive values
  long double dr = 0;         ///< log10(max1 / min_abs)
};

/// Distinct finite nonzero magnitudes, ascending.
std::vector<Rational> distinct_magnitudes(const Format& f, int width_cap = kDefaultEnumerationCap);

DynamicRange dynamic_range(const Format& f, int width_cap = kDefaultEnumerationCap);

/// Distinct |v| counted per decade floor(log10|v|).
std::map<long, std::uint64_t> density_histogram(const Format& f, int width_cap = kDefaultEnumerationCap);

/// Distinct |v| with lo < |v| < hi.
std::uint64_t golden_zone_count(const Format& f, const Rational& lo, const Rational& hi,
                                int width_cap = kDefaultEnumerationCap);

/// Number of series terms in the unary reference.
inline constexpr unsigned kReferenceTerms = 30;
/// Bits carried by the floating evaluation of unary references.
inline constexpr std::uint32_t kReferenceBits = 320;

/// Reference value used by unary_sweep; nullopt outside the function's domain.
std::optional<Rational> unary_reference(UnaryFun fun, const Rational& x);

struct UnaryCdf {
  UnaryFun fun = UnaryFun::sqrt;
  std::vector<double> digits;  ///< ascending; Exact results are kMaxDigits
  std::uint64_t exact = 0;

  /// Fraction of results with at least `d` digits.
  double fraction_at_least(double d) const;
};

UnaryCdf unary_sweep(const Format& f, UnaryFun fun, int width_cap = kDefaultEnumerationCap);

inline constexpr int kHistogramBins = 161;  ///< 0.1-digit bins over [0, 16]

/// Accuracy is accumulated in fixed point so the result does not depend on
/// how pairs are split across threads.
inline constexpr double kAccuracyScale = 4294967296.0;

struct SweepStats {
  ArithOp op = ArithOp::add;
  std::uint64_t total_pairs = 0;
  /// Results equal to the reference. Pairs whose reference is itself special
  /// (special operand, division by zero) count here when the format returns
  /// a special; they are also tallied in special_operand_count.
  std::uint64_t exact_count = 0;
  /// Special results (NaN/NaR/NR/Inf) from finite operands: overflow and the like.
  std::uint64_t special_count = 0;
  std::uint64_t inexact_count = 0;
  std::uint64_t special_operand_count = 0;
  std::uint64_t accuracy_fixed = 0;  ///< sum of digits * kAccuracyScale over inexact results
  std::array<std::uint64_t, kHistogramBins> histogram{};
  double kops = 0;

  double accuracy_sum() const { return static_cast<double>(accuracy_fixed) / kAccuracyScale; }
  double exact_pct() const;
  double special_pct() const;
  double special_operand_pct() const;
  /// Mean digits over inexact and special results, specials scoring 0.
  double avg_digits() const;
  /// Mean digits over inexact finite results only.
  double avg_inexact_digits() const;

  void add_exact() { ++exact_count; }
  void add_special_operand() {
    ++exact_count;
    ++special_operand_count;
  }
  void add_special() { ++special_count; }
  void add_inexact(double digits);

  SweepStats& operator+=(const SweepStats& o);
  friend bool operator==(const SweepStats& a, const SweepStats& b);
};

/// n x n accuracy cells indexed by (row pattern, column pattern).
struct ColorGrid {
  std::size_t n = 0;
  std::vector<float> cells;

  float at(std::size_t row, std::size_t col) const { return cells[row * n + col]; }
};

struct SweepOptions {
  int width_cap = 12;
  bool allow_large = false;
  /// When nonzero, evaluate this many random pairs instead of all of them.
  std::uint64_t subsample = 0;
  std::uint64_t seed = 1;
  bool want_grid = false;
  int threads = 0;  ///< 0: OpenMP default
};

struct SweepResult {
  SweepStats stats;
  std::optional<ColorGrid> grid;
};

/// Cell value written for a pair that is special or whose reference is special.
inline constexpr float kSpecialCell = 0.0f;

/// Parallel sweep over all ordered pattern pairs (or a random subsample).
SweepResult binary_sweep(const Format& f, ArithOp op, const SweepOptions& opt = {});

/// Serial sweep that uses rational references and the general arithmetic
/// path for every pair. Classification matches binary_sweep.
SweepResult binary_sweep_reference(const Format& f, ArithOp op, const SweepOptions& opt = {});

enum class Engine { reference, fast };

/// Thousands of operations per second on random finite operands.
double throughput(const Format& f, ArithOp op, double seconds, Engine engine = Engine::reference,
                  std::uint64_t seed = 1);

}  // namespace nrs
