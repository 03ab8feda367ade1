#include "nrs/bench.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "nrs/fast_codec.hpp"
#include "nrs/hp_math.hpp"

namespace nrs {

namespace {

Rational pow10(long k) {
  const Rational ten(10);
  return k >= 0 ? rat_pow(ten, k) : Rational(1) / rat_pow(ten, -k);
}

long floor_log10(const Rational& v) {
  auto k = static_cast<long>(std::floor(log10_abs(v)));
  while (pow10(k) > v) --k;
  while (pow10(k + 1) <= v) ++k;
  return k;
}

bool is_value(ValueClass c) { return c == ValueClass::Finite || c == ValueClass::Zero; }

int histogram_bin(double digits) {
  const int b = static_cast<int>(std::floor(digits * 10.0));
  return std::clamp(b, 0, kHistogramBins - 1);
}

void check_workload(const Format& f, const SweepOptions& opt) {
  if (opt.subsample != 0 || opt.allow_large || f.width() <= opt.width_cap) return;
  throw WorkloadRefused("a full sweep of " + f.descriptor().to_string() + " exceeds the width cap of " +
                        std::to_string(opt.width_cap) + " bits");
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> sample_pairs(const Format& f, const SweepOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<std::uint64_t> pick(0, f.mask());
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs(opt.subsample);
  for (auto& p : pairs) {
    p.first = pick(rng);
    p.second = pick(rng);
  }
  return pairs;
}

struct PairOutcome {
  enum class Kind { exact, special_operand, special, inexact } kind;
  double digits = 0;
};

void tally(SweepStats& s, const PairOutcome& o) {
  ++s.total_pairs;
  switch (o.kind) {
    case PairOutcome::Kind::exact: s.add_exact(); break;
    case PairOutcome::Kind::special_operand: s.add_special_operand(); break;
    case PairOutcome::Kind::special: s.add_special(); break;
    case PairOutcome::Kind::inexact: s.add_inexact(o.digits); break;
  }
}

float cell_of(const PairOutcome& o) {
  switch (o.kind) {
    case PairOutcome::Kind::exact: return static_cast<float>(kMaxDigits);
    case PairOutcome::Kind::inexact: return static_cast<float>(o.digits);
    default: return kSpecialCell;
  }
}

PairOutcome fast_pair(const FastCodec& c, ArithOp op, std::uint64_t a, std::uint64_t b) {
  const auto x = c.exact_result(op, c.operand(a), c.operand(b));
  if (!x) return {PairOutcome::Kind::special_operand};
  const FastEncoded r = c.encode(*x);
  if (!is_value(r.cls)) return {PairOutcome::Kind::special};
  if (r.exact) return {PairOutcome::Kind::exact};
  return {PairOutcome::Kind::inexact, FastCodec::digits(r, *x)};
}

PairOutcome reference_pair(const Format& f, ArithOp op, std::uint64_t a, std::uint64_t b) {
  const DecodedValue da = f.decode(a), db = f.decode(b);
  if (!is_value(da.cls) || !is_value(db.cls)) return {PairOutcome::Kind::special_operand};
  if (op == ArithOp::div && db.cls == ValueClass::Zero) return {PairOutcome::Kind::special_operand};
  static constexpr RatOp kOps[] = {RatOp::add, RatOp::sub, RatOp::mul, RatOp::div};
  const Rational ref = rat_arith(kOps[static_cast<int>(op)], da.value(), db.value());
  const Encoded r = nrs_arith(f, op, a, b);
  if (!is_value(r.cls)) return {PairOutcome::Kind::special};
  const AccuracyResult acc = decimal_accuracy(value_of(f, r), ref);
  if (acc.exact()) return {PairOutcome::Kind::exact};
  return {PairOutcome::Kind::inexact, acc.digits};
}

template <typename PairFn>
SweepResult run_sweep(const Format& f, ArithOp op, const SweepOptions& opt, bool parallel, PairFn&& pair) {
  check_workload(f, opt);
  SweepResult out;
  out.stats.op = op;
  const auto start = std::chrono::steady_clock::now();
  if (opt.subsample != 0) {
    const auto pairs = sample_pairs(f, opt);
    const auto count = static_cast<std::int64_t>(pairs.size());
#pragma omp parallel if (parallel) num_threads(opt.threads > 0 ? opt.threads : omp_get_max_threads())
    {
      SweepStats local;
#pragma omp for schedule(static)
      for (std::int64_t i = 0; i < count; ++i) tally(local, pair(pairs[i].first, pairs[i].second));
#pragma omp critical
      out.stats += local;
    }
  } else {
    const auto n = static_cast<std::int64_t>(f.pattern_count());
    if (opt.want_grid) {
      out.grid.emplace();
      out.grid->n = static_cast<std::size_t>(n);
      out.grid->cells.assign(static_cast<std::size_t>(n * n), kSpecialCell);
    }
    float* cells = out.grid ? out.grid->cells.data() : nullptr;
#pragma omp parallel if (parallel) num_threads(opt.threads > 0 ? opt.threads : omp_get_max_threads())
    {
      SweepStats local;
#pragma omp for schedule(dynamic, 16)
      for (std::int64_t a = 0; a < n; ++a) {
        for (std::int64_t b = 0; b < n; ++b) {
          const PairOutcome o = pair(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
          tally(local, o);
          if (cells != nullptr) cells[a * n + b] = cell_of(o);
        }
      }
#pragma omp critical
      out.stats += local;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.stats.op = op;
  out.stats.kops = secs > 0 ? static_cast<double>(out.stats.total_pairs) / secs / 1000.0 : 0.0;
  return out;
}

}  // namespace

std::vector<Rational> distinct_magnitudes(const Format& f, int width_cap) {
  std::vector<Rational> mags;
  enumerate(
      f,
      [&](std::uint64_t, const DecodedValue& d) {
        if (d.cls == ValueClass::Finite) mags.push_back(d.value().abs());
      },
      width_cap);
  std::sort(mags.begin(), mags.end());
  mags.erase(std::unique(mags.begin(), mags.end()), mags.end());
  return mags;
}

DynamicRange dynamic_range(const Format& f, int width_cap) {
  std::vector<Rational> positives;
  enumerate(
      f,
      [&](std::uint64_t, const DecodedValue& d) {
        if (d.cls == ValueClass::Finite && !d.negative) positives.push_back(d.value());
      },
      width_cap);
  std::sort(positives.begin(), positives.end());
  positives.erase(std::unique(positives.begin(), positives.end()), positives.end());
  const std::vector<Rational> mags = distinct_magnitudes(f, width_cap);
  if (mags.empty() || positives.size() < 3) throw std::invalid_argument("format has too few finite values");
  DynamicRange r;
  r.min_abs = mags.front();
  const std::size_t n = positives.size();
  r.max1 = positives[n - 1];
  r.max2 = positives[n - 2];
  r.max3 = positives[n - 3];
  r.dr = log10_abs(r.max1) - log10_abs(r.min_abs);
  return r;
}

std::map<long, std::uint64_t> density_histogram(const Format& f, int width_cap) {
  std::map<long, std::uint64_t> h;
  for (const Rational& v : distinct_magnitudes(f, width_cap)) ++h[floor_log10(v)];
  return h;
}

std::uint64_t golden_zone_count(const Format& f, const Rational& lo, const Rational& hi, int width_cap) {
  if (!(lo < hi)) return 0;
  const std::vector<Rational> mags = distinct_magnitudes(f, width_cap);
  const auto first = std::upper_bound(mags.begin(), mags.end(), lo);
  const auto last = std::lower_bound(mags.begin(), mags.end(), hi);
  return first < last ? static_cast<std::uint64_t>(last - first) : 0;
}

std::optional<Rational> unary_reference(UnaryFun fun, const Rational& x) {
  switch (fun) {
    case UnaryFun::inverse:
      if (x.is_zero()) return std::nullopt;
      return Rational(1) / x;
    case UnaryFun::exp: return hp::partial_sum(SeriesFunction::exp, x, kReferenceTerms, kReferenceBits);
    case UnaryFun::sin: return hp::partial_sum(SeriesFunction::sin, x, kReferenceTerms, kReferenceBits);
    case UnaryFun::ln:
      if (x.sign() <= 0) return std::nullopt;
      return hp::partial_sum(SeriesFunction::ln, x, kReferenceTerms, kReferenceBits);
    case UnaryFun::sqrt:
      if (x.sign() < 0) return std::nullopt;
      return hp::truncated_rational(hp::eval(hp::Fun::sqrt, x, kReferenceBits));
    case UnaryFun::nth_root: return hp::truncated_rational(hp::eval(hp::Fun::root, x, kReferenceBits, Rational(3)));
    case UnaryFun::pow: return std::nullopt;
  }
  return std::nullopt;
}

double UnaryCdf::fraction_at_least(double d) const {
  if (digits.empty()) return 0.0;
  const auto it = std::lower_bound(digits.begin(), digits.end(), d);
  return static_cast<double>(digits.end() - it) / static_cast<double>(digits.size());
}

UnaryCdf unary_sweep(const Format& f, UnaryFun fun, int width_cap) {
  if (fun == UnaryFun::pow) throw std::invalid_argument("unary sweep does not cover pow");
  if (f.width() > width_cap) throw WidthCapExceeded(f.descriptor().to_string() + " exceeds the width cap of " + std::to_string(width_cap) + " bits");
  UnaryCdf cdf;
  cdf.fun = fun;
  const auto n = static_cast<std::int64_t>(f.pattern_count());
  const Rational param = fun == UnaryFun::nth_root ? Rational(3) : Rational(0);
  std::vector<double> digits(static_cast<std::size_t>(n), -1.0);
  std::uint64_t exact = 0;
#pragma omp parallel for schedule(dynamic, 64) reduction(+ : exact)
  for (std::int64_t p = 0; p < n; ++p) {
    const DecodedValue d = f.decode(static_cast<std::uint64_t>(p));
    if (d.cls != ValueClass::Finite) continue;
    const Rational x = d.value();
    const std::optional<Rational> ref = unary_reference(fun, x);
    if (!ref) continue;
    const Encoded r = nrs_fun(f, fun, static_cast<std::uint64_t>(p), param);
    const AccuracyResult acc = decimal_accuracy(value_of(f, r), *ref);
    if (acc.exact()) ++exact;
    digits[static_cast<std::size_t>(p)] = acc.digits;
  }
  for (double v : digits)
    if (v >= 0) cdf.digits.push_back(v);
  std::sort(cdf.digits.begin(), cdf.digits.end());
  cdf.exact = exact;
  return cdf;
}

double SweepStats::exact_pct() const {
  return total_pairs ? 100.0 * static_cast<double>(exact_count) / static_cast<double>(total_pairs) : 0.0;
}

double SweepStats::special_pct() const {
  return total_pairs ? 100.0 * static_cast<double>(special_count) / static_cast<double>(total_pairs) : 0.0;
}

double SweepStats::special_operand_pct() const {
  return total_pairs ? 100.0 * static_cast<double>(special_operand_count) / static_cast<double>(total_pairs) : 0.0;
}

double SweepStats::avg_digits() const {
  const std::uint64_t n = inexact_count + special_count;
  return n ? accuracy_sum() / static_cast<double>(n) : 0.0;
}

double SweepStats::avg_inexact_digits() const {
  return inexact_count ? accuracy_sum() / static_cast<double>(inexact_count) : 0.0;
}

void SweepStats::add_inexact(double digits) {
  ++inexact_count;
  accuracy_fixed += static_cast<std::uint64_t>(std::llround(digits * kAccuracyScale));
  ++histogram[static_cast<std::size_t>(histogram_bin(digits))];
}

SweepStats& SweepStats::operator+=(const SweepStats& o) {
  total_pairs += o.total_pairs;
  exact_count += o.exact_count;
  special_count += o.special_count;
  inexact_count += o.inexact_count;
  special_operand_count += o.special_operand_count;
  accuracy_fixed += o.accuracy_fixed;
  for (int i = 0; i < kHistogramBins; ++i) histogram[i] += o.histogram[i];
  return *this;
}

bool operator==(const SweepStats& a, const SweepStats& b) {
  return a.op == b.op && a.total_pairs == b.total_pairs && a.exact_count == b.exact_count &&
         a.special_count == b.special_count && a.inexact_count == b.inexact_count &&
         a.special_operand_count == b.special_operand_count && a.accuracy_fixed == b.accuracy_fixed &&
         a.histogram == b.histogram;
}

SweepResult binary_sweep(const Format& f, ArithOp op, const SweepOptions& opt) {
  check_workload(f, opt);
  if (f.width() > FastCodec::kMaxWidth) {
    return run_sweep(f, op, opt, true, [&](std::uint64_t a, std::uint64_t b) { return reference_pair(f, op, a, b); });
  }
  const FastCodec codec(f);
  return run_sweep(f, op, opt, true, [&](std::uint64_t a, std::uint64_t b) { return fast_pair(codec, op, a, b); });
}

SweepResult binary_sweep_reference(const Format& f, ArithOp op, const SweepOptions& opt) {
  return run_sweep(f, op, opt, false, [&](std::uint64_t a, std::uint64_t b) { return reference_pair(f, op, a, b); });
}

double throughput(const Format& f, ArithOp op, double seconds, Engine engine, std::uint64_t seed) {
  std::vector<std::uint64_t> finite;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> pick(0, f.mask());
  while (finite.size() < 2048) {
    const std::uint64_t p = pick(rng);
    if (f.decode(p).cls == ValueClass::Finite) finite.push_back(p);
  }
  std::optional<FastCodec> codec;
  if (engine == Engine::fast) codec.emplace(f);
  std::uint64_t ops = 0;
  volatile std::uint64_t sink = 0;
  const auto start = std::chrono::steady_clock::now();
  double elapsed = 0;
  std::size_t i = 0;
  do {
    for (int k = 0; k < 256; ++k, ++i) {
      const std::uint64_t a = finite[i % finite.size()], b = finite[(i * 7 + 3) % finite.size()];
      if (codec)
        sink = sink + codec->arith(op, a, b).bits;
      else
        sink = sink + nrs_arith(f, op, a, b).bits.value_or(0);
    }
    ops += 256;
    elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  } while (elapsed < seconds);
  return static_cast<double>(ops) / elapsed / 1000.0;
}

}  // namespace nrs
