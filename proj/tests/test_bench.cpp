#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "nrs/bench.hpp"
#include "nrs/hp_math.hpp"

using namespace nrs;

namespace {

const char* const kAll8[] = {"fixedp:4:4:RE",  "floatp:3:4:RE",     "ieee754:3:4:RE",     "posit:8:1:RE",
                             "morris:8:2:RZ",  "morrisheb:8:2:RZ",  "morrisbias:8:2:RE",  "morrisunary:8:RE"};

Rational p2(long e) { return Rational(1).scaled_by_pow2(e); }

}  // namespace

TEST_CASE("dynamic range of half precision") {
  const DynamicRange r = dynamic_range(Format("ieee754:5:10:RE"));
  CHECK(r.min_abs == p2(-24));
  CHECK(r.max1 == Rational(65504));
  CHECK(r.max2 == Rational(65472));
  CHECK(static_cast<double>(r.dr) == doctest::Approx(std::log10(65504.0 * 16777216.0)).epsilon(1e-12));
}

TEST_CASE("golden zone counts") {
  CHECK(golden_zone_count(Format("posit:16:2:RE"), parse_rational("1e-3"), parse_rational("1e3")) == 26587);
  CHECK(golden_zone_count(Format("morrisunary:16:RE"), parse_rational("1e-3"), parse_rational("1e3")) == 30201);
  CHECK(golden_zone_count(Format("posit:12:2:RE"), Rational(2), Rational(2)) == 0);
  CHECK(golden_zone_count(Format("posit:12:2:RE"), Rational(3), Rational(2)) == 0);
}

TEST_CASE("decade histogram partitions the distinct magnitudes") {
  for (const char* text : kAll8) {
    CAPTURE(text);
    const Format f(text);
    std::uint64_t total = 0;
    for (const auto& [decade, count] : density_histogram(f)) total += count;
    CHECK(total == distinct_magnitudes(f).size());
  }
  const auto h = density_histogram(Format("fixedp:4:4:RE"));
  CHECK(h.begin()->first == -2);  // 1/16
  CHECK(h.rbegin()->first == 0);  // 7.9375
}

TEST_CASE("unary CDF is a nonincreasing survival curve") {
  for (UnaryFun fun : {UnaryFun::sqrt, UnaryFun::exp, UnaryFun::ln, UnaryFun::sin}) {
    const UnaryCdf cdf = unary_sweep(Format("posit:10:1:RE"), fun);
    REQUIRE(std::is_sorted(cdf.digits.begin(), cdf.digits.end()));
    double prev = 1.0;
    for (double d = 0.0; d <= 16.0; d += 0.25) {
      const double v = cdf.fraction_at_least(d);
      REQUIRE(v <= prev);
      prev = v;
    }
  }
}

TEST_CASE("square roots of exact squares are exact") {
  const Format f("posit:10:1:RE");
  const UnaryCdf cdf = unary_sweep(f, UnaryFun::sqrt);
  std::uint64_t squares = 0;
  enumerate(f, [&](std::uint64_t, const DecodedValue& v) {
    if (!v.is_finite() || v.negative) return;
    const Rational x = v.value();
    const Rational r = rat_root_approx(x, 2, 64);
    if (r * r == x && f.encode(r).exact) ++squares;
  });
  CHECK(squares > 0);
  CHECK(cdf.exact >= squares);
}

TEST_CASE("unary references agree with the rational series") {
  for (const Rational& x : {Rational(1) / Rational(3), Rational(5) / Rational(4), Rational(-2)}) {
    for (SeriesFunction fun : {SeriesFunction::exp, SeriesFunction::sin, SeriesFunction::ln}) {
      if (fun == SeriesFunction::ln && x.sign() <= 0) continue;
      const Rational exact = taylor_eval(fun, x, kReferenceTerms);
      const Rational approx = hp::partial_sum(fun, x, kReferenceTerms, kReferenceBits);
      CHECK((exact - approx).abs() < p2(-300));
    }
  }
}

TEST_CASE("parallel sweep matches the serial reference") {
  for (const char* text : kAll8) {
    CAPTURE(text);
    const Format f(text);
    for (ArithOp op : {ArithOp::add, ArithOp::sub, ArithOp::mul, ArithOp::div}) {
      CAPTURE(op_name(op));
      SweepOptions opt;
      opt.want_grid = true;
      const SweepResult fast = binary_sweep(f, op, opt);
      const SweepResult ref = binary_sweep_reference(f, op, opt);
      CHECK(fast.stats.total_pairs == 65536);
      CHECK(fast.stats.exact_count == ref.stats.exact_count);
      CHECK(fast.stats.special_count == ref.stats.special_count);
      CHECK(fast.stats.inexact_count == ref.stats.inexact_count);
      CHECK(fast.stats.special_operand_count == ref.stats.special_operand_count);
      CHECK(fast.stats.accuracy_sum() == doctest::Approx(ref.stats.accuracy_sum()).epsilon(1e-9));
      REQUIRE(fast.grid);
      REQUIRE(ref.grid);
      for (std::size_t i = 0; i < fast.grid->cells.size(); ++i) {
        REQUIRE(fast.grid->cells[i] == doctest::Approx(ref.grid->cells[i]).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("sweeps are deterministic across thread counts") {
  const Format f("posit:10:1:RE");
  SweepOptions one;
  one.threads = 1;
  SweepOptions many;
  many.threads = 4;
  CHECK(binary_sweep(f, ArithOp::div, one).stats == binary_sweep(f, ArithOp::div, many).stats);
  SweepOptions sub;
  sub.subsample = 5000;
  sub.seed = 3;
  CHECK(binary_sweep(f, ArithOp::add, sub).stats == binary_sweep(f, ArithOp::add, sub).stats);
  CHECK(binary_sweep(f, ArithOp::add, sub).stats.total_pairs == 5000);
}

TEST_CASE("grids of commutative operations are symmetric") {
  const Format f("morrisbias:8:2:RE");
  SweepOptions opt;
  opt.want_grid = true;
  for (ArithOp op : {ArithOp::add, ArithOp::mul}) {
    const ColorGrid g = *binary_sweep(f, op, opt).grid;
    for (std::size_t r = 0; r < g.n; ++r) {
      for (std::size_t c = 0; c < r; ++c) REQUIRE(g.at(r, c) == g.at(c, r));
    }
  }
}

TEST_CASE("fixed point sums are exact or out of range") {
  const SweepStats s = binary_sweep(Format("fixedp:6:6:RE"), ArithOp::add).stats;
  CHECK(s.inexact_count == 0);
  CHECK(s.exact_count + s.special_count == s.total_pairs);
  CHECK(s.exact_pct() == doctest::Approx(75.0));
}

TEST_CASE("accumulated statistics") {
  SweepStats a, b;
  a.total_pairs = 4;
  a.add_exact();
  a.add_special_operand();
  a.add_inexact(2.5);
  a.add_special();
  CHECK(a.exact_pct() == doctest::Approx(50.0));
  CHECK(a.special_pct() == doctest::Approx(25.0));
  CHECK(a.avg_digits() == doctest::Approx(1.25));
  CHECK(a.avg_inexact_digits() == doctest::Approx(2.5));
  b = a;
  b += a;
  CHECK(b.total_pairs == 8);
  CHECK(b.accuracy_sum() == doctest::Approx(5.0));
}

TEST_CASE("large sweeps are refused without a subsample") {
  const Format f("posit:16:2:RE");
  CHECK_THROWS_AS(binary_sweep(f, ArithOp::add), WorkloadRefused);
  CHECK_THROWS_AS(binary_sweep_reference(f, ArithOp::add), WorkloadRefused);
  SweepOptions opt;
  opt.subsample = 100;
  CHECK_NOTHROW(binary_sweep(f, ArithOp::add, opt));
}

TEST_CASE("throughput is positive for both engines") {
  const Format f("posit:12:2:RE");
  CHECK(throughput(f, ArithOp::add, 0.05, Engine::reference) > 0.0);
  CHECK(throughput(f, ArithOp::mul, 0.05, Engine::fast) > 0.0);
}
