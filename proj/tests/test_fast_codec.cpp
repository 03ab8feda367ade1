#include <doctest.h>

#include <random>

#include "nrs/fast_codec.hpp"

using namespace nrs;

namespace {

const char* const kAll8[] = {"fixedp:4:4:RE",  "floatp:3:4:RE",    "ieee754:3:4:RE",     "ieee754:3:4:RZ",
                             "posit:8:0:RE",   "posit:8:1:RE",      "posit:8:2:RZ",       "morris:8:2:RZ",
                             "morrisheb:8:2:RZ", "morrisbias:8:2:RE", "morrisunary:8:RE", "morrisunary:8:RZ"};

const char* const kAll12[] = {"fixedp:6:6:RE", "floatp:4:7:RE",  "ieee754:4:7:RE",     "posit:12:2:RE",
                              "morris:12:3:RZ", "morrisheb:12:3:RZ", "morrisbias:12:3:RE", "morrisunary:12:RE"};

void require_same(const FastCodec& fast, ArithOp op, std::uint64_t a, std::uint64_t b) {
  const FastEncoded got = fast.arith(op, a, b);
  const Encoded want = nrs_arith(fast.format(), op, a, b);
  CAPTURE(a);
  CAPTURE(b);
  CAPTURE(op_name(op));
  REQUIRE(got.cls == want.cls);
  REQUIRE(got.has_bits == want.bits.has_value());
  if (want.bits) REQUIRE(got.bits == *want.bits);
  if (want.cls == ValueClass::Finite) REQUIRE(got.exact == want.exact);
}

}  // namespace

TEST_CASE("fast path agrees with the general path on every 8-bit pair") {
  for (const char* text : kAll8) {
    CAPTURE(text);
    const Format f(text);
    const FastCodec fast(f);
    for (ArithOp op : {ArithOp::add, ArithOp::sub, ArithOp::mul, ArithOp::div}) {
      for (std::uint64_t a = 0; a < f.pattern_count(); ++a) {
        for (std::uint64_t b = 0; b < f.pattern_count(); ++b) require_same(fast, op, a, b);
      }
    }
    CHECK(fast.fallback_count() == 0);
  }
}

TEST_CASE("fast path agrees with the general path on random 12-bit pairs") {
  std::mt19937_64 rng(77);
  for (const char* text : kAll12) {
    CAPTURE(text);
    const Format f(text);
    const FastCodec fast(f);
    std::uniform_int_distribution<std::uint64_t> pat(0, f.pattern_count() - 1);
    for (int i = 0; i < 20000; ++i) {
      const std::uint64_t a = pat(rng), b = pat(rng);
      for (ArithOp op : {ArithOp::add, ArithOp::sub, ArithOp::mul, ArithOp::div}) require_same(fast, op, a, b);
    }
  }
}

TEST_CASE("exact wide results convert to the same float") {
  const Format f("posit:12:2:RE");
  const FastCodec fast(f);
  const auto& three = fast.operand(*f.encode(Rational(3)).bits);
  const auto& half = fast.operand(*f.encode(Rational(1) / Rational(2)).bits);
  const auto sum = fast.exact_result(ArithOp::add, three, half);
  REQUIRE(sum);
  CHECK(to_rational(sum->to_float()) == Rational(7) / Rational(2));
  const auto quotient = fast.exact_result(ArithOp::div, half, three);
  REQUIRE(quotient);
  CHECK(quotient->sticky);
  CHECK_FALSE(fast.exact_result(ArithOp::div, three, fast.operand(0)).has_value());
}

TEST_CASE("accuracy digits of the fast path match the metric") {
  const Format f("ieee754:4:7:RE");
  const FastCodec fast(f);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::uint64_t> pat(0, f.pattern_count() - 1);
  int compared = 0;
  while (compared < 2000) {
    const std::uint64_t a = pat(rng), b = pat(rng);
    const auto exact = fast.exact_result(ArithOp::div, fast.operand(a), fast.operand(b));
    if (!exact || exact->zero) continue;
    const FastEncoded r = fast.arith(ArithOp::div, a, b);
    if (r.cls != ValueClass::Finite || r.exact) continue;
    const Rational reference = rat_arith(RatOp::div, f.decode(a).value(), f.decode(b).value());
    const double want = decimal_accuracy(f.decode(r.bits).value(), reference).digits;
    REQUIRE(FastCodec::digits(r, *exact) == doctest::Approx(want).epsilon(1e-9));
    ++compared;
  }
}
