#include <doctest.h>

#include <set>

#include "nrs/formats.hpp"

using namespace nrs;

namespace {

const char* const kAll12[] = {"fixedp:6:6:RE", "floatp:4:7:RE",  "ieee754:4:7:RE",     "posit:12:2:RE",
                              "morris:12:3:RZ", "morrisheb:12:3:RZ", "morrisbias:12:3:RE", "morrisunary:12:RE"};

Rational p2(long e) { return Rational(1).scaled_by_pow2(e); }

std::uint64_t duplicate_count(const Format& f) {
  std::set<Rational> seen;
  std::uint64_t finite = 0;
  enumerate(f, [&](std::uint64_t, const DecodedValue& v) {
    if (!v.is_finite()) return;
    ++finite;
    seen.insert(v.value());
  });
  return finite - seen.size();
}

}  // namespace

TEST_CASE("descriptor grammar") {
  const Descriptor p = parse_descriptor("posit:16:2:RE");
  CHECK(p.kind == Kind::posit);
  CHECK(p.p1 == 16);
  CHECK(p.p2 == 2);
  CHECK(p.rounding == RoundingMode::RE);
  CHECK(p.width() == 16);
  const Descriptor u = parse_descriptor("morrisunary:12:RE");
  CHECK(u.kind == Kind::morrisunary);
  CHECK(u.width() == 12);
  CHECK(u.label() == "MorrisUnary(12,RE)");
  CHECK(parse_descriptor("rational").is_rational());
  CHECK_THROWS_AS(parse_descriptor("posit:16:RE"), DescriptorError);
  CHECK_THROWS_AS(parse_descriptor("quire:16:RE"), DescriptorError);
  CHECK_THROWS_AS(parse_descriptor("posit:16:2"), DescriptorError);
  CHECK_THROWS_AS(parse_descriptor("morris:12:0:RZ"), DescriptorError);
  for (const char* text : kAll12) CHECK(parse_descriptor(text).to_string() == text);
}

TEST_CASE("pattern literals") {
  CHECK(parse_pattern("0x0001", 16).bits == 1);
  CHECK(parse_pattern("0b1000_0000_0000_0000", 16).bits == 0x8000);
  CHECK_THROWS_AS(parse_pattern("0x10000", 16), std::invalid_argument);
  CHECK_THROWS_AS(parse_pattern("12", 16), std::invalid_argument);
  CHECK(to_hex(BitPattern{12, 0xABC}) == "0xabc");
}

TEST_CASE("decode examples") {
  const Format posit("posit:16:2:RE");
  CHECK(posit.decode(0x0001).value() == p2(-56));
  CHECK(format_truncated(posit.decode(0x0001).value()) == "1.387e-17");
  CHECK(posit.decode(0x8000).cls == ValueClass::NaR);
  CHECK(posit.decode(0x4000).value() == Rational(1));

  const Format unary("morrisunary:16:RE");
  const DecodedValue top = unary.decode(0x7FFF);
  CHECK(top.value() == p2(8192));
  CHECK(top.fields.size_value == 14);
  CHECK(top.fields.exponent_size == 13);
  CHECK(top.fields.fraction_size == 0);
  CHECK(format_truncated(top.value()) == "1.090e2466");

  const Format half("ieee754:5:10:RE");
  CHECK(half.decode(0x0001).value() == p2(-24));
  CHECK(half.decode(0x7BFF).value() == Rational(65504));
  CHECK(half.decode(0x7C00).cls == ValueClass::Inf);
  CHECK(half.decode(0x7E00).cls == ValueClass::QNaN);
  CHECK(half.decode(0x7C01).cls == ValueClass::SNaN);
  CHECK(half.decode(0x8000).cls == ValueClass::Zero);
  CHECK(half.decode(0x8000).negative);

  // binaryG = 15, all exponent bits 1, all 4 fraction bits 1.
  const Format bias("morrisbias:16:4:RE");
  CHECK(bias.decode(0x7FFF).value() == p2(255) * Rational(31) / Rational(16));

  const Format floatp("floatp:5:10:RE");
  CHECK(floatp.decode(0x7FFF).cls == ValueClass::Inf);
  CHECK(floatp.decode(0x7FFE).value() == Rational(130944));

  const Format fixed("fixedp:8:8:RE");
  CHECK(fixed.decode(0x7FFF).value() == Rational(32767) / Rational(256));
  CHECK(fixed.decode(0xFFFF).value() == Rational(-1) / Rational(256));

  for (const char* text : kAll12) {
    const Format f(text);
    CHECK(f.decode(0).cls == ValueClass::Zero);
  }
  CHECK(Format("morris:12:3:RZ").decode(0xFFF).cls == ValueClass::NR);
}

TEST_CASE("encode examples") {
  const Format fixed("fixedp:8:8:RE");
  CHECK(*fixed.encode(parse_rational("127.99609375")).bits == 0x7FFF);
  CHECK(fixed.encode(Rational(200)).cls == ValueClass::NR);
  const Format posit("posit:16:2:RE");
  CHECK(*posit.encode(parse_rational("1e30")).bits == 0x7FFF);
  CHECK(posit.decode(0x7FFF).value() == p2(56));
  const Format half("ieee754:5:10:RE");
  CHECK(half.encode(Rational(70000)).cls == ValueClass::Inf);
  CHECK(half.encode(p2(-26)).cls == ValueClass::Zero);
  CHECK(*half.encode(p2(-24)).bits == 0x0001);
  const Format floatp("floatp:5:10:RE");
  CHECK(floatp.encode(p2(-40)).cls == ValueClass::Zero);
}

TEST_CASE("decode is total and encode inverts it") {
  for (const char* text : kAll12) {
    CAPTURE(text);
    const Format f(text);
    std::uint64_t visited = 0;
    enumerate(f, [&](std::uint64_t p, const DecodedValue& v) {
      REQUIRE(p == visited);
      ++visited;
      if (!v.is_finite()) return;
      const Encoded e = f.encode(v.value());
      REQUIRE(e.bits);
      if (*e.bits != p) REQUIRE(f.decode(*e.bits).value() == v.value());
    });
    CHECK(visited == f.pattern_count());
  }
}

TEST_CASE("non-duplicating formats round-trip bit for bit") {
  for (const char* text : {"fixedp:6:6:RE", "floatp:4:7:RE", "ieee754:4:7:RE", "posit:12:2:RE", "morrisbias:12:3:RE",
                           "morrisunary:12:RE"}) {
    CAPTURE(text);
    const Format f(text);
    enumerate(f, [&](std::uint64_t p, const DecodedValue& v) {
      if (v.is_finite()) REQUIRE(*f.encode(v.value()).bits == p);
    });
  }
}

TEST_CASE("posit values are unique") {
  const Format f("posit:16:2:RE");
  std::set<Rational> values;
  std::uint64_t finite = 0, zero = 0, nar = 0;
  enumerate(f, [&](std::uint64_t, const DecodedValue& v) {
    if (v.is_finite()) {
      ++finite;
      values.insert(v.value());
    } else if (v.cls == ValueClass::Zero) {
      ++zero;
    } else if (v.cls == ValueClass::NaR) {
      ++nar;
    }
  });
  CHECK(finite == 65534);
  CHECK(values.size() == 65534);
  CHECK(zero == 1);
  CHECK(nar == 1);
}

TEST_CASE("hidden exponent bit reduces duplicates") {
  const std::uint64_t morris = duplicate_count(Format("morris:12:3:RZ"));
  const std::uint64_t heb = duplicate_count(Format("morrisheb:12:3:RZ"));
  CHECK(morris > 0);
  CHECK(heb < morris);
  CHECK(duplicate_count(Format("morrisbias:12:3:RE")) == 0);
  CHECK(duplicate_count(Format("morrisunary:12:RE")) == 0);
}

TEST_CASE("integer pattern order matches value order") {
  for (const char* text : {"posit:12:2:RE", "morrisbias:12:3:RE", "morrisunary:12:RE"}) {
    CAPTURE(text);
    const Format f(text);
    std::vector<std::pair<std::uint64_t, Rational>> finite;
    enumerate(f, [&](std::uint64_t p, const DecodedValue& v) {
      if (v.is_finite() || v.cls == ValueClass::Zero) finite.emplace_back(p, v.value());
    });
    for (std::size_t i = 0; i < finite.size(); i += 7) {
      for (std::size_t j = 0; j < finite.size(); j += 5) {
        const PatternOrder o = bit_compare(f, finite[i].first, finite[j].first);
        const Rational& a = finite[i].second;
        const Rational& b = finite[j].second;
        const PatternOrder expect = a < b ? PatternOrder::less : (a == b ? PatternOrder::equal : PatternOrder::greater);
        REQUIRE(o == expect);
      }
    }
    CHECK(bit_compare(f, 1, 1) == PatternOrder::equal);
    CHECK(bit_compare(f, f.error_value().bits.value_or(0), 1) == PatternOrder::unordered);
  }
}

TEST_CASE("enumeration refuses widths over the cap") {
  const Format f("posit:20:2:RE");
  CHECK_THROWS_AS(enumerate(f, [](std::uint64_t, const DecodedValue&) {}), WidthCapExceeded);
}

TEST_CASE("special classes of a conversion target") {
  const Format posit("posit:16:2:RE");
  CHECK(posit.special(ValueClass::Inf, false).cls == ValueClass::NaR);
  CHECK(posit.special(ValueClass::QNaN, false).cls == ValueClass::NaR);
  const Format morris("morris:16:4:RZ");
  CHECK(morris.special(ValueClass::Inf, true).cls == ValueClass::NR);
  const Format half("ieee754:5:10:RE");
  CHECK(half.special(ValueClass::NaR, false).cls == ValueClass::QNaN);
  CHECK(half.special(ValueClass::Inf, true).negative);
}
