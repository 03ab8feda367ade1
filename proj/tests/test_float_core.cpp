#include <doctest.h>

#include <random>

#include "nrs/unbounded_float.hpp"

using namespace nrs;

namespace {

UnboundedFloat uf(bool neg, std::int64_t e, unsigned long mant, std::uint32_t fs) {
  return UnboundedFloat::from_parts(neg, e, mpz_class(mant), fs);
}

UnboundedFloat random_float(std::mt19937_64& rng, std::uint32_t fs) {
  std::uniform_int_distribution<unsigned long> frac(0, (1UL << fs) - 1);
  std::uniform_int_distribution<int> exp(-20, 20);
  std::bernoulli_distribution sign(0.5);
  return uf(sign(rng), exp(rng), (1UL << fs) | frac(rng), fs);
}

bool normalized(const UnboundedFloat& v) {
  if (v.is_zero()) return v.mantissa() == 0 && v.rest().empty();
  return mpz_sizeinbase(v.mantissa().get_mpz_t(), 2) == v.fraction_size() + 1;
}

}  // namespace

TEST_CASE("addition of equal powers carries into the exponent") {
  const UnboundedFloat one = uf(false, 0, 1, 0);
  const UnboundedFloat r = fc_arith(FcOp::add, one, one, 0);
  CHECK(r.exponent() == 1);
  CHECK(r.mantissa() == 1);
  CHECK_FALSE(r.rest().any());
}

TEST_CASE("product keeps the dropped bits in order") {
  const UnboundedFloat a = uf(false, 3, 0b11, 1), b = uf(false, -1, 0b11, 1);
  const UnboundedFloat r = fc_arith(FcOp::mul, a, b, 1);
  CHECK(r.exponent() == 3);
  CHECK(r.mantissa_string() == "1.0");
  CHECK(r.rest().explicit_bits() == std::vector<bool>{false, true});
  CHECK_FALSE(r.rest().sticky);
  CHECK(to_rational(r) == Rational(9));
}

TEST_CASE("difference of equal values is positive zero") {
  const UnboundedFloat x = uf(true, 5, 0b1011, 3);
  const UnboundedFloat r = fc_arith(FcOp::sub, x, x, 3);
  CHECK(r.is_zero());
  CHECK_FALSE(r.negative());
}

TEST_CASE("division by zero is undefined") {
  CHECK_THROWS_AS(fc_arith(FcOp::div, uf(false, 0, 1, 0), UnboundedFloat::zero(), 4), UndefinedOperation);
}

TEST_CASE("square roots") {
  const UnboundedFloat r = fc_sqrt(uf(false, 4, 1, 0), 4);
  CHECK(r.exponent() == 2);
  CHECK(to_rational(r) == Rational(4));
  CHECK(fc_sqrt(UnboundedFloat::zero(), 8).is_zero());
  const UnboundedFloat s2 = fc_sqrt(uf(false, 1, 1, 0), 10);
  // Digit-by-digit: sqrt(2) = 1.0110101000001001111...
  CHECK(s2.mantissa_string() == "1.0110101000");
  CHECK(s2.rest().any());
  CHECK_THROWS_AS(fc_sqrt(uf(true, 0, 1, 0), 4), UndefinedOperation);
}

TEST_CASE("round to nearest even and carry renormalization") {
  // 1.1|1000 at fs=1: exact tie, mantissa 11 is odd, rounds up to 10.0 -> 1.0 * 2^(e+1).
  const UnboundedFloat t = uf(false, 0, 0b111000, 5);
  const UnboundedFloat rt = round_to(t, 1, RoundingMode::RE);
  CHECK(rt.exponent() == 1);
  CHECK(rt.mantissa_string() == "1.0");
  // 1.0|1000: tie on an even mantissa stays.
  const UnboundedFloat even = round_to(uf(false, 0, 0b101000, 5), 1, RoundingMode::RE);
  CHECK(even.exponent() == 0);
  CHECK(even.mantissa_string() == "1.0");
  // 1.111 with guard 1 carries out.
  const UnboundedFloat carry = round_to(uf(false, 3, 0b11111, 4), 3, RoundingMode::RE);
  CHECK(carry.exponent() == 4);
  CHECK(carry.mantissa_string() == "1.000");
  CHECK(carry.rest().empty());
  // Truncation never grows the magnitude.
  const UnboundedFloat rz = round_to(uf(true, 0, 0b11111, 4), 2, RoundingMode::RZ);
  CHECK(to_rational(rz).abs() <= Rational(31) / Rational(16));
}

TEST_CASE("conversion from rationals") {
  const UnboundedFloat half = from_rational(Rational(1) / Rational(2), 6);
  CHECK(half.exponent() == -1);
  CHECK(to_rational(half) == Rational(1) / Rational(2));
  CHECK(from_rational(Rational(0), 6).is_zero());
  CHECK_FALSE(from_rational(Rational(0), 6).negative());
  const UnboundedFloat third = from_rational(Rational(1) / Rational(3), 4);
  CHECK(third.exponent() == -2);
  CHECK(third.mantissa_string() == "1.0101");
  CHECK(third.rest().sticky);
  CHECK_THROWS_AS(to_rational(third), std::logic_error);
  CHECK(to_rational(uf(false, 0, 0b11, 1)) == Rational(3) / Rational(2));
  CHECK(to_rational(UnboundedFloat::zero()) == Rational(0));
}

TEST_CASE("round trip through rationals is exact for short expansions") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    const UnboundedFloat v = random_float(rng, 12);
    const Rational q = to_rational(v);
    const UnboundedFloat back = from_rational(q, 12);
    REQUIRE(to_rational(back) == q);
    REQUIRE_FALSE(back.rest().any());
  }
}

TEST_CASE("exactness detection agrees with rational arithmetic") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 3000; ++i) {
    const UnboundedFloat a = random_float(rng, 10), b = random_float(rng, 10);
    for (FcOp op : {FcOp::add, FcOp::sub, FcOp::mul, FcOp::div}) {
      const UnboundedFloat r = fc_arith(op, a, b, 40);
      REQUIRE(normalized(r));
      const Rational qa = to_rational(a), qb = to_rational(b);
      Rational expect;
      switch (op) {
        case FcOp::add: expect = qa + qb; break;
        case FcOp::sub: expect = qa - qb; break;
        case FcOp::mul: expect = qa * qb; break;
        case FcOp::div: expect = qa / qb; break;
      }
      if (!r.rest().sticky) {
        REQUIRE(to_rational(r) == expect);
      } else {
        REQUIRE(op == FcOp::div);
      }
    }
  }
}

TEST_CASE("rounding is monotone and within its error bound") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 3000; ++i) {
    UnboundedFloat a = random_float(rng, 16), b = random_float(rng, 16);
    const Rational qa = to_rational(a), qb = to_rational(b);
    for (RoundingMode m : {RoundingMode::RE, RoundingMode::RZ}) {
      const UnboundedFloat ra = round_to(a, 6, m), rb = round_to(b, 6, m);
      REQUIRE(normalized(ra));
      if (qa <= qb) REQUIRE(to_rational(ra) <= to_rational(rb));
      if (qb <= qa) REQUIRE(to_rational(rb) <= to_rational(ra));
      const Rational err = (to_rational(ra) - qa).abs();
      const Rational unit = Rational(1).scaled_by_pow2(a.exponent() - 6);
      if (m == RoundingMode::RE) {
        REQUIRE(err * Rational(2) <= unit);
      } else {
        REQUIRE(err < unit);
        REQUIRE(to_rational(ra).abs() <= qa.abs());
      }
    }
  }
}
