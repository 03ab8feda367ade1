#include <doctest.h>

#include "nrs/litbench.hpp"
#include "nrs/report.hpp"

using namespace nrs;

namespace {

Rational q(long n, long d = 1) { return Rational(n) / Rational(d); }

const BenchContext kOracle = BenchContext::oracle();

}  // namespace

TEST_CASE("oracle runs the benchmarks in exact arithmetic") {
  CHECK(wallis(kOracle, 1).q == q(8, 3));
  Rational w = 2;
  for (long i = 1; i <= kWallisFactors; ++i) w = w * q(4 * i * i, (2 * i - 1) * (2 * i + 1));
  CHECK(wallis(kOracle, kWallisFactors).q == w);

  Rational u0 = 2, u1 = -4;
  for (int i = 2; i <= kKahanIndex; ++i) {
    const Rational next = Rational(111) - Rational(1130) / u1 + Rational(3000) / (u0 * u1);
    u0 = u1;
    u1 = next;
  }
  CHECK(kahan(kOracle, kKahanIndex).q == u1);
  CHECK(kahan(kOracle, kKahanIndex).str() == "6.004");

  // Closed form of the polynomial at (77617, 33096): -2 + x / (2y).
  CHECK(rump(kOracle).q == Rational(-2) + q(77617, 66192));
  CHECK(rump(kOracle).str() == "-0.827");

  const auto [x, y] = bailey(kOracle);
  CHECK(x.q == Rational(-1));
  CHECK(y.q == Rational(2));
}

TEST_CASE("oracle square roots and exponentials stay close to the true value") {
  const Rational r1 = quadratic_r1(kOracle).q;
  CHECK((r1 - quadratic_r1_reference()).abs() < Rational(1).scaled_by_pow2(-200));
  CHECK(quadratic_r1_reference() < Rational(0));
  for (long xv : kMullerPoints) {
    CAPTURE(xv);
    CHECK((muller_h(kOracle, xv).q - Rational(1)).abs() < Rational(1).scaled_by_pow2(-200));
  }
  // 50-digit evaluation with an independent arbitrary-precision library.
  const Rational gx = parse_rational("302.88271965546954925014644620111610597744663154614");
  CHECK((gustafson_x_reference() - gx).abs() < parse_rational("1e-40"));
}

TEST_CASE("format contexts reproduce the floating point pathologies") {
  const BenchContext ieee{Format("ieee754:8:23:RE")};
  CHECK(kahan(ieee, kKahanIndex).str() == "100");
  CHECK(muller_h(ieee, 15).q == Rational(0));
  const BenchContext posit{Format("posit:32:2:RE")};
  CHECK(rump(posit).str() == "1.172");
  CHECK(wallis(posit, kWallisFactors).str() == "3.091");
}

TEST_CASE("specials propagate as not-a-real") {
  const BenchContext fixed{Format("fixedp:16:16:RE")};
  const BenchValue big = fixed.constant(30000);
  const BenchValue r = fixed.mul(big, big);
  CHECK_FALSE(r.is_value());
  CHECK(accuracy_of(r, Rational(1)).kind == AccuracyResult::Kind::Wrong);
  CHECK_FALSE(kOracle.div(kOracle.constant(1), kOracle.constant(0)).is_value());
}

TEST_CASE("reference values of the series benchmarks") {
  // 7^20 / 20!
  CHECK(power_factorial_reference(7, 20) == q(79792266297612001L) / Rational(mpz_class("2432902008176640000")));
  const Rational tri = thin_triangle_reference();
  CHECK(tri > Rational(0));
  CHECK(kOracle.constant(3).q == Rational(3));
}

TEST_CASE("physical constants convert with the expected accuracy") {
  CHECK(kPhysicalConstants.size() == 5);
  const BenchContext ieee{Format("ieee754:8:23:RE")};
  const BenchContext posit{Format("posit:32:2:RE")};
  const Rational planck = parse_rational(kPhysicalConstants[0].literal);
  CHECK(format_truncated(constant_accuracy(ieee, planck).digits) == "8.727");
  CHECK(format_truncated(constant_accuracy(posit, planck).digits) == "0.627");
  CHECK(constant_accuracy(kOracle, planck).exact());
}

TEST_CASE("tables are deterministic") {
  const auto descs = table5_descriptors();
  CHECK(descs.size() == 7);
  CHECK(table4_descriptors().size() == 8);
  const Table a = table4({parse_descriptor("posit:32:2:RE")}, true);
  const Table b = table4({parse_descriptor("posit:32:2:RE")}, true);
  CHECK(to_csv(a) == to_csv(b));
  CHECK(a.rows.size() == 2);
  CHECK(a.columns.front() == "nrs");
}
