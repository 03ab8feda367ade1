#include "nrs/litbench.hpp"

#include <algorithm>

#include "nrs/hp_math.hpp"

namespace nrs {

namespace {

BenchValue error_value() {
  BenchValue v;
  v.cls = ValueClass::NR;
  return v;
}

BenchValue exact_value(const Rational& q) {
  BenchValue v;
  v.cls = q.is_zero() ? ValueClass::Zero : ValueClass::Finite;
  v.negative = q.sign() < 0;
  v.q = q;
  return v;
}

Rational oracle_irrational(hp::Fun f, const Rational& x, const Rational& param = Rational(0)) {
  std::uint32_t bits = kOracleBits;
  // exp near 0: resolve the z^2/2 term so that (e^z - 1) / z keeps its sign
  // of deviation from 1 despite truncation.
  if (f == hp::Fun::exp && !x.is_zero()) bits += 2 * static_cast<std::uint32_t>(std::max(0L, -floor_log2(x)));
  return hp::truncated_rational(hp::eval(f, x, bits, param));
}

std::string accuracy_cell(const AccuracyResult& a) { return format_truncated(a.digits); }

Rational dec(const char* s) { return parse_rational(s); }

}  // namespace

std::string BenchValue::str() const {
  switch (cls) {
    case ValueClass::Finite: return format_truncated(q);
    case ValueClass::Zero: return "0";
    case ValueClass::Inf: return negative ? "-Inf" : "Inf";
    default: return "NR";
  }
}

std::string BenchContext::label() const { return format_ ? format_->descriptor().label() : "RationalNumber"; }

BenchValue BenchContext::from_encoded(const Encoded& e) const {
  BenchValue v;
  v.cls = e.cls;
  v.negative = e.negative;
  v.bits = e.bits;
  if (auto q = value_of(*format_, e)) v.q = *q;
  return v;
}

Encoded BenchContext::to_encoded(const BenchValue& v) const {
  Encoded e;
  e.cls = v.cls;
  e.negative = v.negative;
  e.bits = v.bits;
  return e;
}

BenchValue BenchContext::constant(const Rational& q) const {
  if (!format_) return exact_value(q);
  return from_encoded(format_->encode(q));
}

BenchValue BenchContext::arith(ArithOp op, const BenchValue& a, const BenchValue& b) const {
  if (format_) return from_encoded(nrs_arith(*format_, op, to_encoded(a), to_encoded(b)));
  if (!a.is_value() || !b.is_value()) return error_value();
  if (op == ArithOp::div && b.q.is_zero()) return error_value();
  static constexpr RatOp kOps[] = {RatOp::add, RatOp::sub, RatOp::mul, RatOp::div};
  return exact_value(rat_arith(kOps[static_cast<int>(op)], a.q, b.q));
}

BenchValue BenchContext::fun(UnaryFun f, const BenchValue& a, const Rational& param) const {
  if (format_) return from_encoded(nrs_fun(*format_, f, to_encoded(a), param));
  if (!a.is_value()) return error_value();
  try {
    switch (f) {
      case UnaryFun::sqrt: return exact_value(a.q.is_zero() ? Rational(0) : oracle_irrational(hp::Fun::sqrt, a.q));
      case UnaryFun::exp: return exact_value(a.q.is_zero() ? Rational(1) : oracle_irrational(hp::Fun::exp, a.q));
      case UnaryFun::ln: return exact_value(oracle_irrational(hp::Fun::ln, a.q));
      case UnaryFun::pow:
        if (param.is_integer()) return exact_value(rat_pow(a.q, param.numerator().get_si()));
        return exact_value(oracle_irrational(hp::Fun::pow, a.q, param));
      case UnaryFun::inverse:
        if (a.q.is_zero()) return error_value();
        return exact_value(Rational(1) / a.q);
      case UnaryFun::nth_root: return exact_value(oracle_irrational(hp::Fun::root, a.q, param));
      case UnaryFun::sin: return exact_value(oracle_irrational(hp::Fun::sin, a.q));
    }
  } catch (const UndefinedOperation&) {
  }
  return error_value();
}

BenchValue BenchContext::neg(const BenchValue& a) const {
  if (!a.is_value()) {
    BenchValue v = a;
    v.negative = !v.negative;
    return v;
  }
  return constant(-a.q);
}

BenchValue BenchContext::abs(const BenchValue& a) const {
  if (!a.is_value()) {
    BenchValue v = a;
    v.negative = false;
    return v;
  }
  return constant(a.q.abs());
}

AccuracyResult accuracy_of(const BenchValue& v, const Rational& reference) {
  std::optional<Rational> computed;
  if (v.is_value()) computed = v.q;
  return decimal_accuracy(computed, reference);
}

BenchValue wallis(const BenchContext& c, int n) {
  BenchValue p = c.constant(2);
  for (long i = 1; i <= n; ++i) {
    const BenchValue num = c.mul(c.constant(2 * i), c.constant(2 * i));
    const BenchValue den = c.mul(c.constant(2 * i - 1), c.constant(2 * i + 1));
    p = c.mul(p, c.div(num, den));
  }
  return p;
}

BenchValue kahan(const BenchContext& c, int n) {
  BenchValue u0 = c.constant(2), u1 = c.constant(-4);
  if (n == 0) return u0;
  const BenchValue k111 = c.constant(111), k1130 = c.constant(1130), k3000 = c.constant(3000);
  for (int i = 2; i <= n; ++i) {
    BenchValue t = c.sub(k111, c.div(k1130, u1));
    t = c.add(t, c.div(k3000, c.mul(u0, u1)));
    u0 = u1;
    u1 = t;
  }
  return u1;
}

BenchValue muller_h(const BenchContext& c, long x) {
  const BenchValue one = c.constant(1);
  const BenchValue xv = c.constant(x);
  const BenchValue root = c.sqrt(c.add(c.mul(xv, xv), one));
  const BenchValue q = c.sub(c.abs(c.sub(xv, root)), c.div(one, c.add(xv, root)));
  const BenchValue z = c.mul(q, q);
  if (z.cls == ValueClass::Zero) return one;
  return c.div(c.sub(c.exp(z), one), z);
}

BenchValue rump(const BenchContext& c, long x, long y) {
  const BenchValue xv = c.constant(x), yv = c.constant(y);
  const BenchValue x2 = c.mul(xv, xv);
  const BenchValue y2 = c.mul(yv, yv);
  const BenchValue y4 = c.mul(y2, y2);
  const BenchValue y6 = c.mul(y4, y2);
  const BenchValue y8 = c.mul(y4, y4);
  const BenchValue t1 = c.mul(c.constant(dec("333.75")), y6);
  BenchValue inner = c.mul(c.mul(c.constant(11), x2), y2);
  inner = c.sub(inner, y6);
  inner = c.sub(inner, c.mul(c.constant(121), y4));
  inner = c.sub(inner, c.constant(2));
  const BenchValue t2 = c.mul(x2, inner);
  const BenchValue t3 = c.mul(c.constant(dec("5.5")), y8);
  const BenchValue t4 = c.div(xv, c.mul(c.constant(2), yv));
  return c.add(c.add(c.add(t1, t2), t3), t4);
}

BenchValue quadratic_r1(const BenchContext& c) {
  const BenchValue a = c.constant(3), b = c.constant(100), cc = c.constant(2);
  const BenchValue disc = c.sub(c.mul(b, b), c.mul(c.mul(c.constant(4), a), cc));
  return c.div(c.add(c.neg(b), c.sqrt(disc)), c.mul(c.constant(2), a));
}

Rational quadratic_r1_reference() {
  const Rational s = oracle_irrational(hp::Fun::sqrt, Rational(9976));
  return (s - Rational(100)) / Rational(6);
}

std::pair<BenchValue, BenchValue> bailey(const BenchContext& c) {
  const BenchValue a11 = c.constant(dec("0.25510582")), a12 = c.constant(dec("0.52746197"));
  const BenchValue b1 = c.constant(dec("0.79981812"));
  const BenchValue a21 = c.constant(dec("0.80143857")), a22 = c.constant(dec("1.65707065"));
  const BenchValue b2 = c.constant(dec("2.51270273"));
  const BenchValue det = c.sub(c.mul(a11, a22), c.mul(a12, a21));
  const BenchValue x = c.div(c.sub(c.mul(b1, a22), c.mul(a12, b2)), det);
  const BenchValue y = c.div(c.sub(c.mul(a11, b2), c.mul(b1, a21)), det);
  return {x, y};
}

namespace {

Rational thin_side() { return (Rational(7) + Rational(1).scaled_by_pow2(-25)) / Rational(2); }

}  // namespace

BenchValue thin_triangle(const BenchContext& c) {
  const BenchValue a = c.constant(7), b = c.constant(thin_side()), cc = c.constant(thin_side());
  const BenchValue s = c.div(c.add(c.add(a, b), cc), c.constant(2));
  BenchValue r = c.mul(s, c.sub(s, a));
  r = c.mul(r, c.sub(s, b));
  r = c.mul(r, c.sub(s, cc));
  return c.sqrt(r);
}

Rational thin_triangle_reference() {
  const Rational a(7), b = thin_side(), cc = thin_side();
  const Rational s = (a + b + cc) / Rational(2);
  return oracle_irrational(hp::Fun::sqrt, s * (s - a) * (s - b) * (s - cc));
}

namespace {

Rational e_reference() { return hp::truncated_rational(hp::euler_e(kOracleBits)); }
Rational pi_reference() { return hp::truncated_rational(hp::pi(kOracleBits)); }

}  // namespace

BenchValue gustafson_x(const BenchContext& c) {
  const BenchValue num = c.sub(c.constant(dec("2.7")), c.constant(e_reference()));
  const BenchValue roots = c.add(c.sqrt(c.constant(2)), c.sqrt(c.constant(3)));
  const BenchValue den = c.sub(c.constant(pi_reference()), roots);
  const BenchValue base = c.div(num, den);
  return c.exp(c.mul(c.constant(Rational(67) / Rational(16)), c.ln(base)));
}

Rational gustafson_x_reference() {
  constexpr std::uint32_t bits = 2 * kOracleBits;
  const Rational e = hp::truncated_rational(hp::euler_e(bits));
  const Rational pi = hp::truncated_rational(hp::pi(bits));
  const Rational r2 = hp::truncated_rational(hp::eval(hp::Fun::sqrt, Rational(2), bits));
  const Rational r3 = hp::truncated_rational(hp::eval(hp::Fun::sqrt, Rational(3), bits));
  const Rational base = (dec("2.7") - e) / (pi - (r2 + r3));
  return hp::truncated_rational(hp::eval(hp::Fun::pow, base, bits, Rational(67) / Rational(16)));
}

BenchValue power_factorial(const BenchContext& c, long x, long n) {
  const BenchValue num = c.pow(c.constant(x), Rational(n));
  BenchValue den = c.constant(1);
  for (long i = 2; i <= n; ++i) den = c.mul(den, c.constant(i));
  return c.div(num, den);
}

Rational power_factorial_reference(long x, long n) {
  Rational f(1);
  for (long i = 2; i <= n; ++i) f = f * Rational(i);
  return rat_pow(Rational(x), n) / f;
}

AccuracyResult constant_accuracy(const BenchContext& c, const Rational& value) {
  return accuracy_of(c.constant(value), value);
}

std::vector<Descriptor> table4_descriptors() {
  std::vector<Descriptor> out;
  for (const char* s : {"floatp:8:23:RE", "fixedp:16:16:RE", "ieee754:8:23:RE", "posit:32:2:RE", "morris:32:4:RZ",
                        "morrisheb:32:4:RZ", "morrisbias:32:4:RE", "morrisunary:32:RE"})
    out.push_back(parse_descriptor(s));
  return out;
}

std::vector<Descriptor> table5_descriptors() {
  std::vector<Descriptor> out;
  for (const char* s : {"fixedp:16:16:RE", "ieee754:8:23:RE", "posit:32:2:RE", "morris:32:4:RZ", "morrisheb:32:4:RZ",
                        "morrisbias:32:4:RE", "morrisunary:32:RE"})
    out.push_back(parse_descriptor(s));
  return out;
}

Table table4(const std::vector<Descriptor>& descs, bool with_oracle, const LitbenchOptions& opt) {
  Table t;
  t.columns = {"nrs", "wallis", "kahan_u30", "muller", "rump", "r1_da", "bailey"};
  std::vector<BenchContext> ctxs;
  for (const Descriptor& d : descs) ctxs.emplace_back(Format(d));
  if (with_oracle) ctxs.push_back(BenchContext::oracle());
  const Rational r1_ref = quadratic_r1_reference();
  for (const BenchContext& c : ctxs) {
    std::string muller = "(";
    for (std::size_t i = 0; i < kMullerPoints.size(); ++i)
      muller += (i ? ", " : "") + muller_h(c, kMullerPoints[i]).str();
    muller += ")";
    const auto [bx, by] = bailey(c);
    t.rows.push_back({c.label(), wallis(c, kWallisFactors).str(), kahan(c, kKahanIndex).str(), muller, rump(c, opt.rump_x).str(),
                      accuracy_cell(accuracy_of(quadratic_r1(c), r1_ref)), "(" + bx.str() + ", " + by.str() + ")"});
  }
  return t;
}

Table table5(const std::vector<Descriptor>& descs) {
  Table t;
  t.columns = {"nrs", "thin_triangle", "x", "x_pow_n_over_fact_7_20", "x_pow_n_over_fact_25_30"};
  for (const PhysicalConstant& k : kPhysicalConstants) t.columns.emplace_back(k.name);
  const Rational tri = thin_triangle_reference(), gx = gustafson_x_reference();
  const Rational pf1 = power_factorial_reference(7, 20), pf2 = power_factorial_reference(25, 30);
  for (const Descriptor& d : descs) {
    const BenchContext c{Format(d)};
    std::vector<std::string> row = {c.label(), accuracy_cell(accuracy_of(thin_triangle(c), tri)),
                                    accuracy_cell(accuracy_of(gustafson_x(c), gx)),
                                    accuracy_cell(accuracy_of(power_factorial(c, 7, 20), pf1)),
                                    accuracy_cell(accuracy_of(power_factorial(c, 25, 30), pf2))};
    for (const PhysicalConstant& k : kPhysicalConstants)
      row.push_back(accuracy_cell(constant_accuracy(c, parse_rational(k.literal))));
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace nrs
