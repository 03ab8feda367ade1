#include "nrs/math_ops.hpp"

#include <cmath>

#include "nrs/hp_math.hpp"

namespace nrs {

namespace {

bool has_infinity(const Format& f) {
  const Kind k = f.descriptor().kind;
  return k == Kind::floatp || k == Kind::ieee754;
}

Encoded divide_by_zero(const Format& f, bool negative) {
  if (has_infinity(f)) return f.infinity(negative);
  return f.error_value();
}

UnboundedFloat float_of(const Format& f, const Encoded& e) {
  if (e.cls == ValueClass::Zero) return UnboundedFloat::zero(e.negative, f.working_fs());
  const DecodedValue d = f.decode(*e.bits);
  return d.to_float(std::max<std::uint32_t>(f.working_fs(), static_cast<std::uint32_t>(d.parts.fraction_bits)));
}

Encoded encode_result(const Format& f, const UnboundedFloat& v) { return f.encode(v); }

}  // namespace

std::string_view op_name(ArithOp op) {
  switch (op) {
    case ArithOp::add: return "add";
    case ArithOp::sub: return "sub";
    case ArithOp::mul: return "mul";
    case ArithOp::div: return "div";
  }
  return "?";
}

ArithOp parse_op(std::string_view s) {
  for (ArithOp op : {ArithOp::add, ArithOp::sub, ArithOp::mul, ArithOp::div})
    if (op_name(op) == s) return op;
  throw std::invalid_argument("unknown operation '" + std::string(s) + "'");
}

std::string_view fun_name(UnaryFun f) {
  switch (f) {
    case UnaryFun::sqrt: return "sqrt";
    case UnaryFun::nth_root: return "cbrt";
    case UnaryFun::inverse: return "inverse";
    case UnaryFun::exp: return "exp";
    case UnaryFun::ln: return "ln";
    case UnaryFun::sin: return "sin";
    case UnaryFun::pow: return "pow";
  }
  return "?";
}

UnaryFun parse_fun(std::string_view s) {
  if (s == "root") return UnaryFun::nth_root;
  for (UnaryFun f : {UnaryFun::sqrt, UnaryFun::nth_root, UnaryFun::inverse, UnaryFun::exp, UnaryFun::ln, UnaryFun::sin,
                     UnaryFun::pow})
    if (fun_name(f) == s) return f;
  throw std::invalid_argument("unknown function '" + std::string(s) + "'");
}

Encoded as_encoded(const Format& f, std::uint64_t bits) {
  const DecodedValue d = f.decode(bits);
  return {d.cls, d.negative, bits & f.mask(), true};
}

std::optional<Rational> value_of(const Format& f, const Encoded& e) {
  if (e.cls == ValueClass::Zero) return Rational(0);
  if (e.cls != ValueClass::Finite) return std::nullopt;
  return f.decode(*e.bits).value();
}

Encoded nrs_arith(const Format& f, ArithOp op, std::uint64_t a, std::uint64_t b) {
  return nrs_arith(f, op, as_encoded(f, a), as_encoded(f, b));
}

Encoded nrs_arith(const Format& f, ArithOp op, const Encoded& a, const Encoded& b) {
  if (is_error_class(a.cls) || is_error_class(b.cls)) return f.error_value();
  const bool a_inf = a.cls == ValueClass::Inf, b_inf = b.cls == ValueClass::Inf;
  const bool a_zero = a.cls == ValueClass::Zero, b_zero = b.cls == ValueClass::Zero;
  const bool sign_xor = a.negative != b.negative;
  if (a_inf || b_inf) {
    switch (op) {
      case ArithOp::add:
      case ArithOp::sub: {
        const bool b_neg = op == ArithOp::sub ? !b.negative : b.negative;
        if (a_inf && b_inf) return a.negative == b_neg ? f.infinity(a.negative) : f.error_value();
        return a_inf ? f.infinity(a.negative) : f.infinity(b_neg);
      }
      case ArithOp::mul:
        if (a_zero || b_zero) return f.error_value();
        return f.infinity(sign_xor);
      case ArithOp::div:
        if (a_inf && b_inf) return f.error_value();
        if (a_inf) return f.infinity(sign_xor);
        return f.zero(sign_xor);
    }
  }
  if (op == ArithOp::div && b_zero) {
    if (a_zero) return f.error_value();
    return divide_by_zero(f, sign_xor);
  }
  static constexpr FcOp kOps[] = {FcOp::add, FcOp::sub, FcOp::mul, FcOp::div};
  const UnboundedFloat r = fc_arith(kOps[static_cast<int>(op)], float_of(f, a), float_of(f, b), f.working_fs());
  return encode_result(f, r);
}

Encoded nrs_fun(const Format& f, UnaryFun fun, std::uint64_t a, const Rational& param) {
  return nrs_fun(f, fun, as_encoded(f, a), param);
}

Encoded nrs_fun(const Format& f, UnaryFun fun, const Encoded& a, const Rational& param) {
  if (is_error_class(a.cls)) return f.error_value();
  const bool neg = a.negative;
  if (a.cls == ValueClass::Inf) {
    switch (fun) {
      case UnaryFun::sqrt:
      case UnaryFun::ln: return neg ? f.error_value() : f.infinity(false);
      case UnaryFun::nth_root: {
        const bool odd = param.is_integer() && mpz_odd_p(param.numerator().get_mpz_t());
        if (neg && !odd) return f.error_value();
        return f.infinity(neg);
      }
      case UnaryFun::inverse: return f.zero(neg);
      case UnaryFun::exp: return neg ? f.zero(false) : f.infinity(false);
      case UnaryFun::sin: return f.error_value();
      case UnaryFun::pow:
        if (neg || param.is_zero()) return f.error_value();
        return param.sign() > 0 ? f.infinity(false) : f.zero(false);
    }
  }
  if (a.cls == ValueClass::Zero) {
    switch (fun) {
      case UnaryFun::sqrt:
      case UnaryFun::nth_root:
      case UnaryFun::sin: return f.zero(neg);
      case UnaryFun::inverse: return divide_by_zero(f, neg);
      case UnaryFun::exp: return f.encode(Rational(1));
      case UnaryFun::ln: return has_infinity(f) ? f.infinity(true) : f.error_value();
      case UnaryFun::pow:
        if (param.is_zero()) return f.encode(Rational(1));
        if (param.sign() < 0) return divide_by_zero(f, false);
        return f.zero(false);
    }
  }
  const UnboundedFloat x = float_of(f, a);
  const std::uint32_t wfs = f.working_fs();
  try {
    switch (fun) {
      case UnaryFun::inverse: {
        const UnboundedFloat one = UnboundedFloat::from_parts(false, 0, mpz_class(1) << wfs, wfs);
        return encode_result(f, fc_arith(FcOp::div, one, x, wfs));
      }
      case UnaryFun::pow:
        if (param.is_integer() && cmp(abs(param.numerator()), 64) <= 0) {
          long n = param.numerator().get_si();
          const bool invert = n < 0;
          if (invert) n = -n;
          UnboundedFloat acc = UnboundedFloat::from_parts(false, 0, mpz_class(1) << wfs, wfs);
          UnboundedFloat base = x;
          while (n > 0) {
            if (n & 1) acc = fc_arith(FcOp::mul, acc, base, wfs);
            n >>= 1;
            if (n > 0) base = fc_arith(FcOp::mul, base, base, wfs);
          }
          if (invert) {
            const UnboundedFloat one = UnboundedFloat::from_parts(false, 0, mpz_class(1) << wfs, wfs);
            acc = fc_arith(FcOp::div, one, acc, wfs);
          }
          return encode_result(f, acc);
        }
        return encode_result(f, hp::eval(hp::Fun::pow, x, wfs + kFunctionGuardBits, param));
      case UnaryFun::sqrt: return encode_result(f, hp::eval(hp::Fun::sqrt, x, wfs + kFunctionGuardBits));
      case UnaryFun::nth_root: {
        const Rational n = param.is_zero() ? Rational(3) : param;
        return encode_result(f, hp::eval(hp::Fun::root, x, wfs + kFunctionGuardBits, n));
      }
      case UnaryFun::exp: return encode_result(f, hp::eval(hp::Fun::exp, x, wfs + kFunctionGuardBits));
      case UnaryFun::ln: return encode_result(f, hp::eval(hp::Fun::ln, x, wfs + kFunctionGuardBits));
      case UnaryFun::sin: return encode_result(f, hp::eval(hp::Fun::sin, x, wfs + kFunctionGuardBits));
    }
  } catch (const UndefinedOperation&) {
    return f.error_value();
  }
  return f.error_value();
}

double digits_from_log10_ratio(long double l) {
  const long double a = std::fabs(l);
  if (a == 0.0L) return kMaxDigits;
  const long double d = -std::log10(a);
  if (!(d > 0.0L)) return 0.0;
  return static_cast<double>(std::min<long double>(d, kMaxDigits));
}

AccuracyResult decimal_accuracy(const std::optional<Rational>& computed, const Rational& reference) {
  using K = AccuracyResult::Kind;
  if (!computed) return {K::Wrong, 0.0};
  const Rational& c = *computed;
  if (c == reference) return {K::Exact, kMaxDigits};
  if (c.is_zero() || reference.is_zero() || c.sign() != reference.sign()) return {K::Wrong, 0.0};
  const Rational q = c / reference;
  const Rational d = q - Rational(1);
  long double l;
  if (d.abs() < Rational(1) / Rational(2)) {
    const mpf_class df(d.raw(), 128);
    l = std::log1p(static_cast<long double>(df.get_d())) / std::log(10.0L);
  } else {
    l = log10_abs(q);
  }
  return {K::Digits, digits_from_log10_ratio(l)};
}

}  // namespace nrs
