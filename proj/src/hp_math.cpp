#include "nrs/hp_math.hpp"

#include <mpfr.h>

#include <stdexcept>

namespace nrs::hp {

namespace {

class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t p) { mpfr_init2(v_, std::max<mpfr_prec_t>(p, MPFR_PREC_MIN)); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

void widen_exponent_range() {
  static thread_local bool done = false;
  if (done) return;
  mpfr_set_emin(mpfr_get_emin_min());
  mpfr_set_emax(mpfr_get_emax_max());
  done = true;
}

// Exact copy of an explicit float (rest bits included, sticky ignored).
void load(Mpfr& out, const UnboundedFloat& x) {
  if (x.is_zero()) {
    mpfr_set_zero(out.get(), x.negative() ? -1 : 1);
    return;
  }
  const RestBits& r = x.rest();
  mpz_class m = x.mantissa();
  m <<= static_cast<mp_bitcnt_t>(r.length);
  m += r.bits;
  if (x.negative()) m = -m;
  mpfr_set_prec(out.get(), static_cast<mpfr_prec_t>(std::max<std::size_t>(mpz_sizeinbase(m.get_mpz_t(), 2), 2)));
  const std::int64_t lsb = x.exponent() - static_cast<std::int64_t>(x.fraction_size()) - static_cast<std::int64_t>(r.length);
  mpfr_set_z_2exp(out.get(), m.get_mpz_t(), static_cast<mpfr_exp_t>(lsb), MPFR_RNDN);
}

void load(Mpfr& out, const Rational& q, mpfr_prec_t prec) {
  mpfr_set_prec(out.get(), prec);
  mpfr_set_q(out.get(), q.raw().get_mpq_t(), MPFR_RNDN);
}

UnboundedFloat extreme(bool negative, bool huge, std::uint32_t precision) {
  RestBits rest;
  rest.sticky = true;
  mpz_class m = mpz_class(1) << precision;
  return UnboundedFloat::from_parts(negative, huge ? kHugeExponent : -kHugeExponent, std::move(m), precision,
                                    std::move(rest));
}

UnboundedFloat store(Mpfr& v, int ternary, std::uint32_t precision) {
  mpfr_ptr p = v.get();
  if (mpfr_nan_p(p)) throw UndefinedOperation("result is not a number");
  const bool neg = mpfr_signbit(p) != 0;
  if (mpfr_inf_p(p)) return extreme(neg, true, precision);
  if (mpfr_zero_p(p)) {
    if (ternary != 0 || mpfr_underflow_p()) return extreme(neg, false, precision);
    return UnboundedFloat::zero(neg, precision);
  }
  mpz_class z;
  const mpfr_exp_t e = mpfr_get_z_2exp(z.get_mpz_t(), p);
  return normalize_scaled(std::move(z), e, ternary != 0, false, precision);
}

UnboundedFloat run(Fun f, Mpfr& x, std::uint32_t precision, const Rational& param) {
  // Two extra bits keep the truncated result above the target precision.
  const auto prec = static_cast<mpfr_prec_t>(precision + 2);
  Mpfr r(prec);
  mpfr_clear_flags();
  int t = 0;
  mpfr_ptr a = x.get();
  switch (f) {
    case Fun::exp:
      t = mpfr_exp(r.get(), a, MPFR_RNDZ);
      break;
    case Fun::ln:
      if (mpfr_sgn(a) <= 0) throw UndefinedOperation("ln of a nonpositive value");
      t = mpfr_log(r.get(), a, MPFR_RNDZ);
      break;
    case Fun::sin:
      t = mpfr_sin(r.get(), a, MPFR_RNDZ);
      break;
    case Fun::sqrt:
      if (mpfr_sgn(a) < 0) throw UndefinedOperation("square root of a negative value");
      t = mpfr_sqrt(r.get(), a, MPFR_RNDZ);
      break;
    case Fun::root: {
      if (!param.is_integer() || param.sign() <= 0) throw UndefinedOperation("root degree must be a positive integer");
      const unsigned long n = param.numerator().get_ui();
      if (mpfr_sgn(a) < 0 && n % 2 == 0) throw UndefinedOperation("even root of a negative value");
      t = mpfr_rootn_ui(r.get(), a, n, MPFR_RNDZ);
      break;
    }
    case Fun::pow: {
      Mpfr y(64);
      load(y, param, 256);
      if (mpfr_sgn(a) < 0 && !param.is_integer()) throw UndefinedOperation("non-integer power of a negative value");
      if (mpfr_zero_p(a) && param.sign() < 0) throw UndefinedOperation("negative power of zero");
      t = mpfr_pow(r.get(), a, y.get(), MPFR_RNDZ);
      break;
    }
  }
  if (mpfr_nan_p(r.get())) throw UndefinedOperation("result is not a number");
  return store(r, t, precision);
}

}  // namespace

UnboundedFloat eval(Fun f, const UnboundedFloat& x, std::uint32_t precision, const Rational& param) {
  widen_exponent_range();
  Mpfr a(2);
  load(a, x);
  return run(f, a, precision, param);
}

UnboundedFloat eval(Fun f, const Rational& x, std::uint32_t precision, const Rational& param) {
  widen_exponent_range();
  Mpfr a(2);
  load(a, x, static_cast<mpfr_prec_t>(precision + 64));
  return run(f, a, precision, param);
}

UnboundedFloat pi(std::uint32_t precision) {
  widen_exponent_range();
  Mpfr r(static_cast<mpfr_prec_t>(precision + 2));
  const int t = mpfr_const_pi(r.get(), MPFR_RNDZ);
  return store(r, t, precision);
}

UnboundedFloat euler_e(std::uint32_t precision) {
  widen_exponent_range();
  Mpfr one(2);
  mpfr_set_ui(one.get(), 1, MPFR_RNDN);
  return run(Fun::exp, one, precision, Rational(0));
}

Rational partial_sum(SeriesFunction fun, const Rational& x, unsigned terms, std::uint32_t precision) {
  widen_exponent_range();
  const auto prec = static_cast<mpfr_prec_t>(precision);
  if (fun == SeriesFunction::ln && x.sign() <= 0) throw UndefinedOperation("ln of a nonpositive value");
  Mpfr a(prec), sum(prec), term(prec), step(prec);
  load(a, x, prec);
  mpfr_set_zero(sum.get(), 1);
  switch (fun) {
    case SeriesFunction::exp:
      mpfr_set_ui(term.get(), 1, MPFR_RNDN);
      for (unsigned k = 0; k < terms; ++k) {
        if (k > 0) {
          mpfr_mul(term.get(), term.get(), a.get(), MPFR_RNDN);
          mpfr_div_ui(term.get(), term.get(), k, MPFR_RNDN);
        }
        mpfr_add(sum.get(), sum.get(), term.get(), MPFR_RNDN);
      }
      break;
    case SeriesFunction::sin:
      mpfr_set(term.get(), a.get(), MPFR_RNDN);
      mpfr_sqr(step.get(), a.get(), MPFR_RNDN);
      mpfr_neg(step.get(), step.get(), MPFR_RNDN);
      for (unsigned k = 0; k < terms; ++k) {
        if (k > 0) {
          mpfr_mul(term.get(), term.get(), step.get(), MPFR_RNDN);
          mpfr_div_ui(term.get(), term.get(), static_cast<unsigned long>(2 * k) * (2 * k + 1), MPFR_RNDN);
        }
        mpfr_add(sum.get(), sum.get(), term.get(), MPFR_RNDN);
      }
      break;
    case SeriesFunction::ln: {
      Mpfr num(prec), den(prec);
      mpfr_sub_ui(num.get(), a.get(), 1, MPFR_RNDN);
      mpfr_add_ui(den.get(), a.get(), 1, MPFR_RNDN);
      mpfr_div(term.get(), num.get(), den.get(), MPFR_RNDN);
      mpfr_sqr(step.get(), term.get(), MPFR_RNDN);
      for (unsigned k = 0; k < terms; ++k) {
        if (k > 0) mpfr_mul(term.get(), term.get(), step.get(), MPFR_RNDN);
        mpfr_div_ui(num.get(), term.get(), 2 * k + 1, MPFR_RNDN);
        mpfr_add(sum.get(), sum.get(), num.get(), MPFR_RNDN);
      }
      mpfr_mul_2ui(sum.get(), sum.get(), 1, MPFR_RNDN);
      break;
    }
  }
  if (mpfr_zero_p(sum.get())) return Rational(0);
  mpz_class z;
  const mpfr_exp_t e = mpfr_get_z_2exp(z.get_mpz_t(), sum.get());
  return Rational(z).scaled_by_pow2(static_cast<long>(e));
}

Rational truncated_rational(const UnboundedFloat& v) {
  if (v.is_zero()) return Rational(0);
  const RestBits& r = v.rest();
  mpz_class m = v.mantissa();
  m <<= static_cast<mp_bitcnt_t>(r.length);
  m += r.bits;
  if (v.negative()) m = -m;
  return Rational(m).scaled_by_pow2(v.exponent() - static_cast<long>(v.fraction_size()) - static_cast<long>(r.length));
}

}  // namespace nrs::hp
