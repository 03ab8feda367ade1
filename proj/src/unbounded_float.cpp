#include "nrs/unbounded_float.hpp"

#include <algorithm>
#include <stdexcept>

namespace nrs {

namespace {

constexpr std::int64_t kMaxMaterializedGap = 4096;

std::int64_t bitlen(const mpz_class& z) {
  return sgn(z) == 0 ? 0 : static_cast<std::int64_t>(mpz_sizeinbase(z.get_mpz_t(), 2));
}

mpz_class low_bits(const mpz_class& z, std::uint64_t n) {
  mpz_class r;
  mpz_fdiv_r_2exp(r.get_mpz_t(), z.get_mpz_t(), n);
  return r;
}

// The whole value as a signed integer S with value S * 2^lsb.
struct Scaled {
  mpz_class s;
  std::int64_t lsb = 0;
  bool sticky = false;
};

Scaled to_scaled(const UnboundedFloat& a) {
  Scaled out;
  if (a.is_zero()) return out;
  const RestBits& r = a.rest();
  out.s = a.mantissa();
  if (r.length > 0) {
    out.s <<= r.length;
    out.s += r.bits;
  }
  if (a.negative()) out.s = -out.s;
  out.lsb = a.exponent() - static_cast<std::int64_t>(a.fraction_size()) - static_cast<std::int64_t>(r.length);
  out.sticky = r.sticky;
  return out;
}

// Shifts S down to lsb `target` >= s.lsb, OR-ing dropped bits into sticky.
void lower_precision(Scaled& x, std::int64_t target) {
  std::int64_t d = target - x.lsb;
  if (d <= 0) return;
  mpz_class mag = abs(x.s);
  bool neg = sgn(x.s) < 0;
  if (d >= bitlen(mag)) {
    x.sticky = x.sticky || sgn(mag) != 0;
    mag = 0;
  } else {
    if (sgn(low_bits(mag, static_cast<std::uint64_t>(d))) != 0) x.sticky = true;
    mag >>= static_cast<mp_bitcnt_t>(d);
  }
  x.s = neg ? mpz_class(-mag) : mag;
  x.lsb = target;
}

Scaled add_scaled(Scaled x, Scaled y, std::uint32_t working_fs) {
  if (sgn(x.s) == 0 && !x.sticky) return y;
  if (sgn(y.s) == 0 && !y.sticky) return x;
  const std::int64_t top_x = x.lsb + bitlen(x.s) - 1;
  const std::int64_t top_y = y.lsb + bitlen(y.s) - 1;
  // Keep x as the operand with the higher leading bit.
  if (top_y > top_x) std::swap(x, y);
  const std::int64_t top_hi = std::max(top_x, top_y);
  const std::int64_t top_lo = std::min(top_x, top_y);
  if (top_hi - top_lo > kMaxMaterializedGap && x.lsb - top_lo > 2) {
    // y is entirely far below x: fold it into a sticky tail.
    const std::int64_t cut = std::min(x.lsb, top_hi - static_cast<std::int64_t>(working_fs)) - 2;
    Scaled r;
    r.s = x.s;
    r.s <<= static_cast<mp_bitcnt_t>(x.lsb - cut);
    r.lsb = cut;
    r.sticky = true;
    if (sgn(y.s) != sgn(x.s)) r.s -= sgn(x.s);
    if (x.sticky || y.sticky) r.sticky = true;
    return r;
  }
  const std::int64_t lsb = std::min(x.lsb, y.lsb);
  mpz_class a = x.s, b = y.s;
  a <<= static_cast<mp_bitcnt_t>(x.lsb - lsb);
  b <<= static_cast<mp_bitcnt_t>(y.lsb - lsb);
  Scaled r;
  r.s = a + b;
  r.lsb = lsb;
  r.sticky = x.sticky || y.sticky;
  return r;
}

}  // namespace

std::vector<bool> RestBits::explicit_bits() const {
  std::vector<bool> out(length);
  for (std::uint64_t i = 0; i < length; ++i) out[i] = mpz_tstbit(bits.get_mpz_t(), length - 1 - i) != 0;
  return out;
}

UnboundedFloat UnboundedFloat::zero(bool negative, std::uint32_t fraction_size) {
  UnboundedFloat z;
  z.negative_ = negative;
  z.fraction_size_ = fraction_size;
  return z;
}

UnboundedFloat UnboundedFloat::from_parts(bool negative, std::int64_t exponent, mpz_class mantissa,
                                          std::uint32_t fraction_size, RestBits rest) {
  if (bitlen(mantissa) != static_cast<std::int64_t>(fraction_size) + 1)
    throw std::invalid_argument("mantissa must have exactly fraction_size + 1 bits");
  if (rest.length > 0 && bitlen(rest.bits) > static_cast<std::int64_t>(rest.length))
    throw std::invalid_argument("rest bits wider than their declared length");
  UnboundedFloat f;
  f.negative_ = negative;
  f.zero_ = false;
  f.exponent_ = exponent;
  f.mantissa_ = std::move(mantissa);
  f.fraction_size_ = fraction_size;
  f.rest_ = std::move(rest);
  return f;
}

UnboundedFloat UnboundedFloat::negated() const {
  UnboundedFloat f = *this;
  f.negative_ = !f.negative_;
  return f;
}

UnboundedFloat UnboundedFloat::abs() const {
  UnboundedFloat f = *this;
  f.negative_ = false;
  return f;
}

std::string UnboundedFloat::mantissa_string() const {
  if (zero_) return "0";
  std::string s = mantissa_.get_str(2);
  if (s.size() > 1) s.insert(1, ".");
  return s;
}

UnboundedFloat normalize_scaled(mpz_class s, std::int64_t lsb, bool sticky, bool negative_zero,
                                std::uint32_t working_fs) {
  if (sgn(s) == 0) return UnboundedFloat::zero(negative_zero, working_fs);
  UnboundedFloat f;
  f.zero_ = false;
  f.negative_ = sgn(s) < 0;
  mpz_class mag = ::abs(s);
  const std::int64_t n = bitlen(mag);
  const std::int64_t want = static_cast<std::int64_t>(working_fs) + 1;
  f.exponent_ = lsb + n - 1;
  f.fraction_size_ = working_fs;
  if (n >= want) {
    const auto extra = static_cast<std::uint64_t>(n - want);
    f.rest_.length = extra;
    if (extra > 0) f.rest_.bits = low_bits(mag, extra);
    mag >>= static_cast<mp_bitcnt_t>(extra);
    f.mantissa_ = std::move(mag);
  } else {
    // A sticky tail would sit inside the zero-extended mantissa; callers
    // always supply enough bits when sticky is set.
    if (sticky) throw std::logic_error("normalize_scaled: sticky tail with too few result bits");
    mag <<= static_cast<mp_bitcnt_t>(want - n);
    f.mantissa_ = std::move(mag);
  }
  f.rest_.sticky = sticky;
  return f;
}

UnboundedFloat fc_arith(FcOp op, const UnboundedFloat& a, const UnboundedFloat& b, std::uint32_t working_fs) {
  switch (op) {
    case FcOp::add:
    case FcOp::sub: {
      const bool b_neg = op == FcOp::sub ? !b.negative() : b.negative();
      if (a.is_zero() && b.is_zero()) {
        // -0 + -0 = -0; every other signed-zero sum is +0.
        return UnboundedFloat::zero(a.negative() && b_neg, working_fs);
      }
      Scaled x = to_scaled(a);
      Scaled y = to_scaled(b);
      if (op == FcOp::sub) y.s = -y.s;
      Scaled r = add_scaled(std::move(x), std::move(y), working_fs);
      return normalize_scaled(std::move(r.s), r.lsb, r.sticky, false, working_fs);
    }
    case FcOp::mul: {
      const bool neg = a.negative() != b.negative();
      if (a.is_zero() || b.is_zero()) return UnboundedFloat::zero(neg, working_fs);
      Scaled x = to_scaled(a);
      Scaled y = to_scaled(b);
      mpz_class p = x.s * y.s;
      const bool sticky = x.sticky || y.sticky;
      std::int64_t lsb = x.lsb + y.lsb;
      if (sticky) {
        // Make sure the product has enough bits for the sticky tail.
        const std::int64_t need = static_cast<std::int64_t>(working_fs) + 3 - bitlen(p);
        if (need > 0) {
          p <<= static_cast<mp_bitcnt_t>(need);
          lsb -= need;
        }
      }
      return normalize_scaled(std::move(p), lsb, sticky, false, working_fs);
    }
    case FcOp::div: {
      if (b.is_zero()) throw UndefinedOperation("division by zero");
      const bool neg = a.negative() != b.negative();
      if (a.is_zero()) return UnboundedFloat::zero(neg, working_fs);
      Scaled x = to_scaled(a);
      Scaled y = to_scaled(b);
      mpz_class nx = ::abs(x.s), ny = ::abs(y.s);
      // Quotient with working_fs + 3 significant bits (mantissa + 2 extra).
      std::int64_t k = static_cast<std::int64_t>(working_fs) + 3 - (bitlen(nx) - bitlen(ny)) + 1;
      if (k < 0) k = 0;
      nx <<= static_cast<mp_bitcnt_t>(k);
      mpz_class q, r;
      mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), nx.get_mpz_t(), ny.get_mpz_t());
      const bool sticky = sgn(r) != 0 || x.sticky || y.sticky;
      // Trim to exactly working_fs + 3 bits so the explicit rest is 2 bits.
      Scaled s{q, x.lsb - y.lsb - k, false};
      const std::int64_t extra = bitlen(q) - (static_cast<std::int64_t>(working_fs) + 3);
      if (extra > 0) lower_precision(s, s.lsb + extra);
      s.sticky = s.sticky || sticky;
      if (neg) s.s = -s.s;
      return normalize_scaled(std::move(s.s), s.lsb, s.sticky, false, working_fs);
    }
  }
  throw std::invalid_argument("fc_arith: bad op");
}

UnboundedFloat fc_sqrt(const UnboundedFloat& a, std::uint32_t working_fs) {
  if (a.is_zero()) return UnboundedFloat::zero(a.negative(), working_fs);
  if (a.negative()) throw UndefinedOperation("square root of a negative value");
  Scaled x = to_scaled(a);
  const std::int64_t want = static_cast<std::int64_t>(working_fs) + 3;
  std::int64_t shift = 2 * want - bitlen(x.s) + 2;
  if (shift < 0) shift = 0;
  if (((x.lsb - shift) % 2) != 0) ++shift;
  mpz_class v = x.s << static_cast<mp_bitcnt_t>(shift);
  mpz_class root, rem;
  mpz_sqrtrem(root.get_mpz_t(), rem.get_mpz_t(), v.get_mpz_t());
  Scaled s{root, (x.lsb - shift) / 2, false};
  const std::int64_t extra = bitlen(root) - want;
  if (extra > 0) lower_precision(s, s.lsb + extra);
  s.sticky = s.sticky || sgn(rem) != 0 || x.sticky;
  return normalize_scaled(std::move(s.s), s.lsb, s.sticky, false, working_fs);
}

LsbRounding round_at_lsb(const UnboundedFloat& a, std::int64_t lsb, RoundingMode mode) {
  LsbRounding out;
  if (a.is_zero()) return out;
  Scaled x = to_scaled(a);
  mpz_class mag = ::abs(x.s);
  const std::int64_t d = lsb - x.lsb;
  bool guard = false;
  bool sticky = x.sticky;
  if (d <= 0) {
    mag <<= static_cast<mp_bitcnt_t>(-d);
  } else if (d > bitlen(mag)) {
    sticky = sticky || sgn(mag) != 0;
    mag = 0;
  } else {
    guard = mpz_tstbit(mag.get_mpz_t(), static_cast<mp_bitcnt_t>(d - 1)) != 0;
    if (d > 1 && sgn(low_bits(mag, static_cast<std::uint64_t>(d - 1))) != 0) sticky = true;
    mag >>= static_cast<mp_bitcnt_t>(d);
  }
  out.inexact = guard || sticky;
  if (mode == RoundingMode::RE && guard && (sticky || mpz_odd_p(mag.get_mpz_t()))) mag += 1;
  out.magnitude = std::move(mag);
  return out;
}

Rounded round_detail(const UnboundedFloat& a, std::uint32_t target_fs, RoundingMode mode) {
  if (a.is_zero()) return {UnboundedFloat::zero(a.negative(), target_fs), false};
  const std::int64_t lsb = a.exponent() - static_cast<std::int64_t>(target_fs);
  LsbRounding r = round_at_lsb(a, lsb, mode);
  std::int64_t exponent = a.exponent();
  if (bitlen(r.magnitude) > static_cast<std::int64_t>(target_fs) + 1) {
    r.magnitude >>= 1;
    ++exponent;
  }
  return {UnboundedFloat::from_parts(a.negative(), exponent, std::move(r.magnitude), target_fs), r.inexact};
}

UnboundedFloat from_rational(const Rational& x, std::uint32_t working_fs) {
  if (x.is_zero()) return UnboundedFloat::zero(false, working_fs);
  const long e = floor_log2(x);
  // floor(|x| * 2^(working_fs + 2 - e)) has working_fs + 3 bits.
  const long shift = static_cast<long>(working_fs) + 2 - e;
  mpz_class num = ::abs(x.numerator());
  mpz_class den = x.denominator();
  if (shift >= 0)
    num <<= static_cast<mp_bitcnt_t>(shift);
  else
    den <<= static_cast<mp_bitcnt_t>(-shift);
  mpz_class q, r;
  mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (x.sign() < 0) q = -q;
  UnboundedFloat f = normalize_scaled(std::move(q), -shift, sgn(r) != 0, false, working_fs);
  return f;
}

Rational to_rational(const UnboundedFloat& a) {
  if (a.is_zero()) return Rational(0);
  if (a.rest().sticky) throw std::logic_error("to_rational: value carries an inexact sticky tail");
  Scaled x = to_scaled(a);
  return Rational(x.s).scaled_by_pow2(x.lsb);
}

int compare(const UnboundedFloat& a, const UnboundedFloat& b) {
  const int sa = a.is_zero() ? 0 : (a.negative() ? -1 : 1);
  const int sb = b.is_zero() ? 0 : (b.negative() ? -1 : 1);
  if (sa != sb) return sa < sb ? -1 : 1;
  if (sa == 0) return 0;
  int mag;
  if (a.exponent() != b.exponent()) {
    mag = a.exponent() < b.exponent() ? -1 : 1;
  } else {
    Scaled x = to_scaled(a.abs()), y = to_scaled(b.abs());
    const std::int64_t lsb = std::min(x.lsb, y.lsb);
    x.s <<= static_cast<mp_bitcnt_t>(x.lsb - lsb);
    y.s <<= static_cast<mp_bitcnt_t>(y.lsb - lsb);
    mag = cmp(x.s, y.s);
    mag = mag < 0 ? -1 : (mag > 0 ? 1 : 0);
  }
  return sa > 0 ? mag : -mag;
}

}  // namespace nrs
