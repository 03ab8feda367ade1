#include "nrs/formats.hpp"

#include <bit>

namespace nrs {

namespace {

constexpr std::uint64_t ones(int n) { return n >= 64 ? ~0ULL : ((1ULL << n) - 1); }

int bit_width(std::uint64_t v) { return static_cast<int>(std::bit_width(v)); }

mpz_class to_mpz(std::uint64_t v) { return mpz_class(static_cast<unsigned long>(v)); }

FiniteParts parts_from_integer(bool negative, std::uint64_t mag, std::int64_t lsb) {
  const int bl = bit_width(mag);
  return {negative, lsb + bl - 1, mag - (1ULL << (bl - 1)), bl - 1};
}

}  // namespace

std::string_view class_name(ValueClass c) {
  switch (c) {
    case ValueClass::Finite: return "Finite";
    case ValueClass::Zero: return "Zero";
    case ValueClass::Inf: return "Inf";
    case ValueClass::QNaN: return "QNaN";
    case ValueClass::SNaN: return "SNaN";
    case ValueClass::NaR: return "NaR";
    case ValueClass::NR: return "NR";
  }
  return "?";
}

BitPattern parse_pattern(std::string_view text, int width) {
  int radix_bits = 0;
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X'))
    radix_bits = 4;
  else if (text.size() > 2 && text[0] == '0' && (text[1] == 'b' || text[1] == 'B'))
    radix_bits = 1;
  else
    throw std::invalid_argument("pattern '" + std::string(text) + "' must start with 0x or 0b");
  std::uint64_t v = 0;
  bool any = false;
  for (char c : text.substr(2)) {
    if (c == '_') continue;
    int d;
    if (c >= '0' && c <= '9')
      d = c - '0';
    else if (c >= 'a' && c <= 'f')
      d = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F')
      d = c - 'A' + 10;
    else
      d = 99;
    if (d >= (1 << radix_bits)) throw std::invalid_argument("bad digit '" + std::string(1, c) + "' in pattern");
    if (v >> (64 - radix_bits) != 0)
      throw std::invalid_argument("pattern " + std::string(text) + " exceeds " + std::to_string(width) + " bits");
    v = (v << radix_bits) | static_cast<std::uint64_t>(d);
    any = true;
  }
  if (!any) throw std::invalid_argument("empty pattern '" + std::string(text) + "'");
  if (width < 64 && (v >> width) != 0)
    throw std::invalid_argument("pattern " + std::string(text) + " exceeds " + std::to_string(width) + " bits");
  return {width, v};
}

std::string to_hex(const BitPattern& p) {
  static constexpr char kDigits[] = "0123456789abcdef";
  const int nd = std::max(1, (p.width + 3) / 4);
  std::string s(static_cast<std::size_t>(nd), '0');
  for (int i = 0; i < nd; ++i) s[static_cast<std::size_t>(nd - 1 - i)] = kDigits[(p.bits >> (4 * i)) & 0xF];
  return "0x" + s;
}

Rational DecodedValue::value() const {
  if (cls == ValueClass::Zero) return Rational(0);
  if (cls != ValueClass::Finite) throw std::domain_error(std::string("no rational value for ") + std::string(class_name(cls)));
  mpz_class m = (mpz_class(1) << static_cast<mp_bitcnt_t>(parts.fraction_bits)) + to_mpz(parts.fraction);
  if (parts.negative) m = -m;
  return Rational(m).scaled_by_pow2(parts.exponent - parts.fraction_bits);
}

UnboundedFloat DecodedValue::to_float(std::uint32_t working_fs) const {
  if (cls == ValueClass::Zero) return UnboundedFloat::zero(negative, working_fs);
  if (cls != ValueClass::Finite) throw std::domain_error(std::string("no float value for ") + std::string(class_name(cls)));
  const auto fb = static_cast<std::uint32_t>(parts.fraction_bits);
  if (working_fs < fb) throw std::invalid_argument("working fraction size below the value's precision");
  mpz_class m = (mpz_class(1) << fb) + to_mpz(parts.fraction);
  m <<= working_fs - fb;
  return UnboundedFloat::from_parts(parts.negative, parts.exponent, std::move(m), working_fs);
}

Format::Format(Descriptor d, TaperedPolicy arithmetic, TaperedPolicy conversion)
    : desc_(d), arithmetic_(arithmetic), conversion_(conversion) {
  if (d.is_rational()) throw std::invalid_argument("the rational oracle has no bit-level codec");
  if (d.is_tapered()) layout_ = std::make_shared<TaperedLayout>(d);
}

std::uint64_t Format::mask() const { return ones(width()); }

std::uint32_t Format::working_fs() const {
  const int w = width();
  return static_cast<std::uint32_t>(desc_.is_tapered() ? w : w + 2);
}

DecodedValue Format::decode(std::uint64_t bits) const {
  bits &= mask();
  switch (desc_.kind) {
    case Kind::fixedp: return decode_fixed(bits);
    case Kind::floatp:
    case Kind::ieee754: return decode_float(bits);
    case Kind::posit: return decode_posit(bits);
    default: return decode_morris(bits);
  }
}

DecodedValue Format::decode_fixed(std::uint64_t bits) const {
  const int n = width(), fs = desc_.p2;
  DecodedValue d;
  d.fields.sign = static_cast<int>(bits >> (n - 1));
  d.fields.fraction_size = fs;
  d.fields.fraction = bits & ones(fs);
  if (bits == 0) return d;
  d.cls = ValueClass::Finite;
  d.negative = d.fields.sign != 0;
  const std::uint64_t mag = d.negative ? ((~bits + 1) & mask()) : bits;
  d.parts = parts_from_integer(d.negative, mag, -fs);
  return d;
}

DecodedValue Format::decode_float(std::uint64_t bits) const {
  const int n = width(), es = desc_.p1, fs = desc_.p2;
  const std::int64_t bias = (std::int64_t{1} << (es - 1)) - 1;
  DecodedValue d;
  d.negative = (bits >> (n - 1)) != 0;
  d.fields.sign = d.negative ? 1 : 0;
  const std::uint64_t field = (bits >> fs) & ones(es);
  const std::uint64_t frac = bits & ones(fs);
  d.fields.biased_exponent = static_cast<std::int64_t>(field);
  d.fields.fraction_size = fs;
  d.fields.fraction = frac;
  const std::uint64_t mag = bits & ones(n - 1);
  if (desc_.kind == Kind::floatp) {
    if (mag == 0) return d;
    if (mag == ones(n - 1)) {
      d.cls = ValueClass::Inf;
      return d;
    }
    d.cls = ValueClass::Finite;
    d.parts = {d.negative, static_cast<std::int64_t>(field) - bias, frac, fs};
    return d;
  }
  if (field == ones(es)) {
    d.cls = frac == 0 ? ValueClass::Inf : ((frac >> (fs - 1)) != 0 ? ValueClass::QNaN : ValueClass::SNaN);
    return d;
  }
  if (field == 0) {
    if (frac == 0) return d;
    d.cls = ValueClass::Finite;
    d.parts = parts_from_integer(d.negative, frac, 1 - bias - fs);
    return d;
  }
  d.cls = ValueClass::Finite;
  d.parts = {d.negative, static_cast<std::int64_t>(field) - bias, frac, fs};
  return d;
}

DecodedValue Format::decode_posit(std::uint64_t bits) const {
  const int n = width(), es = desc_.p2;
  DecodedValue d;
  d.fields.sign = static_cast<int>(bits >> (n - 1));
  if (bits == 0) return d;
  if (bits == (1ULL << (n - 1))) {
    d.cls = ValueClass::NaR;
    d.negative = true;
    return d;
  }
  d.negative = d.fields.sign != 0;
  const std::uint64_t b = d.negative ? ((~bits + 1) & mask()) : bits;
  const int body = n - 1;
  const int r0 = static_cast<int>((b >> (body - 1)) & 1);
  int run = 0;
  while (run < body && static_cast<int>((b >> (body - 1 - run)) & 1) == r0) ++run;
  const std::int64_t k = r0 != 0 ? run - 1 : -run;
  const int rl = std::min(run + 1, body);
  const int avail = body - rl;
  const int eb = std::min(es, avail);
  const int fs = avail - eb;
  const std::uint64_t stored = (b >> fs) & ones(eb);
  const std::int64_t binexp = static_cast<std::int64_t>(stored << (es - eb));
  d.fields.size_field = static_cast<std::int64_t>(b >> avail);
  d.fields.size_value = k;
  d.fields.exponent_size = es;
  d.fields.exponent_bits_stored = eb;
  d.fields.binary_exponent = binexp;
  d.fields.fraction_size = fs;
  d.fields.fraction = b & ones(fs);
  d.cls = ValueClass::Finite;
  d.parts = {d.negative, k * (std::int64_t{1} << es) + binexp, d.fields.fraction, fs};
  return d;
}

DecodedValue Format::decode_morris(std::uint64_t bits) const {
  const int n = width(), g = desc_.p2;
  DecodedValue d;
  d.negative = (bits >> (n - 1)) != 0;
  d.fields.sign = d.negative ? 1 : 0;
  if (bits == 0) {
    d.negative = false;
    return d;
  }
  const bool nr = desc_.kind == Kind::morris ? bits == mask() : bits == (1ULL << (n - 1));
  if (nr) {
    d.cls = ValueClass::NR;
    return d;
  }
  const std::uint64_t mag = bits & ones(n - 1);
  FieldView& f = d.fields;
  int rem = 0;            // bits after the size fields
  std::int64_t es = 0;    // exponent size (-1: exponent is 0)
  int sgn_e = 1;          // sign applied to the exponent magnitude
  bool hidden = true;     // exponent magnitude = 2^es + binary exponent
  bool negate = false;
  switch (desc_.kind) {
    case Kind::morris:
    case Kind::morrisheb: {
      rem = n - 2 - g;
      const std::int64_t G = static_cast<std::int64_t>(mag >> (n - 1 - g));
      f.size_field = G;
      f.size_value = G;
      f.exponent_sign = static_cast<int>((mag >> rem) & 1);
      sgn_e = *f.exponent_sign != 0 ? -1 : 1;
      if (desc_.kind == Kind::morris) {
        es = G + 1;
        hidden = false;
      } else {
        es = G - 1;
      }
      break;
    }
    case Kind::morrisbias: {
      rem = n - 1 - g;
      const std::int64_t bg = static_cast<std::int64_t>(mag >> rem);
      const std::int64_t G = bg - ((std::int64_t{1} << (g - 1)) - 1);
      f.size_field = bg;
      f.size_value = G;
      es = (G < 0 ? -G : G) - 1;
      sgn_e = G < 0 ? -1 : 1;
      negate = G < 0;
      break;
    }
    default: {  // morrisunary
      const int body = n - 1;
      const int r0 = static_cast<int>((mag >> (body - 1)) & 1);
      int run = 0;
      while (run < body && static_cast<int>((mag >> (body - 1 - run)) & 1) == r0) ++run;
      const std::int64_t k = r0 != 0 ? run - 1 : -run;
      const int rl = std::min(run + 1, body);
      rem = body - rl;
      f.size_field = static_cast<std::int64_t>(mag >> rem);
      f.size_value = k;
      es = (k < 0 ? -k : k) - 1;
      sgn_e = k < 0 ? -1 : 1;
      negate = k < 0;
      break;
    }
  }
  f.exponent_size = es;
  const int eb = es < 0 ? 0 : static_cast<int>(std::min<std::int64_t>(es, rem));
  const int fs = rem - eb;
  std::uint64_t stored = (mag >> fs) & ones(eb);
  if (negate) stored = ~stored & ones(eb);
  const std::int64_t binexp = es < 0 ? 0 : static_cast<std::int64_t>(stored) << (es - eb);
  std::int64_t e_mag = binexp;
  if (hidden) e_mag = es < 0 ? 0 : (std::int64_t{1} << es) + binexp;
  f.exponent_bits_stored = eb;
  f.binary_exponent = binexp;
  f.fraction_size = fs;
  f.fraction = mag & ones(fs);
  d.cls = ValueClass::Finite;
  d.parts = {d.negative, sgn_e * e_mag, f.fraction, fs};
  return d;
}

Encoded Format::zero(bool negative) const {
  const bool signed_zero = desc_.kind == Kind::floatp || desc_.kind == Kind::ieee754;
  const bool neg = signed_zero && negative;
  return {ValueClass::Zero, neg, neg ? (1ULL << (width() - 1)) : 0, true};
}

Encoded Format::error_value() const {
  switch (desc_.kind) {
    case Kind::posit: return {ValueClass::NaR, false, layout_->error_pattern(), false};
    case Kind::morris:
    case Kind::morrisheb:
    case Kind::morrisbias:
    case Kind::morrisunary: return {ValueClass::NR, false, layout_->error_pattern(), false};
    case Kind::ieee754: {
      const int es = desc_.p1, fs = desc_.p2;
      return {ValueClass::QNaN, false, (ones(es) << fs) | (1ULL << (fs - 1)), false};
    }
    default: return {ValueClass::NR, false, std::nullopt, false};
  }
}

Encoded Format::infinity(bool negative) const {
  const std::uint64_t sign = negative ? (1ULL << (width() - 1)) : 0;
  switch (desc_.kind) {
    case Kind::floatp: return {ValueClass::Inf, negative, sign | ones(width() - 1), false};
    case Kind::ieee754: return {ValueClass::Inf, negative, sign | (ones(desc_.p1) << desc_.p2), false};
    default: return error_value();
  }
}

Encoded Format::special(ValueClass c, bool negative) const {
  switch (c) {
    case ValueClass::Zero: return zero(negative);
    case ValueClass::Inf: return infinity(negative);
    case ValueClass::Finite: throw std::logic_error("special() called with a finite class");
    default: return error_value();
  }
}

Encoded Format::encode(const Rational& x) const {
  if (x.is_zero()) return zero(false);
  return encode(from_rational(x, static_cast<std::uint32_t>(width() + 8)), conversion_);
}

Encoded Format::encode(const UnboundedFloat& v, TaperedPolicy policy) const {
  if (v.is_zero()) return zero(v.negative());
  switch (desc_.kind) {
    case Kind::fixedp: return encode_fixed(v);
    case Kind::floatp: return encode_floatp(v);
    case Kind::ieee754: return encode_ieee(v);
    default: break;
  }
  const FitResult r = layout_->fit(v, desc_.rounding, policy);
  switch (r.outcome) {
    case FitResult::Outcome::finite: return {ValueClass::Finite, v.negative(), r.bits, r.exact};
    case FitResult::Outcome::zero: return {ValueClass::Zero, false, 0, r.exact};
    case FitResult::Outcome::error: break;
  }
  Encoded e = error_value();
  e.negative = v.negative();
  return e;
}

Encoded Format::encode_fixed(const UnboundedFloat& v) const {
  const int n = width(), fs = desc_.p2;
  LsbRounding r = round_at_lsb(v, -fs, desc_.rounding);
  if (sgn(r.magnitude) == 0) return {ValueClass::Zero, false, 0, false};
  const mpz_class limit = (mpz_class(1) << static_cast<mp_bitcnt_t>(n - 1)) - (v.negative() ? 0 : 1);
  if (r.magnitude > limit) return {ValueClass::NR, v.negative(), std::nullopt, false};
  const std::uint64_t m = r.magnitude.get_ui();
  const std::uint64_t bits = v.negative() ? ((~m + 1) & mask()) : m;
  return {ValueClass::Finite, v.negative(), bits, !r.inexact};
}

Encoded Format::encode_floatp(const UnboundedFloat& v) const {
  const int n = width(), es = desc_.p1, fs = desc_.p2;
  const std::int64_t bias = (std::int64_t{1} << (es - 1)) - 1;
  const std::int64_t emax = static_cast<std::int64_t>(ones(es)) - bias;
  const bool neg = v.negative();
  const Rounded r = round_detail(v, static_cast<std::uint32_t>(fs), desc_.rounding);
  const std::int64_t e = r.value.exponent();
  if (e > emax) return infinity(neg);
  Encoded z = zero(neg);
  z.exact = false;
  if (e < -bias) return z;
  const std::uint64_t frac = mpz_class(r.value.mantissa() - (mpz_class(1) << static_cast<mp_bitcnt_t>(fs))).get_ui();
  const std::uint64_t magn = (static_cast<std::uint64_t>(e + bias) << fs) | frac;
  if (magn == ones(n - 1)) return infinity(neg);
  if (magn == 0) return z;
  return {ValueClass::Finite, neg, (neg ? (1ULL << (n - 1)) : 0) | magn, !r.inexact};
}

Encoded Format::encode_ieee(const UnboundedFloat& v) const {
  const int n = width(), es = desc_.p1, fs = desc_.p2;
  const std::int64_t bias = (std::int64_t{1} << (es - 1)) - 1;
  const std::int64_t emin = 1 - bias, emax = bias;
  const bool neg = v.negative();
  const std::uint64_t sign = neg ? (1ULL << (n - 1)) : 0;
  std::int64_t e = v.exponent();
  if (e > emax) {
    if (desc_.rounding == RoundingMode::RE) return infinity(neg);
    return {ValueClass::Finite, neg, sign | ((ones(es) - 1) << fs) | ones(fs), false};
  }
  LsbRounding r = round_at_lsb(v, std::max(e, emin) - fs, desc_.rounding);
  if (e >= emin) {
    if (static_cast<int>(mpz_sizeinbase(r.magnitude.get_mpz_t(), 2)) > fs + 1) {
      r.magnitude >>= 1;
      ++e;
    }
    if (e > emax) {
      if (desc_.rounding == RoundingMode::RE) return infinity(neg);
      return {ValueClass::Finite, neg, sign | ((ones(es) - 1) << fs) | ones(fs), false};
    }
    const std::uint64_t frac = mpz_class(r.magnitude - (mpz_class(1) << static_cast<mp_bitcnt_t>(fs))).get_ui();
    return {ValueClass::Finite, neg, sign | (static_cast<std::uint64_t>(e + bias) << fs) | frac, !r.inexact};
  }
  const std::uint64_t m = r.magnitude.get_ui();
  if (m == 0) {
    Encoded z = zero(neg);
    z.exact = false;
    return z;
  }
  return {ValueClass::Finite, neg, sign | m, !r.inexact};
}

DecodedValue decode(const Descriptor& d, const BitPattern& p) {
  if (p.width != d.width()) throw std::invalid_argument("pattern width does not match the descriptor");
  return Format(d).decode(p.bits);
}

Encoded encode(const Descriptor& d, const Rational& x) { return Format(d).encode(x); }

Encoded encode(const Descriptor& d, const UnboundedFloat& x) { return Format(d).encode(x); }

void enumerate(const Format& f, const std::function<void(std::uint64_t, const DecodedValue&)>& visit, int width_cap) {
  if (f.width() > width_cap)
    throw WidthCapExceeded(f.descriptor().to_string() + " has " + std::to_string(f.width()) +
                           " bits; exhaustive enumeration is capped at " + std::to_string(width_cap) + " bits");
  const std::uint64_t count = f.pattern_count();
  for (std::uint64_t p = 0; p < count; ++p) visit(p, f.decode(p));
}

PatternOrder bit_compare(const Format& f, std::uint64_t p, std::uint64_t q) {
  const DecodedValue a = f.decode(p), b = f.decode(q);
  if (is_error_class(a.cls) || is_error_class(b.cls)) return PatternOrder::unordered;
  const int n = f.width();
  auto key = [&](std::uint64_t x) -> std::int64_t {
    if (f.descriptor().kind == Kind::posit || f.descriptor().kind == Kind::fixedp) {
      const std::uint64_t top = 1ULL << (n - 1);
      return x >= top ? static_cast<std::int64_t>(x) - static_cast<std::int64_t>(top << 1) : static_cast<std::int64_t>(x);
    }
    const auto mag = static_cast<std::int64_t>(x & ones(n - 1));
    return (x >> (n - 1)) != 0 ? -mag : mag;
  };
  const std::int64_t kp = key(p), kq = key(q);
  if (kp == kq) return PatternOrder::equal;
  return kp < kq ? PatternOrder::less : PatternOrder::greater;
}

std::string value_string(const DecodedValue& v) {
  switch (v.cls) {
    case ValueClass::Finite: return format_truncated(v.value(), 3);
    case ValueClass::Zero: return v.negative ? "-0" : "0";
    case ValueClass::Inf: return v.negative ? "-Inf" : "+Inf";
    default: return std::string(class_name(v.cls));
  }
}

}  // namespace nrs
