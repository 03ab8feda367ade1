#include "nrs/fast_codec.hpp"

#include <algorithm>
#include <cmath>

namespace nrs {

namespace {

using u128 = unsigned __int128;
using i128 = __int128;

int bitlen(u128 v) {
  const auto hi = static_cast<std::uint64_t>(v >> 64);
  if (hi != 0) return 128 - __builtin_clzll(hi);
  const auto lo = static_cast<std::uint64_t>(v);
  return lo == 0 ? 0 : 64 - __builtin_clzll(lo);
}

WideValue normalized(bool negative, u128 s, std::int64_t lsb, bool sticky) {
  WideValue w;
  w.negative = negative;
  if (s == 0) {
    w.zero = true;
    return w;
  }
  const int bl = bitlen(s);
  w.exponent = lsb + bl - 1;
  w.mantissa = s << (128 - bl);
  w.sticky = sticky;
  return w;
}

// Three-way compare of magnitudes (e1, m1) and (e2, m2), both top-aligned.
int cmp_key(std::int64_t e1, u128 m1, std::int64_t e2, u128 m2) {
  if (e1 != e2) return e1 < e2 ? -1 : 1;
  if (m1 != m2) return m1 < m2 ? -1 : 1;
  return 0;
}

constexpr std::uint64_t ones(int n) { return n >= 64 ? ~0ULL : ((1ULL << n) - 1); }

mpz_class to_mpz(u128 v) {
  mpz_class hi(static_cast<unsigned long>(v >> 64));
  mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(v)));
  return (hi << 64) + lo;
}

}  // namespace

UnboundedFloat WideValue::to_float() const {
  if (zero) return UnboundedFloat::zero(negative, 127);
  mpz_class m = to_mpz(mantissa);
  if (negative) m = -m;
  return normalize_scaled(std::move(m), exponent - 127, sticky, false, 127);
}

FastCodec::FastCodec(const Format& f) : format_(f) {
  const int n = f.width();
  if (n > kMaxWidth) throw std::invalid_argument("fast codec supports widths up to 20 bits");
  const Descriptor& d = f.descriptor();
  mode_ = d.rounding;
  working_round_ = d.is_tapered() && f.arithmetic_policy() == TaperedPolicy::working_then_truncate;
  working_bits_ = n;

  const std::uint64_t count = f.pattern_count();
  ops_.resize(count);
  std::vector<std::pair<std::pair<std::int64_t, std::uint64_t>, std::uint64_t>> keys[2];
  for (std::uint64_t p = 0; p < count; ++p) {
    const DecodedValue v = f.decode(p);
    Operand& o = ops_[p];
    o.cls = v.cls;
    o.negative = v.negative;
    if (v.cls != ValueClass::Finite) continue;
    o.exponent = v.parts.exponent;
    o.fraction_bits = v.parts.fraction_bits;
    o.mantissa = (1ULL << o.fraction_bits) | v.parts.fraction;
    keys[v.negative ? 1 : 0].push_back({{o.exponent, o.mantissa << (63 - o.fraction_bits)}, p});
  }
  for (int s = 0; s < 2; ++s) {
    auto& k = keys[s];
    std::sort(k.begin(), k.end());
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (i > 0 && k[i].first == k[i - 1].first) continue;
      Entry e;
      e.exponent = k[i].first.first;
      e.mantissa = k[i].first.second;
      e.bits = k[i].second;
      // Duplicate encodings: keep the canonical one.
      if (i + 1 < k.size() && k[i + 1].first == k[i].first) {
        const Encoded c = f.encode(f.decode(k[i].second).value());
        e.bits = *c.bits;
      }
      e.even = (e.bits & 1) == 0;
      table_[s].push_back(e);
    }
  }

  const std::uint64_t sign_bit = 1ULL << (n - 1);
  switch (d.kind) {
    case Kind::floatp: {
      const int es = d.p1, fs = d.p2;
      const std::int64_t bias = (std::int64_t{1} << (es - 1)) - 1;
      for (int s = 0; s < 2; ++s) {
        Entry z;
        z.exponent = -bias;
        z.mantissa = 1ULL << 63;
        z.bits = s != 0 ? sign_bit : 0;
        z.cls = ValueClass::Zero;
        table_[s].insert(table_[s].begin(), z);
        Entry inf;
        inf.exponent = static_cast<std::int64_t>(ones(es)) - bias;
        inf.mantissa = ones(fs + 1) << (63 - fs);
        inf.bits = (s != 0 ? sign_bit : 0) | ones(n - 1);
        inf.cls = ValueClass::Inf;
        inf.even = false;
        table_[s].push_back(inf);
      }
      below_ = Below::zero;
      above_ = Above::clamp;
      break;
    }
    case Kind::ieee754: {
      const int es = d.p1, fs = d.p2;
      const std::int64_t bias = (std::int64_t{1} << (es - 1)) - 1;
      if (mode_ == RoundingMode::RE) {
        for (int s = 0; s < 2; ++s) {
          Entry inf;
          inf.exponent = bias + 1;
          inf.mantissa = 1ULL << 63;
          inf.bits = (s != 0 ? sign_bit : 0) | (ones(es) << fs);
          inf.cls = ValueClass::Inf;
          table_[s].push_back(inf);
        }
      }
      below_ = Below::nearest_zero;
      above_ = Above::clamp;
      break;
    }
    case Kind::fixedp: {
      const int fs = d.p2;
      for (int s = 0; s < 2; ++s) {
        // Virtual NR just past the largest magnitude.
        Entry nr;
        const std::uint64_t top = (1ULL << (n - 1)) + (s != 0 ? 1 : 0);
        const int bl = 64 - __builtin_clzll(top);
        nr.exponent = bl - 1 - fs;
        nr.mantissa = top << (64 - bl);
        nr.cls = ValueClass::NR;
        nr.has_bits = false;
        nr.even = (top & 1) == 0;
        table_[s].push_back(nr);
      }
      below_ = Below::nearest_zero;
      above_ = Above::error;
      break;
    }
    case Kind::posit:
      below_ = Below::clamp;
      above_ = Above::clamp;
      break;
    default:
      below_ = Below::zero;
      above_ = Above::error;
      break;
  }
}

std::optional<WideValue> FastCodec::exact_result(ArithOp op, const Operand& a, const Operand& b) const {
  auto usable = [](const Operand& o) { return o.cls == ValueClass::Finite || o.cls == ValueClass::Zero; };
  if (!usable(a) || !usable(b)) return std::nullopt;
  const bool a_zero = a.cls == ValueClass::Zero, b_zero = b.cls == ValueClass::Zero;
  switch (op) {
    case ArithOp::add:
    case ArithOp::sub: {
      const bool b_neg = op == ArithOp::sub ? !b.negative : b.negative;
      if (a_zero && b_zero) {
        WideValue z;
        z.zero = true;
        z.negative = a.negative && b_neg;
        return z;
      }
      if (a_zero) return normalized(b_neg, b.mantissa, b.exponent - b.fraction_bits, false);
      if (b_zero) return normalized(a.negative, a.mantissa, a.exponent - a.fraction_bits, false);
      const bool a_big = a.exponent >= b.exponent;
      const Operand& big = a_big ? a : b;
      const Operand& small = a_big ? b : a;
      const bool big_neg = a_big ? a.negative : b_neg;
      const bool small_neg = a_big ? b_neg : a.negative;
      const std::int64_t lsb_big = big.exponent - big.fraction_bits;
      const std::int64_t lsb_small = small.exponent - small.fraction_bits;
      if (big.exponent - small.exponent > 80) {
        // The small addend lies below one unit of the shifted big mantissa.
        u128 s = static_cast<u128>(big.mantissa) << 40;
        if (big_neg != small_neg) s -= 1;
        return normalized(big_neg, s, lsb_big - 40, true);
      }
      const std::int64_t base = std::min(lsb_big, lsb_small);
      const u128 sb = static_cast<u128>(big.mantissa) << (lsb_big - base);
      const u128 ss = static_cast<u128>(small.mantissa) << (lsb_small - base);
      if (big_neg == small_neg) return normalized(big_neg, sb + ss, base, false);
      if (sb == ss) return normalized(false, 0, base, false);
      if (sb > ss) return normalized(big_neg, sb - ss, base, false);
      return normalized(small_neg, ss - sb, base, false);
    }
    case ArithOp::mul: {
      const bool neg = a.negative != b.negative;
      if (a_zero || b_zero) {
        WideValue z;
        z.zero = true;
        z.negative = neg;
        return z;
      }
      const u128 p = static_cast<u128>(a.mantissa) * b.mantissa;
      return normalized(neg, p, a.exponent - a.fraction_bits + b.exponent - b.fraction_bits, false);
    }
    case ArithOp::div: {
      if (b_zero) return std::nullopt;
      const bool neg = a.negative != b.negative;
      if (a_zero) {
        WideValue z;
        z.zero = true;
        z.negative = neg;
        return z;
      }
      const int k = 127 - bitlen(a.mantissa);
      const u128 num = static_cast<u128>(a.mantissa) << k;
      const u128 q = num / b.mantissa;
      const bool sticky = num % b.mantissa != 0;
      return normalized(neg, q, (a.exponent - a.fraction_bits - k) - (b.exponent - b.fraction_bits), sticky);
    }
  }
  return std::nullopt;
}

FastEncoded FastCodec::from_encoded(const Encoded& e) const {
  FastEncoded r;
  r.cls = e.cls;
  r.negative = e.negative;
  r.has_bits = e.bits.has_value();
  r.bits = e.bits.value_or(0);
  r.exact = e.exact;
  if (e.cls == ValueClass::Finite) {
    const DecodedValue d = format_.decode(r.bits);
    r.exponent = d.parts.exponent;
    r.mantissa = ((1ULL << d.parts.fraction_bits) | d.parts.fraction) << (63 - d.parts.fraction_bits);
  }
  return r;
}

FastEncoded FastCodec::from_entry(const Entry& e, bool negative, bool exact) const {
  switch (e.cls) {
    case ValueClass::Finite: {
      FastEncoded r;
      r.cls = ValueClass::Finite;
      r.negative = negative;
      r.bits = e.bits;
      r.exact = exact;
      r.exponent = e.exponent;
      r.mantissa = e.mantissa;
      return r;
    }
    case ValueClass::Zero: {
      FastEncoded r = from_encoded(format_.zero(negative));
      r.exact = false;
      return r;
    }
    case ValueClass::Inf: return from_encoded(format_.infinity(negative));
    default: {
      FastEncoded r = from_encoded(format_.error_value());
      r.negative = negative;
      return r;
    }
  }
}

FastEncoded FastCodec::slow(const WideValue& x) const {
  fallbacks_.fetch_add(1, std::memory_order_relaxed);
  return from_encoded(format_.encode(x.to_float()));
}

FastEncoded FastCodec::encode(const WideValue& in) const {
  if (in.zero) return from_encoded(format_.zero(in.negative));
  WideValue x = in;
  bool pre_exact = true;
  RoundingMode mode = mode_;
  if (working_round_) {
    const int drop = 127 - working_bits_;
    u128 top = x.mantissa >> drop;
    const bool guard = ((x.mantissa >> (drop - 1)) & 1) != 0;
    const bool rest = (x.mantissa & ((static_cast<u128>(1) << (drop - 1)) - 1)) != 0 || x.sticky;
    pre_exact = !guard && !rest;
    if (mode == RoundingMode::RE && guard && (rest || (top & 1) != 0)) ++top;
    if (bitlen(top) > working_bits_ + 1) {
      top >>= 1;
      ++x.exponent;
    }
    x.mantissa = top << drop;
    x.sticky = false;
    mode = RoundingMode::RZ;
  }
  const auto& t = table_[x.negative ? 1 : 0];
  // Last entry <= x.
  std::size_t lo_n = 0, hi_n = t.size();
  while (lo_n < hi_n) {
    const std::size_t mid = (lo_n + hi_n) / 2;
    if (cmp_key(t[mid].exponent, static_cast<u128>(t[mid].mantissa) << 64, x.exponent, x.mantissa) <= 0)
      lo_n = mid + 1;
    else
      hi_n = mid;
  }
  const long lo = static_cast<long>(lo_n) - 1;
  const auto hi = static_cast<std::size_t>(lo + 1);
  if (lo >= 0) {
    const Entry& e = t[static_cast<std::size_t>(lo)];
    if (!x.sticky && cmp_key(e.exponent, static_cast<u128>(e.mantissa) << 64, x.exponent, x.mantissa) == 0)
      return from_entry(e, x.negative, pre_exact);
  }
  if (lo < 0) {
    switch (below_) {
      case Below::zero: {
        FastEncoded r = from_encoded(format_.zero(x.negative));
        r.exact = false;
        return r;
      }
      case Below::clamp: return from_entry(t.front(), x.negative, false);
      case Below::nearest_zero: {
        const Entry& e0 = t.front();
        bool up = false;
        if (mode == RoundingMode::RE) {
          const int c = cmp_key(x.exponent, x.mantissa, e0.exponent - 1, static_cast<u128>(e0.mantissa) << 64);
          up = c > 0 || (c == 0 && x.sticky);
        }
        if (up) return from_entry(e0, x.negative, false);
        FastEncoded r = from_encoded(format_.zero(x.negative));
        r.exact = false;
        return r;
      }
    }
  }
  const Entry& el = t[static_cast<std::size_t>(lo)];
  if (hi >= t.size()) {
    if (above_ == Above::clamp) return from_entry(el, x.negative, false);
    FastEncoded r = from_encoded(format_.error_value());
    r.negative = x.negative;
    return r;
  }
  const Entry& eh = t[hi];
  if (mode == RoundingMode::RZ || eh.exponent >= x.exponent + 2) return from_entry(el, x.negative, false);
  const std::int64_t gap = eh.exponent - el.exponent;
  const std::int64_t span = x.exponent - el.exponent;
  if (gap > 60 || span > 60) return slow(in);
  // Units of 2^(el.exponent - 63).
  const u128 sum = static_cast<u128>(el.mantissa) + (static_cast<u128>(eh.mantissa) << gap);
  // 2x = mantissa * 2^(x.exponent - 126) -> shift by span - 63 in these units.
  const int sh = static_cast<int>(63 - span);
  const u128 twice = x.mantissa >> sh;
  const bool dropped = (x.mantissa & ((static_cast<u128>(1) << sh) - 1)) != 0 || x.sticky;
  if (twice > sum || (twice == sum && dropped)) return from_entry(eh, x.negative, false);
  if (twice < sum) return from_entry(el, x.negative, false);
  if (eh.even && !el.even) return from_entry(eh, x.negative, false);
  return from_entry(el, x.negative, false);
}

FastEncoded FastCodec::arith(ArithOp op, std::uint64_t a, std::uint64_t b) const {
  const auto x = exact_result(op, ops_[a], ops_[b]);
  if (!x) return from_encoded(nrs_arith(format_, op, a, b));
  return encode(*x);
}

double FastCodec::digits(const FastEncoded& r, const WideValue& x) {
  if (r.cls != ValueClass::Finite) return 0.0;
  if (x.zero || r.negative != x.negative) return 0.0;
  const std::int64_t shift = r.exponent - x.exponent;
  long double d;
  if (shift >= -1 && shift <= 1) {
    // Both magnitudes in units of 2^(max exponent - 127); the smaller one is
    // halved when the exponents differ (its lowest bit is negligible).
    u128 c = static_cast<u128>(r.mantissa) << 64;
    u128 m = x.mantissa;
    if (shift == 1) m >>= 1;
    if (shift == -1) c >>= 1;
    // Keep both below 2^127 so the signed difference cannot overflow.
    c >>= 1;
    m >>= 1;
    const i128 diff = static_cast<i128>(c) - static_cast<i128>(m);
    const long double md = static_cast<long double>(m);
    d = static_cast<long double>(diff) / md;
  } else {
    const long double c = static_cast<long double>(r.mantissa) / 9223372036854775808.0L;
    const long double m = static_cast<long double>(x.mantissa >> 64) / 9223372036854775808.0L;
    const long double l2 = std::log2(c) - std::log2(m) + static_cast<long double>(shift);
    return digits_from_log10_ratio(l2 * 0.301029995663981195213738894724493027L);
  }
  return digits_from_log10_ratio(std::log1p(d) / 2.302585092994045684017991454684364208L);
}

}  // namespace nrs
