#include "nrs/tapered.hpp"

#include <algorithm>
#include <stdexcept>

namespace nrs {

namespace {

constexpr std::uint64_t ones(int n) { return n >= 64 ? ~0ULL : ((1ULL << n) - 1); }

std::int64_t pow2(int e) { return static_cast<std::int64_t>(1) << e; }

// Exponents 2^es + j*2^tr (j < 2^eb) on the positive side, mirrored on the negative side.
ExponentSegment hidden_bit_segment(int es, int avail, bool negative_side) {
  ExponentSegment s;
  s.exponent_bits = std::min(es, avail);
  s.truncated = es - s.exponent_bits;
  s.fraction_bits = avail - s.exponent_bits;
  s.step = pow2(s.truncated);
  const std::int64_t lo = pow2(es);
  const std::int64_t hi = lo + static_cast<std::int64_t>(ones(s.exponent_bits)) * s.step;
  s.first = negative_side ? -hi : lo;
  s.last = negative_side ? -lo : hi;
  s.base = lo;
  s.magnitude_offset = true;
  return s;
}

ExponentSegment zero_exponent_segment(int avail) {
  ExponentSegment s;
  s.fraction_bits = avail;
  return s;
}

std::vector<ExponentSegment> build_posit(int n, int es) {
  std::vector<ExponentSegment> out;
  for (int k = -(n - 2); k <= n - 2; ++k) {
    const int run = k >= 0 ? k + 1 : -k;
    const int rl = std::min(run + 1, n - 1);
    ExponentSegment s;
    s.prefix = k >= 0 ? ones(run) << (rl - run) : 1;
    s.prefix_bits = rl;
    const int avail = n - 1 - rl;
    s.exponent_bits = std::min(es, avail);
    s.truncated = es - s.exponent_bits;
    s.fraction_bits = avail - s.exponent_bits;
    s.step = pow2(s.truncated);
    s.first = static_cast<std::int64_t>(k) * pow2(es);
    s.last = s.first + static_cast<std::int64_t>(ones(s.exponent_bits)) * s.step;
    s.base = s.first;
    out.push_back(s);
  }
  return out;
}

std::vector<ExponentSegment> build_unary(int n) {
  std::vector<ExponentSegment> out;
  for (int k = -(n - 2); k <= n - 2; ++k) {
    const int run = k >= 0 ? k + 1 : -k;
    const int rl = std::min(run + 1, n - 1);
    const int avail = n - 1 - rl;
    ExponentSegment s;
    if (k == 0) {
      s = zero_exponent_segment(avail);
    } else {
      const int es = k > 0 ? k - 1 : -k - 1;
      s = hidden_bit_segment(es, avail, k < 0);
      s.negate_stored = k < 0;
    }
    s.prefix = k >= 0 ? ones(run) << (rl - run) : 1;
    s.prefix_bits = rl;
    out.push_back(s);
  }
  return out;
}

std::vector<ExponentSegment> build_heb(int n, int g) {
  std::vector<ExponentSegment> out;
  const int avail = n - 1 - g - 1;
  for (int G = 0; G < (1 << g); ++G) {
    if (G == 0) {
      ExponentSegment s = zero_exponent_segment(avail);
      s.prefix = 0;
      s.alt_prefix = 1;
      s.has_alt_prefix = true;
      s.prefix_bits = g + 1;
      out.push_back(s);
      continue;
    }
    for (int neg = 0; neg < 2; ++neg) {
      ExponentSegment s = hidden_bit_segment(G - 1, avail, neg != 0);
      s.prefix = (static_cast<std::uint64_t>(G) << 1) | static_cast<std::uint64_t>(neg);
      s.prefix_bits = g + 1;
      out.push_back(s);
    }
  }
  return out;
}

std::vector<ExponentSegment> build_bias(int n, int g) {
  std::vector<ExponentSegment> out;
  const int avail = n - 1 - g;
  const int bias = (1 << (g - 1)) - 1;
  for (int bg = 0; bg < (1 << g); ++bg) {
    const int G = bg - bias;
    ExponentSegment s;
    if (G == 0) {
      s = zero_exponent_segment(avail);
    } else {
      s = hidden_bit_segment(G > 0 ? G - 1 : -G - 1, avail, G < 0);
      s.negate_stored = G < 0;
    }
    s.prefix = static_cast<std::uint64_t>(bg);
    s.prefix_bits = g;
    out.push_back(s);
  }
  return out;
}

// Plain Morris keeps duplicate encodings; each exponent is assigned to the
// smallest G that reaches it.
std::vector<ExponentSegment> build_morris(int n, int g) {
  std::vector<ExponentSegment> out;
  const int avail = n - 1 - g - 1;
  std::int64_t covered = -1;
  for (int G = 0; G < (1 << g); ++G) {
    const int es = G + 1;
    ExponentSegment s;
    s.exponent_bits = std::min(es, avail);
    s.truncated = es - s.exponent_bits;
    s.fraction_bits = avail - s.exponent_bits;
    s.step = pow2(s.truncated);
    s.magnitude_offset = true;
    s.prefix_bits = g + 1;
    const std::int64_t top = static_cast<std::int64_t>(ones(s.exponent_bits)) * s.step;
    const std::int64_t low = (covered < 0 ? 0 : (covered / s.step + 1) * s.step);
    if (low > top) continue;
    covered = top;
    ExponentSegment pos = s;
    pos.first = low;
    pos.last = top;
    pos.prefix = static_cast<std::uint64_t>(G) << 1;
    if (low == 0) {
      pos.alt_prefix = pos.prefix | 1;
      pos.has_alt_prefix = true;
    }
    out.push_back(pos);
    const std::int64_t neg_low = std::max(low, s.step);
    if (neg_low <= top) {
      ExponentSegment neg = s;
      neg.first = -top;
      neg.last = -neg_low;
      neg.prefix = (static_cast<std::uint64_t>(G) << 1) | 1;
      out.push_back(neg);
    }
  }
  return out;
}

}  // namespace

TaperedLayout::TaperedLayout(const Descriptor& d) : desc_(d), width_(d.width()) {
  switch (d.kind) {
    case Kind::posit:
      segs_ = build_posit(d.p1, d.p2);
      error_ = 1ULL << (width_ - 1);
      break;
    case Kind::morris:
      segs_ = build_morris(d.p1, d.p2);
      error_ = ones(width_);
      break;
    case Kind::morrisheb:
      segs_ = build_heb(d.p1, d.p2);
      error_ = 1ULL << (width_ - 1);
      break;
    case Kind::morrisbias:
      segs_ = build_bias(d.p1, d.p2);
      error_ = 1ULL << (width_ - 1);
      break;
    case Kind::morrisunary:
      segs_ = build_unary(d.p1);
      error_ = 1ULL << (width_ - 1);
      break;
    default:
      throw std::invalid_argument("not a tapered format: " + d.to_string());
  }
  std::sort(segs_.begin(), segs_.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < segs_.size(); ++i)
    if (segs_[i].first <= segs_[i - 1].last) throw std::logic_error("overlapping exponent segments");
}

namespace {

// Index of the last segment whose first exponent is <= e, or -1.
long locate(const std::vector<ExponentSegment>& segs, std::int64_t e) {
  auto it = std::upper_bound(segs.begin(), segs.end(), e, [](std::int64_t v, const auto& s) { return v < s.first; });
  return static_cast<long>(it - segs.begin()) - 1;
}

}  // namespace

const ExponentSegment* TaperedLayout::find(std::int64_t e) const {
  const long i = locate(segs_, e);
  if (i < 0) return nullptr;
  const ExponentSegment& s = segs_[static_cast<std::size_t>(i)];
  if (e > s.last || (e - s.first) % s.step != 0) return nullptr;
  return &s;
}

std::optional<std::int64_t> TaperedLayout::floor_exponent(std::int64_t e) const {
  const long i = locate(segs_, e);
  if (i < 0) return std::nullopt;
  const ExponentSegment& s = segs_[static_cast<std::size_t>(i)];
  if (e >= s.last) return s.last;
  return s.first + ((e - s.first) / s.step) * s.step;
}

std::optional<std::int64_t> TaperedLayout::next_exponent(std::int64_t e) const {
  const long i = locate(segs_, e);
  if (i >= 0) {
    const ExponentSegment& s = segs_[static_cast<std::size_t>(i)];
    if (e < s.last) return s.first + ((e - s.first) / s.step + 1) * s.step;
  }
  const auto j = static_cast<std::size_t>(i + 1);
  if (j < segs_.size()) return segs_[j].first;
  return std::nullopt;
}

Slot TaperedLayout::slot_at(std::int64_t e, std::uint64_t fraction) const {
  const ExponentSegment* s = find(e);
  if (s == nullptr) throw std::logic_error("exponent outside the layout");
  return {e, fraction, s->fraction_bits};
}

std::optional<Slot> TaperedLayout::next(const Slot& s) const {
  if (s.fraction < ones(s.fraction_bits)) return Slot{s.exponent, s.fraction + 1, s.fraction_bits};
  auto e = next_exponent(s.exponent);
  if (!e) return std::nullopt;
  return slot_at(*e, 0);
}

std::optional<Slot> TaperedLayout::prev(const Slot& s) const {
  if (s.fraction > 0) return Slot{s.exponent, s.fraction - 1, s.fraction_bits};
  auto e = floor_exponent(s.exponent - 1);
  if (!e) return std::nullopt;
  Slot out = slot_at(*e, 0);
  out.fraction = ones(out.fraction_bits);
  return out;
}

std::uint64_t TaperedLayout::magnitude_bits(const ExponentSegment& seg, std::uint64_t prefix, const Slot& s) const {
  const std::int64_t off = seg.magnitude_offset ? (s.exponent < 0 ? -s.exponent : s.exponent) : s.exponent;
  std::uint64_t stored = seg.exponent_bits == 0 ? 0 : static_cast<std::uint64_t>((off - seg.base) >> seg.truncated);
  if (seg.negate_stored) stored = ~stored & ones(seg.exponent_bits);
  return (prefix << (seg.exponent_bits + seg.fraction_bits)) | (stored << seg.fraction_bits) | s.fraction;
}

std::uint64_t TaperedLayout::apply_sign(bool negative, std::uint64_t magnitude) const {
  if (!negative) return magnitude;
  if (desc_.kind == Kind::posit) return (~magnitude + 1) & ones(width_);
  return (1ULL << (width_ - 1)) | magnitude;
}

std::optional<std::uint64_t> TaperedLayout::compose(bool negative, const Slot& s) const {
  const ExponentSegment* seg = find(s.exponent);
  if (seg == nullptr) return std::nullopt;
  std::uint64_t p = apply_sign(negative, magnitude_bits(*seg, seg->prefix, s));
  if (p == 0 || p == error_) {
    if (!seg->has_alt_prefix) return std::nullopt;
    p = apply_sign(negative, magnitude_bits(*seg, seg->alt_prefix, s));
    if (p == 0 || p == error_) return std::nullopt;
  }
  return p;
}

std::optional<Slot> TaperedLayout::valid_at_or_below(bool negative, std::optional<Slot> s) const {
  while (s && !compose(negative, *s)) s = prev(*s);
  return s;
}

std::optional<Slot> TaperedLayout::valid_above(bool negative, const Slot& s) const {
  std::optional<Slot> t = next(s);
  while (t && !compose(negative, *t)) t = next(*t);
  return t;
}

Slot TaperedLayout::min_slot(bool negative) const {
  Slot s = slot_at(segs_.front().first, 0);
  if (compose(negative, s)) return s;
  return *valid_above(negative, s);
}

Slot TaperedLayout::max_slot(bool negative) const {
  Slot s = slot_at(segs_.back().last, 0);
  s.fraction = ones(s.fraction_bits);
  return *valid_at_or_below(negative, s);
}

namespace {

struct Dyadic {
  mpz_class m;
  std::int64_t lsb = 0;
  bool sticky = false;
};

Dyadic dyadic(const UnboundedFloat& v) {
  Dyadic d;
  const RestBits& r = v.rest();
  d.m = v.mantissa();
  d.m <<= static_cast<mp_bitcnt_t>(r.length);
  d.m += r.bits;
  d.lsb = v.exponent() - static_cast<std::int64_t>(v.fraction_size()) - static_cast<std::int64_t>(r.length);
  d.sticky = r.sticky;
  return d;
}

Dyadic dyadic(const Slot& s) {
  Dyadic d;
  mpz_class one = 1;
  d.m = (one << static_cast<mp_bitcnt_t>(s.fraction_bits)) + mpz_class(static_cast<unsigned long>(s.fraction));
  d.lsb = s.exponent - s.fraction_bits;
  return d;
}

mpz_class at(const Dyadic& d, std::int64_t lsb) {
  mpz_class out = d.m;
  out <<= static_cast<mp_bitcnt_t>(d.lsb - lsb);
  return out;
}

// Sign of 2x - (lo + hi) for lo < x < hi; x's sticky tail counts as a
// positive amount below its last explicit bit.
int midpoint_side(const UnboundedFloat& x, const Slot& lo, const Slot& hi) {
  const Dyadic dx = dyadic(x), dl = dyadic(lo), dh = dyadic(hi);
  const std::int64_t floor_xh = std::min(dx.lsb + 1, dh.lsb);
  if (lo.exponent + 1 < floor_xh) {
    // lo is below every explicit bit of 2x and hi.
    const int c = cmp(at(dx, floor_xh - 1) * 2, at(dh, floor_xh - 1));
    return c > 0 ? 1 : -1;
  }
  const std::int64_t lsb = std::min({dx.lsb + 1, dl.lsb, dh.lsb});
  const int c = cmp(at(dx, lsb - 1) * 2, at(dl, lsb - 1) + at(dh, lsb - 1));
  if (c != 0) return c > 0 ? 1 : -1;
  return dx.sticky ? 1 : 0;
}

}  // namespace

int compare_with_slot(const UnboundedFloat& v, const Slot& s) {
  if (v.is_zero()) return -1;
  if (v.exponent() != s.exponent) return v.exponent() < s.exponent ? -1 : 1;
  LsbRounding r = round_at_lsb(v, s.exponent - s.fraction_bits, RoundingMode::RZ);
  mpz_class m = (mpz_class(1) << static_cast<mp_bitcnt_t>(s.fraction_bits)) + mpz_class(static_cast<unsigned long>(s.fraction));
  const int c = cmp(r.magnitude, m);
  if (c != 0) return c < 0 ? -1 : 1;
  return r.inexact ? 1 : 0;
}

FitResult TaperedLayout::fit(const UnboundedFloat& v, RoundingMode mode, TaperedPolicy policy) const {
  using O = FitResult::Outcome;
  if (v.is_zero()) return {O::zero, 0, true};
  const bool neg = v.negative();
  UnboundedFloat x = v.abs();
  bool pre_exact = true;
  if (policy == TaperedPolicy::working_then_truncate) {
    Rounded r = round_detail(x, static_cast<std::uint32_t>(width_), mode);
    x = std::move(r.value);
    pre_exact = !r.inexact;
    mode = RoundingMode::RZ;
  }
  const bool clamps = desc_.kind == Kind::posit;
  const std::int64_t e = x.exponent();

  std::optional<Slot> lo;
  bool lo_exact = false;
  if (const ExponentSegment* seg = find(e)) {
    LsbRounding r = round_at_lsb(x, e - seg->fraction_bits, RoundingMode::RZ);
    mpz_class f = r.magnitude - (mpz_class(1) << static_cast<mp_bitcnt_t>(seg->fraction_bits));
    lo = Slot{e, f.get_ui(), seg->fraction_bits};
    lo_exact = !r.inexact;
  } else if (auto fe = floor_exponent(e)) {
    lo = slot_at(*fe, 0);
    lo->fraction = ones(lo->fraction_bits);
  }
  if (lo && !compose(neg, *lo)) {
    lo_exact = false;
    lo = valid_at_or_below(neg, lo);
  }
  if (lo && lo_exact) return {O::finite, *compose(neg, *lo), pre_exact};

  std::optional<Slot> hi = lo ? valid_above(neg, *lo) : std::optional<Slot>(min_slot(neg));
  if (!lo) {
    if (clamps) return {O::finite, *compose(neg, *hi), false};
    return {O::zero, 0, false};
  }
  if (!hi) {
    if (clamps) return {O::finite, *compose(neg, *lo), false};
    return {O::error, error_, false};
  }
  Slot pick = *lo;
  if (mode == RoundingMode::RE) {
    const int side = hi->exponent >= e + 2 ? -1 : midpoint_side(x, *lo, *hi);
    if (side > 0) {
      pick = *hi;
    } else if (side == 0) {
      const std::uint64_t pl = *compose(neg, *lo), ph = *compose(neg, *hi);
      if ((pl & 1) != 0 && (ph & 1) == 0) pick = *hi;
    }
  }
  return {O::finite, *compose(neg, pick), false};
}

}  // namespace nrs
