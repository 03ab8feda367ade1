#include "nrs/exact.hpp"

#include <cctype>
#include <cmath>
#include <string>

namespace nrs {

Natural::Natural(mpz_class v) : v_(std::move(v)) {
  if (sgn(v_) < 0) throw std::invalid_argument("Natural: negative value");
}

std::size_t Natural::bit_length() const {
  return sgn(v_) == 0 ? 0 : mpz_sizeinbase(v_.get_mpz_t(), 2);
}

Natural operator-(const Natural& a, const Natural& b) {
  if (b.v_ > a.v_) throw UndefinedOperation("natural subtraction below zero");
  return Natural(mpz_class(a.v_ - b.v_));
}

Integer::Integer(bool negative, const Natural& magnitude) : v_(magnitude.raw()) {
  if (negative) v_ = -v_;
}

EuclidResult euclid_divmod(const Integer& a, const Integer& b) {
  if (sgn(b.raw()) == 0) throw UndefinedOperation("integer division by zero");
  mpz_class q, r;
  // fdiv on |b| then fix the sign of the quotient gives the euclidean pair.
  mpz_class ab = abs(b.raw());
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.raw().get_mpz_t(), ab.get_mpz_t());
  if (sgn(b.raw()) < 0) q = -q;
  return {Integer(q), Natural(r)};
}

Rational::Rational(const Integer& num, const Natural& den) {
  if (den.is_zero()) throw UndefinedOperation("rational with zero denominator");
  q_.get_num() = num.raw();
  q_.get_den() = den.raw();
  q_.canonicalize();
}

Rational::Rational(mpq_class q) : q_(std::move(q)) {
  if (sgn(q_.get_den()) == 0) throw UndefinedOperation("rational with zero denominator");
  q_.canonicalize();
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw UndefinedOperation("division by zero");
  return Rational(mpq_class(a.q_ / b.q_));
}

Rational Rational::scaled_by_pow2(long e) const {
  mpq_class r;
  if (e >= 0)
    mpq_mul_2exp(r.get_mpq_t(), q_.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  else
    mpq_div_2exp(r.get_mpq_t(), q_.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  return Rational(std::move(r));
}

Rational rat_arith(RatOp op, const Rational& a, const Rational& b) {
  switch (op) {
    case RatOp::add: return a + b;
    case RatOp::sub: return a - b;
    case RatOp::mul: return a * b;
    case RatOp::div: return a / b;
  }
  throw std::invalid_argument("rat_arith: bad op");
}

Rational rat_pow(const Rational& a, long n) {
  if (n == 0) {
    if (a.is_zero()) throw UndefinedOperation("0^0");
    return Rational(1);
  }
  if (a.is_zero()) {
    if (n < 0) throw UndefinedOperation("0 raised to a negative power");
    return Rational(0);
  }
  unsigned long m = n < 0 ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), a.numerator().get_mpz_t(), m);
  mpz_pow_ui(den.get_mpz_t(), a.denominator().get_mpz_t(), m);
  mpq_class r;
  if (n > 0) {
    r.get_num() = num;
    r.get_den() = den;
  } else {
    r.get_num() = den;
    r.get_den() = num;
  }
  return Rational(std::move(r));
}

namespace {

mpz_class factorial(unsigned long n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

}  // namespace

Rational series_term(SeriesFunction fun, const Rational& x, unsigned k) {
  switch (fun) {
    case SeriesFunction::exp:
      return rat_pow(x, k) / Rational(factorial(k));
    case SeriesFunction::sin: {
      Rational t = x.is_zero() ? Rational(0) : rat_pow(x, 2L * k + 1) / Rational(factorial(2UL * k + 1));
      return (k % 2 == 0) ? t : -t;
    }
    case SeriesFunction::ln: {
      if (x.sign() <= 0) throw UndefinedOperation("ln of a nonpositive value");
      Rational z = (x - Rational(1)) / (x + Rational(1));
      if (z.is_zero()) return Rational(0);
      return Rational(2) * rat_pow(z, 2L * k + 1) / Rational(2L * k + 1);
    }
  }
  throw std::invalid_argument("series_term: bad function");
}

Rational taylor_eval(SeriesFunction fun, const Rational& x, unsigned iterations) {
  if (fun == SeriesFunction::ln && x.sign() <= 0) throw UndefinedOperation("ln of a nonpositive value");
  // Incremental term updates keep this quadratic rather than cubic in the
  // iteration count.
  mpq_class sum = 0;
  if (iterations == 0) return Rational(0);
  switch (fun) {
    case SeriesFunction::exp: {
      mpq_class term = 1;
      for (unsigned k = 0; k < iterations; ++k) {
        if (k > 0) {
          term *= x.raw();
          term /= k;
        }
        sum += term;
      }
      break;
    }
    case SeriesFunction::sin: {
      mpq_class term = x.raw();
      mpq_class x2 = x.raw() * x.raw();
      for (unsigned k = 0; k < iterations; ++k) {
        if (k > 0) {
          term *= x2;
          term /= static_cast<unsigned long>((2 * k) * (2 * k + 1));
          term = -term;
        }
        sum += term;
      }
      break;
    }
    case SeriesFunction::ln: {
      mpq_class z = (x.raw() - 1) / (x.raw() + 1);
      mpq_class z2 = z * z;
      mpq_class power = z;
      for (unsigned k = 0; k < iterations; ++k) {
        if (k > 0) power *= z2;
        sum += power / static_cast<unsigned long>(2 * k + 1);
      }
      sum *= 2;
      break;
    }
  }
  sum.canonicalize();
  return Rational(std::move(sum));
}

long floor_log2(const Rational& q) {
  if (q.is_zero()) throw UndefinedOperation("log of zero");
  mpz_class n = abs(q.numerator());
  const mpz_class& d = q.denominator();
  long e = static_cast<long>(mpz_sizeinbase(n.get_mpz_t(), 2)) - static_cast<long>(mpz_sizeinbase(d.get_mpz_t(), 2));
  // 2^e <= |q| < 2^(e+2) at this point; settle which.
  mpq_class a(n, d);
  mpq_class p = 1;
  if (e >= 0)
    mpq_mul_2exp(p.get_mpq_t(), p.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  else
    mpq_div_2exp(p.get_mpq_t(), p.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  if (a < p) return e - 1;
  mpq_mul_2exp(p.get_mpq_t(), p.get_mpq_t(), 1);
  if (a >= p) return e + 1;
  return e;
}

Rational round_to_significant_bits(const Rational& q, unsigned bits) {
  if (q.is_zero()) return q;
  long e = floor_log2(q);
  long shift = static_cast<long>(bits) - 1 - e;
  Rational scaled = q.abs().scaled_by_pow2(shift);
  mpz_class n = scaled.numerator();
  mpz_class twice = 2 * n + scaled.denominator();
  mpz_class den2 = 2 * scaled.denominator();
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), twice.get_mpz_t(), den2.get_mpz_t());
  Rational out = Rational(r).scaled_by_pow2(-shift);
  return q.sign() < 0 ? -out : out;
}

Rational rat_root_approx(const Rational& a, unsigned n, unsigned precision_bits) {
  if (n == 0) throw std::invalid_argument("root degree must be >= 1");
  if (precision_bits < 1) throw std::invalid_argument("precision_bits must be >= 1");
  if (a.sign() < 0) {
    if (n % 2 == 0) throw UndefinedOperation("even root of a negative value");
    return -rat_root_approx(-a, n, precision_bits);
  }
  if (a.is_zero() || n == 1 || a == Rational(1)) return a;

  const long ea = floor_log2(a);
  const long er = ea >= 0 ? ea / static_cast<long>(n) : -((-ea + static_cast<long>(n) - 1) / static_cast<long>(n));
  const unsigned work = precision_bits + 16;
  // Start above the root so Newton descends monotonically: 2^(er+1) > root.
  Rational r = Rational(1).scaled_by_pow2(er + 1);
  const Rational nn(static_cast<long>(n));
  const Rational n1(static_cast<long>(n) - 1);
  const Rational tol = Rational(1).scaled_by_pow2(-static_cast<long>(precision_bits) - 8 + std::max(0L, er));
  for (int iter = 0; iter < 10000; ++iter) {
    Rational next = (n1 * r + a / rat_pow(r, static_cast<long>(n) - 1)) / nn;
    next = round_to_significant_bits(next, work);
    Rational step = (r - next).abs();
    r = next;
    if (step < tol) break;
  }
  return r;
}

long double log10_abs(const Rational& q) {
  if (q.is_zero()) throw UndefinedOperation("log of zero");
  auto log2_of = [](const mpz_class& z) -> long double {
    mpz_class m = abs(z);
    long bits = static_cast<long>(mpz_sizeinbase(m.get_mpz_t(), 2));
    if (bits <= 1000) return std::log2(static_cast<long double>(m.get_d()));
    long shift = bits - 64;
    mpz_class top = m >> static_cast<mp_bitcnt_t>(shift);
    return std::log2(static_cast<long double>(top.get_d())) + static_cast<long double>(shift);
  };
  long double l2 = log2_of(q.numerator()) - log2_of(q.denominator());
  // For magnitudes near 1 the difference above loses digits; use the ratio.
  if (std::fabs(static_cast<double>(l2)) < 4) {
    return std::log10(static_cast<long double>(mpq_get_d(q.abs().raw().get_mpq_t())));
  }
  return l2 * 0.301029995663981195213738894724493027L;
}

Rational parse_rational(std::string_view text) {
  auto bad = [&]() { return std::invalid_argument("malformed rational literal '" + std::string(text) + "'"); };
  std::size_t i = 0;
  bool neg = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    neg = text[i] == '-';
    ++i;
  }
  auto digits = [&](std::string& out) {
    std::size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) out.push_back(text[i++]);
    return i > start;
  };
  std::string intpart, fracpart, exppart, denpart;
  bool have_int = digits(intpart);
  if (i < text.size() && text[i] == '/') {
    ++i;
    if (!have_int || !digits(denpart) || i != text.size()) throw bad();
    mpz_class num(intpart, 10), den(denpart, 10);
    if (den == 0) throw UndefinedOperation("rational literal with zero denominator");
    mpq_class q(num, den);
    q.canonicalize();
    return Rational(neg ? mpq_class(-q) : q);
  }
  bool have_frac = false;
  if (i < text.size() && text[i] == '.') {
    ++i;
    have_frac = digits(fracpart);
  }
  if (!have_int && !have_frac) throw bad();
  long exp10 = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool eneg = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      eneg = text[i] == '-';
      ++i;
    }
    if (!digits(exppart)) throw bad();
    if (exppart.size() > 9) throw bad();
    exp10 = std::stol(exppart);
    if (eneg) exp10 = -exp10;
  }
  if (i != text.size()) throw bad();
  mpz_class mant(intpart.empty() && fracpart.empty() ? std::string("0") : intpart + fracpart, 10);
  exp10 -= static_cast<long>(fracpart.size());
  mpz_class p10;
  mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  mpq_class q = exp10 >= 0 ? mpq_class(mant * p10) : mpq_class(mant, p10);
  q.canonicalize();
  return Rational(neg ? mpq_class(-q) : q);
}

std::string to_string(const Rational& q) {
  if (q.is_integer()) return q.numerator().get_str();
  return q.numerator().get_str() + "/" + q.denominator().get_str();
}

namespace {

mpz_class pow10(long e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e));
  return p;
}

// |q| * 10^shift truncated toward zero.
mpz_class scaled_trunc(const Rational& a, long shift) {
  mpz_class num = a.numerator();
  mpz_class den = a.denominator();
  if (shift >= 0)
    num *= pow10(shift);
  else
    den *= pow10(-shift);
  mpz_class r;
  mpz_tdiv_q(r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return r;
}

std::string strip_zeros(std::string s) {
  if (s.find('.') == std::string::npos) return s;
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

}  // namespace

std::string format_truncated(const Rational& q, int decimals) {
  if (q.is_zero()) return "0";
  Rational a = q.abs();
  std::string sign = q.sign() < 0 ? "-" : "";
  static const Rational lo = parse_rational("1e-3");
  static const Rational hi = parse_rational("1e7");
  if (a >= lo && a < hi) {
    mpz_class t = scaled_trunc(a, decimals);
    std::string digits = t.get_str();
    if (static_cast<int>(digits.size()) <= decimals) digits.insert(0, static_cast<std::size_t>(decimals) + 1 - digits.size(), '0');
    std::string s = digits.substr(0, digits.size() - static_cast<std::size_t>(decimals));
    if (decimals > 0) s += "." + digits.substr(digits.size() - static_cast<std::size_t>(decimals));
    s = strip_zeros(s);
    if (s == "0") return "0";
    return sign + s;
  }
  // Exact decimal exponent: 10^e <= a < 10^(e+1).
  long e = static_cast<long>(std::floor(log10_abs(a)));
  auto p10 = [](long k) { return k >= 0 ? Rational(pow10(k)) : Rational(1) / Rational(pow10(-k)); };
  while (a < p10(e)) --e;
  while (a >= p10(e + 1)) ++e;
  mpz_class t = scaled_trunc(a, decimals - e);
  std::string digits = t.get_str();
  std::string mant = digits.substr(0, 1);
  if (decimals > 0) mant += "." + digits.substr(1);
  return sign + mant + "e" + std::to_string(e);
}

std::string format_truncated(double v, int decimals) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_truncated(Rational(mpq_class(v)), decimals);
}

}  // namespace nrs
