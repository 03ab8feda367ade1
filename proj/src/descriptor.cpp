#include "nrs/descriptor.hpp"

#include <array>
#include <charconv>
#include <vector>

namespace nrs {

namespace {

struct KindInfo {
  Kind kind;
  std::string_view name;
  int arity;
  std::string_view label;
};

constexpr std::array<KindInfo, 9> kKinds{{
    {Kind::fixedp, "fixedp", 2, "FixedP"},
    {Kind::floatp, "floatp", 2, "FloatP"},
    {Kind::ieee754, "ieee754", 2, "IEEE754"},
    {Kind::posit, "posit", 2, "Posit"},
    {Kind::morris, "morris", 2, "Morris"},
    {Kind::morrisheb, "morrisheb", 2, "MorrisHEB"},
    {Kind::morrisbias, "morrisbias", 2, "MorrisBias"},
    {Kind::morrisunary, "morrisunary", 1, "MorrisUnary"},
    {Kind::rational, "rational", 0, "RationalNumber"},
}};

const KindInfo& info(Kind k) {
  for (const auto& i : kKinds)
    if (i.kind == k) return i;
  throw std::logic_error("unknown kind");
}

std::vector<std::string_view> split(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(':', start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

int parse_count(std::string_view tok) {
  int v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size() || tok.empty())
    throw DescriptorError("bad parameter '" + std::string(tok) + "'");
  return v;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw DescriptorError(what);
}

}  // namespace

std::string_view kind_name(Kind k) { return info(k).name; }

std::string_view rounding_name(RoundingMode m) { return m == RoundingMode::RE ? "RE" : "RZ"; }

int Descriptor::width() const {
  switch (kind) {
    case Kind::fixedp: return p1 + p2;
    case Kind::floatp:
    case Kind::ieee754: return 1 + p1 + p2;
    case Kind::posit:
    case Kind::morris:
    case Kind::morrisheb:
    case Kind::morrisbias:
    case Kind::morrisunary: return p1;
    case Kind::rational: return 0;
  }
  return 0;
}

bool Descriptor::is_tapered() const {
  return kind == Kind::posit || kind == Kind::morris || kind == Kind::morrisheb || kind == Kind::morrisbias ||
         kind == Kind::morrisunary;
}

std::string Descriptor::to_string() const {
  const KindInfo& i = info(kind);
  std::string s(i.name);
  if (kind == Kind::rational) return s;
  s += ":" + std::to_string(p1);
  if (i.arity == 2) s += ":" + std::to_string(p2);
  s += ":";
  s += rounding_name(rounding);
  return s;
}

std::string Descriptor::label() const {
  const KindInfo& i = info(kind);
  std::string s(i.label);
  if (kind == Kind::rational) return s;
  s += "(" + std::to_string(p1);
  if (i.arity == 2) s += "," + std::to_string(p2);
  s += ",";
  s += rounding_name(rounding);
  s += ")";
  return s;
}

Descriptor parse_descriptor(std::string_view text) {
  auto toks = split(text);
  const KindInfo* ki = nullptr;
  for (const auto& i : kKinds)
    if (i.name == toks[0]) ki = &i;
  if (ki == nullptr) throw DescriptorError("unknown kind '" + std::string(toks[0]) + "'");
  Descriptor d;
  d.kind = ki->kind;
  if (d.kind == Kind::rational) {
    // "rational" or "rational:RE"/"rational:RZ" (rounding is meaningless).
    if (toks.size() > 2) throw DescriptorError("unexpected token '" + std::string(toks[2]) + "'");
    return d;
  }
  const std::size_t expected = 1 + static_cast<std::size_t>(ki->arity) + 1;
  if (toks.size() != expected) {
    const std::string last(toks.back());
    if (toks.size() < expected)
      throw DescriptorError("'" + std::string(text) + "': " + std::string(ki->name) + " needs " +
                            std::to_string(ki->arity) + " size parameter(s) and a rounding mode");
    throw DescriptorError("unexpected token '" + last + "'");
  }
  d.p1 = parse_count(toks[1]);
  if (ki->arity == 2) d.p2 = parse_count(toks[2]);
  std::string_view r = toks.back();
  if (r == "RE")
    d.rounding = RoundingMode::RE;
  else if (r == "RZ")
    d.rounding = RoundingMode::RZ;
  else
    throw DescriptorError("unknown rounding '" + std::string(r) + "'");

  const int w = d.width();
  require(w >= 2 && w <= kMaxWidth, "width " + std::to_string(w) + " outside [2, " + std::to_string(kMaxWidth) + "]");
  switch (d.kind) {
    case Kind::fixedp:
      require(d.p1 >= 1 && d.p2 >= 0, "fixedp needs is >= 1 and fs >= 0");
      break;
    case Kind::floatp:
    case Kind::ieee754:
      require(d.p1 >= 2 && d.p2 >= 1, "exponent size must be >= 2 and fraction size >= 1");
      break;
    case Kind::posit:
      require(d.p1 >= 3 && d.p2 >= 0 && d.p2 <= 8, "posit needs size >= 3 and 0 <= es <= 8");
      break;
    case Kind::morris:
    case Kind::morrisheb:
      require(d.p2 >= 1 && d.p2 <= 5 && d.p1 >= d.p2 + 3, "morris needs 1 <= g <= 5 and size >= g + 3");
      break;
    case Kind::morrisbias:
      require(d.p2 >= 1 && d.p2 <= 6 && d.p1 >= d.p2 + 2, "morrisbias needs 1 <= g <= 6 and size >= g + 2");
      break;
    case Kind::morrisunary:
      require(d.p1 >= 3, "morrisunary needs size >= 3");
      break;
    case Kind::rational:
      break;
  }
  return d;
}

}  // namespace nrs
