#include "nrs/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace nrs {

namespace {

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fixed(double v, int decimals) { return format_truncated(v, decimals); }

}  // namespace

std::string to_csv(const Table& t) {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_cell(cells[i]);
    os << '\n';
  };
  line(t.columns);
  for (const auto& r : t.rows) line(r);
  return os.str();
}

std::string to_json(const Table& t) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : t.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < t.columns.size() && i < r.size(); ++i) obj[t.columns[i]] = r[i];
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::string to_pgm(const ColorGrid& grid) {
  std::ostringstream os;
  os << "P2\n" << grid.n << ' ' << grid.n << "\n255\n";
  for (std::size_t r = 0; r < grid.n; ++r) {
    for (std::size_t c = 0; c < grid.n; ++c) {
      const double v = std::clamp(static_cast<double>(grid.at(r, c)), 0.0, 10.0);
      const int level = 255 - static_cast<int>(std::lround(v * 25.5));
      os << level << (c + 1 == grid.n ? '\n' : ' ');
    }
  }
  return os.str();
}

Table sweep_table(const std::vector<std::pair<Descriptor, SweepStats>>& rows, bool with_timing) {
  Table t;
  t.columns = {"descriptor", "op", "total", "exact_pct", "special_operand_pct", "special_pct", "avg_digits", "kops"};
  for (const auto& [d, s] : rows) {
    t.rows.push_back({d.to_string(), std::string(op_name(s.op)), std::to_string(s.total_pairs), fixed(s.exact_pct(), 3),
                      fixed(s.special_operand_pct(), 3), fixed(s.special_pct(), 3), fixed(s.avg_digits(), 3),
                      with_timing ? fixed(s.kops, 3) : std::string()});
  }
  return t;
}

Table dynamic_range_table(const std::vector<std::pair<Descriptor, DynamicRange>>& rows) {
  Table t;
  t.columns = {"descriptor", "min_abs", "max1", "max2", "max3", "dr"};
  for (const auto& [d, r] : rows) {
    t.rows.push_back({d.to_string(), format_truncated(r.min_abs), format_truncated(r.max1), format_truncated(r.max2),
                      format_truncated(r.max3), fixed(static_cast<double>(r.dr), 3)});
  }
  return t;
}

Table density_table(const Descriptor& d, const std::map<long, std::uint64_t>& hist) {
  Table t;
  t.columns = {"descriptor", "decade", "count"};
  for (const auto& [k, n] : hist) t.rows.push_back({d.to_string(), std::to_string(k), std::to_string(n)});
  return t;
}

Table cdf_table(const Descriptor& d, const UnaryCdf& cdf) {
  Table t;
  t.columns = {"descriptor", "function", "rank", "digits", "fraction"};
  const auto n = static_cast<double>(cdf.digits.size());
  for (std::size_t i = 0; i < cdf.digits.size(); ++i) {
    t.rows.push_back({d.to_string(), std::string(fun_name(cdf.fun)), std::to_string(i + 1), fixed(cdf.digits[i], 3),
                      fixed(static_cast<double>(i + 1) / n, 6)});
  }
  return t;
}

}  // namespace nrs
