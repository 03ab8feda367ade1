#include "cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <optional>
#include <sstream>

#include "nrs/bench.hpp"
#include "nrs/formats.hpp"
#include "nrs/litbench.hpp"
#include "nrs/math_ops.hpp"
#include "nrs/report.hpp"

namespace nrs::cli {

namespace {

struct Common {
  std::string out_path;
  std::string format;  // csv | json; empty: from the extension, else csv
  bool allow_large = false;
  int threads = 0;
};

void add_common(CLI::App* sub, Common& c, bool table_output = true) {
  if (table_output) {
    sub->add_option("-o,--out", c.out_path, "Artifact path (stdout when absent)");
    sub->add_option("--format", c.format, "Artifact format")->check(CLI::IsMember({"csv", "json"}));
  }
  sub->add_flag("--allow-large", c.allow_large, "Lift the width cap");
  sub->add_option("--threads", c.threads, "Worker count (default: $NRS_THREADS or all cores)")->check(CLI::PositiveNumber);
}

std::string pattern_text(const Format& f, const Encoded& e) {
  if (!e.bits) return "-";
  return to_hex(BitPattern{f.width(), *e.bits});
}

std::string json_or_csv(const Common& c, const Table& t) {
  std::string fmt = c.format;
  if (fmt.empty()) fmt = c.out_path.size() >= 5 && c.out_path.ends_with(".json") ? "json" : "csv";
  return fmt == "json" ? to_json(t) : to_csv(t);
}

/// Writes the artifact to --out, or prints it when no path was given.
void emit(const Common& c, const Table& t, std::ostream& out) {
  const std::string body = json_or_csv(c, t);
  if (c.out_path.empty()) {
    out << body;
    return;
  }
  write_text(c.out_path, body);
}

int exhaustive_cap(const Common& c) { return c.allow_large ? kMaxWidth : kDefaultEnumerationCap; }

void apply_threads(const Common& c) {
  int n = c.threads;
  if (n == 0) {
    if (const char* env = std::getenv(kThreadsEnv)) {
      try {
        n = std::stoi(env);
      } catch (const std::exception&) {
        throw CLI::ValidationError(std::string(kThreadsEnv), "not an integer");
      }
      if (n <= 0) throw CLI::ValidationError(std::string(kThreadsEnv), "must be positive");
    }
  }
  if (n > 0) omp_set_num_threads(n);
}

std::string field_lines(const DecodedValue& v) {
  std::ostringstream os;
  const FieldView& f = v.fields;
  os << "sign            " << f.sign << '\n';
  if (f.size_field) os << "size field      " << *f.size_field << '\n';
  if (f.size_value) os << "size value      " << *f.size_value << '\n';
  if (f.exponent_sign) os << "exponent sign   " << *f.exponent_sign << '\n';
  if (f.exponent_size) os << "exponent size   " << *f.exponent_size << '\n';
  if (f.exponent_bits_stored) os << "exponent bits   " << f.exponent_bits_stored << '\n';
  if (f.biased_exponent) os << "biased exponent " << *f.biased_exponent << '\n';
  if (f.binary_exponent) os << "exponent        " << *f.binary_exponent << '\n';
  os << "fraction size   " << f.fraction_size << '\n';
  if (f.fraction_size > 0) os << "fraction        " << f.fraction << '\n';
  return os.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Number representation workbench"};
  app.require_subcommand(1);
  Common common;

  std::string desc_text, desc2_text, pattern, value_text;
  std::vector<std::string> descs;

  auto* decode_cmd = app.add_subcommand("decode", "Field breakdown and value of a bit pattern");
  decode_cmd->add_option("descriptor", desc_text)->required();
  decode_cmd->add_option("pattern", pattern, "0x... or 0b...")->required();

  auto* encode_cmd = app.add_subcommand("encode", "Round a rational or decimal literal into a format");
  encode_cmd->add_option("descriptor", desc_text)->required();
  encode_cmd->add_option("value", value_text, "e.g. 1/3, -2.5e-7")->required();

  auto* convert_cmd = app.add_subcommand("convert", "Re-encode a pattern in another format");
  convert_cmd->add_option("from", desc_text)->required();
  convert_cmd->add_option("pattern", pattern)->required();
  convert_cmd->add_option("to", desc2_text)->required();

  auto* enumerate_cmd = app.add_subcommand("enumerate", "All patterns with class and value");
  enumerate_cmd->add_option("descriptor", desc_text)->required();
  add_common(enumerate_cmd, common);

  auto* range_cmd = app.add_subcommand("dynamic-range", "Smallest and largest magnitudes, dynamic range");
  range_cmd->add_option("descriptors", descs)->required();
  add_common(range_cmd, common);

  auto* density_cmd = app.add_subcommand("density", "Distinct magnitudes per decade");
  density_cmd->add_option("descriptor", desc_text)->required();
  add_common(density_cmd, common);

  std::string lo_text = "1e-3", hi_text = "1e3";
  auto* golden_cmd = app.add_subcommand("golden-zone", "Distinct magnitudes strictly inside (lo, hi)");
  golden_cmd->add_option("descriptor", desc_text)->required();
  golden_cmd->add_option("--lo", lo_text, "Lower bound (exclusive)")->capture_default_str();
  golden_cmd->add_option("--hi", hi_text, "Upper bound (exclusive)")->capture_default_str();
  add_common(golden_cmd, common, false);

  std::string fun_text = "sqrt";
  auto* cdf_cmd = app.add_subcommand("unary-cdf", "Accuracy distribution of a unary function over all patterns");
  cdf_cmd->add_option("descriptor", desc_text)->required();
  cdf_cmd->add_option("--fun", fun_text, "inverse, sqrt, cbrt, exp, ln, sin")->capture_default_str();
  add_common(cdf_cmd, common);

  std::vector<std::string> ops = {"add"};
  std::uint64_t subsample = 0, seed = 1;
  std::string grid_path;
  bool use_reference = false;
  bool timing = false;
  auto* sweep_cmd = app.add_subcommand("binary-sweep", "Exact share and mean accuracy over operand pairs");
  sweep_cmd->add_option("descriptors", descs)->required();
  sweep_cmd->add_option("--op", ops, "add, sub, mul, div (repeatable)")->capture_default_str();
  sweep_cmd->add_option("--subsample", subsample, "Random pairs instead of all pairs");
  sweep_cmd->add_option("--seed", seed)->capture_default_str();
  sweep_cmd->add_option("--grid", grid_path, "PGM color map (single descriptor and op)");
  sweep_cmd->add_flag("--reference", use_reference, "Use the serial rational reference kernel");
  sweep_cmd->add_flag("--timing", timing, "Fill the kops column (makes the artifact run-dependent)");
  add_common(sweep_cmd, common);

  int table_no = 4;
  bool no_oracle = false;
  long rump_x = kRumpX;
  auto* lit_cmd = app.add_subcommand("litbench", "Literature benchmark tables");
  lit_cmd->add_option("--table", table_no)->check(CLI::IsMember({4, 5}))->capture_default_str();
  lit_cmd->add_option("--rump-x", rump_x, "x input of the Rump polynomial")->capture_default_str();
  lit_cmd->add_flag("--no-oracle", no_oracle, "Omit the exact rational row");
  add_common(lit_cmd, common);

  double seconds = 0.5;
  std::string engine_text = "reference";
  std::string op_text = "add";
  auto* tp_cmd = app.add_subcommand("throughput", "Operations per second on random finite operands");
  tp_cmd->add_option("descriptor", desc_text)->required();
  tp_cmd->add_option("--op", op_text)->capture_default_str();
  tp_cmd->add_option("--seconds", seconds)->check(CLI::PositiveNumber)->capture_default_str();
  tp_cmd->add_option("--engine", engine_text)->check(CLI::IsMember({"reference", "fast"}))->capture_default_str();
  tp_cmd->add_option("--seed", seed)->capture_default_str();

  std::vector<const char*> argv = {"nrs_cli"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    apply_threads(common);

    if (*decode_cmd) {
      const Format f(parse_descriptor(desc_text));
      const BitPattern p = parse_pattern(pattern, f.width());
      const DecodedValue v = f.decode(p.bits);
      out << "descriptor      " << f.descriptor().to_string() << '\n';
      out << "pattern         " << to_hex(p) << '\n';
      out << "class           " << class_name(v.cls) << '\n';
      out << field_lines(v);
      if (v.cls == ValueClass::Finite || v.cls == ValueClass::Zero) out << "exact           " << to_string(v.value()) << '\n';
      out << value_string(v) << '\n';
    } else if (*encode_cmd) {
      const Format f(parse_descriptor(desc_text));
      const Rational x = parse_rational(value_text);
      const Encoded e = f.encode(x);
      const DecodedValue back = f.decode(e.bits.value_or(0));
      out << pattern_text(f, e) << ' ' << class_name(e.cls) << ' ' << (e.exact ? "exact" : "rounded") << ' '
          << (e.bits ? value_string(back) : std::string(class_name(e.cls))) << '\n';
    } else if (*convert_cmd) {
      const Format from(parse_descriptor(desc_text));
      const Format to(parse_descriptor(desc2_text));
      const DecodedValue v = from.decode(parse_pattern(pattern, from.width()).bits);
      const Encoded e = v.cls == ValueClass::Finite || v.cls == ValueClass::Zero ? to.encode(v.value())
                                                                                  : to.special(v.cls, v.negative);
      out << pattern_text(to, e) << ' ' << class_name(e.cls) << ' ' << (e.exact ? "exact" : "rounded") << '\n';
    } else if (*enumerate_cmd) {
      const Format f(parse_descriptor(desc_text));
      Table t;
      t.columns = {"pattern", "class", "exact", "value"};
      enumerate(
          f,
          [&](std::uint64_t bits, const DecodedValue& v) {
            const bool has_value = v.cls == ValueClass::Finite || v.cls == ValueClass::Zero;
            t.rows.push_back({to_hex(BitPattern{f.width(), bits}), std::string(class_name(v.cls)),
                              has_value ? to_string(v.value()) : "", value_string(v)});
          },
          exhaustive_cap(common));
      emit(common, t, out);
      out << "enumerate " << f.descriptor().to_string() << ": " << t.rows.size() << " patterns\n";
    } else if (*range_cmd) {
      std::vector<std::pair<Descriptor, DynamicRange>> rows;
      for (const auto& s : descs) {
        const Format f(parse_descriptor(s));
        rows.emplace_back(f.descriptor(), dynamic_range(f, exhaustive_cap(common)));
      }
      emit(common, dynamic_range_table(rows), out);
      out << "dynamic-range: " << rows.size() << " formats\n";
    } else if (*density_cmd) {
      const Format f(parse_descriptor(desc_text));
      const auto hist = density_histogram(f, exhaustive_cap(common));
      emit(common, density_table(f.descriptor(), hist), out);
      out << "density " << f.descriptor().to_string() << ": " << hist.size() << " decades\n";
    } else if (*golden_cmd) {
      const Format f(parse_descriptor(desc_text));
      const std::uint64_t n =
          golden_zone_count(f, parse_rational(lo_text), parse_rational(hi_text), exhaustive_cap(common));
      out << "golden-zone " << f.descriptor().to_string() << " (" << lo_text << ", " << hi_text << "): " << n << '\n';
    } else if (*cdf_cmd) {
      const Format f(parse_descriptor(desc_text));
      const UnaryCdf cdf = unary_sweep(f, parse_fun(fun_text), exhaustive_cap(common));
      emit(common, cdf_table(f.descriptor(), cdf), out);
      out << "unary-cdf " << f.descriptor().to_string() << ' ' << fun_name(cdf.fun) << ": " << cdf.digits.size()
          << " results, " << cdf.exact << " exact\n";
    } else if (*sweep_cmd) {
      if (!grid_path.empty() && (descs.size() != 1 || ops.size() != 1))
        throw CLI::ValidationError("--grid", "needs exactly one descriptor and one --op");
      SweepOptions opt;
      opt.allow_large = common.allow_large;
      opt.subsample = subsample;
      opt.seed = seed;
      opt.want_grid = !grid_path.empty();
      std::vector<std::pair<Descriptor, SweepStats>> rows;
      std::optional<ColorGrid> grid;
      const auto start = std::chrono::steady_clock::now();
      for (const auto& s : descs) {
        const Format f(parse_descriptor(s));
        for (const auto& o : ops) {
          SweepResult r = use_reference ? binary_sweep_reference(f, parse_op(o), opt) : binary_sweep(f, parse_op(o), opt);
          rows.emplace_back(f.descriptor(), r.stats);
          if (r.grid) grid = std::move(r.grid);
        }
      }
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      emit(common, sweep_table(rows, timing), out);
      if (grid) write_text(grid_path, to_pgm(*grid));
      out << "binary-sweep: " << rows.size() << " sweeps in " << format_truncated(secs) << " s\n";
    } else if (*lit_cmd) {
      const Table t = table_no == 4 ? table4(table4_descriptors(), !no_oracle, LitbenchOptions{rump_x})
                                    : table5(table5_descriptors());
      emit(common, t, out);
      out << "litbench table " << table_no << ": " << t.rows.size() << " rows\n";
    } else if (*tp_cmd) {
      const Format f(parse_descriptor(desc_text));
      const double kops =
          throughput(f, parse_op(op_text), seconds, engine_text == "fast" ? Engine::fast : Engine::reference, seed);
      out << "throughput " << f.descriptor().to_string() << ' ' << op_text << " (" << engine_text
          << "): " << format_truncated(kops) << " Kops\n";
    }
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const WidthCapExceeded& e) {
    err << "refused: " << e.what() << " (use --allow-large)\n";
    return kExitRefused;
  } catch (const WorkloadRefused& e) {
    err << "refused: " << e.what() << " (use --allow-large or --subsample)\n";
    return kExitRefused;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitRefused;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UndefinedOperation& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace nrs::cli
