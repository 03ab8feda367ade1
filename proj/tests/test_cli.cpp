#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = nrs::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("nrs_cli_test_" + name);
}

}  // namespace

TEST_CASE("decode prints fields and the value") {
  const Run r = run({"decode", "posit:16:2:RE", "0x0001"});
  CHECK(r.code == nrs::cli::kExitOk);
  CHECK(r.out.find("1.387e-17") != std::string::npos);
  CHECK(r.out.find("Finite") != std::string::npos);
}

TEST_CASE("golden zone count") {
  const Run r = run({"golden-zone", "morrisunary:16:RE"});
  CHECK(r.code == nrs::cli::kExitOk);
  CHECK(r.out.find(": 30201") != std::string::npos);
}

TEST_CASE("usage errors exit with 1") {
  CHECK(run({"decode", "posit:16:2:RE", "0x10000"}).code == nrs::cli::kExitUsage);
  CHECK(run({"decode", "posit:16:RE", "0x1"}).code == nrs::cli::kExitUsage);
  CHECK(run({"encode", "posit:16:2:RE", "1/0"}).code == nrs::cli::kExitUsage);
  CHECK(run({"frobnicate"}).code == nrs::cli::kExitUsage);
  const Run bad = run({"binary-sweep", "posit:8:1:RE", "--op", "pow"});
  CHECK(bad.code == nrs::cli::kExitUsage);
  CHECK_FALSE(bad.err.empty());
}

TEST_CASE("refused workloads and unwritable outputs exit with 2") {
  CHECK(run({"enumerate", "posit:20:2:RE"}).code == nrs::cli::kExitRefused);
  CHECK(run({"binary-sweep", "posit:16:2:RE"}).code == nrs::cli::kExitRefused);
  const Run io = run({"density", "posit:8:1:RE", "-o", "/nonexistent-dir/x.csv"});
  CHECK(io.code == nrs::cli::kExitRefused);
  CHECK(io.err.find("/nonexistent-dir/x.csv") != std::string::npos);
}

TEST_CASE("help exits cleanly") { CHECK(run({"--help"}).code == nrs::cli::kExitOk); }

TEST_CASE("conversion") {
  const Run same = run({"convert", "posit:16:2:RE", "0x4000", "posit:16:2:RE"});
  CHECK(same.code == 0);
  CHECK(same.out.rfind("0x4000 Finite exact", 0) == 0);
  const Run inf = run({"convert", "posit:16:2:RE", "0x7fff", "ieee754:5:10:RE"});
  CHECK(inf.code == 0);
  CHECK(inf.out.find("Inf") != std::string::npos);
  CHECK(run({"encode", "ieee754:5:10:RE", "1/3"}).out.find("rounded") != std::string::npos);
}

TEST_CASE("repeated runs write identical artifacts") {
  const auto a = temp_file("a.csv"), b = temp_file("b.csv");
  const auto ja = temp_file("a.json"), jb = temp_file("b.json");
  REQUIRE(run({"binary-sweep", "posit:8:1:RE", "morrisunary:8:RE", "--op", "add", "--op", "div", "-o", a.string()}).code == 0);
  REQUIRE(run({"binary-sweep", "posit:8:1:RE", "morrisunary:8:RE", "--op", "add", "--op", "div", "-o", b.string(),
               "--threads", "2"})
              .code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).rfind("descriptor,op,total", 0) == 0);
  REQUIRE(run({"dynamic-range", "posit:8:1:RE", "ieee754:3:4:RE", "-o", ja.string()}).code == 0);
  REQUIRE(run({"dynamic-range", "posit:8:1:RE", "ieee754:3:4:RE", "-o", jb.string()}).code == 0);
  CHECK(slurp(ja) == slurp(jb));
  CHECK(slurp(ja).front() == '[');
  const auto g = temp_file("grid.pgm");
  REQUIRE(run({"binary-sweep", "posit:8:1:RE", "--op", "mul", "--grid", g.string(), "-o", a.string()}).code == 0);
  CHECK(slurp(g).rfind("P2\n256 256\n", 0) == 0);
  for (const auto& p : {a, b, ja, jb, g}) std::filesystem::remove(p);
}

TEST_CASE("enumerate lists every pattern") {
  const Run r = run({"enumerate", "posit:4:0:RE"});
  CHECK(r.code == 0);
  CHECK(r.out.find("0xf") != std::string::npos);
  CHECK(r.out.find("16 patterns") != std::string::npos);
}

TEST_CASE("litbench and throughput verbs") {
  const Run t5 = run({"litbench", "--table", "5"});
  CHECK(t5.code == 0);
  CHECK(t5.out.find("8.727") != std::string::npos);
  const Run tp = run({"throughput", "posit:12:2:RE", "--seconds", "0.05", "--engine", "fast"});
  CHECK(tp.code == 0);
}
