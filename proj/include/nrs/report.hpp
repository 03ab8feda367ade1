// Artifact writers: CSV and JSON tables, PGM color maps.
#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "nrs/bench.hpp"

namespace nrs {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rows of already formatted cells.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

std::string to_csv(const Table& t);
/// Array of objects keyed by column name.
std::string to_json(const Table& t);

/// Writes `content` to `path`; throws IoError naming the path on failure.
void write_text(const std::string& path, const std::string& content);

/// Grayscale P2 image: 0 digits white, 10 or more black, 256 levels.
std::string to_pgm(const ColorGrid& grid);

/// The kops cell stays empty unless `with_timing`, so that repeated runs give
/// identical artifacts.
Table sweep_table(const std::vector<std::pair<Descriptor, SweepStats>>& rows, bool with_timing = false);
Table dynamic_range_table(const std::vector<std::pair<Descriptor, DynamicRange>>& rows);
Table density_table(const Descriptor& d, const std::map<long, std::uint64_t>& hist);
/// One row per result: rank, digits, cumulative fraction.
Table cdf_table(const Descriptor& d, const UnaryCdf& cdf);

}  // namespace nrs
