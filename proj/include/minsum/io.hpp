#ifndef MINSUM_IO_HPP
#define MINSUM_IO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "minsum/geometry.hpp"
#include "minsum/instances.hpp"

namespace minsum {

// Point CSV: one row per point, comma separated coordinates, optional header
// line (detected by non-numeric first field).  Written with enough digits to
// round trip doubles exactly.
Dataset read_points_csv(const std::string& path);
void write_points_csv(const std::string& path, const Dataset& ds,
                      bool header = true);

// Labels: one integer per line.  k defaults to max label + 1 unless forced.
Labeling read_labels(const std::string& path, std::int32_t k = 0);
void write_labels(const std::string& path, const Labeling& lab);

// Set system: header "universe set_size count", then one set per line as
// set_size space separated 1-based elements.
SetSystem read_set_system(const std::string& path);
void write_set_system(const std::string& path, const SetSystem& sys);

// One benchmark or solve outcome, serialized as a single JSON line.
struct RunReport {
  std::string algo;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t d = 0;
  std::int32_t k = 0;
  std::optional<double> epsilon;
  std::optional<double> alpha;
  double cost = 0.0;
  std::optional<double> ratio;
  double wall_ms = 0.0;
  std::vector<std::string> flags;
};

std::string run_report_jsonl(const RunReport& r);
RunReport parse_run_report(const std::string& line);

}  // namespace minsum

#endif  // MINSUM_IO_HPP
