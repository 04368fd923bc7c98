#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace skeweig::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kIo = 2,
  kNumerical = 3,
  kNotDefinite = 4,
};

struct RunConfig {
  std::string command;
  std::string flavor;
  std::int64_t nb = 0;
  std::int64_t n = 0;
  double fraction = 0.0;
  int workers = 0;
  std::optional<std::uint64_t> seed;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct RunTimes {
  double full_to_band = 0.0;
  double band_to_tridiag = 0.0;
  double tridiagonalize = 0.0;
  double tridiag_solve = 0.0;
  double back_transform = 0.0;
  double total = 0.0;

  friend bool operator==(const RunTimes&, const RunTimes&) = default;
};

struct RunMetrics {
  double max_residual = 0.0;
  double relative_residual = 0.0;
  std::optional<double> unitarity;
  std::optional<double> pairing;
  std::optional<double> oracle_gap;

  friend bool operator==(const RunMetrics&, const RunMetrics&) = default;
};

/// Machine-readable summary of one solve.
struct RunReport {
  RunConfig config;
  RunTimes times;
  RunMetrics metrics;

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

std::string report_to_json(const RunReport& r);
/// Throws skeweig::FormatError on malformed input.
RunReport report_from_json(const std::string& text);

/// Column names of the benchmark CSV, in order.
const std::vector<std::string>& bench_csv_header();

/// Entry point of the `skeweig` tool; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace skeweig::cli
