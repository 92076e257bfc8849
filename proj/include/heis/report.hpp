#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "heis/inequality.hpp"
#include "heis/stats.hpp"

namespace heis {

enum class RecordKind {
  Check,       // counts toward the verdict and the exit code
  Diagnostic,  // reported only
};

/// One row of a report: a named comparison lhs vs rhs with its standard error.
struct Record {
  std::string suite;
  std::string name;
  RecordKind kind = RecordKind::Check;
  double lhs = 0.0;
  double rhs = 0.0;
  double std_error = 0.0;
  bool pass = false;
  std::uint64_t seed = 0;
  std::string note;

  bool operator==(const Record&) const = default;
};

Record record_from(const std::string& suite, const Check& c, std::uint64_t seed,
                   RecordKind kind = RecordKind::Check, std::string note = {});
Record record_from(const std::string& suite, const InequalityReport& r, std::string name = {});

enum class ReportFormat { Json, Csv };
ReportFormat parse_format(const std::string& text);

/// Everything that determines the numbers in a report. The worker count is
/// deliberately absent: it must not change any result.
struct RunConfig {
  std::size_t n = 1;
  std::size_t paths = 100000;
  std::size_t steps = 4096;
  double horizon = 1.0;
  std::uint64_t seed = 7;
  std::vector<std::string> suites{"all"};
  double tolerance_scale = 1.0;
  std::size_t representation_paths = 10000;
  std::size_t representation_steps = 2048;
  std::size_t girsanov_paths = 100000;
  std::size_t girsanov_steps = 4096;

  /// UsageError on non-positive sizes, bad horizon, unknown suites.
  void validate() const;
  Tolerance tolerance() const { return Tolerance{}.scaled(tolerance_scale); }

  bool operator==(const RunConfig&) const = default;
};

/// Applies the keys of a JSON object to cfg; unknown keys are a UsageError.
void apply_config_file(RunConfig& cfg, const std::string& file);

struct Summary {
  std::size_t checks = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t diagnostics = 0;
  bool pass() const { return failed == 0; }
};

Summary summarize(const std::vector<Record>& records);

struct Report {
  RunConfig config;
  std::vector<Record> records;
  std::string timestamp;  // excluded from comparisons
};

/// JSON with a fixed key order and %.17g numbers; non-finite numbers are the
/// strings "inf", "-inf", "nan". The timestamp sits alone on one line.
std::string to_json(const Report& report);
std::string to_csv(const Report& report);

/// Removes the timestamp line from to_json output.
std::string strip_timestamp(const std::string& json);

/// Parses to_json output back into a report (records and config).
Report parse_json_report(const std::string& text);

/// Writes the report; the file name is report.json or report.csv inside dir.
/// IoError if the directory cannot be created or the file written.
std::string emit_report(const Report& report, ReportFormat format, const std::string& dir);

std::string utc_timestamp();

}  // namespace heis
