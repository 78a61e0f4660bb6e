#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace charsum {

enum class CheckMode { assert_check, monitor };

// One comparison of an exactly computed left-hand side against a bound.
struct BoundCheckRecord {
  std::string tag;
  nlohmann::json params = nlohmann::json::object();
  double lhs = 0.0;
  double rhs = 0.0;
  std::optional<double> ratio;  // lhs / rhs when rhs > 0
  CheckMode mode = CheckMode::monitor;
  bool passed = true;           // meaningful for ASSERT records only
  std::optional<double> runtime_ms;

  std::string mode_name() const { return mode == CheckMode::monitor ? "MONITOR" : "ASSERT"; }
  std::string verdict() const {
    if (mode == CheckMode::monitor) return "observed-max";
    return passed ? "pass" : "fail";
  }
};

// An ASSERT record. `holds` is the exact verdict; a ratio above 1 always fails.
BoundCheckRecord assert_record(std::string tag, nlohmann::json params, double lhs, double rhs, bool holds);
// lhs <= rhs decided in floating point.
BoundCheckRecord assert_record(std::string tag, nlohmann::json params, double lhs, double rhs);
// A MONITOR record; lhs must be finite and rhs positive.
BoundCheckRecord monitor_record(std::string tag, nlohmann::json params, double lhs, double rhs);

nlohmann::json to_json(const BoundCheckRecord& r, bool with_timings = false);

enum class ReportFormat { jsonl, csv };

ReportFormat parse_format(const std::string& name);

constexpr int kReportSchemaVersion = 1;

// Serializes records. JSONL output starts with a header record carrying the
// schema version; CSV output has a fixed column header.
std::string render_report(const std::vector<BoundCheckRecord>& records, ReportFormat format,
                          const nlohmann::json& header, bool with_timings = false);

// Writes through a temporary file in the target directory and renames it into
// place, so readers never observe a partial report.
void write_file_atomically(const std::string& path, const std::string& contents);

}  // namespace charsum
