#include "records.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace charsum {
namespace {

std::optional<double> ratio_of(double lhs, double rhs) {
  if (rhs > 0.0 && std::isfinite(rhs)) return lhs / rhs;
  return std::nullopt;
}

// JSON number formatting (shortest round trip); non-finite becomes null.
std::string number(double v) { return nlohmann::json(v).dump(); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

BoundCheckRecord assert_record(std::string tag, nlohmann::json params, double lhs, double rhs, bool holds) {
  BoundCheckRecord r;
  r.tag = std::move(tag);
  r.params = std::move(params);
  r.lhs = lhs;
  r.rhs = rhs;
  r.ratio = ratio_of(lhs, rhs);
  r.mode = CheckMode::assert_check;
  r.passed = holds && std::isfinite(lhs) && !(r.ratio && *r.ratio > 1.0);
  return r;
}

BoundCheckRecord assert_record(std::string tag, nlohmann::json params, double lhs, double rhs) {
  return assert_record(std::move(tag), std::move(params), lhs, rhs, lhs <= rhs);
}

BoundCheckRecord monitor_record(std::string tag, nlohmann::json params, double lhs, double rhs) {
  if (!std::isfinite(lhs) || !(rhs > 0.0) || !std::isfinite(rhs))
    fail(ErrorCode::precondition, "monitored record " + tag + " needs a finite lhs and a positive finite rhs");
  BoundCheckRecord r;
  r.tag = std::move(tag);
  r.params = std::move(params);
  r.lhs = lhs;
  r.rhs = rhs;
  r.ratio = lhs / rhs;
  r.mode = CheckMode::monitor;
  return r;
}

nlohmann::json to_json(const BoundCheckRecord& r, bool with_timings) {
  nlohmann::json j;
  j["lemma_tag"] = r.tag;
  j["params"] = r.params;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["ratio"] = r.ratio ? nlohmann::json(*r.ratio) : nlohmann::json(nullptr);
  j["mode"] = r.mode_name();
  j["verdict"] = r.verdict();
  j["runtime_ms"] = with_timings && r.runtime_ms ? nlohmann::json(*r.runtime_ms) : nlohmann::json(nullptr);
  return j;
}

ReportFormat parse_format(const std::string& name) {
  if (name == "jsonl") return ReportFormat::jsonl;
  if (name == "csv") return ReportFormat::csv;
  fail(ErrorCode::invalid_argument, "unknown report format '" + name + "' (expected jsonl or csv)");
}

std::string render_report(const std::vector<BoundCheckRecord>& records, ReportFormat format,
                          const nlohmann::json& header, bool with_timings) {
  std::ostringstream out;
  if (format == ReportFormat::jsonl) {
    nlohmann::json h = header;
    h["record"] = "header";
    h["schema"] = "charsum.report";
    h["schema_version"] = kReportSchemaVersion;
    out << h.dump() << '\n';
    for (const auto& r : records) out << to_json(r, with_timings).dump() << '\n';
    return out.str();
  }
  out << "lemma_tag,params,lhs,rhs,ratio,mode,verdict,runtime_ms\n";
  for (const auto& r : records) {
    out << csv_field(r.tag) << ',' << csv_field(r.params.dump()) << ',' << number(r.lhs) << ',' << number(r.rhs) << ','
        << (r.ratio ? number(*r.ratio) : "") << ',' << r.mode_name() << ',' << r.verdict() << ','
        << (with_timings && r.runtime_ms ? number(*r.runtime_ms) : "") << '\n';
  }
  return out.str();
}

void write_file_atomically(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path dir = target.has_parent_path() ? target.parent_path() : fs::path(".");
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) fail(ErrorCode::io, "output directory does not exist: " + dir.string());
  const fs::path tmp = dir / ("." + target.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) fail(ErrorCode::io, "cannot open temporary file " + tmp.string());
    f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    f.flush();
    if (!f) {
      f.close();
      fs::remove(tmp, ec);
      fail(ErrorCode::io, "write failed for " + tmp.string());
    }
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    fail(ErrorCode::io, "cannot move report into place at " + path);
  }
}

}  // namespace charsum
