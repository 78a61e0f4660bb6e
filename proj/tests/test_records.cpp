#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "errors.hpp"
#include "records.hpp"

using namespace charsum;
using nlohmann::json;

TEST_CASE("assert records") {
  const auto ok = assert_record("X", {{"a", 1}}, 1.0, 2.0);
  CHECK(ok.passed);
  CHECK(ok.verdict() == "pass");
  REQUIRE(ok.ratio);
  CHECK(*ok.ratio == doctest::Approx(0.5));

  CHECK_FALSE(assert_record("X", {}, 3.0, 2.0).passed);
  // the exact verdict wins only while the ratio stays at or below 1
  CHECK_FALSE(assert_record("X", {}, 1.0, 2.0, false).passed);
  CHECK_FALSE(assert_record("X", {}, 3.0, 2.0, true).passed);

  const auto exact = assert_record("X", {}, 0.0, 0.0, true);
  CHECK(exact.passed);
  CHECK_FALSE(exact.ratio);
  CHECK(to_json(exact)["ratio"].is_null());
  CHECK_FALSE(assert_record("X", {}, 1.0, 0.0, false).passed);
  CHECK_FALSE(assert_record("X", {}, NAN, 1.0, true).passed);
}

TEST_CASE("monitor records") {
  const auto m = monitor_record("M", {}, 5.0, 2.0);
  CHECK(m.verdict() == "observed-max");
  CHECK(m.mode_name() == "MONITOR");
  CHECK(*m.ratio == doctest::Approx(2.5));
  CHECK_THROWS_AS(monitor_record("M", {}, 1.0, 0.0), Error);
  CHECK_THROWS_AS(monitor_record("M", {}, INFINITY, 1.0), Error);
}

TEST_CASE("json lines carry a versioned header") {
  auto r = monitor_record("M", {{"q", 7}}, 1.0, 4.0);
  r.runtime_ms = 12.5;
  const std::string text = render_report({r}, ReportFormat::jsonl, {{"job", "demo"}});
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  const auto header = json::parse(line);
  CHECK(header["record"] == "header");
  CHECK(header["schema_version"] == kReportSchemaVersion);
  CHECK(header["job"] == "demo");
  std::getline(in, line);
  const auto rec = json::parse(line);
  for (const char* key : {"lemma_tag", "params", "lhs", "rhs", "ratio", "mode", "verdict", "runtime_ms"})
    CHECK(rec.contains(key));
  CHECK(rec["runtime_ms"].is_null());  // timings off
  CHECK(to_json(r, true)["runtime_ms"] == 12.5);
  CHECK_FALSE(std::getline(in, line));
}

TEST_CASE("csv quoting and columns") {
  const auto r = assert_record("A", {{"s", "x,\"y\""}}, 1.0, 0.0, false);
  const std::string text = render_report({r}, ReportFormat::csv, {});
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  CHECK(line == "lemma_tag,params,lhs,rhs,ratio,mode,verdict,runtime_ms");
  std::getline(in, line);
  CHECK(line.rfind("A,\"{\"\"s\"\":\"\"x,\\\"\"y\\\"\"\"\"}\",", 0) == 0);
  CHECK(line.find(",ASSERT,fail,") != std::string::npos);
  CHECK(parse_format("csv") == ReportFormat::csv);
  CHECK_THROWS_AS(parse_format("xml"), Error);
}

TEST_CASE("atomic write") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "charsum_records_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto target = (dir / "report.jsonl").string();
  write_file_atomically(target, "first\n");
  write_file_atomically(target, "second\n");
  std::ifstream f(target);
  std::string content((std::istreambuf_iterator<char>(f)), {});
  CHECK(content == "second\n");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
  CHECK(entries == 1);  // no temporary left behind
  try {
    write_file_atomically((dir / "missing" / "r.jsonl").string(), "x");
    FAIL("expected an io error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::io);
  }
  fs::remove_all(dir);
}
