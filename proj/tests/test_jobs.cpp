#include "doctest.h"
#include "errors.hpp"
#include "jobs.hpp"

using namespace charsum;
using nlohmann::json;

namespace {

std::string render(const jobs::JobResult& r) { return render_report(r.records, ReportFormat::jsonl, r.header); }

}  // namespace

TEST_CASE("job registry") {
  const auto names = jobs::job_names();
  CHECK(names.size() == 12);
  jobs::JobContext ctx;
  CHECK_THROWS_AS(jobs::run_job("no-such-job", {}, ctx), Error);
  CHECK_THROWS_AS(jobs::run_job("report-tail", {{"bogus", 1}}, ctx), Error);
  CHECK_THROWS_AS(jobs::run_job("report-tail", {{"q", "x"}}, ctx), Error);
  CHECK(jobs::default_theorem_moduli().size() >= 20);
}

TEST_CASE("header records resolved parameters") {
  jobs::JobContext ctx;
  ctx.seed = 42;
  const auto r = jobs::run_job("report-tail", {{"q", 30030}, {"D", 30030}}, ctx);
  REQUIRE(r.records.size() == 1);
  CHECK(r.header["job"] == "report-tail");
  CHECK(r.header["seed"] == 42);
  CHECK(r.header["params"]["q"] == 30030);
  CHECK(r.header["config"]["delta"] == ctx.config.delta);
}

TEST_CASE("census job is seeded and thread independent") {
  jobs::JobContext ctx;
  ctx.seed = 7;
  const json params = {{"random", 100}};
  const auto a = jobs::run_job("verify-census", params, ctx);
  CHECK(a.assert_failures() == 0);
  CHECK(a.records.size() >= 600);
  ThreadPool pool(4);
  ctx.par.pool = &pool;
  CHECK(render(jobs::run_job("verify-census", params, ctx)) == render(a));
  ctx.seed = 8;
  CHECK(render(jobs::run_job("verify-census", params, ctx)) != render(a));
}

TEST_CASE("explicit census instances") {
  jobs::JobContext ctx;
  const json inst = {{"q", 15}, {"d", 3}, {"eta", 1}, {"k", 1}, {"M", 0}, {"N", 1}, {"Y", 7}};
  const auto r = jobs::run_job("verify-census", {{"instances", {inst}}}, ctx);
  CHECK(r.records.size() >= 6);
  CHECK(r.assert_failures() == 0);
  CHECK_THROWS_AS(jobs::run_job("verify-census", {{"instances", {inst}}, {"random", 3}}, ctx), Error);
  json bad = inst;
  bad["d"] = 4;  // does not divide q
  CHECK_THROWS_AS(jobs::run_job("verify-census", {{"instances", {bad}}}, ctx), Error);
}

TEST_CASE("corrupted oracle turns assertions red") {
  jobs::JobContext ctx;
  const json small = {{"hb_cases", 3},      {"max_D", 5},         {"count_D_max", 10}, {"gauss_q_max", 10},
                      {"coprime_q_max", 5}, {"coprime_U_max", 5}, {"recombination_cases", 2}};
  CHECK(jobs::run_job("verify-identities", small, ctx).assert_failures() == 0);
  ctx.corrupt_oracle = true;
  CHECK(jobs::run_job("verify-identities", small, ctx).assert_failures() == 5);
}

TEST_CASE("timings are opt-in") {
  jobs::JobContext ctx;
  const auto plain = jobs::run_job("report-constants", {{"q_max", 200}}, ctx);
  for (const auto& r : plain.records) CHECK_FALSE(r.runtime_ms);
  ctx.timings = true;
  const auto timed = jobs::run_job("report-constants", {{"q_max", 200}}, ctx);
  for (const auto& r : timed.records) CHECK(r.runtime_ms);
}

TEST_CASE("pipeline job") {
  jobs::JobContext ctx;
  const auto r = jobs::run_job("report-pipeline", {{"D", 315}, {"x", 3000}, {"l", 2}, {"chi_index", 7}}, ctx);
  CHECK(r.assert_failures() == 0);
  bool saw_recombination = false;
  for (const auto& rec : r.records) saw_recombination = saw_recombination || rec.tag == "MOBIUS_RECOMBINATION";
  CHECK(saw_recombination);
}
