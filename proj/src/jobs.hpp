#pragma once

#include <string>
#include <vector>

#include "bounds.hpp"
#include "json.hpp"
#include "parallel.hpp"
#include "records.hpp"

namespace charsum::jobs {

struct JobContext {
  bounds::BoundConfig config;
  std::uint64_t seed = 1;
  Parallelism par;
  bool timings = false;
  // Test builds only: perturbs the reference values of the asserted identities.
  bool corrupt_oracle = false;
  bounds::Log log;
};

struct JobResult {
  std::vector<BoundCheckRecord> records;
  nlohmann::json header = nlohmann::json::object();  // job name, resolved parameters, configuration

  std::size_t assert_failures() const;
};

// Known jobs: verify-identities, verify-census, report-theorem, report-burgess,
// report-divisor-moments, report-smooth, report-tail, report-constants,
// report-short-sums, report-double-sums, report-sextic, report-pipeline.
// Parameters are a JSON object; unknown keys are rejected.
JobResult run_job(const std::string& name, const nlohmann::json& params, const JobContext& ctx);

std::vector<std::string> job_names();

// Moduli used by report-theorem when no list is given: primes and composites up to 1e5.
std::vector<std::uint64_t> default_theorem_moduli();

}  // namespace charsum::jobs
