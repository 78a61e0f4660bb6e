#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "charsum/charsum.h"
#include "charsum/charsum_testing.h"
#include "census.hpp"
#include "charsums.hpp"
#include "dirichlet.hpp"
#include "errors.hpp"
#include "jobs.hpp"
#include "sumspec.hpp"

using namespace charsum;
using arith::u64;
using nlohmann::json;

struct cs_context {
  std::unique_ptr<ThreadPool> pool;
  jobs::JobContext job;
  cs_log_fn log_fn = nullptr;
  void* log_user = nullptr;
};

struct cs_group {
  std::shared_ptr<const dirichlet::UnitGroupBasis> basis;
};

struct cs_character {
  dirichlet::DirichletCharacter chi;
};

namespace {

thread_local std::string last_error;

cs_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return CS_INVALID_ARGUMENT;
    case ErrorCode::precondition: return CS_PRECONDITION;
    case ErrorCode::not_coprime: return CS_NOT_COPRIME;
    case ErrorCode::budget_exceeded: return CS_BUDGET_EXCEEDED;
    case ErrorCode::io: return CS_IO;
  }
  return CS_INTERNAL;
}

// Runs body, translating every exception into a status and message.
template <class Body>
cs_status guarded(Body&& body) {
  try {
    body();
    last_error.clear();
    return CS_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const json::exception& e) {
    last_error = std::string("malformed JSON: ") + e.what();
    return CS_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return CS_BUDGET_EXCEEDED;
  } catch (const std::exception& e) {
    last_error = e.what();
    return CS_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) fail(ErrorCode::invalid_argument, std::string(what) + " must not be NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json parse_json(const char* text, const char* what) {
  if (text == nullptr || *text == '\0') return json::object();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::invalid_argument, std::string(what) + " is not valid JSON: " + e.what());
  }
}

void fill(cs_sum_value* out, const SumValue& v) {
  out->re = v.value.real();
  out->im = v.value.imag();
  out->term_count = v.term_count;
  out->abs_term_sum = v.abs_term_sum;
}

}  // namespace

extern "C" {

const char* cs_version(void) { return "1.0.0"; }

const char* cs_status_name(cs_status status) {
  switch (status) {
    case CS_OK: return "ok";
    case CS_INVALID_ARGUMENT: return "invalid_argument";
    case CS_PRECONDITION: return "precondition";
    case CS_NOT_COPRIME: return "not_coprime";
    case CS_BUDGET_EXCEEDED: return "budget_exceeded";
    case CS_IO: return "io";
    case CS_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* cs_last_error(void) { return last_error.c_str(); }

void cs_string_free(char* s) { std::free(s); }

cs_status cs_context_create(const char* config_json, unsigned threads, uint64_t block_size, uint64_t seed,
                            cs_context** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    if (threads == 0 || threads > 1024) fail(ErrorCode::invalid_argument, "threads must lie in 1..1024");
    auto ctx = std::make_unique<cs_context>();
    ctx->job.config = bounds::BoundConfig::from_json(parse_json(config_json, "configuration"));
    ctx->job.seed = seed;
    if (block_size != 0) ctx->job.par.block_size = block_size;
    if (threads > 1) ctx->pool = std::make_unique<ThreadPool>(threads);
    ctx->job.par.pool = ctx->pool.get();
    *out = ctx.release();
  });
}

void cs_context_destroy(cs_context* ctx) { delete ctx; }

cs_status cs_context_config_json(const cs_context* ctx, char** out_json) {
  return guarded([&] {
    need(ctx, "ctx");
    need(out_json, "out_json");
    json j = ctx->job.config.to_json();
    j["seed"] = ctx->job.seed;
    j["block_size"] = ctx->job.par.block_size;
    j["threads"] = ctx->pool ? ctx->pool->width() : 1u;
    *out_json = dup_string(j.dump());
  });
}

cs_status cs_context_set_timings(cs_context* ctx, int enabled) {
  return guarded([&] {
    need(ctx, "ctx");
    ctx->job.timings = enabled != 0;
  });
}

cs_status cs_context_set_log(cs_context* ctx, cs_log_fn fn, void* user) {
  return guarded([&] {
    need(ctx, "ctx");
    ctx->log_fn = fn;
    ctx->log_user = user;
    if (fn == nullptr) {
      ctx->job.log = nullptr;
    } else {
      ctx->job.log = [fn, user](const std::string& m) { fn(m.c_str(), user); };
    }
  });
}

cs_status cs_factor_json(uint64_t n, char** out_json) {
  return guarded([&] {
    need(out_json, "out_json");
    if (n == 0) fail(ErrorCode::invalid_argument, "n must be positive");
    const auto f = arith::factor(n);
    json factors = json::array();
    for (const auto& pp : f.factors()) factors.push_back({pp.prime, pp.exponent});
    const json j = {{"n", n},
                    {"factors", factors},
                    {"phi", arith::euler_phi(f)},
                    {"mobius", arith::mobius(f)},
                    {"omega", arith::omega(f)},
                    {"tau", arith::tau_r(f, 2)}};
    *out_json = dup_string(j.dump());
  });
}

cs_status cs_euler_phi(uint64_t n, uint64_t* out) {
  return guarded([&] {
    need(out, "out");
    if (n == 0) fail(ErrorCode::invalid_argument, "n must be positive");
    *out = arith::euler_phi(arith::factor(n));
  });
}

cs_status cs_mobius(uint64_t n, int* out) {
  return guarded([&] {
    need(out, "out");
    if (n == 0) fail(ErrorCode::invalid_argument, "n must be positive");
    *out = arith::mobius(arith::factor(n));
  });
}

cs_status cs_divisor_count(uint64_t n, unsigned r, uint64_t* out) {
  return guarded([&] {
    need(out, "out");
    if (n == 0 || r == 0) fail(ErrorCode::invalid_argument, "n and r must be positive");
    *out = arith::tau_r(n, r);
  });
}

cs_status cs_group_create(uint64_t modulus, cs_group** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    if (modulus == 0) fail(ErrorCode::invalid_argument, "modulus must be positive");
    *out = new cs_group{dirichlet::UnitGroupBasis::create(modulus)};
  });
}

void cs_group_destroy(cs_group* g) { delete g; }

cs_status cs_group_order(const cs_group* g, uint64_t* out) {
  return guarded([&] {
    need(g, "group");
    need(out, "out");
    *out = g->basis->order();
  });
}

cs_status cs_group_json(const cs_group* g, char** out_json) {
  return guarded([&] {
    need(g, "group");
    need(out_json, "out_json");
    json gens = json::array();
    for (const auto& gen : g->basis->generators()) gens.push_back({{"residue", gen.residue}, {"order", gen.order}});
    const json j = {{"modulus", g->basis->modulus()}, {"order", g->basis->order()}, {"generators", gens}};
    *out_json = dup_string(j.dump());
  });
}

cs_status cs_character_from_index(const cs_group* g, uint64_t index, cs_character** out) {
  return guarded([&] {
    need(g, "group");
    need(out, "out");
    *out = nullptr;
    if (index >= g->basis->order()) fail(ErrorCode::invalid_argument, "character index must be below phi(D)");
    *out = new cs_character{dirichlet::character_from_index(g->basis, index)};
  });
}

cs_status cs_character_from_exponents(const cs_group* g, const uint64_t* exponents, size_t count, cs_character** out) {
  return guarded([&] {
    need(g, "group");
    need(out, "out");
    *out = nullptr;
    if (count > 0) need(exponents, "exponents");
    std::vector<u64> e(exponents, exponents + count);
    *out = new cs_character{dirichlet::DirichletCharacter(g->basis, std::move(e))};
  });
}

void cs_character_destroy(cs_character* chi) { delete chi; }

cs_status cs_character_conductor(const cs_character* chi, uint64_t* out) {
  return guarded([&] {
    need(chi, "character");
    need(out, "out");
    *out = dirichlet::conductor(chi->chi).value();
  });
}

cs_status cs_character_json(const cs_character* chi, char** out_json) {
  return guarded([&] {
    need(chi, "character");
    need(out_json, "out_json");
    json j = dirichlet::to_json(chi->chi);
    j["index"] = chi->chi.index();
    j["order"] = chi->chi.order();
    j["conductor"] = dirichlet::conductor(chi->chi).value();
    j["primitive"] = dirichlet::is_primitive(chi->chi);
    j["principal"] = chi->chi.is_principal();
    *out_json = dup_string(j.dump());
  });
}

cs_status cs_character_eval(const cs_character* chi, int64_t n, double* re, double* im, int* is_zero) {
  return guarded([&] {
    need(chi, "character");
    const auto v = chi->chi.eval(n);
    const auto c = v.to_complex();
    if (re) *re = c.real();
    if (im) *im = c.imag();
    if (is_zero) *is_zero = v.is_zero ? 1 : 0;
  });
}

cs_status cs_gauss_sum(const cs_character* chi, double* re, double* im) {
  return guarded([&] {
    need(chi, "character");
    const auto g = dirichlet::gauss_sum(chi->chi);
    if (re) *re = g.real();
    if (im) *im = g.imag();
  });
}

cs_status cs_shifted_prime_sum(const cs_context* ctx, const cs_character* chi, uint64_t l, uint64_t x,
                               cs_sum_value* out) {
  return guarded([&] {
    need(ctx, "ctx");
    need(chi, "character");
    need(out, "out");
    fill(out, sums::shifted_prime_sum(dirichlet::CharacterTable(chi->chi), l, x, ctx->job.par));
  });
}

cs_status cs_restricted_sum(const cs_context* ctx, const cs_character* chi, uint64_t nu, uint64_t l, uint64_t x,
                            cs_sum_value* out) {
  return guarded([&] {
    need(ctx, "ctx");
    need(chi, "character");
    need(out, "out");
    fill(out, sums::restricted_sum(dirichlet::CharacterTable(chi->chi), nu, l, x, ctx->job.par));
  });
}

cs_status cs_evaluate_sum_spec(const cs_context* ctx, const char* spec_json, cs_sum_value* out) {
  return guarded([&] {
    need(ctx, "ctx");
    need(spec_json, "spec_json");
    need(out, "out");
    const auto spec = sum_spec_from_json(parse_json(spec_json, "sum spec"));
    fill(out, evaluate(spec, ctx->job.par, ctx->job.config.work_budget));
  });
}

cs_status cs_congruence_census(const cs_context* ctx, const char* params_json, char** out_json) {
  return guarded([&] {
    need(ctx, "ctx");
    need(out_json, "out_json");
    const auto p = census::params_from_json(parse_json(params_json, "census parameters"));
    const auto inst = census::congruence_census(p, ctx->job.config.work_budget);
    *out_json = dup_string(census::to_json(inst).dump());
  });
}

cs_status cs_run_job(const cs_context* ctx, const char* job, const char* params_json, const char* output_path,
                     const char* format, cs_job_summary* summary, char** report_out) {
  return guarded([&] {
    need(ctx, "ctx");
    need(job, "job");
    if (output_path == nullptr) need(report_out, "report_out (no output path given)");
    if (report_out) *report_out = nullptr;
    const auto fmt = parse_format(format == nullptr ? "jsonl" : format);
    const auto result = jobs::run_job(job, parse_json(params_json, "job parameters"), ctx->job);
    const std::string text = render_report(result.records, fmt, result.header, ctx->job.timings);
    if (summary) {
      *summary = cs_job_summary{};
      summary->records = result.records.size();
      for (const auto& r : result.records) {
        if (r.mode == CheckMode::monitor) {
          ++summary->monitor_records;
        } else {
          ++summary->assert_records;
          summary->assert_failures += !r.passed;
        }
      }
    }
    if (output_path != nullptr) {
      write_file_atomically(output_path, text);
    } else {
      *report_out = dup_string(text);
    }
  });
}

cs_status cs_job_names(char** out_json) {
  return guarded([&] {
    need(out_json, "out_json");
    *out_json = dup_string(json(jobs::job_names()).dump());
  });
}

int cs_testing_hooks_available(void) {
#ifdef CHARSUM_TEST_HOOKS
  return 1;
#else
  return 0;
#endif
}

cs_status cs_testing_set_oracle_fault(cs_context* ctx, int enabled) {
  return guarded([&] {
    need(ctx, "ctx");
#ifdef CHARSUM_TEST_HOOKS
    ctx->job.corrupt_oracle = enabled != 0;
#else
    (void)enabled;
    fail(ErrorCode::invalid_argument, "library built without test hooks");
#endif
  });
}

}  // extern "C"
