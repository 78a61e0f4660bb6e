#ifndef CHARSUM_CHARSUM_H
#define CHARSUM_CHARSUM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CS_API __declspec(dllexport)
#else
#define CS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cs_status {
  CS_OK = 0,
  CS_INVALID_ARGUMENT = 1,
  CS_PRECONDITION = 2,
  CS_NOT_COPRIME = 3,
  CS_BUDGET_EXCEEDED = 4,
  CS_IO = 5,
  CS_INTERNAL = 6
} cs_status;

typedef struct cs_context cs_context;
typedef struct cs_group cs_group;
typedef struct cs_character cs_character;

typedef struct cs_sum_value {
  double re;
  double im;
  uint64_t term_count;
  double abs_term_sum;
} cs_sum_value;

typedef struct cs_job_summary {
  uint64_t records;
  uint64_t assert_records;
  uint64_t assert_failures;
  uint64_t monitor_records;
} cs_job_summary;

typedef void (*cs_log_fn)(const char* message, void* user);

CS_API const char* cs_version(void);
CS_API const char* cs_status_name(cs_status status);
/* Message of the last failure on the calling thread; never NULL. */
CS_API const char* cs_last_error(void);
/* Frees strings returned through char** out-parameters. */
CS_API void cs_string_free(char* s);

/* config_json may be NULL (defaults) or a JSON object with any of delta,
   epsilon, c_omega, c_phi, theta, work_budget. threads >= 1 sets the width
   of the worker pool the context owns; block_size 0 selects the default. */
CS_API cs_status cs_context_create(const char* config_json, unsigned threads, uint64_t block_size,
                                   uint64_t seed, cs_context** out);
CS_API void cs_context_destroy(cs_context* ctx);
CS_API cs_status cs_context_config_json(const cs_context* ctx, char** out_json);
CS_API cs_status cs_context_set_timings(cs_context* ctx, int enabled);
CS_API cs_status cs_context_set_log(cs_context* ctx, cs_log_fn fn, void* user);

/* Arithmetic. cs_factor_json yields {"n":..,"factors":[[p,e],..],"phi":..,"mobius":..,"omega":..,"tau":..}. */
CS_API cs_status cs_factor_json(uint64_t n, char** out_json);
CS_API cs_status cs_euler_phi(uint64_t n, uint64_t* out);
CS_API cs_status cs_mobius(uint64_t n, int* out);
CS_API cs_status cs_divisor_count(uint64_t n, unsigned r, uint64_t* out);

/* Unit group (Z/DZ)^* with a fixed generator basis. */
CS_API cs_status cs_group_create(uint64_t modulus, cs_group** out);
CS_API void cs_group_destroy(cs_group* g);
CS_API cs_status cs_group_order(const cs_group* g, uint64_t* out);
CS_API cs_status cs_group_json(const cs_group* g, char** out_json);

CS_API cs_status cs_character_from_index(const cs_group* g, uint64_t index, cs_character** out);
CS_API cs_status cs_character_from_exponents(const cs_group* g, const uint64_t* exponents, size_t count,
                                             cs_character** out);
CS_API void cs_character_destroy(cs_character* chi);
CS_API cs_status cs_character_conductor(const cs_character* chi, uint64_t* out);
/* {"modulus":..,"exponents":[..],"index":..,"order":..,"conductor":..,"primitive":..,"principal":..} */
CS_API cs_status cs_character_json(const cs_character* chi, char** out_json);
CS_API cs_status cs_character_eval(const cs_character* chi, int64_t n, double* re, double* im, int* is_zero);
CS_API cs_status cs_gauss_sum(const cs_character* chi, double* re, double* im);

/* Sums. */
CS_API cs_status cs_shifted_prime_sum(const cs_context* ctx, const cs_character* chi, uint64_t l, uint64_t x,
                                      cs_sum_value* out);
CS_API cs_status cs_restricted_sum(const cs_context* ctx, const cs_character* chi, uint64_t nu, uint64_t l,
                                   uint64_t x, cs_sum_value* out);
/* spec_json: {"lemma_tag": NAME, "parameters": {...}, "character": {"modulus":..,"exponents":[..]}} */
CS_API cs_status cs_evaluate_sum_spec(const cs_context* ctx, const char* spec_json, cs_sum_value* out);
/* params_json: {"q","d","eta","k","M","N","Y"}; returns the populated instance as JSON. */
CS_API cs_status cs_congruence_census(const cs_context* ctx, const char* params_json, char** out_json);

/* Runs a named job (see cs_job_names). When output_path is non-NULL the
   report is written there atomically; otherwise it is returned through
   report_out (which may then not be NULL). format is "jsonl" or "csv". */
CS_API cs_status cs_run_job(const cs_context* ctx, const char* job, const char* params_json, const char* output_path,
                            const char* format, cs_job_summary* summary, char** report_out);
/* JSON array of job names. */
CS_API cs_status cs_job_names(char** out_json);

#ifdef __cplusplus
}
#endif

#endif
