// Command-line front end over the C interface of libcharsum.
#include <charsum/charsum.h>
#include <charsum/charsum_testing.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitAssertFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct Failure {
  int exit_code;
  std::string message;
};

int exit_code_for(cs_status s) {
  switch (s) {
    case CS_OK: return kExitOk;
    case CS_INVALID_ARGUMENT:
    case CS_PRECONDITION:
    case CS_NOT_COPRIME: return kExitUsage;
    default: return kExitRuntime;
  }
}

void check(cs_status s) {
  if (s != CS_OK) throw Failure{exit_code_for(s), std::string(cs_status_name(s)) + ": " + cs_last_error()};
}

std::string take(char* s) {
  std::string out = s == nullptr ? "" : s;
  cs_string_free(s);
  return out;
}

struct ContextDeleter {
  void operator()(cs_context* c) const { cs_context_destroy(c); }
};
struct GroupDeleter {
  void operator()(cs_group* g) const { cs_group_destroy(g); }
};
struct CharacterDeleter {
  void operator()(cs_character* c) const { cs_character_destroy(c); }
};
using Context = std::unique_ptr<cs_context, ContextDeleter>;
using Group = std::unique_ptr<cs_group, GroupDeleter>;
using Character = std::unique_ptr<cs_character, CharacterDeleter>;

struct Globals {
  uint64_t seed = 1;
  uint64_t block_size = 0;
  unsigned threads = 0;
  std::string out;
  std::string format = "jsonl";
  std::string config_path;
  std::optional<double> delta, eps;
  std::optional<uint64_t> work_budget;
  bool timings = false;
  bool inject_fault = false;
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Failure{kExitRuntime, "io: cannot read " + path};
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

unsigned resolve_threads(const Globals& g) {
  if (g.threads != 0) return g.threads;
  if (const char* env = std::getenv("CHARSUM_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (*end != '\0' || v == 0 || v > 1024)
      throw Failure{kExitUsage, "CHARSUM_THREADS must be an integer in 1..1024"};
    return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Context make_context(const Globals& g) {
  json config = json::object();
  if (!g.config_path.empty()) {
    try {
      config = json::parse(read_file(g.config_path));
    } catch (const json::parse_error& e) {
      throw Failure{kExitUsage, "invalid_argument: configuration file is not valid JSON: " + std::string(e.what())};
    }
  }
  if (g.delta) config["delta"] = *g.delta;
  if (g.eps) config["epsilon"] = *g.eps;
  if (g.work_budget) config["work_budget"] = *g.work_budget;
  cs_context* raw = nullptr;
  check(cs_context_create(config.dump().c_str(), resolve_threads(g), g.block_size, g.seed, &raw));
  Context ctx(raw);
  check(cs_context_set_timings(ctx.get(), g.timings ? 1 : 0));
  check(cs_context_set_log(ctx.get(), [](const char* m, void*) { std::cerr << m << '\n'; }, nullptr));
  if (g.inject_fault) check(cs_testing_set_oracle_fault(ctx.get(), 1));
  return ctx;
}

Group make_group(uint64_t D) {
  cs_group* raw = nullptr;
  check(cs_group_create(D, &raw));
  return Group(raw);
}

Character make_character(const cs_group* g, std::optional<uint64_t> index, const std::vector<uint64_t>& exponents) {
  cs_character* raw = nullptr;
  if (!exponents.empty()) {
    check(cs_character_from_exponents(g, exponents.data(), exponents.size(), &raw));
  } else {
    uint64_t order = 0;
    check(cs_group_order(g, &order));
    check(cs_character_from_index(g, index.value_or(order > 1 ? 1 : 0), &raw));
  }
  return Character(raw);
}

json character_info(const cs_character* chi) {
  char* s = nullptr;
  check(cs_character_json(chi, &s));
  return json::parse(take(s));
}

json sum_json(const cs_sum_value& v) {
  return {{"re", v.re}, {"im", v.im}, {"magnitude", std::hypot(v.re, v.im)}, {"term_count", v.term_count},
          {"abs_term_sum", v.abs_term_sum}};
}

void print(const json& j) { std::cout << j.dump() << '\n'; }

int run_job(const Globals& g, const std::string& job, const json& params) {
  const Context ctx = make_context(g);
  cs_job_summary summary{};
  char* report = nullptr;
  check(cs_run_job(ctx.get(), job.c_str(), params.dump().c_str(), g.out.empty() ? nullptr : g.out.c_str(),
                   g.format.c_str(), &summary, g.out.empty() ? &report : nullptr));
  if (report != nullptr) std::cout << take(report);
  std::cerr << job << ": " << summary.records << " records, " << summary.assert_records << " asserted, "
            << summary.assert_failures << " failed, " << summary.monitor_records << " monitored\n";
  return summary.assert_failures > 0 ? kExitAssertFailed : kExitOk;
}

// Adds an optional integer flag whose value, when given, lands in params[key].
template <class T>
void param_flag(CLI::App* app, json& params, const std::string& flag, const std::string& key, const std::string& help) {
  app->add_option_function<T>(flag, [&params, key](const T& v) { params[key] = v; }, help);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact character sums over shifted primes, decomposition identities and bound checks"};
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Seed for every sampled choice")->capture_default_str();
  app.add_option("--block-size", g.block_size, "Reduction block size (0 selects the default)");
  app.add_option("--threads", g.threads, "Worker threads (overrides CHARSUM_THREADS)")->check(CLI::Range(1u, 1024u));
  app.add_option("--out", g.out, "Write the report to this file (atomically) instead of standard output");
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"jsonl", "csv"}))->capture_default_str();
  app.add_option("--config", g.config_path, "JSON file with bound constants")->check(CLI::ExistingFile);
  app.add_option("--delta", g.delta, "Exponent slack delta in bounds");
  app.add_option("--eps", g.eps, "Exponent epsilon in x = D^(5/6 + eps)");
  app.add_option("--work-budget", g.work_budget, "Upper limit on elementary operations per evaluation");
  app.add_flag("--timings", g.timings, "Fill runtime_ms in reports (makes output run-dependent)");
  app.add_flag("--inject-oracle-fault", g.inject_fault)->group("");

  std::function<int()> action;
  json params = json::object();

  // factor
  auto* factor = app.add_subcommand("factor", "Factorization and multiplicative functions of N");
  uint64_t factor_n = 0;
  factor->add_option("N", factor_n, "Positive integer")->required();
  factor->callback([&] {
    action = [&] {
      char* s = nullptr;
      check(cs_factor_json(factor_n, &s));
      std::cout << take(s) << '\n';
      return kExitOk;
    };
  });

  // chars
  auto* chars = app.add_subcommand("chars", "Dirichlet characters modulo D");
  chars->require_subcommand(1);
  uint64_t chars_D = 0;
  std::optional<uint64_t> chars_index;
  std::vector<uint64_t> chars_exponents;
  auto* chars_list = chars->add_subcommand("list", "List all characters with order and conductor");
  chars_list->add_option("--D", chars_D, "Modulus")->required();
  chars_list->callback([&] {
    action = [&] {
      const Group grp = make_group(chars_D);
      char* s = nullptr;
      check(cs_group_json(grp.get(), &s));
      std::cout << take(s) << '\n';
      uint64_t order = 0;
      check(cs_group_order(grp.get(), &order));
      for (uint64_t i = 0; i < order; ++i) print(character_info(make_character(grp.get(), i, {}).get()));
      return kExitOk;
    };
  });
  auto* chars_cond = chars->add_subcommand("conductor", "Conductor of one character");
  chars_cond->add_option("--D", chars_D, "Modulus")->required();
  auto* exp_opt = chars_cond->add_option("--exponents", chars_exponents, "Exponents over the generator basis")
                      ->delimiter(',');
  chars_cond->add_option("--chi-index", chars_index, "Index in the enumeration")->excludes(exp_opt);
  chars_cond->callback([&] {
    action = [&] {
      const Group grp = make_group(chars_D);
      print(character_info(make_character(grp.get(), chars_index, chars_exponents).get()));
      return kExitOk;
    };
  });

  // sum
  auto* sum = app.add_subcommand("sum", "Evaluate one sum exactly");
  sum->require_subcommand(1);
  uint64_t sum_D = 0, sum_l = 1, sum_x = 0, sum_nu = 1;
  std::optional<uint64_t> sum_index;
  std::vector<uint64_t> sum_exponents;
  auto* sum_t = sum->add_subcommand("T", "Sum of Lambda(n) chi(n - l) over n <= x");
  sum_t->add_option("--D", sum_D, "Modulus")->required();
  sum_t->add_option("--l", sum_l, "Shift, coprime to D")->required();
  sum_t->add_option("--x", sum_x, "Length")->required();
  auto* t_exp = sum_t->add_option("--exponents", sum_exponents, "Character exponents")->delimiter(',');
  sum_t->add_option("--chi-index", sum_index, "Character index (default 1, the first non-principal)")->excludes(t_exp);
  sum_t->callback([&] {
    action = [&] {
      const Context ctx = make_context(g);
      const Group grp = make_group(sum_D);
      const Character chi = make_character(grp.get(), sum_index, sum_exponents);
      cs_sum_value v{};
      check(cs_shifted_prime_sum(ctx.get(), chi.get(), sum_l, sum_x, &v));
      json j = {{"sum", "THEOREM_T"}, {"D", sum_D}, {"l", sum_l}, {"x", sum_x}, {"chi", character_info(chi.get())}};
      j.update(sum_json(v));
      print(j);
      return kExitOk;
    };
  });
  auto* sum_r = sum->add_subcommand("restricted", "Sum over n <= x with (n, q) = 1 and n = l mod nu");
  sum_r->add_option("--q", sum_D, "Modulus of the character")->required();
  sum_r->add_option("--nu", sum_nu, "Progression modulus, coprime to q")->required();
  sum_r->add_option("--l", sum_l, "Shift")->required();
  sum_r->add_option("--x", sum_x, "Length")->required();
  auto* r_exp = sum_r->add_option("--exponents", sum_exponents, "Character exponents")->delimiter(',');
  sum_r->add_option("--chi-index", sum_index, "Character index (default 1)")->excludes(r_exp);
  sum_r->callback([&] {
    action = [&] {
      const Context ctx = make_context(g);
      const Group grp = make_group(sum_D);
      const Character chi = make_character(grp.get(), sum_index, sum_exponents);
      cs_sum_value v{};
      check(cs_restricted_sum(ctx.get(), chi.get(), sum_nu, sum_l, sum_x, &v));
      json j = {{"sum", "T_RESTRICTED"}, {"q", sum_D}, {"nu", sum_nu}, {"l", sum_l}, {"x", sum_x},
                {"chi", character_info(chi.get())}};
      j.update(sum_json(v));
      print(j);
      return kExitOk;
    };
  });
  auto* sum_spec = sum->add_subcommand("spec", "Evaluate a JSON sum description");
  std::string spec_text, spec_file;
  auto* spec_json_opt = sum_spec->add_option("--json", spec_text, "Sum description as a JSON string");
  sum_spec->add_option("--file", spec_file, "File holding the sum description")->excludes(spec_json_opt);
  sum_spec->callback([&] {
    action = [&] {
      if (spec_text.empty() && spec_file.empty()) throw Failure{kExitUsage, "sum spec needs --json or --file"};
      const std::string text = spec_file.empty() ? spec_text : read_file(spec_file);
      const Context ctx = make_context(g);
      cs_sum_value v{};
      check(cs_evaluate_sum_spec(ctx.get(), text.c_str(), &v));
      json j;
      try {
        j = {{"spec", json::parse(text)}};
      } catch (const json::parse_error&) {
      }
      j.update(sum_json(v));
      print(j);
      return kExitOk;
    };
  });

  // census of one instance
  auto* census = app.add_subcommand("census", "Count solutions of the congruence for one instance");
  for (const char* key : {"q", "d", "eta", "k", "M", "N", "Y"})
    param_flag<uint64_t>(census, params, std::string("--") + key, key, std::string("Instance parameter ") + key);
  census->callback([&] {
    action = [&] {
      const Context ctx = make_context(g);
      char* s = nullptr;
      check(cs_congruence_census(ctx.get(), params.dump().c_str(), &s));
      std::cout << take(s) << '\n';
      return kExitOk;
    };
  });

  // verify
  auto* verify = app.add_subcommand("verify", "Asserted identities and exact inequalities");
  verify->require_subcommand(1);
  auto* ids = verify->add_subcommand("identities",
                                     "Decomposition identity, orthogonality, Gauss sums, character counts, "
                                     "coprime counts and Mobius recombination");
  param_flag<uint64_t>(ids, params, "--max-D", "max_D", "Orthogonality checked for all D up to this");
  param_flag<uint64_t>(ids, params, "--count-D-max", "count_D_max", "Character counts checked up to this D");
  param_flag<uint64_t>(ids, params, "--gauss-q-max", "gauss_q_max", "Gauss sums checked for q up to this");
  param_flag<uint64_t>(ids, params, "--coprime-q-max", "coprime_q_max", "Coprime counts for q up to this");
  param_flag<uint64_t>(ids, params, "--coprime-U-max", "coprime_U_max", "Coprime counts for U up to this");
  param_flag<uint64_t>(ids, params, "--hb-cases", "hb_cases", "Seeded decomposition cases");
  param_flag<uint64_t>(ids, params, "--recombination-cases", "recombination_cases", "Seeded recombination cases");
  ids->callback([&] { action = [&] { return run_job(g, "verify-identities", params); }; });
  auto* cen = verify->add_subcommand("census", "Congruence census with its class bounds");
  std::string instances_file;
  auto* inst_opt = cen->add_option("--instances", instances_file, "JSON array or JSON-lines file of instances")
                       ->check(CLI::ExistingFile);
  auto* rand_opt = cen->add_option_function<uint64_t>(
      "--random", [&](const uint64_t& n) { params["random"] = n; }, "Number of seeded random instances");
  inst_opt->excludes(rand_opt);
  param_flag<uint64_t>(cen, params, "--q-max", "q_max", "Largest modulus for random instances");
  cen->callback([&] {
    action = [&] {
      if (!instances_file.empty()) {
        const std::string text = read_file(instances_file);
        json list = json::array();
        try {
          const auto first = text.find_first_not_of(" \t\r\n");
          if (first != std::string::npos && text[first] == '[') {
            list = json::parse(text);
          } else {
            std::istringstream lines(text);
            for (std::string line; std::getline(lines, line);)
              if (line.find_first_not_of(" \t\r") != std::string::npos) list.push_back(json::parse(line));
          }
        } catch (const json::parse_error& e) {
          throw Failure{kExitUsage, "invalid_argument: instances file is not valid JSON: " + std::string(e.what())};
        }
        params["instances"] = list;
      }
      return run_job(g, "verify-census", params);
    };
  });

  // reports
  auto* report = app.add_subcommand("report", "Monitored bound reports");
  report->require_subcommand(1);
  auto job_cmd = [&](const std::string& name, const std::string& job, const std::string& help) {
    auto* sub = report->add_subcommand(name, help);
    sub->callback([&, job] { action = [&, job] { return run_job(g, job, params); }; });
    return sub;
  };
  auto list_flag = [&](CLI::App* sub, const std::string& flag, const std::string& key, const std::string& help) {
    sub->add_option_function<std::vector<uint64_t>>(
           flag, [&, key](const std::vector<uint64_t>& v) { params[key] = v; }, help)
        ->delimiter(',');
  };
  auto* thm = job_cmd("theorem", "report-theorem", "Maximal |T(chi)| against x exp(-0.6 sqrt(ln D))");
  list_flag(thm, "--D-list", "D_list", "Comma-separated moduli");
  thm->add_option_function<uint64_t>("--D", [&](const uint64_t& D) { params["D_list"] = {D}; }, "Single modulus");
  param_flag<uint64_t>(thm, params, "--l-samples", "l_samples", "Number of sampled shifts when phi(D) exceeds it");
  auto* bur = job_cmd("burgess", "report-burgess", "Moments of short character sums over primes q");
  param_flag<uint64_t>(bur, params, "--q-max", "q_max", "Largest prime modulus");
  param_flag<uint64_t>(bur, params, "--Z", "Z_max", "Largest interval length Z");
  param_flag<uint64_t>(bur, params, "--r", "r", "Moment order r");
  auto* sex = job_cmd("sextic", "report-sextic", "Sextic moment of short sums");
  list_flag(sex, "--q-list", "q_list", "Comma-separated moduli");
  param_flag<uint64_t>(sex, params, "--Z", "Z_max", "Largest Z");
  auto* dm = job_cmd("divisor-moments", "report-divisor-moments", "Sums of tau_r(n)^k against x (ln x)^(r^k - 1)");
  list_flag(dm, "--x-grid", "x_grid", "Comma-separated x values");
  param_flag<uint64_t>(dm, params, "--r-min", "r_min", "Smallest r");
  param_flag<uint64_t>(dm, params, "--r-max", "r_max", "Largest r");
  param_flag<uint64_t>(dm, params, "--k-max", "k_max", "Largest power k (1 or 2)");
  auto* sm = job_cmd("smooth", "report-smooth", "Counts of z-smooth integers coprime to b");
  list_flag(sm, "--x-grid", "x_grid", "Comma-separated x values");
  list_flag(sm, "--b-list", "b_list", "Comma-separated b values");
  param_flag<uint64_t>(sm, params, "--z-points", "z_points", "z values per x");
  auto* tail = job_cmd("tail", "report-tail", "Reciprocal sum over large square-free divisors");
  param_flag<uint64_t>(tail, params, "--q", "q", "Divisor q of D");
  param_flag<uint64_t>(tail, params, "--D", "D", "Modulus D");
  list_flag(tail, "--D-list", "D_list", "Grid of moduli (used when --q/--D are absent)");
  auto* cst = job_cmd("constants", "report-constants", "Smallest constants for the omega and totient estimates");
  param_flag<uint64_t>(cst, params, "--q-max", "q_max", "Largest q scanned");
  auto* ss = job_cmd("short-sums", "report-short-sums", "Short sums and window sums against their bounds");
  list_flag(ss, "--q-list", "q_list", "Comma-separated moduli");
  auto* ds = job_cmd("double-sums", "report-double-sums", "Bilinear sums against the quartic and sextic bounds");
  list_flag(ds, "--q-list", "q_list", "Comma-separated moduli");
  auto* pipe = job_cmd("pipeline", "report-pipeline",
                       "T(chi) through recombination, the decomposition identity and dyadic boxes");
  for (const char* key : {"D", "l", "x", "r", "u1"})
    param_flag<uint64_t>(pipe, params, std::string("--") + key, key, std::string("Pipeline parameter ") + key);
  param_flag<uint64_t>(pipe, params, "--chi-index", "chi_index", "Character index (default: last)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }
  if (!action) {
    std::cerr << app.help();
    return kExitUsage;
  }
  try {
    g.threads = resolve_threads(g);
    return action();
  } catch (const Failure& f) {
    std::cerr << "charsum: " << f.message << '\n';
    return f.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "charsum: internal: " << e.what() << '\n';
    return kExitRuntime;
  }
}
