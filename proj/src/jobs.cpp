#include "jobs.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "arith.hpp"
#include "census.hpp"
#include "charsums.hpp"
#include "decomposition.hpp"
#include "dirichlet.hpp"
#include "errors.hpp"
#include "rng.hpp"

namespace charsum::jobs {
namespace {

using arith::u64;
using dirichlet::CharacterTable;
using dirichlet::UnitGroupBasis;
using nlohmann::json;
using Records = std::vector<BoundCheckRecord>;

// Typed access to job parameters with defaults; remembers which keys were
// read so leftovers can be reported as unknown.
class Params {
 public:
  explicit Params(const json& j) : j_(j.is_null() ? json::object() : j) {
    if (!j_.is_object()) fail(ErrorCode::invalid_argument, "job parameters must be a JSON object");
  }

  u64 count(const std::string& key, u64 fallback) {
    const json* v = find(key);
    if (v == nullptr) return record(key, fallback);
    if (!v->is_number_integer() || v->get<long long>() < 0)
      fail(ErrorCode::invalid_argument, "parameter '" + key + "' must be a nonnegative integer");
    return record(key, v->get<u64>());
  }

  double real(const std::string& key, double fallback) {
    const json* v = find(key);
    if (v == nullptr) return record(key, fallback);
    if (!v->is_number()) fail(ErrorCode::invalid_argument, "parameter '" + key + "' must be a number");
    return record(key, v->get<double>());
  }

  std::vector<u64> list(const std::string& key, std::vector<u64> fallback) {
    const json* v = find(key);
    if (v == nullptr) return record(key, std::move(fallback));
    if (!v->is_array()) fail(ErrorCode::invalid_argument, "parameter '" + key + "' must be a list of integers");
    std::vector<u64> out;
    for (const auto& e : *v) {
      if (!e.is_number_integer() || e.get<long long>() < 0)
        fail(ErrorCode::invalid_argument, "parameter '" + key + "' must be a list of nonnegative integers");
      out.push_back(e.get<u64>());
    }
    return record(key, std::move(out));
  }

  const json* raw(const std::string& key) {
    used_.insert(key);
    return find(key);
  }

  bool given(const std::string& key) const { return j_.contains(key); }

  void finish() const {
    for (const auto& [key, value] : j_.items())
      if (!used_.count(key)) fail(ErrorCode::invalid_argument, "unknown job parameter '" + key + "'");
  }

  const json& resolved() const { return resolved_; }

 private:
  const json* find(const std::string& key) {
    used_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }
  template <class T>
  T record(const std::string& key, T v) {
    resolved_[key] = v;
    return v;
  }

  json j_;
  std::set<std::string> used_;
  json resolved_ = json::object();
};

// Times one producer and stamps its records.
void timed(Records& out, bool timings, const std::function<Records()>& produce) {
  const auto t0 = std::chrono::steady_clock::now();
  Records batch = produce();
  if (timings) {
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    for (auto& r : batch) r.runtime_ms = ms;
  }
  out.insert(out.end(), std::make_move_iterator(batch.begin()), std::make_move_iterator(batch.end()));
}

void timed_one(Records& out, bool timings, const std::function<BoundCheckRecord()>& produce) {
  timed(out, timings, [&] { return Records{produce()}; });
}

u64 random_coprime(Rng& rng, u64 D) {
  for (;;) {
    const u64 l = rng.uniform(1, std::max<u64>(1, D - 1));
    if (std::gcd(l, D) == 1) return l;
  }
}

dirichlet::DirichletCharacter random_nonprincipal(Rng& rng, u64 D) {
  const auto basis = UnitGroupBasis::create(D);
  return dirichlet::character_from_index(basis, rng.uniform(1, basis->order() - 1));
}

// ---- identities ----------------------------------------------------------

Records identity_cases(u64 cases, u64 x_max, u64 D_max, const JobContext& ctx) {
  Rng rng(ctx.seed ^ 0x484244ULL);
  Records out;
  for (u64 c = 0; c < cases; ++c) {
    const u64 x = rng.uniform(2, x_max);
    const unsigned root = rng.uniform(0, 1) == 0 ? 3 : 2;
    const u64 u1 = decomposition::integer_root_ceil(x, root);
    const int r = static_cast<int>(rng.uniform(1, 3));
    const bool twisted = rng.uniform(0, 1) == 1;
    json p = {{"case", c}, {"x", x}, {"u1", u1}, {"u1_root", root}, {"r", r}};
    decomposition::Weight f;
    if (twisted) {
      const u64 D = rng.uniform(3, D_max);
      const auto chi = random_nonprincipal(rng, D);
      const u64 l = random_coprime(rng, D);
      f = decomposition::character_weight(CharacterTable(chi), l, x);
      p["weight"] = "character";
      p["D"] = D;
      p["chi_index"] = chi.index();
      p["l"] = l;
    } else {
      f = decomposition::constant_weight(x);
      p["weight"] = "one";
    }
    timed_one(out, ctx.timings, [&] {
      const auto d = decomposition::hb_decompose(f, x, u1, r);
      double residual = d.residual;
      if (ctx.corrupt_oracle) residual = std::abs(d.combined - (d.direct.value + 1.0));
      return assert_record("HB_DECOMP", p, residual, 1e-8 * static_cast<double>(x));
    });
  }
  return out;
}

Records orthogonality(u64 D_max, const JobContext& ctx) {
  std::vector<u64> Ds;
  for (u64 D = 1; D <= D_max; ++D) Ds.push_back(D);
  std::vector<Records> parts(Ds.size());
  ctx.par.for_each(Ds.size(), [&](std::size_t i) {
    const u64 D = Ds[i];
    const auto basis = UnitGroupBasis::create(D);
    const u64 phi = basis->order();
    // sum over n of chi(n) for each chi, and sum over chi of chi(n) for each n
    std::vector<CompensatedSum> col_re(D), col_im(D);
    double dev = 0;
    for (const auto& chi : dirichlet::enumerate_characters(basis)) {
      const CharacterTable t(chi);
      CompensatedSum re, im;
      for (u64 n = 0; n < D; ++n) {
        const auto v = t.at_residue(n);
        re.add(v.real());
        im.add(v.imag());
        col_re[n].add(v.real());
        col_im[n].add(v.imag());
      }
      const double expect = chi.is_principal() ? static_cast<double>(phi) : 0.0;
      dev = std::max(dev, std::abs(std::complex<double>(re.value() - expect, im.value())));
    }
    for (u64 n = 0; n < D; ++n) {
      const double expect = (D == 1 || n == 1 % D) ? static_cast<double>(phi) : 0.0;
      dev = std::max(dev, std::abs(std::complex<double>(col_re[n].value() - expect, col_im[n].value())));
    }
    parts[i].push_back(assert_record("ORTHOGONALITY", {{"D", D}, {"phi", phi}}, dev, 1e-9 * static_cast<double>(phi)));
  });
  Records out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

Records character_counts(u64 D_max, const JobContext& ctx) {
  std::vector<u64> mismatched(D_max + 1, 0);
  ctx.par.for_each(D_max, [&](std::size_t i) {
    const u64 D = i + 1;
    const auto basis = UnitGroupBasis::create(D);
    const auto chars = dirichlet::enumerate_characters(basis);
    bool ok = chars.size() == arith::euler_phi(arith::factor(D));
    for (std::size_t k = 0; ok && k < chars.size(); ++k) ok = chars[k].index() == k;
    mismatched[D] = !ok;
  });
  u64 bad = 0, first_bad = 0;
  for (u64 D = 1; D <= D_max; ++D)
    if (mismatched[D]) {
      if (bad == 0) first_bad = D;
      ++bad;
    }
  json p = {{"D_max", D_max}, {"mismatched_moduli", bad}};
  if (bad) p["first_mismatch"] = first_bad;
  return {assert_record("CHARACTER_COUNT", p, static_cast<double>(bad), 0.0, bad == 0)};
}

Records gauss_norms(u64 q_max, const JobContext& ctx) {
  std::vector<Records> parts(q_max + 1);
  ctx.par.for_each(q_max, [&](std::size_t i) {
    const u64 q = i + 1;
    const auto basis = UnitGroupBasis::create(q);
    double dev = 0;
    u64 primitive = 0;
    for (const auto& chi : dirichlet::enumerate_characters(basis)) {
      if (!dirichlet::is_primitive(chi)) continue;
      ++primitive;
      dev = std::max(dev, std::fabs(std::norm(dirichlet::gauss_sum(chi)) - static_cast<double>(q)));
    }
    if (primitive == 0) return;
    parts[q].push_back(assert_record("GAUSS_SUM_NORM", {{"q", q}, {"primitive_characters", primitive}}, dev,
                                     1e-6 * static_cast<double>(q)));
  });
  Records out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

Records coprime_counts(u64 q_max, u64 U_max, const JobContext& ctx) {
  std::vector<Records> parts(q_max);
  ctx.par.for_each(q_max, [&](std::size_t i) { parts[i].push_back(bounds::coprime_count_record(i + 1, U_max)); });
  Records out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

Records recombination_cases(u64 cases, u64 D_max, u64 x_max, const JobContext& ctx) {
  Rng rng(ctx.seed ^ 0x4d4f42ULL);
  Records out;
  for (u64 c = 0; c < cases; ++c) {
    const u64 D = rng.uniform(3, D_max);
    const auto chi = random_nonprincipal(rng, D);
    const u64 l = random_coprime(rng, D);
    const u64 x = rng.uniform(2, x_max);
    timed_one(out, ctx.timings, [&] {
      const auto rec = decomposition::mobius_recombination(chi, l, x, ctx.par);
      double residual = rec.residual;
      if (ctx.corrupt_oracle) residual = std::abs(rec.recombined - (rec.full.value + 1.0));
      return assert_record("MOBIUS_RECOMBINATION",
                           {{"case", c}, {"D", D}, {"chi_index", chi.index()}, {"conductor", rec.q}, {"q1", rec.q1},
                            {"l", l}, {"x", x}, {"terms", rec.terms.size()}},
                           residual, 1e-9 * rec.scale);
    });
  }
  return out;
}

Records verify_identities(Params& p, const JobContext& ctx) {
  const u64 cases = p.count("hb_cases", 50), x_max = p.count("hb_x_max", 10000), hb_D = p.count("hb_D_max", 1000);
  const u64 max_D = p.count("max_D", 500), count_D = p.count("count_D_max", 2000);
  const u64 gauss_q = p.count("gauss_q_max", 200);
  const u64 cq = p.count("coprime_q_max", 1000), cU = p.count("coprime_U_max", 1000);
  const u64 rcases = p.count("recombination_cases", 20), rD = p.count("recombination_D_max", 1000),
            rx = p.count("recombination_x_max", 10000);
  require(x_max >= 2 && hb_D >= 3 && rD >= 3 && rx >= 2, "x_max >= 2 and D_max >= 3");
  p.finish();
  Records out;
  auto append = [&](Records r) { out.insert(out.end(), r.begin(), r.end()); };
  append(identity_cases(cases, x_max, hb_D, ctx));
  timed(out, ctx.timings, [&] { return orthogonality(max_D, ctx); });
  timed(out, ctx.timings, [&] { return character_counts(count_D, ctx); });
  timed(out, ctx.timings, [&] { return gauss_norms(gauss_q, ctx); });
  timed(out, ctx.timings, [&] { return coprime_counts(cq, cU, ctx); });
  append(recombination_cases(rcases, rD, rx, ctx));
  return out;
}

// ---- census --------------------------------------------------------------

Records verify_census(Params& p, const JobContext& ctx) {
  std::vector<census::CongruenceParams> instances;
  if (const json* given = p.raw("instances")) {
    if (!given->is_array()) fail(ErrorCode::invalid_argument, "instances must be a list of instance objects");
    for (const auto& j : *given) instances.push_back(census::params_from_json(j));
    if (p.given("random")) fail(ErrorCode::invalid_argument, "give either instances or random, not both");
  } else {
    const u64 n = p.count("random", 500), q_max = p.count("q_max", 5000);
    require(q_max >= 7, "q_max >= 7");
    Rng rng(ctx.seed);
    for (u64 i = 0; i < n; ++i) instances.push_back(census::random_instance(rng, q_max));
  }
  p.finish();
  std::vector<Records> parts(instances.size());
  ctx.par.for_each(instances.size(), [&](std::size_t i) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto inst = census::congruence_census(instances[i], ctx.config.work_budget);
    parts[i] = bounds::census_checks(inst, ctx.config);
    if (ctx.corrupt_oracle) parts[i].front() = assert_record(parts[i].front().tag, parts[i].front().params, 1.0, 0.0);
    if (ctx.timings) {
      const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      for (auto& r : parts[i]) r.runtime_ms = ms;
    }
  });
  Records out;
  for (auto& r : parts) out.insert(out.end(), r.begin(), r.end());
  return out;
}

// ---- reports -------------------------------------------------------------

Records report_theorem(Params& p, const JobContext& ctx) {
  const auto moduli = p.list("D_list", default_theorem_moduli());
  bounds::TheoremOptions opts;
  opts.epsilon = p.real("eps", ctx.config.epsilon);
  opts.l_samples = static_cast<unsigned>(p.count("l_samples", 64));
  opts.seed = ctx.seed;
  opts.work_budget = ctx.config.work_budget;
  p.finish();
  Records out;
  for (u64 D : moduli) {
    const u64 one[] = {D};
    timed(out, ctx.timings, [&] { return bounds::theorem_report(one, opts, ctx.par, ctx.log); });
  }
  return out;
}

Records report_burgess(Params& p, const JobContext& ctx) {
  const u64 q_max = p.count("q_max", 300), Z_max = p.count("Z_max", 20), r = p.count("r", 2);
  require(q_max >= 3 && Z_max >= 1 && r >= 1, "q_max >= 3, Z_max >= 1, r >= 1");
  p.finish();
  Records out;
  for (u64 q = 3; q <= q_max; ++q) {
    if (!arith::is_prime(q)) continue;
    for (u64 Z = 1; Z <= Z_max; ++Z)
      timed_one(out, ctx.timings,
                [&] { return bounds::burgess_check_2r(q, Z, static_cast<unsigned>(r), ctx.config, ctx.par); });
  }
  return out;
}

Records report_sextic(Params& p, const JobContext& ctx) {
  const auto moduli = p.list("q_list", {67, 101, 127, 211, 293});
  const u64 Z_max = p.count("Z_max", 2);
  p.finish();
  Records out;
  for (u64 q : moduli)
    for (u64 Z = 1; Z <= Z_max; ++Z) {
      const u64 z6 = Z * Z * Z * Z * Z * Z;
      if (z6 > q) break;
      timed_one(out, ctx.timings, [&] { return bounds::sextic_check(q, Z, ctx.config, ctx.par); });
    }
  return out;
}

Records report_divisor_moments(Params& p, const JobContext& ctx) {
  const auto grid = p.list("x_grid", {10, 100, 1000, 10000, 100000});
  const u64 r_min = p.count("r_min", 2), r_max = p.count("r_max", 5);
  const u64 k_max = p.count("k_max", 2);
  p.finish();
  Records out;
  for (u64 r = r_min; r <= r_max; ++r)
    for (u64 k = 1; k <= k_max; ++k)
      timed(out, ctx.timings, [&] {
        return bounds::divisor_moment_check(grid, static_cast<unsigned>(r), static_cast<unsigned>(k));
      });
  return out;
}

Records report_smooth(Params& p, const JobContext& ctx) {
  const auto xs = p.list("x_grid", {1000, 10000, 100000, 1000000});
  const auto bs = p.list("b_list", {1, 6, 30, 210});
  const u64 z_points = p.count("z_points", 3);
  require(z_points >= 1, "z_points >= 1");
  p.finish();
  Records out;
  for (u64 x : xs) {
    const double lo = std::ceil(std::log(static_cast<double>(x)));
    const double hi = std::floor(std::pow(static_cast<double>(x), 1.0 / M_E));
    if (hi < lo) {
      if (ctx.log) ctx.log("smooth report: no admissible z for x = " + std::to_string(x));
      continue;
    }
    std::set<u64> zs;
    for (u64 i = 0; i < z_points; ++i)
      zs.insert(static_cast<u64>(z_points == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (z_points - 1)));
    for (u64 z : zs)
      for (u64 b : bs)
        timed_one(out, ctx.timings, [&] { return bounds::smooth_bound_check(x, z, b); });
  }
  return out;
}

Records report_tail(Params& p, const JobContext& ctx) {
  Records out;
  if (p.given("q") || p.given("D")) {
    const u64 q = p.count("q", 0), D = p.count("D", 0);
    p.finish();
    timed_one(out, ctx.timings, [&] { return bounds::big_divisor_tail_check(q, D); });
    return out;
  }
  const auto Ds = p.list("D_list", {2310, 30030, 510510, 9699690, 223092870, 100000, 99991});
  p.finish();
  for (u64 D : Ds)
    for (u64 q : arith::divisors(arith::factor(D)))
      if (q == D || (q > 1 && D / q <= 3))
        timed_one(out, ctx.timings, [&] { return bounds::big_divisor_tail_check(q, D); });
  return out;
}

Records report_constants(Params& p, const JobContext& ctx) {
  const u64 q_max = p.count("q_max", 100000);
  p.finish();
  Records out;
  timed(out, ctx.timings, [&] { return bounds::constants_report(q_max, ctx.config); });
  return out;
}

Records report_short_sums(Params& p, const JobContext& ctx) {
  const auto moduli = p.list("q_list", {101, 1009, 10007, 30011, 99991});
  p.finish();
  Records out;
  timed(out, ctx.timings, [&] { return bounds::short_sum_report(moduli, ctx.config, ctx.seed, ctx.par); });
  return out;
}

Records report_double_sums(Params& p, const JobContext& ctx) {
  const auto moduli = p.list("q_list", {1009, 10007, 99991});
  p.finish();
  Records out;
  timed(out, ctx.timings, [&] { return bounds::double_sum_report(moduli, ctx.config, ctx.seed, ctx.par); });
  return out;
}

Records report_pipeline(Params& p, const JobContext& ctx) {
  const u64 D = p.count("D", 105), x = p.count("x", 5000), l = p.count("l", 1);
  const auto basis = UnitGroupBasis::create(D);
  const u64 index = p.count("chi_index", basis->order() - 1);
  require(index < basis->order(), "chi_index < phi(D)");
  decomposition::PipelineOptions opts;
  opts.r = static_cast<int>(p.count("r", 3));
  opts.u1 = p.count("u1", 0);
  p.finish();
  const auto chi = dirichlet::character_from_index(basis, index);
  Records out;
  timed(out, ctx.timings, [&] {
    const auto res = decomposition::shifted_prime_pipeline(chi, l, x, opts, ctx.par);
    const json base = {{"D", D}, {"chi_index", index}, {"l", l}, {"x", x}, {"r", opts.r}};
    Records r;
    for (const auto& t : res.terms) {
      json tp = base;
      tp["nu"] = t.nu;
      tp["u1"] = t.identity.u1;
      r.push_back(assert_record("HB_DECOMP", tp, t.identity.residual, 1e-8 * static_cast<double>(x)));
      r.push_back(assert_record("DYADIC_SPLIT", tp, t.split_residual, 1e-8 * static_cast<double>(x)));
    }
    return r;
  });
  timed(out, ctx.timings, [&] { return bounds::restricted_report(chi, l, x, ctx.par); });
  return out;
}

using Runner = Records (*)(Params&, const JobContext&);

const std::map<std::string, Runner>& registry() {
  static const std::map<std::string, Runner> jobs = {
      {"verify-identities", verify_identities},
      {"verify-census", verify_census},
      {"report-theorem", report_theorem},
      {"report-burgess", report_burgess},
      {"report-sextic", report_sextic},
      {"report-divisor-moments", report_divisor_moments},
      {"report-smooth", report_smooth},
      {"report-tail", report_tail},
      {"report-constants", report_constants},
      {"report-short-sums", report_short_sums},
      {"report-double-sums", report_double_sums},
      {"report-pipeline", report_pipeline},
  };
  return jobs;
}

}  // namespace

std::size_t JobResult::assert_failures() const {
  return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const BoundCheckRecord& r) {
    return r.mode == CheckMode::assert_check && !r.passed;
  }));
}

std::vector<std::string> job_names() {
  std::vector<std::string> names;
  for (const auto& [name, runner] : registry()) names.push_back(name);
  return names;
}

std::vector<u64> default_theorem_moduli() {
  return {105,   210,   997,   1001,  2310,  4096,  5005,  7919,  9973,  10007, 12155, 17017,
          30030, 32749, 46189, 50021, 65537, 77077, 81225, 96577, 99991, 100000};
}

JobResult run_job(const std::string& name, const json& params, const JobContext& ctx) {
  const auto it = registry().find(name);
  if (it == registry().end()) fail(ErrorCode::invalid_argument, "unknown job '" + name + "'");
  ctx.config.validate();
  Params p(params);
  JobResult result;
  result.records = it->second(p, ctx);
  p.finish();
  result.header = {{"job", name}, {"params", p.resolved()}, {"config", ctx.config.to_json()}, {"seed", ctx.seed},
                   {"block_size", ctx.par.block_size}};
  return result;
}

}  // namespace charsum::jobs
