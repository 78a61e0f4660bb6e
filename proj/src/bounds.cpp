#include "bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "charsums.hpp"
#include "decomposition.hpp"
#include "dirichlet.hpp"
#include "errors.hpp"
#include "rng.hpp"

namespace charsum::bounds {
namespace {

using arith::u128;
using dirichlet::CharacterTable;
using dirichlet::DirichletCharacter;
using dirichlet::UnitGroupBasis;
using nlohmann::json;

double dbl(u64 v) { return static_cast<double>(v); }

double log_of(u64 v) { return std::log(dbl(v)); }

// Primitive characters mod q in enumeration order (principal excluded unless q = 1).
std::vector<DirichletCharacter> primitive_characters(u64 q) {
  std::vector<DirichletCharacter> out;
  for (auto& chi : dirichlet::enumerate_characters(UnitGroupBasis::create(q)))
    if (dirichlet::is_primitive(chi)) out.push_back(std::move(chi));
  return out;
}

DirichletCharacter first_primitive(u64 q) {
  const auto basis = UnitGroupBasis::create(q);
  for (u64 i = q == 1 ? 0 : 1; i < basis->order(); ++i) {
    auto chi = dirichlet::character_from_index(basis, i);
    if (dirichlet::is_primitive(chi)) return chi;
  }
  fail(ErrorCode::precondition, "no primitive character modulo " + std::to_string(q));
}

json character_json(const DirichletCharacter& chi) {
  return {{"modulus", chi.modulus()}, {"index", chi.index()}};
}

u64 splitmix(u64 z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

void BoundConfig::validate() const {
  if (!(delta > 0.0 && delta <= 1.0)) fail(ErrorCode::invalid_argument, "delta must lie in (0, 1]");
  if (!(epsilon > 0.0 && epsilon < 1.0 / 6.0)) fail(ErrorCode::invalid_argument, "epsilon must lie in (0, 1/6)");
  if (!(c_omega > 0.0) || !(c_phi > 0.0)) fail(ErrorCode::invalid_argument, "c_omega and c_phi must be positive");
  if (!(theta > 0.0 && theta < 1.0)) fail(ErrorCode::invalid_argument, "theta must lie in (0, 1)");
  if (work_budget == 0) fail(ErrorCode::invalid_argument, "work_budget must be positive");
}

json BoundConfig::to_json() const {
  return {{"delta", delta},     {"epsilon", epsilon}, {"c_omega", c_omega},
          {"c_phi", c_phi},     {"theta", theta},     {"work_budget", work_budget}};
}

BoundConfig BoundConfig::from_json(const json& j) {
  if (!j.is_object()) fail(ErrorCode::invalid_argument, "bound configuration must be a JSON object");
  BoundConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "work_budget") {
      if (!value.is_number_integer() || value.get<long long>() <= 0)
        fail(ErrorCode::invalid_argument, "work_budget must be a positive integer");
      c.work_budget = value.get<u64>();
      continue;
    }
    double* slot = key == "delta"     ? &c.delta
                   : key == "epsilon" ? &c.epsilon
                   : key == "c_omega" ? &c.c_omega
                   : key == "c_phi"   ? &c.c_phi
                   : key == "theta"   ? &c.theta
                                      : nullptr;
    if (slot == nullptr) fail(ErrorCode::invalid_argument, "unknown configuration key '" + key + "'");
    if (!value.is_number()) fail(ErrorCode::invalid_argument, "configuration key '" + key + "' must be a number");
    *slot = value.get<double>();
  }
  c.validate();
  return c;
}

double theorem_rhs_from_log(double log_D, double x) { return x * std::exp(-0.6 * std::sqrt(log_D)); }

double theorem_rhs(u64 D, double x) {
  require(D >= 3, "D >= 3");
  require(x >= 2, "x >= 2");
  return theorem_rhs_from_log(log_of(D), x);
}

double census_rhs(const census::CongruenceInstance& inst, double delta) {
  const auto& p = inst.params;
  const double NY = dbl(p.N) * dbl(p.Y), Y2 = dbl(p.Y) * dbl(p.Y), d = dbl(p.d);
  return NY + 2 * Y2 / d + 2 * Y2 * dbl(inst.rho) / d + 2 * std::pow(NY, 1 + delta) / d;
}

double smooth_rhs(u64 x, u64 z, const arith::FactoredInteger& b, double theta) {
  const double alpha = log_of(z) / log_of(x);
  const double inv = 1.0 / alpha;
  double prod = 1.0;
  for (const auto& pp : b.factors()) prod *= 1.0 - 1.0 / dbl(pp.prime);
  return dbl(x) * prod *
         std::exp(-inv * (std::log(inv) + std::log(std::log(inv))) + inv + 2 * theta / (alpha * std::log(inv)));
}

double burgess_rhs(u64 q, u64 Z, unsigned r, double delta) {
  return std::pow(dbl(Z), r) * dbl(q) + std::pow(dbl(Z), 2.0 * r) * std::pow(dbl(q), 0.5 + delta);
}

double sextic_rhs(u64 q, u64 Z, double delta) { return std::pow(dbl(Z), 3) * std::pow(dbl(q), 1 + delta); }

double short_sum_rhs(u64 q, u64 N, u64 d, double delta) {
  return std::pow(dbl(N), 2.0 / 3) * std::pow(dbl(q), 1.0 / 9 + delta / 2) * std::pow(dbl(d), 2.0 / 3);
}

double sy_sum_rhs(u64 D, u64 y, u64 nu) { return dbl(y) / dbl(nu) * std::exp(-0.7 * std::sqrt(log_of(D))); }

double restricted_rhs(u64 x, u64 q, u64 nu) {
  const double X = dbl(x), Q = dbl(q), V = dbl(nu);
  const double inner = std::sqrt(1 / (Q * V * V) + Q / X) + std::pow(X, -1.0 / 6) / std::sqrt(V) +
                       std::pow(X, -1.0 / 3) * std::pow(Q, 1.0 / 6) * std::pow(V, -1.0 / 3);
  return 10 * X * std::pow(std::log(X), 5) * inner * dbl(arith::tau_r(q, 2));
}

double double_sum_rhs(u64 D, u64 q, u64 M, u64 N, double B, double c1, double c2, double delta) {
  const double L = log_of(D);
  return B *
         (std::pow(dbl(M), 0.75) * std::sqrt(dbl(N)) * std::pow(dbl(q), 0.25) +
          std::pow(dbl(M), 0.75) * dbl(N) * std::pow(dbl(q), 0.125 + delta / 4)) *
         std::pow(L, (2 * c1 + c2) / 4 + 1);
}

double double_sum_sextic_rhs(u64 D, u64 q, u64 M, u64 N, double B, double c1, double c2, double delta) {
  const double L = log_of(D);
  return B * std::pow(dbl(M), 5.0 / 6) * std::sqrt(dbl(N)) * std::pow(dbl(q), 1.0 / 6 + delta / 6) *
         std::pow(L, (4 * c1 + c2) / 6 + 1);
}

TailSum big_divisor_tail(u64 q, u64 D) {
  require(q >= 1 && D >= 2 && D % q == 0, "q | D, D >= 2");
  TailSum t;
  t.threshold = std::exp(std::sqrt(2 * log_of(D)));
  t.rhs = std::exp(-0.7 * std::sqrt(log_of(D)));
  CompensatedSum s;
  for (u64 d : arith::squarefree_divisors(arith::factor(q))) {
    if (dbl(d) <= t.threshold) continue;
    s.add(1.0 / dbl(d));
    ++t.terms;
  }
  t.lhs = s.value();
  return t;
}

BoundCheckRecord big_divisor_tail_check(u64 q, u64 D) {
  const auto t = big_divisor_tail(q, D);
  return monitor_record("DIVISOR_TAIL", {{"q", q}, {"D", D}, {"threshold", t.threshold}, {"terms", t.terms}}, t.lhs,
                        t.rhs);
}

BoundCheckRecord smooth_bound_check(u64 x, u64 z, u64 b) {
  require(x >= 3 && x <= (u64{1} << 32), "3 <= x <= 2^32");
  require(b >= 1 && b <= x, "1 <= b <= x");
  require(dbl(z) >= std::log(dbl(x)), "ln x <= z");
  require(dbl(z) <= std::pow(dbl(x), 1.0 / M_E), "z <= x^(1/e)");
  const auto fb = arith::factor(b);
  const u64 count = arith::smooth_count(x, z, fb);
  return monitor_record("SMOOTH_COUNT",
                        {{"x", x}, {"z", z}, {"b", b}, {"alpha", log_of(z) / log_of(x)}, {"theta", 1.0}},
                        dbl(count), smooth_rhs(x, z, fb, 1.0));
}

std::vector<BoundCheckRecord> divisor_moment_check(std::span<const u64> x_grid, unsigned r, unsigned k) {
  require(r >= 2 && r <= 5, "r in 2..5");
  require(k == 1 || k == 2, "k in {1, 2}");
  require(!x_grid.empty(), "x grid must be nonempty");
  std::vector<u64> grid(x_grid.begin(), x_grid.end());
  std::sort(grid.begin(), grid.end());
  require(grid.front() >= 2 && grid.back() <= 100'000'000, "2 <= x <= 1e8");
  const auto tau = arith::tau_r_table(grid.back(), r);
  std::vector<BoundCheckRecord> out;
  u128 sum = 0;
  u64 n = 0;
  const double exponent = std::pow(static_cast<double>(r), static_cast<double>(k)) - 1;
  for (u64 x : grid) {
    for (; n < x;) {
      ++n;
      sum += k == 1 ? static_cast<u128>(tau[n]) : static_cast<u128>(tau[n]) * tau[n];
    }
    out.push_back(monitor_record("DIVISOR_MOMENT", {{"x", x}, {"r", r}, {"k", k}}, static_cast<double>(sum),
                                 dbl(x) * std::pow(std::log(dbl(x)), exponent)));
  }
  return out;
}

BoundCheckRecord divisor_moment_check(u64 x, unsigned r, unsigned k) {
  const u64 grid[] = {x};
  return divisor_moment_check(grid, r, k).front();
}

BoundCheckRecord burgess_check_2r(u64 q, u64 Z, unsigned r, const BoundConfig& config, const Parallelism& par) {
  require(q >= 2 && Z >= 1 && r >= 1, "q >= 2, Z >= 1, r >= 1");
  const auto fq = arith::factor(q);
  require(r == 2 || arith::mobius(fq) != 0, "q square-free or r = 2");
  const auto chars = primitive_characters(q);
  require(!chars.empty(), "q admits a primitive character");
  if (static_cast<u128>(chars.size()) * q * Z > config.work_budget)
    fail(ErrorCode::budget_exceeded, "moment sweep exceeds the work budget");
  std::vector<double> moments(chars.size());
  const Parallelism inner{nullptr, par.block_size};
  par.for_each(chars.size(), [&](std::size_t i) {
    moments[i] = sums::burgess_moment_2r(CharacterTable(chars[i]), Z, r, inner);
  });
  const auto best = static_cast<std::size_t>(std::max_element(moments.begin(), moments.end()) - moments.begin());
  return monitor_record("BURGESS_2R",
                        {{"q", q}, {"Z", Z}, {"r", r}, {"delta", config.delta}, {"characters", chars.size()},
                         {"chi", character_json(chars[best])}},
                        moments[best], burgess_rhs(q, Z, r, config.delta));
}

BoundCheckRecord sextic_check(u64 q, u64 Z, const BoundConfig& config, const Parallelism& par) {
  const auto chars = primitive_characters(q);
  require(!chars.empty(), "q admits a primitive character");
  const u128 z6 = static_cast<u128>(Z) * Z * Z * Z * Z * Z;
  if (z6 * q * chars.size() > config.work_budget)
    fail(ErrorCode::budget_exceeded, "sextic sweep exceeds the work budget");
  std::vector<double> values(chars.size());
  const Parallelism inner{nullptr, par.block_size};
  par.for_each(chars.size(), [&](std::size_t i) {
    values[i] = sums::burgess_sextic(CharacterTable(chars[i]), Z, config.work_budget, inner);
  });
  const auto best = static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
  return monitor_record("BURGESS_SEXTIC",
                        {{"q", q}, {"Z", Z}, {"delta", config.delta}, {"characters", chars.size()},
                         {"chi", character_json(chars[best])}},
                        values[best], sextic_rhs(q, Z, config.delta));
}

std::vector<BoundCheckRecord> census_checks(const census::CongruenceInstance& inst, const BoundConfig& config) {
  const auto& p = inst.params;
  const json params = census::to_json(inst);
  const double d = dbl(p.d), Y2 = dbl(p.Y) * dbl(p.Y);
  std::vector<BoundCheckRecord> out;
  const double defect = std::fabs(dbl(inst.K) - dbl(inst.diagonal) - 2 * dbl(inst.kappa())) +
                        dbl(inst.unclassified) + std::fabs(dbl(inst.upper) - dbl(inst.kappa()));
  out.push_back(assert_record("CENSUS_PARTITION", params, defect, 0.0, inst.partition_exhaustive()));
  out.push_back(assert_record("CENSUS_DIAGONAL", params, dbl(inst.diagonal), dbl(p.N) * dbl(p.Y), inst.diagonal_bound()));
  out.push_back(assert_record("CENSUS_KAPPA1", params, dbl(inst.kappa1), 2 * Y2 / d, inst.kappa1_bound()));
  if (std::gcd(p.d, p.q / p.d) > 1)
    out.push_back(assert_record("CENSUS_KAPPA1_VANISHES", params, dbl(inst.kappa1), 0.0, inst.kappa1 == 0));
  out.push_back(assert_record("CENSUS_KAPPA2", params, dbl(inst.kappa2), 2 * Y2 * dbl(inst.rho) / d, inst.kappa2_bound()));
  out.push_back(assert_record("CENSUS_KAPPA3", params, dbl(inst.kappa3),
                              dbl(p.N) * (dbl(p.Y) + d) / d * dbl(inst.tau_max), inst.kappa3_bound()));
  out.push_back(monitor_record("CENSUS_TOTAL", params, dbl(inst.K), census_rhs(inst, config.delta)));
  return out;
}

BoundCheckRecord coprime_count_record(u64 q, u64 U_max) {
  require(q >= 1 && U_max >= 1, "q, U >= 1");
  const auto fq = arith::factor(q);
  u64 count = 0;
  bool holds = true;
  double worst = -1.0;
  u64 worst_u = 1;
  sums::CoprimeCount worst_check;
  for (u64 U = 1; U <= U_max; ++U) {
    count += std::gcd(U, q) == 1;
    const auto c = sums::coprime_count_check(fq, U, count);
    holds = holds && c.holds;
    if (c.deviation() > worst) {
      worst = c.deviation();
      worst_u = U;
      worst_check = c;
    }
  }
  return assert_record("COPRIME_COUNT",
                       {{"q", q},
                        {"U_max", U_max},
                        {"worst_U", worst_u},
                        {"deviation", {worst_check.deviation_numerator, worst_check.deviation_denominator}}},
                       worst, dbl(worst_check.bound), holds);
}

std::vector<BoundCheckRecord> theorem_report(std::span<const u64> moduli, const TheoremOptions& options,
                                             const Parallelism& par, const Log& log) {
  require(options.epsilon > 0 && options.epsilon < 1.0 / 6.0, "0 < epsilon < 1/6");
  require(options.l_samples >= 1, "at least one sampled l");
  std::vector<BoundCheckRecord> out;
  for (u64 D : moduli) {
    require(D >= 3, "D >= 3");
    const u64 x = static_cast<u64>(std::ceil(std::pow(dbl(D), 5.0 / 6.0 + options.epsilon)));
    const auto basis = UnitGroupBasis::create(D);
    const u64 phi = basis->order();

    std::vector<u64> ls;
    const bool sampled = phi > options.l_samples;
    if (!sampled) {
      for (u64 l = 1; l <= D; ++l)
        if (std::gcd(l, D) == 1) ls.push_back(l);
    } else {
      Rng rng(options.seed ^ splitmix(D));
      std::set<u64> chosen;
      while (chosen.size() < options.l_samples) {
        const u64 l = rng.uniform(1, D - 1);
        if (std::gcd(l, D) == 1) chosen.insert(l);
      }
      ls.assign(chosen.begin(), chosen.end());
    }
    const double work = dbl(ls.size()) * (dbl(x) + 5.0 * dbl(phi) * std::log2(dbl(phi) + 1)) + dbl(phi) * 16;
    if (work > dbl(options.work_budget))
      fail(ErrorCode::budget_exceeded, "theorem report for D = " + std::to_string(D) + " exceeds the work budget");

    const double threshold = std::exp(std::sqrt(2 * log_of(D)));
    std::vector<u64> cond(phi, 1);
    u64 passing = 0;
    for (u64 i = 1; i < phi; ++i) {
      cond[i] = dirichlet::conductor(dirichlet::character_from_index(basis, i)).value();
      passing += dbl(cond[i]) > threshold;
    }
    if (passing == 0) {
      if (log) log("theorem report: skipping D = " + std::to_string(D) + ", no character has conductor above " +
                   std::to_string(threshold));
      continue;
    }

    const auto lambda = arith::mangoldt_sieve(1, x);
    // Maxima are taken over FFT magnitudes with a small slack so that exact
    // ties (conjugate characters) and rounding-level differences always
    // resolve to the lowest (l, index); the winners are then re-evaluated
    // directly.
    struct Best {
      double filtered = -1, unfiltered = -1;
      u64 filtered_index = 0, unfiltered_index = 0;
    };
    std::vector<Best> per_l(ls.size());
    par.for_each(ls.size(), [&](std::size_t j) {
      const auto all = sums::all_shifted_prime_sums(*basis, ls[j], x, lambda);
      Best b;
      for (u64 i = 1; i < phi; ++i) {
        const double m = std::abs(all[i]);
        if (m > b.unfiltered + 1e-9 * std::max(1.0, b.unfiltered)) b.unfiltered = m, b.unfiltered_index = i;
        if (dbl(cond[i]) > threshold && m > b.filtered + 1e-9 * std::max(1.0, b.filtered))
          b.filtered = m, b.filtered_index = i;
      }
      per_l[j] = b;
    });
    std::size_t jf = 0, ju = 0;
    for (std::size_t j = 1; j < ls.size(); ++j) {
      if (per_l[j].filtered > per_l[jf].filtered + 1e-9 * std::max(1.0, per_l[jf].filtered)) jf = j;
      if (per_l[j].unfiltered > per_l[ju].unfiltered + 1e-9 * std::max(1.0, per_l[ju].unfiltered)) ju = j;
    }
    const Parallelism serial{nullptr, par.block_size};
    const auto exact = [&](u64 index, u64 l) {
      return sums::shifted_prime_sum(CharacterTable(dirichlet::character_from_index(basis, index)), l, x, lambda,
                                     serial)
          .magnitude();
    };
    const double f_mag = exact(per_l[jf].filtered_index, ls[jf]);
    const double u_mag = exact(per_l[ju].unfiltered_index, ls[ju]);
    const double rhs = theorem_rhs(D, dbl(x));
    json params = {{"D", D},
                   {"x", x},
                   {"epsilon", options.epsilon},
                   {"l_count", ls.size()},
                   {"l_sampled", sampled},
                   {"seed", options.seed},
                   {"conductor_threshold", threshold},
                   {"characters_passing_filter", passing},
                   {"chi_index", per_l[jf].filtered_index},
                   {"l", ls[jf]},
                   {"conductor", cond[per_l[jf].filtered_index]},
                   {"unfiltered",
                    {{"lhs", u_mag},
                     {"ratio", u_mag / rhs},
                     {"chi_index", per_l[ju].unfiltered_index},
                     {"l", ls[ju]},
                     {"conductor", cond[per_l[ju].unfiltered_index]}}}};
    out.push_back(monitor_record("THEOREM_T", std::move(params), f_mag, rhs));
  }
  return out;
}

std::vector<BoundCheckRecord> constants_report(u64 q_max, const BoundConfig& config) {
  require(q_max >= 3 && q_max <= 100'000'000, "3 <= q_max <= 1e8");
  const auto spf = arith::smallest_prime_factor_table(q_max);
  double omega_need = 0, upper_need = 0, lower_room = INFINITY;
  u64 omega_at = 3, upper_at = 3, lower_at = 3;
  for (u64 q = 3; q <= q_max; ++q) {
    unsigned w = 0;
    double ratio = 1.0;  // phi(q)/q
    for (u64 m = q; m > 1;) {
      const u64 p = spf[m];
      ++w;
      ratio *= 1.0 - 1.0 / dbl(p);
      while (m % p == 0) m /= p;
    }
    const double Lq = log_of(q), lnLq = std::log(Lq);
    const double w_need = w * lnLq / Lq;
    if (w_need > omega_need) omega_need = w_need, omega_at = q;
    const double c = ratio * lnLq / 2;
    if (c > upper_need) upper_need = c, upper_at = q;
    if (c < lower_room) lower_room = c, lower_at = q;
  }
  std::vector<BoundCheckRecord> out;
  out.push_back(monitor_record("PRIME_DIVISOR_COUNT_CONSTANT",
                               {{"q_max", q_max}, {"argmax_q", omega_at}, {"configured", config.c_omega},
                                {"holds", omega_need <= config.c_omega}},
                               omega_need, config.c_omega));
  // phi(q)/(2q) <= c / ln ln q needs c >= max; the reverse inequality needs c <= min.
  out.push_back(monitor_record("TOTIENT_RATIO_CONSTANT",
                               {{"q_max", q_max}, {"direction", "upper"}, {"argmax_q", upper_at},
                                {"configured", config.c_phi}, {"holds", upper_need <= config.c_phi}},
                               upper_need, config.c_phi));
  out.push_back(monitor_record("TOTIENT_RATIO_CONSTANT",
                               {{"q_max", q_max}, {"direction", "lower"}, {"argmin_q", lower_at},
                                {"required_at_most", lower_room}, {"configured", config.c_phi},
                                {"holds", config.c_phi <= lower_room}},
                               config.c_phi, lower_room));
  return out;
}

std::vector<BoundCheckRecord> short_sum_report(std::span<const u64> moduli, const BoundConfig& config, u64 seed,
                                               const Parallelism& par) {
  std::vector<BoundCheckRecord> out;
  Rng rng(seed);
  for (u64 q : moduli) {
    require(q >= 3, "q >= 3");
    const auto chi = first_primitive(q);
    const CharacterTable t(chi);
    const double d_cap = std::exp(std::sqrt(2 * log_of(q)));
    for (u64 d = 1; d <= 3 && dbl(d) <= d_cap; ++d) {
      const double n_cap = std::pow(dbl(q), 7.0 / 12) / std::sqrt(dbl(d));
      const u64 n_max = static_cast<u64>(std::ceil(n_cap)) - 1;
      if (n_max < 1) continue;
      for (u64 N : {std::max<u64>(1, n_max / 4), std::max<u64>(1, n_max / 2), n_max}) {
        const u64 k = 1;
        u64 eta;
        do eta = rng.uniform(1, q - 1); while (std::gcd(eta, q) != 1);
        const auto M = static_cast<arith::i64>(rng.uniform(N, N + q));
        const auto s = sums::short_sum(t, M, N, d, k, eta, par);
        out.push_back(monitor_record("SHORT_S",
                                     {{"q", q}, {"chi", character_json(chi)}, {"M", M}, {"N", N}, {"d", d},
                                      {"k", k}, {"eta", eta}, {"delta", config.delta}},
                                     s.magnitude(), short_sum_rhs(q, N, d, config.delta)));
      }
    }
    const u64 y_min = static_cast<u64>(std::ceil(std::pow(dbl(q), 1.0 / 3 + 1.6 * config.delta)));
    for (u64 nu = 1; nu <= 3; ++nu) {
      if (std::gcd(nu, q) != 1) continue;
      for (u64 y : {y_min, static_cast<u64>(std::sqrt(dbl(q))), q}) {
        if (y < y_min || y > q) continue;
        u64 eta;
        do eta = rng.uniform(1, q - 1); while (std::gcd(eta, q) != 1);
        const auto u = static_cast<arith::i64>(rng.uniform(y, y + 2 * q));
        const auto s = sums::sy_sum(t, u, static_cast<arith::i64>(y), eta, nu, par);
        out.push_back(monitor_record("SHORT_SY",
                                     {{"q", q}, {"D", q}, {"chi", character_json(chi)}, {"u", u}, {"y", y},
                                      {"eta", eta}, {"nu", nu}},
                                     s.magnitude(), sy_sum_rhs(q, y, nu)));
      }
    }
  }
  return out;
}

std::vector<BoundCheckRecord> double_sum_report(std::span<const u64> moduli, const BoundConfig& config, u64 seed,
                                                const Parallelism& par) {
  std::vector<BoundCheckRecord> out;
  for (u64 q : moduli) {
    require(q >= 3, "q >= 3");
    const auto chi = first_primitive(q);
    const CharacterTable t(chi);
    const u64 x = q;
    struct Family {
      const char* name;
      double c1, c2;
    };
    for (const Family fam : {Family{"mobius", 0, 0}, Family{"tau5_signed", 4, 24}}) {
      const auto a = sums::coefficients::by_name(fam.name, seed);
      const auto b = sums::coefficients::one();
      // quartic averaging: N near q^(1/4)
      const u64 Nq = std::max<u64>(1, static_cast<u64>(std::pow(dbl(q), 0.25)));
      const u64 Mq = std::max<u64>(1, x / (2 * Nq));
      const sums::BilinearRange rq{Mq, Nq, Nq, 1, 1, x};
      const auto wq = sums::double_sum(t, a, b, rq, par);
      out.push_back(monitor_record("DOUBLE_W",
                                   {{"q", q}, {"D", q}, {"chi", character_json(chi)}, {"variant", "quartic"},
                                    {"a", fam.name}, {"b", "one"}, {"M", Mq}, {"N", Nq}, {"U", Nq}, {"nu", 1},
                                    {"l", 1}, {"x", x}, {"c1", fam.c1}, {"c2", fam.c2}, {"B", 1.0}},
                                   wq.magnitude(), double_sum_rhs(q, q, Mq, Nq, 1.0, fam.c1, fam.c2, config.delta)));
      // sextic averaging: 2N <= q^(1/6)
      const u64 Ns = static_cast<u64>(std::pow(dbl(q), 1.0 / 6) / 2);
      if (Ns >= 1) {
        const u64 Ms = std::max<u64>(1, x / (2 * Ns));
        const sums::BilinearRange rs{Ms, Ns, Ns, 1, 1, x};
        const auto ws = sums::double_sum(t, a, b, rs, par);
        out.push_back(monitor_record(
            "DOUBLE_W",
            {{"q", q}, {"D", q}, {"chi", character_json(chi)}, {"variant", "sextic"}, {"a", fam.name}, {"b", "one"},
             {"M", Ms}, {"N", Ns}, {"U", Ns}, {"nu", 1}, {"l", 1}, {"x", x}, {"c1", fam.c1}, {"c2", fam.c2}, {"B", 1.0}},
            ws.magnitude(), double_sum_sextic_rhs(q, q, Ms, Ns, 1.0, fam.c1, fam.c2, config.delta)));
      }
    }
  }
  return out;
}

std::vector<BoundCheckRecord> restricted_report(const DirichletCharacter& chi, u64 l, u64 x, const Parallelism& par) {
  require(x >= 2, "x >= 2");
  const auto rec = decomposition::mobius_recombination(chi, l, x, par);
  std::vector<BoundCheckRecord> out;
  const json base = {{"D", rec.D}, {"q", rec.q}, {"q1", rec.q1}, {"chi_index", chi.index()}, {"l", l}, {"x", x}};
  json p = base;
  p["terms"] = rec.terms.size();
  out.push_back(assert_record("MOBIUS_RECOMBINATION", p, rec.residual, 1e-9 * rec.scale));
  for (const auto& term : rec.terms) {
    if (dbl(term.nu) > rec.nu_threshold) continue;
    json tp = base;
    tp["nu"] = term.nu;
    out.push_back(monitor_record("T_RESTRICTED", tp, term.value.magnitude(), restricted_rhs(x, rec.q, term.nu)));
  }
  json lp = base;
  lp["nu_threshold"] = rec.nu_threshold;
  const double L = log_of(rec.D);
  out.push_back(monitor_record("T_RESTRICTED_LARGE_NU", lp, std::abs(rec.large_nu_part),
                               dbl(x) * L * std::exp(-0.7 * std::sqrt(L))));
  return out;
}

}  // namespace charsum::bounds
