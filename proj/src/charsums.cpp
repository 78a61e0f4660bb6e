#include "charsums.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

#include "errors.hpp"

namespace charsum::sums {
namespace {

using arith::u128;

const arith::MangoldtTable& ensure_covered(const arith::MangoldtTable& lambda, u64 x) {
  require(x == 0 || lambda.covers(1, x), "Lambda table must cover [1, x]");
  return lambda;
}

void add_root(SumAccumulator& acc, const CharacterTable& chi, i64 argument, double weight) {
  const auto k = chi.log_at(argument);
  if (k == CharacterTable::kZero) return;
  acc.add(weight * chi.root(k));
}

u64 splitmix64(u64 z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

SumValue shifted_prime_sum(const CharacterTable& chi, u64 l, u64 x, const arith::MangoldtTable& lambda,
                           const Parallelism& par) {
  const u64 D = chi.modulus();
  if (std::gcd(l, D) != 1) fail(ErrorCode::not_coprime, "shifted sum needs gcd(l, D) = 1");
  ensure_covered(lambda, x);
  const i64 shift = static_cast<i64>(l % D);
  return blocked_sum(1, static_cast<i64>(x), par, [&](i64 lo, i64 hi, SumAccumulator& acc) {
    for (i64 n = lo; n <= hi; ++n) {
      const auto& e = lambda.entry(static_cast<u64>(n));
      if (e.prime == 0) continue;
      add_root(acc, chi, n - shift, std::log(static_cast<double>(e.prime)));
    }
  });
}

SumValue shifted_prime_sum(const CharacterTable& chi, u64 l, u64 x, const Parallelism& par) {
  if (std::gcd(l, chi.modulus()) != 1) fail(ErrorCode::not_coprime, "shifted sum needs gcd(l, D) = 1");
  const auto lambda = arith::mangoldt_sieve(1, std::max<u64>(x, 1), par);
  return shifted_prime_sum(chi, l, x, lambda, par);
}

SumValue restricted_sum(const CharacterTable& chi_q, u64 nu, u64 l, u64 x, const arith::MangoldtTable& lambda,
                        const Parallelism& par) {
  const u64 q = chi_q.modulus();
  require(nu >= 1, "nu >= 1");
  if (std::gcd(nu, q) != 1) fail(ErrorCode::not_coprime, "restricted sum needs gcd(nu, q) = 1");
  if (std::gcd(l, q * nu) != 1) fail(ErrorCode::not_coprime, "restricted sum needs gcd(l, q nu) = 1");
  ensure_covered(lambda, x);
  const u64 l_mod_nu = l % nu;
  const i64 shift = static_cast<i64>(l % q);
  return blocked_sum(1, static_cast<i64>(x), par, [&](i64 lo, i64 hi, SumAccumulator& acc) {
    for (i64 n = lo; n <= hi; ++n) {
      const auto un = static_cast<u64>(n);
      const auto& e = lambda.entry(un);
      if (e.prime == 0 || un % nu != l_mod_nu || q % e.prime == 0) continue;
      add_root(acc, chi_q, n - shift, std::log(static_cast<double>(e.prime)));
    }
  });
}

SumValue restricted_sum(const CharacterTable& chi_q, u64 nu, u64 l, u64 x, const Parallelism& par) {
  const auto lambda = arith::mangoldt_sieve(1, std::max<u64>(x, 1), par);
  return restricted_sum(chi_q, nu, l, x, lambda, par);
}

SumValue short_sum(const CharacterTable& chi_q, i64 M, u64 N, u64 d, u64 k, u64 eta, const Parallelism& par) {
  const u64 q = chi_q.modulus();
  require(N >= 1, "N >= 1");
  require(d >= 1, "d >= 1");
  require(std::gcd(eta, q) == 1, "(eta, q) = 1");
  require(std::gcd(d, k) == 1, "(d, k) = 1");
  const i64 lo_n = M - static_cast<i64>(N) + 1;
  const u64 dq = d % q;
  const u64 offset = arith::mul_mod(eta % q, k % q, q);
  return blocked_sum(lo_n, M, par, [&](i64 lo, i64 hi, SumAccumulator& acc) {
    u64 arg = (arith::mul_mod(arith::reduce(lo, q), dq, q) + offset) % q;
    for (i64 n = lo; n <= hi; ++n) {
      const auto v = chi_q.log_at_residue(arg);
      if (v != CharacterTable::kZero) acc.add(chi_q.root(v));
      arg += dq;
      if (arg >= q) arg -= q;
    }
  });
}

SumValue sy_sum(const CharacterTable& chi_q, i64 u, i64 y, u64 eta, u64 nu, const Parallelism& par) {
  const u64 q = chi_q.modulus();
  require(y >= 0, "y >= 0");
  require(nu >= 1, "nu >= 1");
  require(std::gcd(eta * nu, q) == 1, "(eta nu, q) = 1");
  const u64 eta_nu = eta % nu;
  const i64 e = static_cast<i64>(eta % q);
  return blocked_sum(u - y + 1, u, par, [&](i64 lo, i64 hi, SumAccumulator& acc) {
    for (i64 n = lo; n <= hi; ++n) {
      if (arith::reduce(n, nu) != eta_nu) continue;
      if (chi_q.log_at(n) == CharacterTable::kZero) continue;  // (n, q) > 1
      const auto v = chi_q.log_at(n - e);
      if (v != CharacterTable::kZero) acc.add(chi_q.root(v));
    }
  });
}

namespace coefficients {

Coefficient zero() {
  return [](u64) -> i64 { return 0; };
}

Coefficient one() {
  return [](u64) -> i64 { return 1; };
}

Coefficient mobius() {
  return [](u64 m) -> i64 { return arith::mobius(arith::factor(m)); };
}

Coefficient tau5_signed(u64 seed) {
  return [seed](u64 m) -> i64 {
    const i64 sign = static_cast<i64>(splitmix64(seed ^ splitmix64(m)) % 3) - 1;
    if (sign == 0) return 0;
    return sign * static_cast<i64>(arith::tau_r(m, 5));
  };
}

Coefficient by_name(const std::string& name, u64 seed) {
  if (name == "zero") return zero();
  if (name == "one") return one();
  if (name == "mobius") return mobius();
  if (name == "tau5_signed") return tau5_signed(seed);
  fail(ErrorCode::invalid_argument, "unknown coefficient sequence '" + name + "'");
}

}  // namespace coefficients

SumValue double_sum(const CharacterTable& chi_q, const Coefficient& a, const Coefficient& b,
                    const BilinearRange& range, const Parallelism& par) {
  const u64 q = chi_q.modulus();
  require(range.M >= 1, "M >= 1");
  require(range.N >= 1 && range.N <= range.U && range.U < 2 * range.N, "N <= U < 2N");
  require(range.nu >= 1, "nu >= 1");
  if (std::gcd(range.nu, q) != 1) fail(ErrorCode::not_coprime, "double sum needs gcd(nu, q) = 1");
  const u64 l_nu = range.l % range.nu;
  const i64 l_q = static_cast<i64>(range.l % q);
  std::vector<i64> b_values(2 * range.N + 1, 0);
  for (u64 n = range.U + 1; n <= 2 * range.N; ++n) b_values[n] = b(n);

  return blocked_sum(static_cast<i64>(range.M + 1), static_cast<i64>(2 * range.M), par,
                     [&](i64 lo, i64 hi, SumAccumulator& acc) {
                       for (i64 sm = lo; sm <= hi; ++sm) {
                         const auto m = static_cast<u64>(sm);
                         if (std::gcd(m, q) != 1) continue;
                         const i64 am = a(m);
                         if (am == 0) continue;
                         const u64 n_max = std::min(range.x / m, 2 * range.N);
                         for (u64 n = range.U + 1; n <= n_max; ++n) {
                           if (b_values[n] == 0 || std::gcd(n, q) != 1) continue;
                           const u64 mn = m * n;
                           if (mn % range.nu != l_nu) continue;
                           add_root(acc, chi_q, static_cast<i64>(mn % q) - l_q,
                                    static_cast<double>(am) * static_cast<double>(b_values[n]));
                         }
                       }
                     });
}

double burgess_moment_2r(const CharacterTable& chi_q, u64 Z, unsigned r, const Parallelism& par) {
  const u64 q = chi_q.modulus();
  require(r >= 1, "r >= 1");
  require(Z >= 1, "Z >= 1");
  const auto total = blocked_sum(0, static_cast<i64>(q) - 1, par, [&](i64 lo, i64 hi, SumAccumulator& acc) {
    for (i64 lam = lo; lam <= hi; ++lam) {
      CompensatedSum re, im;
      u64 arg = static_cast<u64>(lam + 1) % q;
      for (u64 z = 1; z <= Z; ++z) {
        const auto v = chi_q.log_at_residue(arg);
        if (v != CharacterTable::kZero) {
          re.add(chi_q.root(v).real());
          im.add(chi_q.root(v).imag());
        }
        if (++arg == q) arg = 0;
      }
      const double mag2 = re.value() * re.value() + im.value() * im.value();
      acc.add(std::pow(mag2, static_cast<double>(r)));
    }
  });
  return total.value.real();
}

double burgess_sextic(const CharacterTable& chi_q, u64 Z, u64 work_budget, const Parallelism& par) {
  const u64 q = chi_q.modulus();
  require(Z >= 1, "Z >= 1");
  const u128 z6 = static_cast<u128>(Z) * Z * Z * Z * Z * Z;
  require(z6 <= q, "Z^6 <= q");
  require(dirichlet::is_primitive(chi_q.character()), "character must be primitive");
  if (z6 * q > work_budget) fail(ErrorCode::budget_exceeded, "sextic moment needs Z^6 q evaluations, over the work budget");
  const u64 L = chi_q.denominator();
  // logs[z * q + lambda] = log of chi(lambda + z + 1)
  std::vector<std::uint32_t> logs(Z * q);
  for (u64 z = 0; z < Z; ++z)
    for (u64 lam = 0; lam < q; ++lam) logs[z * q + lam] = chi_q.log_at_residue((lam + z + 1) % q);

  const u64 tuples = static_cast<u64>(z6);
  const auto total = blocked_sum(0, static_cast<i64>(tuples) - 1, par, [&](i64 lo, i64 hi, SumAccumulator& acc) {
    std::uint32_t z[6];
    for (i64 t = lo; t <= hi; ++t) {
      u64 rest = static_cast<u64>(t);
      for (int i = 5; i >= 0; --i) {
        z[i] = static_cast<std::uint32_t>(rest % Z);
        rest /= Z;
      }
      CompensatedSum re, im;
      for (u64 lam = 0; lam < q; ++lam) {
        u64 k = 0;
        bool zero = false;
        for (int i = 0; i < 6; ++i) {
          const auto v = logs[z[i] * q + lam];
          if (v == CharacterTable::kZero) {
            zero = true;
            break;
          }
          k += i < 3 ? v : L - v;
        }
        if (zero) continue;
        const auto& w = chi_q.root(k % L);
        re.add(w.real());
        im.add(w.imag());
      }
      acc.add(std::hypot(re.value(), im.value()));
    }
  });
  return total.value.real();
}

CoprimeCount coprime_count_check(const arith::FactoredInteger& q, u64 U, u64 count) {
  CoprimeCount out;
  out.count = count;
  const u64 qv = q.value();
  const u128 lhs = static_cast<u128>(count) * qv;
  const u128 rhs = static_cast<u128>(arith::euler_phi(q)) * U;
  const u128 diff = lhs > rhs ? lhs - rhs : rhs - lhs;
  out.bound = u64{1} << arith::omega(q);
  out.holds = diff <= static_cast<u128>(out.bound) * qv;
  // diff/q: diff < q * 2^omega fits when it holds; otherwise reduce carefully
  u128 g = qv;
  u128 a = diff;
  while (a != 0) {
    const u128 t = g % a;
    g = a;
    a = t;
  }
  out.deviation_numerator = static_cast<u64>(diff / g);
  out.deviation_denominator = static_cast<u64>(qv / g);
  return out;
}

CoprimeCount coprime_count_check(u64 q, u64 U) {
  const auto f = arith::factor(q);
  i64 count = 0;
  for (u64 d : arith::squarefree_divisors(f))
    count += arith::mobius(arith::factor(d)) * static_cast<i64>(U / d);
  return coprime_count_check(f, U, static_cast<u64>(count));
}

std::vector<std::complex<double>> all_shifted_prime_sums(const dirichlet::UnitGroupBasis& basis, u64 l, u64 x,
                                                         const arith::MangoldtTable& lambda) {
  const u64 D = basis.modulus();
  if (std::gcd(l, D) != 1) fail(ErrorCode::not_coprime, "shifted sum needs gcd(l, D) = 1");
  ensure_covered(lambda, x);
  const auto& gens = basis.generators();
  const std::size_t size = basis.order();
  std::vector<CompensatedSum> cells(size);
  std::vector<u64> exps(gens.size());
  for (u64 n : lambda.prime_powers()) {
    if (n > x) break;
    const i64 arg = static_cast<i64>(n % D) - static_cast<i64>(l % D);
    if (!basis.discrete_log(arg, exps)) continue;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < gens.size(); ++i) idx = idx * gens[i].order + exps[i];
    cells[idx].add(lambda.value(n));
  }
  std::vector<std::complex<double>> out(size);
  if (gens.empty()) {
    out[0] = cells[0].value();
    return out;
  }
  auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * size));
  if (buf == nullptr) fail(ErrorCode::budget_exceeded, "FFT buffer allocation failed");
  std::vector<int> dims;
  for (const auto& g : gens) dims.push_back(static_cast<int>(g.order));
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  for (std::size_t i = 0; i < size; ++i) {
    buf[i][0] = cells[i].value();
    buf[i][1] = 0.0;
  }
  fftw_execute(plan);
  for (std::size_t i = 0; i < size; ++i) out[i] = {buf[i][0], buf[i][1]};
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);
  return out;
}

}  // namespace charsum::sums
