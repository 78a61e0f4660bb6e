#include "decomposition.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "charsums.hpp"
#include "errors.hpp"

namespace charsum::decomposition {
namespace {

using Sequence = std::vector<i64>;

Sequence convolve(const Sequence& a, const Sequence& b, u64 x) {
  Sequence c(x + 1, 0);
  for (u64 d = 1; d <= x; ++d) {
    if (a[d] == 0) continue;
    for (u64 m = 1, n = d; n <= x; ++m, n += d)
      if (b[m] != 0) c[n] += a[d] * b[m];
  }
  return c;
}

// sum_{ab = n} w(a) s(b) for real weights w
std::vector<double> convolve_real(const std::vector<double>& w, const Sequence& s, u64 x) {
  std::vector<double> c(x + 1, 0.0);
  for (u64 a = 1; a <= x; ++a) {
    if (w[a] == 0.0) continue;
    for (u64 b = 1, n = a; n <= x; ++b, n += a)
      if (s[b] != 0) c[n] += w[a] * static_cast<double>(s[b]);
  }
  return c;
}

SumValue weighted_sum(const std::vector<double>& c, std::span<const std::complex<double>> f, u64 x) {
  SumAccumulator acc;
  for (u64 n = 1; n <= x; ++n)
    if (c[n] != 0.0) acc.add(c[n] * f[n]);
  return acc.result();
}

std::uint8_t dyadic_index(u64 v) { return v <= 1 ? 0 : static_cast<std::uint8_t>(64 - std::countl_zero(v - 1)); }

constexpr int kKeyBits = 6;

}  // namespace

u64 integer_root_ceil(u64 x, unsigned k) {
  require(k >= 1, "k >= 1");
  if (x <= 1) return x;
  auto pow_at_least = [&](u64 u) {
    arith::u128 p = 1;
    for (unsigned i = 0; i < k; ++i) {
      p *= u;
      if (p >= x) return true;
    }
    return p >= x;
  };
  u64 u = static_cast<u64>(std::llround(std::pow(static_cast<double>(x), 1.0 / k)));
  if (u < 1) u = 1;
  while (u > 1 && pow_at_least(u - 1)) --u;
  while (!pow_at_least(u)) ++u;
  return u;
}

Weight constant_weight(u64 x, std::complex<double> value) {
  Weight f(x + 1, value);
  f[0] = 0.0;
  return f;
}

Weight character_weight(const CharacterTable& chi, u64 l, u64 x) {
  Weight f(x + 1);
  const i64 shift = static_cast<i64>(l % chi.modulus());
  for (u64 n = 1; n <= x; ++n) f[n] = chi(static_cast<i64>(n) - shift);
  return f;
}

Weight restricted_weight(const CharacterTable& chi_q, u64 nu, u64 l, u64 x) {
  require(nu >= 1, "nu >= 1");
  const u64 q = chi_q.modulus();
  Weight f(x + 1);
  const i64 shift = static_cast<i64>(l % q);
  for (u64 n = 1; n <= x; ++n) {
    if (n % nu != l % nu || std::gcd(n, q) != 1) continue;
    f[n] = chi_q(static_cast<i64>(n) - shift);
  }
  return f;
}

Decomposition hb_decompose(std::span<const std::complex<double>> f, u64 x, u64 u1, int r) {
  require(x >= 1, "x >= 1");
  require(u1 >= 1 && u1 <= x, "1 <= u1 <= x");
  require(r >= 1 && r <= 12, "1 <= r <= 12");
  require(f.size() >= x + 1, "weight defined on [1, x]");

  Decomposition out;
  out.x = x;
  out.u1 = u1;
  out.r = r;

  const auto mob = arith::mobius_table(x);
  Sequence mu_trunc(x + 1, 0), ones(x + 1, 1);
  ones[0] = 0;
  for (u64 m = 1; m <= u1; ++m) mu_trunc[m] = mob[m];

  std::vector<double> log_table(x + 1, 0.0);
  for (u64 n = 2; n <= x; ++n) log_table[n] = std::log(static_cast<double>(n));

  // g_k = mu_u^{*k} * 1^{*(k-1)}; head_k = sum (ln * g_k)(n) f(n)
  Sequence mu_power = mu_trunc;
  for (int k = 1; k <= r; ++k) {
    if (k > 1) mu_power = convolve(mu_power, mu_trunc, x);
    Sequence g = mu_power;
    for (int j = 1; j < k; ++j) g = convolve(g, ones, x);
    HeadGroup group;
    group.k = k;
    group.coefficient = (k % 2 == 1 ? 1 : -1) * static_cast<i64>(arith::binomial(static_cast<u64>(r), static_cast<u64>(k)));
    group.value = weighted_sum(convolve_real(log_table, g, x), f, x);
    out.heads.push_back(group);
  }

  // lambda(n) = sum_{d | n, d <= u1} mu(d), kept for n > u1 only
  Sequence lam = convolve(mu_trunc, ones, x);
  for (u64 n = 0; n <= u1; ++n) lam[n] = 0;
  Sequence lam_power = lam;
  for (int j = 1; j < r; ++j) lam_power = convolve(lam_power, lam, x);

  const auto mangoldt = arith::mangoldt_sieve(1, x);
  std::vector<double> big_lambda(x + 1, 0.0);
  for (u64 n : mangoldt.prime_powers()) big_lambda[n] = mangoldt.value(n);

  out.tail_coefficient = r % 2 == 0 ? 1 : -1;
  out.tail = weighted_sum(convolve_real(big_lambda, lam_power, x), f, x);
  out.direct = weighted_sum(big_lambda, f, x);

  CompensatedSum re, im;
  for (const auto& h : out.heads) {
    re.add(static_cast<double>(h.coefficient) * h.value.value.real());
    im.add(static_cast<double>(h.coefficient) * h.value.value.imag());
  }
  re.add(static_cast<double>(out.tail_coefficient) * out.tail.value.real());
  im.add(static_cast<double>(out.tail_coefficient) * out.tail.value.imag());
  out.combined = {re.value(), im.value()};
  out.residual = std::abs(out.combined - out.direct.value);
  return out;
}

DyadicSplit dyadic_split(std::span<const std::complex<double>> f, u64 x, u64 u1, int k) {
  require(x >= 1 && x < (u64{1} << 40), "1 <= x < 2^40");
  require(u1 >= 1 && u1 <= x, "1 <= u1 <= x");
  require(k >= 1 && 2 * k * kKeyBits <= 64, "1 <= k <= 5");
  require(f.size() >= x + 1, "weight defined on [1, x]");

  const auto mob = arith::mobius_table(std::min(u1, x));
  std::unordered_map<u64, SumAccumulator> boxes;
  const int vars = 2 * k;

  // idx < k: m_(idx+1); idx >= k: n_(idx-k+1). n_1 carries ln n_1 and starts at 2.
  auto rec = [&](auto&& self, int idx, u64 prod, double coeff, u64 key) -> void {
    const u64 limit = x / prod;
    if (idx < k) {
      for (u64 m = 1; m <= std::min(u1, limit); ++m) {
        if (mob[m] == 0) continue;
        self(self, idx + 1, prod * m, coeff * mob[m], (key << kKeyBits) | dyadic_index(m));
      }
      return;
    }
    const bool carries_log = idx == k;
    const u64 start = carries_log ? 2 : 1;
    if (idx + 1 < vars) {
      for (u64 n = start; n <= limit; ++n) {
        const double w = carries_log ? coeff * std::log(static_cast<double>(n)) : coeff;
        self(self, idx + 1, prod * n, w, (key << kKeyBits) | dyadic_index(n));
      }
      return;
    }
    // innermost variable: accumulate one dyadic block at a time
    for (u64 lo = start; lo <= limit;) {
      const std::uint8_t j = dyadic_index(lo);
      const u64 hi = std::min(limit, j == 0 ? u64{1} : (u64{1} << j));
      SumAccumulator local;
      for (u64 n = lo; n <= hi; ++n) {
        const double w = carries_log ? coeff * std::log(static_cast<double>(n)) : coeff;
        local.add(w * f[prod * n]);
      }
      boxes[(key << kKeyBits) | j].merge(local);
      lo = hi + 1;
    }
  };
  rec(rec, 0, 1, 1.0, 0);

  std::vector<u64> keys;
  keys.reserve(boxes.size());
  for (const auto& [key, acc] : boxes) keys.push_back(key);
  std::sort(keys.begin(), keys.end());

  DyadicSplit out;
  out.k = k;
  SumAccumulator total;
  for (u64 key : keys) {
    const auto& acc = boxes.at(key);
    DyadicBlock block;
    block.exponents.resize(static_cast<std::size_t>(vars));
    for (int i = vars - 1; i >= 0; --i) {
      block.exponents[static_cast<std::size_t>(i)] =
          static_cast<std::uint8_t>((key >> (kKeyBits * (vars - 1 - i))) & ((1u << kKeyBits) - 1));
    }
    block.value = acc.result();
    total.merge(acc);
    out.blocks.push_back(std::move(block));
  }
  out.total = total.result();
  return out;
}

Recombination mobius_recombination(const DirichletCharacter& chi, u64 l, u64 x, const Parallelism& par) {
  require(!chi.is_principal(), "character must be non-principal");
  const u64 D = chi.modulus();
  if (std::gcd(l, D) != 1) fail(ErrorCode::not_coprime, "recombination needs gcd(l, D) = 1");
  const auto chi_q = dirichlet::induce_primitive(chi);

  Recombination out;
  out.D = D;
  out.q = chi_q.modulus();
  out.l = l;
  out.x = x;
  out.q1 = 1;
  for (const auto& pp : chi.basis().factored_modulus().factors())
    if (out.q % pp.prime != 0) out.q1 *= pp.prime;

  const auto lambda = arith::mangoldt_sieve(1, std::max<u64>(x, 1), par);
  const CharacterTable table_d(chi);
  const CharacterTable table_q(chi_q);
  out.full = sums::shifted_prime_sum(table_d, l, x, lambda, par);

  SumAccumulator corr;
  const i64 shift = static_cast<i64>(l % D);
  for (u64 n : lambda.prime_powers()) {
    if (n > x) break;
    if (out.q % lambda.entry(n).prime != 0) continue;
    corr.add(lambda.value(n) * table_d(static_cast<i64>(n) - shift));
  }
  out.correction = corr.result();

  out.nu_threshold = std::exp(std::sqrt(2.0 * std::log(static_cast<double>(D))));
  CompensatedSum small_re, small_im, large_re, large_im;
  double mass = out.full.abs_term_sum + out.correction.abs_term_sum;
  for (u64 nu : arith::squarefree_divisors(arith::factor(out.q1))) {
    RecombinationTerm term;
    term.nu = nu;
    term.mu = arith::mobius(arith::factor(nu));
    term.value = sums::restricted_sum(table_q, nu, l, x, lambda, par);
    const std::complex<double> signed_value = static_cast<double>(term.mu) * term.value.value;
    if (static_cast<double>(nu) <= out.nu_threshold) {
      small_re.add(signed_value.real());
      small_im.add(signed_value.imag());
    } else {
      large_re.add(signed_value.real());
      large_im.add(signed_value.imag());
    }
    mass += term.value.abs_term_sum;
    out.terms.push_back(term);
  }
  out.small_nu_part = {small_re.value(), small_im.value()};
  out.large_nu_part = {large_re.value(), large_im.value()};
  CompensatedSum re, im;
  re.add(out.small_nu_part.real());
  re.add(out.large_nu_part.real());
  re.add(out.correction.value.real());
  im.add(out.small_nu_part.imag());
  im.add(out.large_nu_part.imag());
  im.add(out.correction.value.imag());
  out.recombined = {re.value(), im.value()};
  out.residual = std::abs(out.recombined - out.full.value);
  out.scale = std::max(1.0, mass);
  return out;
}

PipelineResult shifted_prime_pipeline(const DirichletCharacter& chi, u64 l, u64 x, const PipelineOptions& options,
                                      const Parallelism& par) {
  require(x >= 2, "x >= 2");
  PipelineResult out;
  out.recombination = mobius_recombination(chi, l, x, par);
  const u64 u1 = options.u1 == 0 ? integer_root_ceil(x, 3) : options.u1;
  const auto chi_q = dirichlet::induce_primitive(chi);
  const CharacterTable table_q(chi_q);

  out.terms.resize(out.recombination.terms.size());
  par.for_each(out.terms.size(), [&](std::size_t i) {
    const auto& rt = out.recombination.terms[i];
    PipelineTerm& term = out.terms[i];
    term.nu = rt.nu;
    term.mu = rt.mu;
    const auto f = restricted_weight(table_q, rt.nu, l, x);
    term.identity = hb_decompose(f, x, u1, options.r);
    term.identity.residual = std::max(term.identity.residual, std::abs(term.identity.direct.value - rt.value.value));
    if (options.dyadic) {
      for (int k = 1; k <= options.r; ++k) {
        term.splits.push_back(dyadic_split(f, x, u1, k));
        const auto& head = term.identity.heads[static_cast<std::size_t>(k - 1)].value;
        term.split_residual = std::max(term.split_residual, std::abs(term.splits.back().total.value - head.value));
      }
    }
  });
  for (const auto& t : out.terms) {
    out.max_identity_residual = std::max(out.max_identity_residual, t.identity.residual);
    out.max_split_residual = std::max(out.max_split_residual, t.split_residual);
  }
  return out;
}

}  // namespace charsum::decomposition
