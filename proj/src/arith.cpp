#include "arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "errors.hpp"

namespace charsum::arith {

namespace {

constexpr std::uint32_t kSmallPrimeLimit = 1'000'000;

std::vector<std::uint32_t> build_small_primes() {
  std::vector<bool> composite(kSmallPrimeLimit + 1, false);
  std::vector<std::uint32_t> primes;
  primes.reserve(80000);
  for (std::uint32_t i = 2; i <= kSmallPrimeLimit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (u64 j = u64{i} * i; j <= kSmallPrimeLimit; j += i) composite[j] = true;
  }
  return primes;
}

u64 pollard_brent(u64 n) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    auto f = [&](u64 v) { return (mul_mod(v, v, n) + c) % n; };
    u64 y = 2, g = 1, q = 1, ys = 0, x = 0;
    const u64 m = 128;
    for (u64 r = 1; g == 1; r <<= 1) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      for (u64 k = 0; k < r && g == 1; k += m) {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
      }
    }
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_large(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  const u64 d = pollard_brent(n);
  factor_large(d, out);
  factor_large(n / d, out);
}

}  // namespace

FactoredInteger FactoredInteger::from_factors(std::vector<PrimePower> factors) {
  FactoredInteger f;
  u64 value = 1;
  u64 last = 1;
  for (const auto& pp : factors) {
    if (pp.exponent == 0 || pp.prime <= last || !is_prime(pp.prime)) {
      fail(ErrorCode::invalid_argument, "factor list must hold increasing primes with positive exponents");
    }
    for (std::uint32_t i = 0; i < pp.exponent; ++i) {
      const u128 next = static_cast<u128>(value) * pp.prime;
      if (next >> 63) fail(ErrorCode::invalid_argument, "factored value exceeds 2^63");
      value = static_cast<u64>(next);
    }
    last = pp.prime;
  }
  f.value_ = value;
  f.factors_ = std::move(factors);
  return f;
}

bool FactoredInteger::has_prime(u64 p) const noexcept {
  return std::any_of(factors_.begin(), factors_.end(), [p](const PrimePower& pp) { return pp.prime == p; });
}

std::span<const std::uint32_t> small_primes() {
  static const std::vector<std::uint32_t> primes = build_small_primes();
  return primes;
}

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 pow_mod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic for all 64-bit n.
  for (u64 a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
    u64 x = pow_mod(a, d, n);
    if (x == 0 || x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

FactoredInteger factor(u64 n) {
  if (n == 0) fail(ErrorCode::invalid_argument, "factor: n must be positive");
  if (n >> 63) fail(ErrorCode::invalid_argument, "factor: n must be below 2^63");
  std::vector<PrimePower> factors;
  u64 rest = n;
  for (std::uint32_t p : small_primes()) {
    if (u64{p} * p > rest) break;
    if (rest % p != 0) continue;
    std::uint32_t e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    factors.push_back({p, e});
  }
  if (rest > 1) {
    const u64 limit = u64{kSmallPrimeLimit} * kSmallPrimeLimit;
    std::vector<u64> big;
    if (rest < limit) {
      big.push_back(rest);
    } else {
      factor_large(rest, big);
    }
    std::sort(big.begin(), big.end());
    for (u64 p : big) {
      if (!factors.empty() && factors.back().prime == p) {
        ++factors.back().exponent;
      } else {
        factors.push_back({p, 1});
      }
    }
  }
  FactoredInteger f;
  f = FactoredInteger::from_factors(std::move(factors));
  return f;
}

u64 euler_phi(const FactoredInteger& f) {
  u64 phi = 1;
  for (const auto& [p, a] : f.factors()) {
    phi *= p - 1;
    for (std::uint32_t i = 1; i < a; ++i) phi *= p;
  }
  return phi;
}

int mobius(const FactoredInteger& f) {
  for (const auto& pp : f.factors()) {
    if (pp.exponent > 1) return 0;
  }
  return f.factors().size() % 2 == 0 ? 1 : -1;
}

unsigned omega(const FactoredInteger& f) { return static_cast<unsigned>(f.factors().size()); }

u64 binomial(u64 n, u64 k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  u128 result = 1;
  for (u64 i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
    if (result >> 64) fail(ErrorCode::invalid_argument, "binomial coefficient overflows 64 bits");
  }
  return static_cast<u64>(result);
}

u64 tau_r(const FactoredInteger& f, unsigned r) {
  if (r < 2) fail(ErrorCode::invalid_argument, "tau_r: r must be at least 2");
  u128 result = 1;
  for (const auto& pp : f.factors()) {
    result *= binomial(pp.exponent + r - 1, r - 1);
    if (result >> 64) fail(ErrorCode::invalid_argument, "tau_r overflows 64 bits");
  }
  return static_cast<u64>(result);
}

u64 tau_r(u64 n, unsigned r) { return tau_r(factor(n), r); }

std::vector<u64> divisors(const FactoredInteger& f) {
  std::size_t count = 1;
  for (const auto& pp : f.factors()) count *= pp.exponent + 1;
  std::vector<u64> out;
  out.reserve(count);
  out.push_back(1);
  // Each prime extends the list by its powers; no recursion.
  for (const auto& [p, a] : f.factors()) {
    const std::size_t n = out.size();
    u64 power = 1;
    for (std::uint32_t e = 1; e <= a; ++e) {
      power *= p;
      for (std::size_t i = 0; i < n; ++i) out.push_back(out[i] * power);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<u64> squarefree_divisors(const FactoredInteger& f) {
  std::vector<u64> out{1};
  for (const auto& pp : f.factors()) {
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) out.push_back(out[i] * pp.prime);
  }
  std::sort(out.begin(), out.end());
  return out;
}

u64 radical(const FactoredInteger& f) {
  u64 r = 1;
  for (const auto& pp : f.factors()) r *= pp.prime;
  return r;
}

u64 mod_inverse(u64 a, u64 m) {
  if (m == 0) fail(ErrorCode::invalid_argument, "mod_inverse: modulus must be positive");
  if (m == 1) return 0;
  i64 old_r = static_cast<i64>(a % m), r = static_cast<i64>(m);
  i64 old_s = 1, s = 0;
  while (r != 0) {
    const i64 q = old_r / r;
    old_r -= q * r;
    std::swap(old_r, r);
    old_s -= q * s;
    std::swap(old_s, s);
  }
  if (old_r != 1) {
    fail(ErrorCode::not_coprime,
         "mod_inverse: gcd(" + std::to_string(a) + ", " + std::to_string(m) + ") > 1");
  }
  return reduce(old_s, m);
}

int truncated_mobius(u64 n, u64 u1) {
  if (n == 0) fail(ErrorCode::invalid_argument, "truncated_mobius: n must be positive");
  const auto f = factor(n);
  int total = 0;
  const auto& fs = f.factors();
  const std::size_t k = fs.size();
  for (u64 mask = 0; mask < (u64{1} << k); ++mask) {
    u64 d = 1;
    int sign = 1;
    bool over = false;
    for (std::size_t i = 0; i < k && !over; ++i) {
      if (mask >> i & 1) {
        d *= fs[i].prime;
        sign = -sign;
        over = d > u1;
      }
    }
    if (!over) total += sign;
  }
  return total;
}

namespace {

u64 count_smooth(u64 current, std::size_t start, u64 x, const std::vector<u64>& primes) {
  u64 count = 1;  // current itself
  for (std::size_t i = start; i < primes.size(); ++i) {
    const u64 p = primes[i];
    if (current > (x - 1) / p) break;
    for (u64 v = current * p; v < x; ) {
      count += count_smooth(v, i + 1, x, primes);
      if (v > (x - 1) / p) break;
      v *= p;
    }
  }
  return count;
}

}  // namespace

u64 smooth_count(u64 x, u64 z, const FactoredInteger& b) {
  if (z < 2) fail(ErrorCode::invalid_argument, "smooth_count: z must be at least 2");
  if (x <= 1) return 0;
  if (x > (u64{1} << 32)) fail(ErrorCode::budget_exceeded, "smooth_count: x above 2^32");
  const u64 bound = std::min(z, x);  // primes p < bound
  std::vector<u64> primes;
  {
    std::vector<bool> composite(bound, false);
    for (u64 i = 2; i < bound; ++i) {
      if (composite[i]) continue;
      if (!b.has_prime(i)) primes.push_back(i);
      for (u64 j = i * i; j < bound; j += i) composite[j] = true;
    }
  }
  return count_smooth(1, 0, x, primes);
}

std::vector<std::uint32_t> smallest_prime_factor_table(u64 limit) {
  std::vector<std::uint32_t> spf(limit + 1, 0);
  for (u64 i = 2; i <= limit; ++i) {
    if (spf[i] != 0) continue;
    for (u64 j = i; j <= limit; j += i) {
      if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(i);
    }
  }
  return spf;
}

std::vector<std::int8_t> mobius_table(u64 limit) {
  std::vector<std::int8_t> mu(limit + 1, 0);
  if (limit >= 1) mu[1] = 1;
  const auto spf = smallest_prime_factor_table(limit);
  for (u64 n = 2; n <= limit; ++n) {
    const u64 p = spf[n];
    const u64 m = n / p;
    mu[n] = (m % p == 0) ? 0 : static_cast<std::int8_t>(-mu[m]);
  }
  return mu;
}

std::vector<u64> tau_r_table(u64 limit, unsigned r) {
  if (r < 2) fail(ErrorCode::invalid_argument, "tau_r_table: r must be at least 2");
  std::vector<u64> tau(limit + 1, 0);
  if (limit >= 1) tau[1] = 1;
  const auto spf = smallest_prime_factor_table(limit);
  for (u64 n = 2; n <= limit; ++n) {
    const u64 p = spf[n];
    u64 m = n;
    std::uint32_t a = 0;
    while (m % p == 0) {
      m /= p;
      ++a;
    }
    tau[n] = tau[m] * binomial(a + r - 1, r - 1);
  }
  return tau;
}

MangoldtTable::MangoldtTable(u64 lo, u64 hi, std::vector<Entry> entries)
    : lo_(lo), hi_(hi), entries_(std::move(entries)) {
  for (u64 n = lo_; n <= hi_; ++n) {
    if (entries_[n - lo_].prime != 0) prime_powers_.push_back(n);
  }
}

double MangoldtTable::value(u64 n) const {
  const auto& e = entry(n);
  return e.prime == 0 ? 0.0 : std::log(static_cast<double>(e.prime));
}

MangoldtTable mangoldt_sieve(u64 lo, u64 hi, const Parallelism& par) {
  if (lo < 1) fail(ErrorCode::invalid_argument, "mangoldt_sieve: lo must be at least 1");
  if (hi < lo) fail(ErrorCode::invalid_argument, "mangoldt_sieve: hi < lo");
  if (hi >= (u64{1} << 40)) fail(ErrorCode::invalid_argument, "mangoldt_sieve: hi must be below 2^40");
  const u64 root = static_cast<u64>(std::sqrt(static_cast<long double>(hi))) + 1;
  std::vector<u64> base;
  for (std::uint32_t p : small_primes()) {
    if (p > root) break;
    base.push_back(p);
  }
  std::vector<MangoldtTable::Entry> entries(hi - lo + 1);
  const u64 segment = std::max<u64>(par.block_size, 1u << 12);
  const u64 segments = (hi - lo + segment) / segment;
  par.for_each(static_cast<std::size_t>(segments), [&](std::size_t s) {
    const u64 a = lo + s * segment;
    const u64 b = std::min(hi, a + segment - 1);
    const u64 len = b - a + 1;
    std::vector<u64> rest(len);
    std::vector<std::uint8_t> distinct(len, 0);
    std::vector<u64> last_prime(len, 0);
    std::vector<std::uint32_t> exponent(len, 0);
    for (u64 i = 0; i < len; ++i) rest[i] = a + i;
    for (u64 p : base) {
      if (p > b) break;
      for (u64 m = (a + p - 1) / p * p; m <= b; m += p) {
        const u64 i = m - a;
        ++distinct[i];
        last_prime[i] = p;
        std::uint32_t e = 0;
        while (rest[i] % p == 0) {
          rest[i] /= p;
          ++e;
        }
        exponent[i] = e;
      }
    }
    for (u64 i = 0; i < len; ++i) {
      const u64 n = a + i;
      auto& out = entries[n - lo];
      if (n == 1) continue;
      if (distinct[i] == 0) {
        out = {n, 1};
      } else if (distinct[i] == 1 && rest[i] == 1) {
        out = {last_prime[i], exponent[i]};
      }
    }
  });
  return MangoldtTable(lo, hi, std::move(entries));
}

}  // namespace charsum::arith
