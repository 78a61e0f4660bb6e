#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "parallel.hpp"

namespace charsum::arith {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

struct PrimePower {
  u64 prime = 0;
  std::uint32_t exponent = 0;

  bool operator==(const PrimePower&) const = default;
};

// A positive integer together with its canonical factorization. Primes are
// strictly increasing, exponents are positive, and 1 has no factors.
class FactoredInteger {
 public:
  FactoredInteger() = default;

  // Validates and multiplies out the given factors.
  static FactoredInteger from_factors(std::vector<PrimePower> factors);

  u64 value() const noexcept { return value_; }
  const std::vector<PrimePower>& factors() const noexcept { return factors_; }
  bool is_one() const noexcept { return factors_.empty(); }
  bool has_prime(u64 p) const noexcept;

  bool operator==(const FactoredInteger& other) const { return value_ == other.value_; }

 private:
  u64 value_ = 1;
  std::vector<PrimePower> factors_;
};

// Primes up to 10^6, built once.
std::span<const std::uint32_t> small_primes();

u64 mul_mod(u64 a, u64 b, u64 m);
u64 pow_mod(u64 base, u64 exp, u64 m);
bool is_prime(u64 n);

FactoredInteger factor(u64 n);

u64 euler_phi(const FactoredInteger& f);
int mobius(const FactoredInteger& f);
unsigned omega(const FactoredInteger& f);
u64 binomial(u64 n, u64 k);
u64 tau_r(u64 n, unsigned r);
u64 tau_r(const FactoredInteger& f, unsigned r);

// All divisors in ascending order.
std::vector<u64> divisors(const FactoredInteger& f);
// Square-free divisors in ascending order.
std::vector<u64> squarefree_divisors(const FactoredInteger& f);
// Product of the distinct primes of f.
u64 radical(const FactoredInteger& f);

// Least nonnegative inverse of a modulo m; throws ErrorCode::not_coprime when
// gcd(a, m) > 1.
u64 mod_inverse(u64 a, u64 m);

// Least nonnegative residue of a (possibly negative) integer.
inline u64 reduce(i64 a, u64 m) {
  const i64 r = a % static_cast<i64>(m);
  return static_cast<u64>(r < 0 ? r + static_cast<i64>(m) : r);
}

// lambda(n) = sum of mu(d) over divisors d <= u1 of n.
int truncated_mobius(u64 n, u64 u1);

// Number of integers 1 <= n < x coprime to b whose prime factors are all < z.
// The bound on n is strict.
u64 smooth_count(u64 x, u64 z, const FactoredInteger& b);

// Dense tables over [0, limit].
std::vector<std::int8_t> mobius_table(u64 limit);
std::vector<u64> tau_r_table(u64 limit, unsigned r);
std::vector<std::uint32_t> smallest_prime_factor_table(u64 limit);

// Lambda(n) over [lo, hi], stored as (p, a) with n = p^a; logarithms are taken
// on demand in double precision.
class MangoldtTable {
 public:
  struct Entry {
    u64 prime = 0;  // 0 when n is not a prime power
    std::uint32_t exponent = 0;
  };

  MangoldtTable() = default;
  MangoldtTable(u64 lo, u64 hi, std::vector<Entry> entries);

  u64 lo() const noexcept { return lo_; }
  u64 hi() const noexcept { return hi_; }
  bool covers(u64 lo, u64 hi) const noexcept { return lo_ <= lo && hi <= hi_; }

  const Entry& entry(u64 n) const { return entries_[n - lo_]; }
  bool is_prime_power(u64 n) const { return entry(n).prime != 0; }
  double value(u64 n) const;

  // Prime powers in [lo, hi], ascending.
  const std::vector<u64>& prime_powers() const noexcept { return prime_powers_; }

 private:
  u64 lo_ = 1;
  u64 hi_ = 0;
  std::vector<Entry> entries_;
  std::vector<u64> prime_powers_;
};

// Segmented sieve; segments may run on the pool and the result does not
// depend on how the range is cut.
MangoldtTable mangoldt_sieve(u64 lo, u64 hi, const Parallelism& par = {});

}  // namespace charsum::arith
