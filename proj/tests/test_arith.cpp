#include <cmath>
#include <numeric>

#include "arith.hpp"
#include "doctest.h"
#include "errors.hpp"
#include "oracles.hpp"
#include "rng.hpp"

using namespace charsum;
using namespace charsum::arith;

namespace {

std::vector<std::pair<u64, unsigned>> pairs(const FactoredInteger& f) {
  std::vector<std::pair<u64, unsigned>> out;
  for (const auto& pp : f.factors()) out.push_back({pp.prime, pp.exponent});
  return out;
}

}  // namespace

TEST_CASE("factor small values") {
  CHECK(factor(1).factors().empty());
  CHECK(factor(1).value() == 1);
  CHECK(pairs(factor(12)) == std::vector<std::pair<u64, unsigned>>{{2, 2}, {3, 1}});
  CHECK(pairs(factor(2147483647)) == oracle::factor(2147483647));
  CHECK_THROWS_AS(factor(0), Error);
}

TEST_CASE("factor reassembles every n up to 1e5") {
  for (u64 n = 1; n <= 100000; ++n) {
    const auto f = factor(n);
    u64 v = 1;
    u64 last = 0;
    for (const auto& pp : f.factors()) {
      REQUIRE(pp.prime > last);
      REQUIRE(pp.exponent >= 1);
      last = pp.prime;
      for (unsigned i = 0; i < pp.exponent; ++i) v *= pp.prime;
    }
    REQUIRE(v == n);
  }
}

TEST_CASE("factor large semiprimes and prime powers") {
  const u64 p = 1000000007, q = 998244353;
  CHECK(pairs(factor(p * q)) == std::vector<std::pair<u64, unsigned>>{{q, 1}, {p, 1}});
  CHECK(pairs(factor(u64{2147483647} * 4294967291ULL)) == std::vector<std::pair<u64, unsigned>>{{2147483647, 1}, {4294967291, 1}});
  CHECK(pairs(factor(u64{1} << 62)) == std::vector<std::pair<u64, unsigned>>{{2, 62}});
  const u64 big_prime = 9223372036854775783ULL;  // largest prime below 2^63
  CHECK(pairs(factor(big_prime)) == std::vector<std::pair<u64, unsigned>>{{big_prime, 1}});
  CHECK_THROWS_AS(factor(u64{1} << 63), Error);
}

TEST_CASE("euler phi, mobius, omega") {
  CHECK(euler_phi(factor(1)) == 1);
  CHECK(euler_phi(factor(12)) == 4);
  CHECK(euler_phi(factor(625)) == oracle::phi(625));
  CHECK(euler_phi(factor(625)) == 500);
  CHECK(mobius(factor(1)) == 1);
  CHECK(mobius(factor(30)) == -1);
  CHECK(mobius(factor(12)) == 0);
  CHECK(omega(factor(1)) == 0);
  CHECK(omega(factor(12)) == 2);
  CHECK(omega(factor(30030)) == oracle::factor(30030).size());
  for (u64 n = 1; n <= 2000; ++n) {
    REQUIRE(euler_phi(factor(n)) == oracle::phi(n));
    REQUIRE(mobius(factor(n)) == oracle::mobius(n));
  }
}

TEST_CASE("tau_r") {
  CHECK(tau_r(1, 2) == 1);
  CHECK(tau_r(1, 5) == 1);
  CHECK(tau_r(4, 3) == oracle::tau_r(4, 3));
  CHECK(tau_r(4, 3) == 6);
  CHECK(tau_r(10, 2) == 4);
  CHECK_THROWS_AS(tau_r(10, 1), Error);
  for (u64 n = 1; n <= 200; ++n)
    for (unsigned r = 2; r <= 4; ++r) REQUIRE(tau_r(n, r) == oracle::tau_r(n, r));
  const auto table = tau_r_table(3000, 3);
  for (u64 n = 1; n <= 3000; ++n) REQUIRE(table[n] == tau_r(n, 3));
}

TEST_CASE("multiplicativity on sampled coprime pairs") {
  Rng rng(11);
  int checked = 0;
  while (checked < 500) {
    const u64 m = rng.uniform(1, 5000), n = rng.uniform(1, 5000);
    if (std::gcd(m, n) != 1) continue;
    ++checked;
    REQUIRE(euler_phi(factor(m * n)) == euler_phi(factor(m)) * euler_phi(factor(n)));
    REQUIRE(mobius(factor(m * n)) == mobius(factor(m)) * mobius(factor(n)));
    REQUIRE(tau_r(m * n, 3) == tau_r(m, 3) * tau_r(n, 3));
  }
}

TEST_CASE("divisors") {
  CHECK(divisors(factor(1)) == std::vector<u64>{1});
  CHECK(divisors(factor(12)) == std::vector<u64>{1, 2, 3, 4, 6, 12});
  CHECK(divisors(factor(60)).size() == 12);
  for (u64 n = 1; n <= 3000; ++n) REQUIRE(divisors(factor(n)) == oracle::divisors(n));
  CHECK(squarefree_divisors(factor(12)) == std::vector<u64>{1, 2, 3, 6});
  CHECK(radical(factor(72)) == 6);
}

TEST_CASE("mobius sums over divisors vanish beyond 1") {
  for (u64 n = 1; n <= 10000; ++n) {
    int s = 0;
    for (u64 d : divisors(factor(n))) s += mobius(factor(d));
    REQUIRE(s == (n == 1 ? 1 : 0));
  }
}

TEST_CASE("mangoldt sieve") {
  const auto t = mangoldt_sieve(1, 100);
  CHECK(t.value(8) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(t.value(6) == 0.0);
  CHECK(!t.is_prime_power(1));
  double s = 0;
  for (u64 n = 1; n <= 100; ++n) s += t.value(n);
  double direct = 0;
  for (u64 n = 1; n <= 100; ++n) direct += oracle::mangoldt(n);
  CHECK(s == doctest::Approx(direct).epsilon(1e-13));
  CHECK(s == doctest::Approx(94.045).epsilon(1e-4));
  CHECK_THROWS_AS(mangoldt_sieve(10, 5), Error);
  CHECK_THROWS_AS(mangoldt_sieve(1, u64{1} << 40), Error);
}

TEST_CASE("mangoldt sieve agrees with trial factorization on random n") {
  const auto t = mangoldt_sieve(1, 1000000);
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const u64 n = rng.uniform(1, 1000000);
    REQUIRE(t.value(n) == doctest::Approx(oracle::mangoldt(n)).epsilon(1e-14));
  }
}

TEST_CASE("mangoldt sieve does not depend on segmentation or window") {
  ThreadPool pool(4);
  const auto whole = mangoldt_sieve(1, 200000);
  for (u64 block : {u64{4096}, u64{10007}, u64{1} << 16}) {
    const auto cut = mangoldt_sieve(1, 200000, Parallelism{&pool, block});
    REQUIRE(cut.prime_powers() == whole.prime_powers());
  }
  const auto window = mangoldt_sieve(123456, 140000);
  for (u64 n = 123456; n <= 140000; ++n) {
    REQUIRE(window.entry(n).prime == whole.entry(n).prime);
    REQUIRE(window.entry(n).exponent == whole.entry(n).exponent);
  }
}

TEST_CASE("smooth count") {
  CHECK(smooth_count(10, 3, factor(1)) == 4);
  CHECK(smooth_count(100, 5, factor(1)) == 20);
  CHECK(smooth_count(100, 5, factor(1)) == oracle::smooth_count(100, 5, 1));
  for (u64 x : {2, 3, 50, 1000}) CHECK(smooth_count(x, 2, factor(1)) == 1);
  for (u64 x = 2; x <= 300; x += 7)
    for (u64 z = 2; z <= 40; z += 3)
      for (u64 b : {1, 6, 35})
        REQUIRE(smooth_count(x, z, factor(b)) == oracle::smooth_count(x, z, b));
}

TEST_CASE("smooth count is monotone in x and z") {
  for (u64 z = 2; z <= 30; ++z) {
    u64 prev = 0;
    for (u64 x = 1; x <= 2000; x += 13) {
      const u64 c = smooth_count(x, z, factor(1));
      REQUIRE(c >= prev);
      prev = c;
    }
  }
  for (u64 x : {100, 5000}) {
    u64 prev = 0;
    for (u64 z = 2; z <= 60; ++z) {
      const u64 c = smooth_count(x, z, factor(1));
      REQUIRE(c >= prev);
      prev = c;
    }
  }
}

TEST_CASE("modular inverse") {
  CHECK(mod_inverse(1, 7) == 1);
  CHECK(mod_inverse(3, 10) == 7);
  CHECK(mod_inverse(17, 3120) == 2753);
  CHECK(mod_inverse(17, 3120) == oracle::mod_inverse(17, 3120));
  try {
    mod_inverse(4, 10);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_coprime);
  }
  for (u64 m = 2; m <= 60; ++m)
    for (u64 a = 1; a < m; ++a)
      if (std::gcd(a, m) == 1) REQUIRE(mod_inverse(a, m) == oracle::mod_inverse(a, m));
}

TEST_CASE("truncated mobius") {
  CHECK(truncated_mobius(1, 5) == 1);
  CHECK(truncated_mobius(6, 2) == 0);
  CHECK(truncated_mobius(6, 2) == oracle::truncated_mobius(6, 2));
  for (u64 n = 1; n <= 300; ++n) {
    REQUIRE(truncated_mobius(n, n) == (n == 1 ? 1 : 0));
    for (u64 u = 1; u <= 40; u += 3) REQUIRE(truncated_mobius(n, u) == oracle::truncated_mobius(n, u));
  }
}
