#include <cmath>
#include <complex>
#include <numeric>

#include "charsums.hpp"
#include "doctest.h"
#include "errors.hpp"
#include "oracles.hpp"
#include "rng.hpp"

using namespace charsum;
using namespace charsum::dirichlet;
using namespace charsum::sums;
using cplx = std::complex<double>;

namespace {

cplx value(const DirichletCharacter& chi, i64 n) { return chi(n).to_complex(); }

cplx naive_shifted(const DirichletCharacter& chi, u64 l, u64 x) {
  cplx s = 0;
  for (u64 n = 1; n <= x; ++n) {
    const double lam = oracle::mangoldt(n);
    if (lam != 0) s += lam * value(chi, static_cast<i64>(n) - static_cast<i64>(l));
  }
  return s;
}

cplx naive_restricted(const DirichletCharacter& chi_q, u64 nu, u64 l, u64 x) {
  cplx s = 0;
  for (u64 n = 1; n <= x; ++n) {
    if (std::gcd(n, chi_q.modulus()) != 1 || n % nu != l % nu) continue;
    s += oracle::mangoldt(n) * value(chi_q, static_cast<i64>(n) - static_cast<i64>(l));
  }
  return s;
}

cplx naive_short(const DirichletCharacter& chi, i64 M, u64 N, u64 d, u64 k, u64 eta) {
  cplx s = 0;
  for (i64 n = M - static_cast<i64>(N) + 1; n <= M; ++n) s += value(chi, n * static_cast<i64>(d) + static_cast<i64>(eta * k));
  return s;
}

cplx naive_sy(const DirichletCharacter& chi, i64 u, i64 y, u64 eta, u64 nu) {
  cplx s = 0;
  for (i64 n = u - y + 1; n <= u; ++n) {
    if (std::gcd(static_cast<u64>(oracle::reduce(n, chi.modulus())), chi.modulus()) != 1) continue;
    if (oracle::reduce(n - static_cast<i64>(eta), nu) != 0) continue;
    s += value(chi, n - static_cast<i64>(eta));
  }
  return s;
}

cplx naive_double(const DirichletCharacter& chi, const Coefficient& a, const Coefficient& b, const BilinearRange& r) {
  cplx s = 0;
  const u64 q = chi.modulus();
  for (u64 m = r.M + 1; m <= 2 * r.M; ++m) {
    for (u64 n = r.U + 1; n <= 2 * r.N; ++n) {
      if (m * n > r.x) continue;
      if (std::gcd(m * n, q) != 1 || (m * n) % r.nu != r.l % r.nu) continue;
      s += static_cast<double>(a(m) * b(n)) * value(chi, static_cast<i64>(m * n) - static_cast<i64>(r.l));
    }
  }
  return s;
}

bool close(cplx a, cplx b, double mass) { return std::abs(a - b) <= 1e-9 * std::max(1.0, mass); }

DirichletCharacter pick(Rng& rng, u64 D, bool nonprincipal = true) {
  auto basis = UnitGroupBasis::create(D);
  const u64 count = basis->order();
  return character_from_index(basis, nonprincipal && count > 1 ? rng.uniform(1, count - 1) : rng.uniform(0, count - 1));
}

DirichletCharacter pick_primitive(Rng& rng, u64 q) {
  const auto chars = enumerate_characters(UnitGroupBasis::create(q));
  std::vector<DirichletCharacter> prim;
  for (const auto& c : chars)
    if (is_primitive(c) && (q == 1 || !c.is_principal())) prim.push_back(c);
  REQUIRE(!prim.empty());
  return prim[rng.uniform(0, prim.size() - 1)];
}

u64 coprime_to(Rng& rng, u64 m, u64 hi) {
  for (;;) {
    const u64 v = rng.uniform(1, hi);
    if (std::gcd(v, m) == 1) return v;
  }
}

}  // namespace

TEST_CASE("shifted prime sum examples") {
  auto b3 = UnitGroupBasis::create(3);
  const CharacterTable quad(character_from_index(b3, 1));
  const auto s = shifted_prime_sum(quad, 1, 10);
  CHECK(s.value.real() == doctest::Approx(std::log(20.0 / 9.0)).epsilon(1e-14));
  CHECK(s.value.real() == doctest::Approx(0.7985).epsilon(1e-4));
  CHECK(std::abs(s.value.imag()) < 1e-15);
  CHECK(s.magnitude() <= s.abs_term_sum + 1e-12);

  const CharacterTable principal(principal_character(UnitGroupBasis::create(30)));
  const auto p = shifted_prime_sum(principal, 7, 500);
  double expected = 0;
  for (u64 n = 1; n <= 500; ++n)
    if (std::gcd((n + 30 - 7) % 30, u64{30}) == 1) expected += oracle::mangoldt(n);
  CHECK(p.value.real() == doctest::Approx(expected).epsilon(1e-13));
  CHECK(p.value.imag() == 0.0);

  CHECK(shifted_prime_sum(quad, 1, 1).value == cplx{});
  CHECK(shifted_prime_sum(quad, 1, 0).value == cplx{});
  try {
    shifted_prime_sum(quad, 3, 10);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_coprime);
  }
}

TEST_CASE("oracle equivalence on seeded cases") {
  Rng rng(2024);
  ThreadPool pool(3);
  const Parallelism par{&pool, 1 << 12};
  for (int trial = 0; trial < 20; ++trial) {
    const u64 D = rng.uniform(3, 1000);
    const auto chi = pick(rng, D);
    const CharacterTable t(chi);
    const u64 x = rng.uniform(2, trial < 4 ? 100000 : 20000);
    const u64 l = coprime_to(rng, D, 10 * D);
    const auto s = shifted_prime_sum(t, l, x, par);
    REQUIRE(close(s.value, naive_shifted(chi, l, x), s.abs_term_sum));

    u64 q;
    do q = rng.uniform(3, 600); while (q % 4 == 2);  // no primitive characters otherwise
    const auto chi_q = pick_primitive(rng, q);
    const CharacterTable tq(chi_q);
    const u64 nu = coprime_to(rng, q, 40);
    const u64 lr = coprime_to(rng, q * nu, 5 * q);
    const auto r = restricted_sum(tq, nu, lr, x, par);
    REQUIRE(close(r.value, naive_restricted(chi_q, nu, lr, x), r.abs_term_sum));

    const u64 N = rng.uniform(1, 20000);
    const i64 M = static_cast<i64>(rng.uniform(0, 100000)) - 50000;
    const u64 d = rng.uniform(1, 30);
    u64 k;
    do k = rng.uniform(1, 50); while (std::gcd(k, d) != 1);
    const u64 eta = coprime_to(rng, q, 3 * q);
    const auto ss = short_sum(tq, M, N, d, k, eta, par);
    REQUIRE(close(ss.value, naive_short(chi_q, M, N, d, k, eta), ss.abs_term_sum));

    const i64 u = static_cast<i64>(rng.uniform(0, 100000));
    const i64 y = static_cast<i64>(rng.uniform(0, 50000));
    const u64 nu2 = coprime_to(rng, q, 12);
    const auto sy = sy_sum(tq, u, y, eta, nu2, par);
    REQUIRE(close(sy.value, naive_sy(chi_q, u, y, eta, nu2), sy.abs_term_sum));

    BilinearRange range;
    range.N = rng.uniform(1, 150);
    range.U = range.N + rng.uniform(0, range.N - 1);
    range.M = rng.uniform(1, 300);
    range.nu = coprime_to(rng, q, 6);
    range.l = coprime_to(rng, q * range.nu, 100);
    range.x = rng.uniform(1, 100000);
    const auto a = trial % 2 ? coefficients::mobius() : coefficients::tau5_signed(trial);
    const auto b = trial % 3 ? coefficients::one() : coefficients::tau5_signed(trial + 100);
    const auto w = double_sum(tq, a, b, range, par);
    REQUIRE(close(w.value, naive_double(chi_q, a, b, range), w.abs_term_sum));
  }
}

TEST_CASE("restricted sum") {
  Rng rng(9);
  const auto chi_q = pick_primitive(rng, 77);
  const CharacterTable t(chi_q);
  const auto r = restricted_sum(t, 1, 4, 3000);
  cplx direct = 0;
  for (u64 n = 1; n <= 3000; ++n)
    if (std::gcd(n, u64{77}) == 1) direct += oracle::mangoldt(n) * t(static_cast<i64>(n) - 4);
  CHECK(close(r.value, direct, r.abs_term_sum));
  CHECK(restricted_sum(t, 5, 4, 1).value == cplx{});
  CHECK_THROWS_AS(restricted_sum(t, 7, 4, 100), Error);
  CHECK_THROWS_AS(restricted_sum(t, 5, 10, 100), Error);
  CHECK_THROWS_AS(restricted_sum(t, 3, 3, 100), Error);
}

TEST_CASE("short sums") {
  Rng rng(4);
  const auto chi = pick_primitive(rng, 101);
  const CharacterTable t(chi);
  const auto one = short_sum(t, 50, 1, 3, 2, 5);
  CHECK(std::abs(one.value - t(50 * 3 + 10)) < 1e-15);
  for (u64 d : {1, 2, 7, 99}) {
    const auto full = short_sum(t, 1234, 101, d, 1, 1);
    CHECK(std::abs(full.value) < 1e-9 * 101);
  }
  CHECK_THROWS_AS(short_sum(t, 10, 0, 1, 1, 1), Error);
  CHECK_THROWS_AS(short_sum(t, 10, 5, 2, 4, 1), Error);
  CHECK_THROWS_AS(short_sum(t, 10, 5, 1, 1, 101), Error);
}

TEST_CASE("sy sums") {
  Rng rng(8);
  const auto chi = pick_primitive(rng, 15);
  const CharacterTable t(chi);
  CHECK(sy_sum(t, 20, 0, 1, 2).value == cplx{});
  const auto s = sy_sum(t, 15, 15, 1, 2);
  CHECK(std::abs(s.value - naive_sy(chi, 15, 15, 1, 2)) < 1e-13);
  cplx window = 0;
  for (i64 n = 1; n <= 15; ++n)
    if (std::gcd(n, i64{15}) == 1) window += t(n - 1);
  CHECK(std::abs(sy_sum(t, 15, 15, 1, 1).value - window) < 1e-13);
  CHECK_THROWS_AS(sy_sum(t, 15, 15, 3, 1), Error);
}

TEST_CASE("double sums") {
  Rng rng(6);
  const auto chi = pick_primitive(rng, 89);
  const CharacterTable t(chi);
  BilinearRange r{20, 10, 15, 1, 3, 5000};
  CHECK(double_sum(t, coefficients::zero(), coefficients::one(), r).value == cplx{});
  CHECK(double_sum(t, coefficients::one(), coefficients::zero(), r).value == cplx{});
  // outer range of length one
  BilinearRange single{1, 10, 12, 1, 3, 5000};
  cplx inner = 0;
  for (u64 n = 13; n <= 20; ++n) inner += t(static_cast<i64>(2 * n) - 3);
  CHECK(std::abs(double_sum(t, coefficients::one(), coefficients::one(), single).value - inner) < 1e-13);
  CHECK_THROWS_AS(double_sum(t, coefficients::one(), coefficients::one(), BilinearRange{5, 10, 9, 1, 3, 100}), Error);
  CHECK_THROWS_AS(double_sum(t, coefficients::one(), coefficients::one(), BilinearRange{5, 10, 20, 1, 3, 100}), Error);
  for (u64 m = 1; m <= 500; ++m) {
    REQUIRE(coefficients::mobius()(m) == oracle::mobius(m));
    const i64 a = coefficients::tau5_signed(42)(m);
    REQUIRE(std::abs(a) <= static_cast<i64>(oracle::tau_r(m, 5)));
    REQUIRE(a == coefficients::tau5_signed(42)(m));
  }
  CHECK_THROWS_AS(coefficients::by_name("nope"), Error);
}

TEST_CASE("burgess moments") {
  Rng rng(12);
  for (u64 q : {5, 13, 35, 77, 97}) {
    const auto chi = pick_primitive(rng, q);
    const CharacterTable t(chi);
    for (unsigned r = 1; r <= 3; ++r)
      CHECK(burgess_moment_2r(t, 1, r) == doctest::Approx(static_cast<double>(oracle::phi(q))).epsilon(1e-12));
    for (u64 Z : {2, 5, 9}) {
      // expand |S|^2 as a double sum over z1, z2
      double expanded = 0;
      for (u64 z1 = 1; z1 <= Z; ++z1)
        for (u64 z2 = 1; z2 <= Z; ++z2)
          for (u64 lam = 0; lam < q; ++lam)
            expanded += (value(chi, static_cast<i64>(lam + z1)) * std::conj(value(chi, static_cast<i64>(lam + z2)))).real();
      const double m1 = burgess_moment_2r(t, Z, 1);
      REQUIRE(std::abs(m1 - expanded) < 1e-9 * static_cast<double>(q * Z * Z));
    }
  }
  const auto chi13 = pick_primitive(rng, 13);
  double direct = 0;
  for (u64 lam = 0; lam < 13; ++lam) {
    cplx s = 0;
    for (u64 z = 1; z <= 3; ++z) s += value(chi13, static_cast<i64>(lam + z));
    direct += std::pow(std::norm(s), 2);
  }
  CHECK(burgess_moment_2r(CharacterTable(chi13), 3, 2) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("sextic moment") {
  Rng rng(13);
  CHECK(burgess_sextic(CharacterTable(pick_primitive(rng, 7)), 1, 1000) == doctest::Approx(6.0));
  CHECK(burgess_sextic(CharacterTable(pick_primitive(rng, 11)), 1, 1000) == doctest::Approx(10.0));
  for (u64 q : {67, 101, 128}) {
    const auto chi = pick_primitive(rng, q);
    double direct = 0;
    for (u64 z1 = 1; z1 <= 2; ++z1) for (u64 z2 = 1; z2 <= 2; ++z2) for (u64 z3 = 1; z3 <= 2; ++z3)
    for (u64 z4 = 1; z4 <= 2; ++z4) for (u64 z5 = 1; z5 <= 2; ++z5) for (u64 z6 = 1; z6 <= 2; ++z6) {
      cplx s = 0;
      for (u64 lam = 0; lam < q; ++lam) {
        const u64 den = (lam + z4) * (lam + z5) % q * (lam + z6) % q;
        if (std::gcd(den, q) != 1) continue;
        const u64 num = (lam + z1) * (lam + z2) % q * (lam + z3) % q;
        s += value(chi, static_cast<i64>(num * oracle::mod_inverse(den, q) % q));
      }
      direct += std::abs(s);
    }
    CHECK(burgess_sextic(CharacterTable(chi), 2, 1000000) == doctest::Approx(direct).epsilon(1e-11));
  }
  const CharacterTable t(pick_primitive(rng, 101));
  CHECK_THROWS_AS(burgess_sextic(t, 3, 1000000000), Error);  // 3^6 > 101
  try {
    burgess_sextic(t, 2, 1000);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::budget_exceeded);
  }
  auto b = UnitGroupBasis::create(128);
  CHECK_THROWS_AS(burgess_sextic(CharacterTable(principal_character(b)), 1, 1000), Error);
}

TEST_CASE("coprime count") {
  const auto c = coprime_count_check(12, 10);
  CHECK(c.count == 3);
  CHECK(c.deviation_numerator == 1);
  CHECK(c.deviation_denominator == 3);
  CHECK(c.bound == 4);
  CHECK(c.holds);
  const auto full = coprime_count_check(30, 90);
  CHECK(full.deviation_numerator == 0);
  const auto one = coprime_count_check(1, 17);
  CHECK(one.deviation_numerator == 0);
  CHECK(one.bound == 1);
  for (u64 q = 1; q <= 200; ++q)
    for (u64 U = 1; U <= 200; U += 7) {
      u64 count = 0;
      for (u64 u = 1; u <= U; ++u) count += std::gcd(u, q) == 1;
      REQUIRE(coprime_count_check(q, U).count == count);
    }
}

TEST_CASE("evaluators do not depend on how the range is cut") {
  Rng rng(31);
  ThreadPool pool(4);
  const auto chi = pick(rng, 840);
  const CharacterTable t(chi);
  const auto chi_q = pick_primitive(rng, 97);
  const CharacterTable tq(chi_q);
  const auto ref_t = shifted_prime_sum(t, 11, 60000);
  const auto ref_s = short_sum(tq, 40000, 30000, 3, 1, 2);
  const auto ref_w = double_sum(tq, coefficients::mobius(), coefficients::one(), BilinearRange{200, 100, 150, 1, 3, 60000});
  for (u64 block : {u64{97}, u64{4096}, u64{1} << 20}) {
    const Parallelism par{&pool, block};
    REQUIRE(std::abs(shifted_prime_sum(t, 11, 60000, par).value - ref_t.value) <= 1e-10 * ref_t.abs_term_sum);
    REQUIRE(std::abs(short_sum(tq, 40000, 30000, 3, 1, 2, par).value - ref_s.value) <= 1e-10 * ref_s.abs_term_sum);
    REQUIRE(std::abs(double_sum(tq, coefficients::mobius(), coefficients::one(), BilinearRange{200, 100, 150, 1, 3, 60000}, par).value -
                     ref_w.value) <= 1e-10 * ref_w.abs_term_sum);
  }
}

TEST_CASE("bitwise reproducible for a fixed block size") {
  Rng rng(32);
  const auto chi = pick(rng, 997);
  const CharacterTable t(chi);
  ThreadPool one(1), many(8);
  const auto a = shifted_prime_sum(t, 5, 100000, Parallelism{&one, 1000});
  const auto b = shifted_prime_sum(t, 5, 100000, Parallelism{&many, 1000});
  CHECK(a.value.real() == b.value.real());
  CHECK(a.value.imag() == b.value.imag());
  CHECK(a.abs_term_sum == b.abs_term_sum);
  CHECK(a.term_count == b.term_count);
}

TEST_CASE("all characters at once match the direct sums") {
  for (u64 D : {3, 8, 45, 105, 128, 360}) {
    auto basis = UnitGroupBasis::create(D);
    const u64 x = 3000;
    const auto lambda = arith::mangoldt_sieve(1, x);
    const u64 l = 11;
    const auto all = all_shifted_prime_sums(*basis, l, x, lambda);
    const auto chars = enumerate_characters(basis);
    REQUIRE(all.size() == chars.size());
    for (std::size_t i = 0; i < chars.size(); ++i) {
      const auto s = shifted_prime_sum(CharacterTable(chars[i]), l, x, lambda);
      REQUIRE(std::abs(all[i] - s.value) < 1e-9 * s.abs_term_sum);
    }
  }
}
