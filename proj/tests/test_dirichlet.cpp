#include <complex>
#include <numeric>
#include <set>

#include "dirichlet.hpp"
#include "doctest.h"
#include "errors.hpp"
#include "oracles.hpp"
#include "rng.hpp"

using namespace charsum;
using namespace charsum::dirichlet;

namespace {

std::vector<std::complex<double>> unit_values(const DirichletCharacter& chi) {
  std::vector<std::complex<double>> v;
  for (u64 n = 1; n <= chi.modulus(); ++n)
    if (std::gcd(n, chi.modulus()) == 1) v.push_back(chi(static_cast<i64>(n)).to_complex());
  return v;
}

bool same_values(const std::vector<std::complex<double>>& a, const std::vector<std::complex<double>>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > 1e-12) return false;
  return true;
}

// conductor by definition: the least q | D with chi trivial on units = 1 mod q
u64 conductor_by_kernel(const DirichletCharacter& chi) {
  const u64 D = chi.modulus();
  for (u64 q : oracle::divisors(D)) {
    bool trivial = true;
    for (u64 n = 1; n <= D && trivial; n += q)
      if (std::gcd(n, D) == 1 && !(chi(static_cast<i64>(n)) == CharacterValue::root(0, 1))) trivial = false;
    if (trivial) return q;
  }
  return D;
}

}  // namespace

TEST_CASE("unit group basis structure") {
  auto b1 = UnitGroupBasis::create(1);
  CHECK(b1->rank() == 0);
  CHECK(b1->order() == 1);

  auto b8 = UnitGroupBasis::create(8);
  REQUIRE(b8->rank() == 2);
  CHECK(b8->generators()[0].order == 2);
  CHECK(b8->generators()[0].residue == 7);
  CHECK(b8->generators()[1].order == 2);
  CHECK(b8->generators()[1].residue == 5);

  CHECK(UnitGroupBasis::create(2)->rank() == 0);
  CHECK(UnitGroupBasis::create(4)->rank() == 1);

  for (u64 D : {45, 16, 360, 1001, 4096, 9450}) {
    auto b = UnitGroupBasis::create(D);
    u64 prod = 1;
    for (const auto& g : b->generators()) prod *= g.order;
    CHECK(prod == oracle::phi(D));
    std::set<std::vector<u64>> seen;
    std::vector<u64> e(b->rank());
    for (u64 u = 0; u < D; ++u) {
      const bool unit = b->discrete_log(static_cast<i64>(u), e);
      REQUIRE(unit == (std::gcd(u, D) == 1));
      if (!unit) continue;
      for (std::size_t i = 0; i < e.size(); ++i) REQUIRE(e[i] < b->generators()[i].order);
      // reconstruct u from the exponent vector
      u64 v = 1 % D;
      for (std::size_t i = 0; i < e.size(); ++i)
        for (u64 j = 0; j < e[i]; ++j) v = v * b->generators()[i].residue % D;
      REQUIRE(v == u);
      seen.insert(e);
    }
    CHECK(seen.size() == oracle::phi(D));
  }
}

TEST_CASE("generators have exact order") {
  for (u64 D : {27, 50, 64, 97 * 4, 3 * 5 * 7 * 8}) {
    auto b = UnitGroupBasis::create(D);
    for (const auto& g : b->generators()) {
      u64 v = g.residue % D, ord = 1;
      while (v != 1) v = v * g.residue % D, ++ord;
      CHECK(ord == g.order);
    }
  }
}

TEST_CASE("discrete logs for large components") {
  const u64 p = 1000003;
  auto b = UnitGroupBasis::create(p * 8);
  std::vector<u64> e(b->rank());
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const u64 u = rng.uniform(1, p * 8 - 1);
    const bool unit = b->discrete_log(static_cast<i64>(u), e);
    REQUIRE(unit == (std::gcd(u, p * 8) == 1));
  }
  const u64 big = 4294967311ULL;  // prime > 2^32, beyond the dense tables
  auto bb = UnitGroupBasis::create(big);
  std::vector<u64> e1(1);
  for (int i = 0; i < 50; ++i) {
    const u64 u = rng.uniform(2, big - 1);
    REQUIRE(bb->discrete_log(static_cast<i64>(u), e1));
    REQUIRE(arith::pow_mod(bb->generators()[0].residue, e1[0], big) == u);
  }
}

TEST_CASE("enumeration") {
  CHECK(enumerate_characters(UnitGroupBasis::create(1)).size() == 1);
  CHECK(enumerate_characters(UnitGroupBasis::create(5)).size() == 4);
  const auto c12 = enumerate_characters(UnitGroupBasis::create(12));
  REQUIRE(c12.size() == 4);
  CHECK(c12[0].is_principal());
  int nonprincipal = 0;
  for (std::size_t i = 0; i < c12.size(); ++i) {
    nonprincipal += !c12[i].is_principal();
    CHECK(c12[i].index() == i);
    for (std::size_t j = i + 1; j < c12.size(); ++j) CHECK(!same_values(unit_values(c12[i]), unit_values(c12[j])));
  }
  CHECK(nonprincipal == 3);
  for (u64 D = 1; D <= 2000; ++D)
    REQUIRE(enumerate_characters(UnitGroupBasis::create(D)).size() == oracle::phi(D));
}

TEST_CASE("evaluation") {
  auto b12 = UnitGroupBasis::create(12);
  CHECK(principal_character(b12)(7) == CharacterValue::root(0, 1));
  for (const auto& chi : enumerate_characters(b12)) {
    CHECK(chi(6).is_zero);
    CHECK(chi(-4).is_zero);
    CHECK(chi(1) == CharacterValue::root(0, 1));
  }
  // the quadratic character mod 5 is the Legendre symbol
  for (u64 p : {5, 7, 11, 101, 257}) {
    int quadratic = 0;
    for (const auto& chi : enumerate_characters(UnitGroupBasis::create(p))) {
      if (chi.order() != 2) continue;
      ++quadratic;
      for (i64 n = -20; n <= 2 * static_cast<i64>(p); ++n)
        REQUIRE(std::abs(chi(n).to_complex() - std::complex<double>(oracle::legendre(oracle::reduce(n, p), p))) < 1e-12);
    }
    CHECK(quadratic == 1);
  }
  const auto c5 = enumerate_characters(UnitGroupBasis::create(5));
  for (const auto& chi : c5)
    if (chi.order() == 2) CHECK(std::abs(chi(2).to_complex() + 1.0) < 1e-15);
}

TEST_CASE("values are roots of unity and completely multiplicative") {
  Rng rng(17);
  for (u64 D : {7, 24, 45, 360, 997, 1155, 4096}) {
    auto b = UnitGroupBasis::create(D);
    const auto chars = enumerate_characters(b);
    for (int trial = 0; trial < 30; ++trial) {
      const auto& chi = chars[rng.uniform(0, chars.size() - 1)];
      const i64 u = static_cast<i64>(rng.uniform(1, 5 * D)), v = static_cast<i64>(rng.uniform(1, 5 * D));
      REQUIRE(chi(u * v) == chi(u) * chi(v));
      REQUIRE(chi(u).is_zero == (std::gcd(static_cast<u64>(u), D) != 1));
      if (!chi(u).is_zero) REQUIRE(std::abs(std::abs(chi(u).to_complex()) - 1.0) < 1e-12);
      REQUIRE(chi(u) == chi(u + static_cast<i64>(D)));
      REQUIRE(chi(u).conj() * chi(u) == (chi(u).is_zero ? CharacterValue::zero() : CharacterValue::root(0, 1)));
    }
  }
}

TEST_CASE("orthogonality for every modulus up to 500") {
  for (u64 D = 1; D <= 500; ++D) {
    const auto chars = enumerate_characters(UnitGroupBasis::create(D));
    const double phi = static_cast<double>(chars.size());
    std::vector<std::complex<double>> column(D, 0.0);
    for (const auto& chi : chars) {
      const CharacterTable t(chi);
      for (u64 n = 0; n < D; ++n) column[n] += t.at_residue(n);
    }
    for (u64 n = 0; n < D; ++n) {
      const double expected = n == 1 % D ? phi : 0.0;
      REQUIRE(std::abs(column[n] - expected) < 1e-9 * phi);
    }
  }
}

TEST_CASE("table and exact evaluation agree") {
  for (u64 D : {1, 2, 8, 63, 720}) {
    for (const auto& chi : enumerate_characters(UnitGroupBasis::create(D))) {
      const CharacterTable t(chi);
      for (i64 n = -3 * static_cast<i64>(D); n <= 3 * static_cast<i64>(D); ++n)
        REQUIRE(std::abs(t(n) - chi(n).to_complex()) < 1e-13);
    }
  }
}

TEST_CASE("conductor") {
  auto b12 = UnitGroupBasis::create(12);
  CHECK(conductor(principal_character(b12)).value() == 1);
  for (u64 p : {3, 5, 13, 101})
    for (const auto& chi : enumerate_characters(UnitGroupBasis::create(p)))
      CHECK(conductor(chi).value() == (chi.is_principal() ? 1 : p));
  for (u64 D = 1; D <= 400; ++D)
    for (const auto& chi : enumerate_characters(UnitGroupBasis::create(D)))
      REQUIRE(conductor(chi).value() == conductor_by_kernel(chi));
}

TEST_CASE("quadratic character mod 8 lifted to 24") {
  auto b8 = UnitGroupBasis::create(8);
  auto b24 = UnitGroupBasis::create(24);
  for (const auto& chi8 : enumerate_characters(b8)) {
    if (!is_primitive(chi8)) continue;
    // find the character mod 24 that agrees with chi8 on units of 24
    for (const auto& chi24 : enumerate_characters(b24)) {
      bool agree = true;
      for (i64 n = 1; n < 24; ++n)
        if (std::gcd(n, i64{24}) == 1 && !(chi24(n) == chi8(n))) agree = false;
      if (!agree) continue;
      CHECK(conductor(chi24).value() == 8);
      const auto induced = induce_primitive(chi24);
      CHECK(induced.modulus() == 8);
      CHECK(induced == chi8);
    }
  }
}

TEST_CASE("induced primitive characters") {
  Rng rng(23);
  for (u64 D : {24, 45, 180, 1001, 2310, 4096, 9720}) {
    const auto chars = enumerate_characters(UnitGroupBasis::create(D));
    for (int trial = 0; trial < 15; ++trial) {
      const auto& chi = chars[rng.uniform(1, chars.size() - 1)];
      const auto chi_q = induce_primitive(chi);
      REQUIRE(chi_q.modulus() == conductor(chi).value());
      REQUIRE(is_primitive(chi_q));
      int checked = 0;
      while (checked < 100) {
        const i64 n = static_cast<i64>(rng.uniform(1, 100 * D));
        if (std::gcd(static_cast<u64>(n), D) != 1) continue;
        ++checked;
        REQUIRE(chi(n) == chi_q(n));
        REQUIRE(chi_q(n) == chi_q(n + static_cast<i64>(chi_q.modulus())));
      }
    }
  }
  const auto primitive = enumerate_characters(UnitGroupBasis::create(13))[5];
  CHECK(induce_primitive(primitive) == primitive);
  CHECK_THROWS_AS(induce_primitive(principal_character(UnitGroupBasis::create(13))), Error);
}

TEST_CASE("gauss sums") {
  CHECK(std::abs(gauss_sum(principal_character(UnitGroupBasis::create(1))) - 1.0) < 1e-15);
  for (const auto& chi : enumerate_characters(UnitGroupBasis::create(5))) {
    if (chi.order() != 2) continue;
    std::complex<double> direct = 0;
    for (int a = 1; a <= 5; ++a) direct += chi(a).to_complex() * std::polar(1.0, 2 * M_PI * a / 5.0);
    CHECK(std::abs(gauss_sum(chi) - direct) < 1e-12);
    CHECK(std::abs(gauss_sum(chi) - std::sqrt(5.0)) < 1e-12);
  }
  for (u64 q = 1; q <= 200; ++q) {
    for (const auto& chi : enumerate_characters(UnitGroupBasis::create(q))) {
      if (!is_primitive(chi)) continue;
      REQUIRE(std::abs(std::norm(gauss_sum(chi)) - static_cast<double>(q)) < 1e-6 * static_cast<double>(q));
    }
  }
  CHECK_THROWS_AS(gauss_sum(principal_character(UnitGroupBasis::create(12))), Error);
}

TEST_CASE("json round trip") {
  for (const auto& chi : enumerate_characters(UnitGroupBasis::create(360))) {
    const auto j = to_json(chi);
    CHECK(j.at("modulus") == 360);
    CHECK(character_from_json(j) == chi);
  }
  CHECK_THROWS_AS(character_from_json(nlohmann::json{{"modulus", 8}, {"exponents", {1}}}), Error);
  CHECK_THROWS_AS(character_from_json(nlohmann::json{{"modulus", 8}, {"exponents", {0, 2}}}), Error);
}
