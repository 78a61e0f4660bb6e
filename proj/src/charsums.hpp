#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "arith.hpp"
#include "dirichlet.hpp"
#include "parallel.hpp"
#include "summation.hpp"

namespace charsum::sums {

using arith::i64;
using arith::u64;
using dirichlet::CharacterTable;
using dirichlet::DirichletCharacter;

// T(chi) = sum_{n <= x} Lambda(n) chi(n - l). Requires gcd(l, D) = 1.
SumValue shifted_prime_sum(const CharacterTable& chi, u64 l, u64 x, const arith::MangoldtTable& lambda,
                           const Parallelism& par = {});
SumValue shifted_prime_sum(const CharacterTable& chi, u64 l, u64 x, const Parallelism& par = {});

// T(chi_q, nu): the same sum restricted to (n, q) = 1 and n = l mod nu.
SumValue restricted_sum(const CharacterTable& chi_q, u64 nu, u64 l, u64 x, const arith::MangoldtTable& lambda,
                        const Parallelism& par = {});
SumValue restricted_sum(const CharacterTable& chi_q, u64 nu, u64 l, u64 x, const Parallelism& par = {});

// sum_{M - N < n <= M} chi_q(n d + eta k)
SumValue short_sum(const CharacterTable& chi_q, i64 M, u64 N, u64 d, u64 k, u64 eta, const Parallelism& par = {});

// sum over u - y < n <= u with (n, q) = 1 and n = eta mod nu of chi_q(n - eta)
SumValue sy_sum(const CharacterTable& chi_q, i64 u, i64 y, u64 eta, u64 nu, const Parallelism& par = {});

// Deterministic integer-valued coefficient sequences for bilinear sums.
using Coefficient = std::function<i64(u64)>;

namespace coefficients {
Coefficient zero();
Coefficient one();
Coefficient mobius();
// s(m) tau_5(m) with a seeded sign pattern s(m) in {-1, 0, 1}; |a_m| <= tau_5(m).
Coefficient tau5_signed(u64 seed);
Coefficient by_name(const std::string& name, u64 seed = 0);
}  // namespace coefficients

struct BilinearRange {
  u64 M = 0;   // m in (M, 2M]
  u64 N = 1;
  u64 U = 1;   // n in (U, min(x/m, 2N)], N <= U < 2N
  u64 nu = 1;
  u64 l = 1;
  u64 x = 0;
};

// W = sum_m a_m sum_n b_n chi_q(mn - l) with (mn, q) = 1 and mn = l mod nu.
SumValue double_sum(const CharacterTable& chi_q, const Coefficient& a, const Coefficient& b,
                    const BilinearRange& range, const Parallelism& par = {});

// sum_{lambda=0}^{q-1} |sum_{z=1}^{Z} chi_q(lambda + z)|^{2r}
double burgess_moment_2r(const CharacterTable& chi_q, u64 Z, unsigned r, const Parallelism& par = {});

// sum over z_1..z_6 in [1, Z] of |sum_lambda chi_q of the sextic ratio|;
// lambda with a non-invertible factor contributes 0.
double burgess_sextic(const CharacterTable& chi_q, u64 Z, u64 work_budget, const Parallelism& par = {});

struct CoprimeCount {
  u64 count = 0;
  // |count - phi(q) U / q| = deviation_numerator / deviation_denominator, reduced
  u64 deviation_numerator = 0;
  u64 deviation_denominator = 1;
  u64 bound = 1;  // 2^omega(q)
  bool holds = true;

  double deviation() const {
    return static_cast<double>(deviation_numerator) / static_cast<double>(deviation_denominator);
  }
};

CoprimeCount coprime_count_check(u64 q, u64 U);
CoprimeCount coprime_count_check(const arith::FactoredInteger& q, u64 U, u64 count);

// T(chi) for every character mod D at once, indexed like enumerate_characters.
// Uses a multidimensional FFT over the unit group; for sweeps, not audits.
std::vector<std::complex<double>> all_shifted_prime_sums(const dirichlet::UnitGroupBasis& basis, u64 l, u64 x,
                                                         const arith::MangoldtTable& lambda);

}  // namespace charsum::sums
