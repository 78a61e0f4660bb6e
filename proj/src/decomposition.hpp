#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "arith.hpp"
#include "dirichlet.hpp"
#include "parallel.hpp"
#include "summation.hpp"

namespace charsum::decomposition {

using arith::i64;
using arith::u64;
using dirichlet::CharacterTable;
using dirichlet::DirichletCharacter;

// Weights f(n) for n = 0..x; f[0] is ignored.
using Weight = std::vector<std::complex<double>>;

Weight constant_weight(u64 x, std::complex<double> value = 1.0);
// f(n) = chi(n - l)
Weight character_weight(const CharacterTable& chi, u64 l, u64 x);
// f(n) = chi_q(n - l) when (n, q) = 1 and n = l mod nu, else 0
Weight restricted_weight(const CharacterTable& chi_q, u64 nu, u64 l, u64 x);

struct HeadGroup {
  int k = 0;
  i64 coefficient = 0;  // (-1)^(k-1) C(r, k)
  SumValue value;       // sum over m_1..m_k <= u1, n_1..n_k of mu(m_1)..mu(m_k) ln(n_1) f(m n)
};

struct Decomposition {
  u64 x = 0;
  u64 u1 = 0;
  int r = 0;
  std::vector<HeadGroup> heads;
  i64 tail_coefficient = 0;  // (-1)^r
  SumValue tail;             // sum over n_i > u1 of lambda(n_1)..lambda(n_r) Lambda(m) f(m n)
  SumValue direct;           // sum_{n <= x} Lambda(n) f(n)
  std::complex<double> combined;
  double residual = 0.0;     // |combined - direct|
};

// The identity expressing sum Lambda(n) f(n) through truncated Mobius sums.
// Exact for every u1 >= 1 and r >= 1; each group is evaluated through
// Dirichlet convolutions of its coefficient sequence.
Decomposition hb_decompose(std::span<const std::complex<double>> f, u64 x, u64 u1, int r);

// The k-th head group split into dyadic boxes: each m_i and n_i lies in
// (2^(j-1), 2^j] (j = 0 means the value 1).
struct DyadicBlock {
  std::vector<std::uint8_t> exponents;  // j for m_1..m_k, then n_1..n_k
  SumValue value;
};

struct DyadicSplit {
  int k = 0;
  std::vector<DyadicBlock> blocks;  // ascending by exponents
  SumValue total;
};

DyadicSplit dyadic_split(std::span<const std::complex<double>> f, u64 x, u64 u1, int k);

struct RecombinationTerm {
  u64 nu = 1;
  int mu = 1;
  SumValue value;  // restricted sum T(chi_q, nu)
};

struct Recombination {
  u64 D = 1, q = 1, q1 = 1, l = 1, x = 0;
  SumValue full;        // T(chi)
  SumValue correction;  // sum over n <= x with (n, q) > 1 of Lambda(n) chi(n - l)
  std::vector<RecombinationTerm> terms;
  double nu_threshold = 0.0;  // exp(sqrt(2 ln D))
  std::complex<double> small_nu_part;
  std::complex<double> large_nu_part;
  std::complex<double> recombined;
  double residual = 0.0;
  double scale = 0.0;   // mass used for relative tolerances
};

// T(chi) = sum_{nu | q1} mu(nu) T(chi_q, nu) + correction, with q the conductor
// of chi and q1 the product of the primes of D not dividing q.
Recombination mobius_recombination(const DirichletCharacter& chi, u64 l, u64 x, const Parallelism& par = {});

struct PipelineOptions {
  int r = 3;
  u64 u1 = 0;  // 0 selects ceil(x^(1/3))
  bool dyadic = true;
};

struct PipelineTerm {
  u64 nu = 1;
  int mu = 1;
  Decomposition identity;
  std::vector<DyadicSplit> splits;  // one per head group when requested
  double split_residual = 0.0;      // max |split total - head group|
};

struct PipelineResult {
  Recombination recombination;
  std::vector<PipelineTerm> terms;
  double max_identity_residual = 0.0;
  double max_split_residual = 0.0;
};

// T(chi) -> restricted sums over nu | q1 -> identity groups -> dyadic boxes.
PipelineResult shifted_prime_pipeline(const DirichletCharacter& chi, u64 l, u64 x, const PipelineOptions& options,
                                      const Parallelism& par = {});

// Smallest u with u^k >= x.
u64 integer_root_ceil(u64 x, unsigned k);

}  // namespace charsum::decomposition
