#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "arith.hpp"
#include "census.hpp"
#include "dirichlet.hpp"
#include "json.hpp"
#include "parallel.hpp"
#include "records.hpp"

namespace charsum::bounds {

using arith::u64;

struct BoundConfig {
  double delta = 1e-4;
  double epsilon = 0.05;
  double c_omega = 1.5;
  double c_phi = 1.0;
  double theta = 0.05;
  u64 work_budget = 1'000'000'000;

  void validate() const;
  nlohmann::json to_json() const;
  // Unknown keys are rejected; missing keys keep their defaults.
  static BoundConfig from_json(const nlohmann::json& j);
};

// Notes (skips, substitutions) emitted while generating reports.
using Log = std::function<void(const std::string&)>;

// ---- right-hand sides

double theorem_rhs(u64 D, double x);
double theorem_rhs_from_log(double log_D, double x);
double census_rhs(const census::CongruenceInstance& inst, double delta);
double smooth_rhs(u64 x, u64 z, const arith::FactoredInteger& b, double theta = 1.0);
double burgess_rhs(u64 q, u64 Z, unsigned r, double delta);
double sextic_rhs(u64 q, u64 Z, double delta);
double short_sum_rhs(u64 q, u64 N, u64 d, double delta);
double sy_sum_rhs(u64 D, u64 y, u64 nu);
double restricted_rhs(u64 x, u64 q, u64 nu);
// quartic-averaging bound for bilinear sums with coefficient-mass exponents c1, c2
double double_sum_rhs(u64 D, u64 q, u64 M, u64 N, double B, double c1, double c2, double delta);
// sextic-averaging variant, for 2N <= q^(1/6)
double double_sum_sextic_rhs(u64 D, u64 q, u64 M, u64 N, double B, double c1, double c2, double delta);

// ---- checks

struct TailSum {
  double lhs = 0.0;
  double rhs = 0.0;
  double threshold = 0.0;
  u64 terms = 0;
};

// sum over squarefree d | q with d > exp(sqrt(2 ln D)) of 1/d, against exp(-0.7 sqrt(ln D))
TailSum big_divisor_tail(u64 q, u64 D);
BoundCheckRecord big_divisor_tail_check(u64 q, u64 D);

BoundCheckRecord smooth_bound_check(u64 x, u64 z, u64 b);

// One record per grid point, sums of tau_r^k(n) for n <= x.
std::vector<BoundCheckRecord> divisor_moment_check(std::span<const u64> x_grid, unsigned r, unsigned k);
BoundCheckRecord divisor_moment_check(u64 x, unsigned r, unsigned k);

// Max over primitive characters mod q of the 2r-th moment.
BoundCheckRecord burgess_check_2r(u64 q, u64 Z, unsigned r, const BoundConfig& config, const Parallelism& par = {});
BoundCheckRecord sextic_check(u64 q, u64 Z, const BoundConfig& config, const Parallelism& par = {});

std::vector<BoundCheckRecord> census_checks(const census::CongruenceInstance& inst, const BoundConfig& config);

BoundCheckRecord coprime_count_record(u64 q, u64 U_max);

struct TheoremOptions {
  double epsilon = 0.05;
  u64 seed = 1;
  unsigned l_samples = 64;
  u64 work_budget = 1'000'000'000;
};

// For each D: x = ceil(D^(5/6 + eps)); lhs = max |T(chi)| over non-principal chi
// whose conductor exceeds exp(sqrt(2 ln D)) and over sampled l; the unfiltered
// maximum is recorded in the parameters.
std::vector<BoundCheckRecord> theorem_report(std::span<const u64> moduli, const TheoremOptions& options,
                                             const Parallelism& par = {}, const Log& log = {});

// Minimal constants for the prime-divisor count and totient ratio estimates
// over q in [3, q_max].
std::vector<BoundCheckRecord> constants_report(u64 q_max, const BoundConfig& config);

// Short sums, window sums, bilinear sums and restricted sums against their bounds.
std::vector<BoundCheckRecord> short_sum_report(std::span<const u64> moduli, const BoundConfig& config, u64 seed,
                                               const Parallelism& par = {});
std::vector<BoundCheckRecord> double_sum_report(std::span<const u64> moduli, const BoundConfig& config, u64 seed,
                                                const Parallelism& par = {});
// Recombination of T(chi) over nu | q1, each restricted sum against the
// intermediate bound, and the large-nu part against its trivial estimate.
std::vector<BoundCheckRecord> restricted_report(const dirichlet::DirichletCharacter& chi, u64 l, u64 x,
                                                const Parallelism& par = {});

}  // namespace charsum::bounds
