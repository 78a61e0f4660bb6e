#pragma once

#include <cstdint>
#include <vector>

#include "arith.hpp"
#include "json.hpp"
#include "rng.hpp"

namespace charsum::census {

using arith::u64;

// (n d + eta k) y = (n1 d + eta k) y1 (mod q), n, n1 in (M, M + N],
// 1 <= y, y1 <= Y, (y, q) = (y1, q) = 1.
struct CongruenceParams {
  u64 q = 0, d = 1, eta = 1, k = 1, M = 0, N = 1, Y = 1;
};

struct CongruenceInstance {
  CongruenceParams params;
  u64 K = 0;
  u64 diagonal = 0;     // y = y1
  u64 kappa1 = 0;       // y < y1, n1 d + eta k = 0 mod q/d
  u64 kappa2 = 0;       // y < y1, (n1 d + eta k) t = 0 but n1 d + eta k != 0
  u64 kappa3 = 0;       // y < y1, (n1 d + eta k) t != 0
  u64 upper = 0;        // y > y1
  u64 unclassified = 0; // y < y1 but y1 - y not a multiple of d, or (n - n1) y != (n1 d + eta k) t mod q/d
  u64 rho = 0;
  u64 tau_max = 0;      // max tau(lambda) over 1 <= lambda < NY
  u64 y_coprime = 0;    // #{y <= Y : (y, q) = 1}

  u64 kappa() const { return kappa1 + kappa2 + kappa3; }
  bool partition_exhaustive() const {
    return unclassified == 0 && upper == kappa() && K == diagonal + 2 * kappa();
  }

  // Explicit sub-bounds, compared in exact integer arithmetic.
  bool diagonal_bound() const { return diagonal <= params.N * params.Y; }
  bool kappa1_bound() const { return kappa1 * params.d <= 2 * params.Y * params.Y; }
  bool kappa2_bound() const { return kappa2 * params.d <= 2 * params.Y * params.Y * rho; }
  bool kappa3_bound() const { return kappa3 * params.d <= params.N * (params.Y + params.d) * tau_max; }
};

// Throws a precondition error naming the first violated hypothesis.
void validate(const CongruenceParams& p);

CongruenceInstance congruence_census(const CongruenceParams& p, u64 work_budget = 1'000'000'000);

// #{beta | q/d : q/Y <= beta < q/d, (beta, d) = 1}
u64 rho_divisor_count(u64 q, u64 d, u64 Y);

// max tau(lambda) over 1 <= lambda < n; 0 when the range is empty.
u64 max_divisor_count_below(u64 n);

// A valid instance with q <= q_max drawn from rng.
CongruenceParams random_instance(Rng& rng, u64 q_max);

nlohmann::json to_json(const CongruenceParams& p);
nlohmann::json to_json(const CongruenceInstance& inst);
CongruenceParams params_from_json(const nlohmann::json& j);

}  // namespace charsum::census
