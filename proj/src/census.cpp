#include "census.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "errors.hpp"

namespace charsum::census {
namespace {

using arith::u128;

void check(bool ok, const std::string& name) {
  if (!ok) fail(ErrorCode::precondition, "congruence census precondition violated: " + name);
}

struct Cell {
  u64 value;
  u64 y;
  u64 n;
  bool operator<(const Cell& o) const {
    if (value != o.value) return value < o.value;
    if (y != o.y) return y < o.y;
    return n < o.n;
  }
};

}  // namespace

void validate(const CongruenceParams& p) {
  check(p.q >= 2, "q >= 2");
  check(p.d >= 1 && p.N >= 1 && p.Y >= 1, "d, N, Y >= 1");
  check(std::gcd(p.eta, p.q) == 1, "(eta, q) = 1");
  check(std::gcd(p.k, p.d) == 1, "(k, d) = 1");
  check(p.q % p.d == 0, "d | q");
  check(static_cast<u128>(2) * p.N * p.Y < p.q, "2NY < q");
  check(p.d < p.Y, "d < Y");
  check(p.M <= (u64{1} << 62), "M < 2^62");
}

u64 rho_divisor_count(u64 q, u64 d, u64 Y) {
  require(d >= 1 && q % d == 0, "d | q");
  const u64 m = q / d;
  u64 count = 0;
  for (u64 beta : arith::divisors(arith::factor(m))) {
    if (beta >= m) continue;
    if (static_cast<u128>(beta) * Y < q) continue;
    if (std::gcd(beta, d) != 1) continue;
    ++count;
  }
  return count;
}

u64 max_divisor_count_below(u64 n) {
  if (n <= 1) return 0;
  std::vector<std::uint32_t> tau(n, 0);
  for (u64 a = 1; a < n; ++a)
    for (u64 b = a; b < n; b += a) ++tau[b];
  return *std::max_element(tau.begin() + 1, tau.end());
}

CongruenceInstance congruence_census(const CongruenceParams& p, u64 work_budget) {
  validate(p);
  CongruenceInstance out;
  out.params = p;
  const u64 q = p.q;
  const u64 m = q / p.d;
  const u64 shift = arith::mul_mod(p.eta % q, p.k % q, q);
  const u64 shift_m = shift % m;

  std::vector<u64> ys;
  for (u64 y = 1; y <= p.Y; ++y)
    if (std::gcd(y, q) == 1) ys.push_back(y);
  out.y_coprime = ys.size();
  if (static_cast<u128>(ys.size()) * p.N > work_budget)
    fail(ErrorCode::budget_exceeded, "congruence census exceeds the work budget");

  std::vector<Cell> cells;
  cells.reserve(ys.size() * p.N);
  for (u64 y : ys) {
    for (u64 n = p.M + 1; n <= p.M + p.N; ++n) {
      const u64 base = (arith::mul_mod(n % q, p.d % q, q) + shift) % q;
      cells.push_back({arith::mul_mod(base, y, q), y, n});
    }
  }
  std::sort(cells.begin(), cells.end());

  u64 work = 0;
  for (std::size_t b = 0; b < cells.size();) {
    std::size_t e = b;
    while (e < cells.size() && cells[e].value == cells[b].value) ++e;
    work += (e - b) * (e - b);
    if (work > work_budget) fail(ErrorCode::budget_exceeded, "congruence census exceeds the work budget");
    for (std::size_t i = b; i < e; ++i) {
      for (std::size_t j = b; j < e; ++j) {
        const Cell& s = cells[i];  // (n, y)
        const Cell& t1 = cells[j]; // (n1, y1)
        ++out.K;
        if (s.y == t1.y) {
          ++out.diagonal;
          continue;
        }
        if (s.y > t1.y) {
          ++out.upper;
          continue;
        }
        if ((t1.y - s.y) % p.d != 0) {
          ++out.unclassified;
          continue;
        }
        const u64 t = (t1.y - s.y) / p.d;
        const u64 a = (arith::mul_mod(t1.n % m, p.d % m, m) + shift_m) % m;
        // (n - n1) y = (n1 d + eta k) t (mod q/d)
        const u64 diff = arith::reduce(static_cast<arith::i64>(s.n) - static_cast<arith::i64>(t1.n), m);
        const u64 lhs = arith::mul_mod(diff, s.y % m, m);
        const u64 rhs = arith::mul_mod(a, t % m, m);
        if (lhs != rhs) {
          ++out.unclassified;
          continue;
        }
        if (a == 0) {
          ++out.kappa1;
        } else if (rhs == 0) {
          ++out.kappa2;
        } else {
          ++out.kappa3;
        }
      }
    }
    b = e;
  }

  out.rho = rho_divisor_count(q, p.d, p.Y);
  out.tau_max = max_divisor_count_below(p.N * p.Y);
  return out;
}

CongruenceParams random_instance(Rng& rng, u64 q_max) {
  require(q_max >= 8, "q_max >= 8");
  for (;;) {
    CongruenceParams p;
    p.q = rng.uniform(8, q_max);
    std::vector<u64> ds;
    for (u64 d : arith::divisors(arith::factor(p.q)))
      if (2 * (d + 1) < p.q) ds.push_back(d);
    if (ds.empty()) continue;
    p.d = ds[rng.uniform(0, ds.size() - 1)];
    const u64 y_hi = std::min<u64>((p.q - 1) / 2, p.d + 120);
    if (y_hi <= p.d) continue;
    p.Y = rng.uniform(p.d + 1, y_hi);
    const u64 n_hi = std::min<u64>((p.q - 1) / (2 * p.Y), 60);
    if (n_hi < 1) continue;
    p.N = rng.uniform(1, n_hi);
    p.M = rng.uniform(0, 2 * p.q);
    do {
      p.eta = rng.uniform(1, p.q - 1);
    } while (std::gcd(p.eta, p.q) != 1);
    do {
      p.k = rng.uniform(1, p.q);
    } while (std::gcd(p.k, p.d) != 1);
    return p;
  }
}

nlohmann::json to_json(const CongruenceParams& p) {
  return {{"q", p.q}, {"d", p.d}, {"eta", p.eta}, {"k", p.k}, {"M", p.M}, {"N", p.N}, {"Y", p.Y}};
}

nlohmann::json to_json(const CongruenceInstance& inst) {
  nlohmann::json j = to_json(inst.params);
  j["K"] = inst.K;
  j["diagonal"] = inst.diagonal;
  j["kappa1"] = inst.kappa1;
  j["kappa2"] = inst.kappa2;
  j["kappa3"] = inst.kappa3;
  j["rho"] = inst.rho;
  j["tau_max"] = inst.tau_max;
  j["y_coprime"] = inst.y_coprime;
  return j;
}

CongruenceParams params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) fail(ErrorCode::invalid_argument, "congruence instance must be a JSON object");
  CongruenceParams p;
  auto field = [&](const char* name, u64& slot) {
    if (!j.contains(name)) fail(ErrorCode::invalid_argument, std::string("congruence instance is missing '") + name + "'");
    const auto& v = j.at(name);
    if (!v.is_number_integer() || v.get<long long>() < 0)
      fail(ErrorCode::invalid_argument, std::string("congruence field '") + name + "' must be a nonnegative integer");
    slot = v.get<u64>();
  };
  field("q", p.q);
  field("d", p.d);
  field("eta", p.eta);
  field("k", p.k);
  field("M", p.M);
  field("N", p.N);
  field("Y", p.Y);
  return p;
}

}  // namespace charsum::census
