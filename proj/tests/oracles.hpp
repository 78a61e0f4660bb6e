#pragma once

// Naive single-threaded reference implementations. Deliberately written
// without the library's tables, sieves or reductions.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;
using i64 = std::int64_t;

inline std::vector<std::pair<u64, unsigned>> factor(u64 n) {
  std::vector<std::pair<u64, unsigned>> out;
  for (u64 p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    unsigned a = 0;
    while (n % p == 0) n /= p, ++a;
    out.push_back({p, a});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

inline u64 phi(u64 n) {
  u64 c = 0;
  for (u64 u = 1; u <= n; ++u) c += std::gcd(u, n) == 1;
  return c;
}

inline int mobius(u64 n) {
  int s = 1;
  for (auto [p, a] : factor(n)) {
    if (a > 1) return 0;
    s = -s;
  }
  return s;
}

inline u64 tau_r(u64 n, unsigned r) {
  if (r == 1) return 1;
  u64 c = 0;
  for (u64 d = 1; d <= n; ++d)
    if (n % d == 0) c += tau_r(n / d, r - 1);
  return c;
}

inline std::vector<u64> divisors(u64 n) {
  std::vector<u64> out;
  for (u64 d = 1; d <= n; ++d)
    if (n % d == 0) out.push_back(d);
  return out;
}

inline double mangoldt(u64 n) {
  if (n < 2) return 0.0;
  const auto f = factor(n);
  return f.size() == 1 ? std::log(static_cast<double>(f[0].first)) : 0.0;
}

inline u64 largest_prime_factor(u64 n) {
  u64 best = 1;
  for (auto [p, a] : factor(n)) best = p;
  return best;
}

inline u64 smooth_count(u64 x, u64 z, u64 b) {
  u64 c = 0;
  for (u64 n = 1; n < x; ++n)
    if (std::gcd(n, b) == 1 && (n == 1 || largest_prime_factor(n) < z)) ++c;
  return c;
}

inline u64 mod_inverse(u64 a, u64 m) {
  for (u64 v = 0; v < m; ++v)
    if ((a % m) * v % m == 1 % m) return v;
  return 0;
}

inline int truncated_mobius(u64 n, u64 u1) {
  int s = 0;
  for (u64 d = 1; d <= std::min(n, u1); ++d)
    if (n % d == 0) s += mobius(d);
  return s;
}

inline int legendre(u64 a, u64 p) {
  a %= p;
  if (a == 0) return 0;
  u64 r = 1, b = a, e = (p - 1) / 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r == 1 ? 1 : -1;
}

inline i64 reduce(i64 a, u64 m) {
  const i64 r = a % static_cast<i64>(m);
  return r < 0 ? r + static_cast<i64>(m) : r;
}

// Congruence census by four nested loops, ordered (y, y1, n, n1).
struct Census {
  u64 K = 0, diagonal = 0, kappa1 = 0, kappa2 = 0, kappa3 = 0, upper = 0;
};

inline Census census(u64 q, u64 d, u64 eta, u64 k, u64 M, u64 N, u64 Y) {
  Census c;
  const u64 m = q / d;
  for (u64 y = 1; y <= Y; ++y) {
    if (std::gcd(y, q) != 1) continue;
    for (u64 y1 = 1; y1 <= Y; ++y1) {
      if (std::gcd(y1, q) != 1) continue;
      for (u64 n = M + 1; n <= M + N; ++n) {
        for (u64 n1 = M + 1; n1 <= M + N; ++n1) {
          const u64 lhs = ((n * d + eta * k) % q) * y % q;
          const u64 rhs = ((n1 * d + eta * k) % q) * y1 % q;
          if (lhs != rhs) continue;
          ++c.K;
          if (y == y1) {
            ++c.diagonal;
          } else if (y > y1) {
            ++c.upper;
          } else {
            const u64 t = (y1 - y) / d;
            const u64 a = (n1 * d + eta * k) % m;
            if (a == 0) ++c.kappa1;
            else if (a * t % m == 0) ++c.kappa2;
            else ++c.kappa3;
          }
        }
      }
    }
  }
  return c;
}

}  // namespace oracle
