#pragma once

// Slow, independent reference computations used to cross-check the library.
// Nothing here calls into szpiro beyond the BigInt type.

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace oracle {

// Plain trial division.
inline std::vector<std::pair<std::uint64_t, unsigned>> trial_factor(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline unsigned repeated_division(mpz_class n, const mpz_class& p) {
  unsigned k = 0;
  while (n != 0 && n % p == 0) {
    n /= p;
    ++k;
  }
  return k;
}

// Discriminant of y^2 + a1 xy + a3 y = x^3 + ... via the cubic
// 4x^3 + b2 x^2 + 2 b4 x + b6 (completing the square in y): Delta = disc / 16.
inline mpz_class discriminant_via_cubic(const std::array<mpz_class, 5>& a) {
  const mpz_class &a1 = a[0], &a2 = a[1], &a3 = a[2], &a4 = a[3], &a6 = a[4];
  mpz_class A = 4, B = a1 * a1 + 4 * a2, C = 2 * (2 * a4 + a1 * a3), D = a3 * a3 + 4 * a6;
  mpz_class disc = 18 * A * B * C * D - 4 * B * B * B * D + B * B * C * C - 4 * A * C * C * C - 27 * A * A * D * D;
  return disc / 16;
}

inline long mod(long x, long p) {
  long r = x % p;
  return r < 0 ? r + p : r;
}

inline long mod(const mpz_class& x, long p) {
  mpz_class r = x % p;
  if (r < 0) r += p;
  return r.get_si();
}

// Number of projective points of the reduction mod p (singular point included).
inline long count_points(const std::array<mpz_class, 5>& a, long p) {
  long a1 = mod(a[0], p), a2 = mod(a[1], p), a3 = mod(a[2], p), a4 = mod(a[3], p), a6 = mod(a[4], p);
  long count = 1;
  for (long x = 0; x < p; ++x)
    for (long y = 0; y < p; ++y) {
      long lhs = (y * y + a1 * x % p * y + a3 * y) % p;
      long rhs = ((x * x % p * x) + a2 * x % p * x + a4 * x + a6) % p;
      if (lhs == rhs) ++count;
    }
  return count;
}

enum class Reduction { Good, Multiplicative, Additive };

// For a model minimal at p with p | Delta: a_p = p + 1 - #E(F_p) is +-1 for a
// node and 0 for a cusp.
inline Reduction reduction_by_count(const std::array<mpz_class, 5>& a, long p) {
  if (discriminant_via_cubic(a) % p != 0) return Reduction::Good;
  long ap = p + 1 - count_points(a, p);
  return ap == 0 ? Reduction::Additive : Reduction::Multiplicative;
}

// Order of the point (x, y) on the reduction mod a good prime p, by repeated
// addition with the affine group law over F_p. std::nullopt above `cap`.
inline std::optional<int> order_mod_p(const std::array<mpz_class, 5>& a, long x0, long y0, long p, int cap = 64) {
  long a1 = mod(a[0], p), a2 = mod(a[1], p), a3 = mod(a[2], p), a4 = mod(a[3], p);
  auto inv = [p](long v) {
    long r = 1, b = mod(v, p), e = p - 2;
    while (e) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
      e >>= 1;
    }
    return r;
  };
  struct Pt {
    long x, y;
    bool inf;
  };
  auto add = [&](Pt P, Pt Q) -> Pt {
    if (P.inf) return Q;
    if (Q.inf) return P;
    long lam;
    if (P.x == Q.x) {
      long neg_qy = mod(-Q.y - a1 * Q.x - a3, p);
      if (P.y == neg_qy) return {0, 0, true};
      long num = mod(3 * P.x % p * P.x + 2 * a2 * P.x + a4 - a1 * P.y, p);
      long den = mod(2 * P.y + a1 * P.x + a3, p);
      lam = num * inv(den) % p;
    } else {
      lam = mod(Q.y - P.y, p) * inv(Q.x - P.x) % p;
    }
    long x3 = mod(lam * lam + a1 * lam - a2 - P.x - Q.x, p);
    long y3 = mod(-(lam + a1) * x3 - (P.y - lam * P.x) - a3, p);
    return {x3, y3, false};
  };
  Pt P{mod(x0, p), mod(y0, p), false}, Q = P;
  for (int k = 1; k <= cap; ++k) {
    if (Q.inf) return k;
    Q = add(Q, P);
  }
  return std::nullopt;
}

}  // namespace oracle
