#include "szpiro/weierstrass.hpp"

#include <algorithm>
#include <set>

namespace szpiro {

namespace {

template <class R>
struct InvariantsOf {
  R b2, b4, b6, b8, c4, c6, delta;
};

template <class R>
InvariantsOf<R> invariants_of(const R& a1, const R& a2, const R& a3, const R& a4, const R& a6) {
  InvariantsOf<R> v;
  v.b2 = a1 * a1 + 4 * a2;
  v.b4 = 2 * a4 + a1 * a3;
  v.b6 = a3 * a3 + 4 * a6;
  v.b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  v.c4 = v.b2 * v.b2 - 24 * v.b4;
  v.c6 = -v.b2 * v.b2 * v.b2 + 36 * v.b2 * v.b4 - 216 * v.b6;
  v.delta = -v.b2 * v.b2 * v.b8 - 8 * v.b4 * v.b4 * v.b4 - 27 * v.b6 * v.b6 + 9 * v.b2 * v.b4 * v.b6;
  return v;
}

BigInt floor_div(const BigInt& a, long b) {
  BigInt q;
  BigInt bb = b;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), bb.get_mpz_t());
  return q;
}

// Integer roots of X^3 + b X^2 + c X + e, by exact bisection on monotone pieces.
std::vector<BigInt> integer_roots_monic_cubic(const BigInt& b, const BigInt& c, const BigInt& e) {
  auto P = [&](const BigInt& x) -> BigInt { return ((x + b) * x + c) * x + e; };
  std::set<BigInt> roots;
  BigInt bound = 1 + std::max({BigInt(abs(b)), BigInt(abs(c)), BigInt(abs(e))});

  // Root search on [lo, hi] where P is monotone (increasing if `inc`).
  auto search = [&](BigInt lo, BigInt hi, bool inc) {
    if (lo > hi) return;
    int slo = sgn(P(lo)), shi = sgn(P(hi));
    if (slo == 0) roots.insert(lo);
    if (shi == 0) roots.insert(hi);
    if (slo == 0 || shi == 0 || slo == shi) return;
    while (hi - lo > 1) {
      BigInt mid = floor_div(lo + hi, 2);
      int s = sgn(P(mid));
      if (s == 0) {
        roots.insert(mid);
        return;
      }
      if ((s < 0) == inc) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
  };

  BigInt disc = 4 * b * b - 12 * c;  // discriminant of P'
  if (disc <= 0) {
    search(-bound, bound, true);
  } else {
    BigInt s;
    mpz_sqrt(s.get_mpz_t(), disc.get_mpz_t());
    BigInt m1 = floor_div(-2 * b - s - 1, 6);
    BigInt m2 = floor_div(-2 * b + s, 6);
    search(-bound, m1, true);
    search(m1 + 2, m2, false);
    search(m2 + 2, bound, true);
    for (const BigInt& x : {BigInt(m1 + 1), BigInt(m2 + 1)}) {
      if (P(x) == 0) roots.insert(x);
    }
  }
  return {roots.begin(), roots.end()};
}

}  // namespace

WeierstrassModel WeierstrassModel::from_integers(const BigInt& a1, const BigInt& a2, const BigInt& a3,
                                                 const BigInt& a4, const BigInt& a6) {
  return {BigRat(a1), BigRat(a2), BigRat(a3), BigRat(a4), BigRat(a6)};
}

bool WeierstrassModel::is_integral() const {
  return a1.get_den() == 1 && a2.get_den() == 1 && a3.get_den() == 1 && a4.get_den() == 1 && a6.get_den() == 1;
}

std::array<BigInt, 5> WeierstrassModel::integer_coefficients() const {
  if (!is_integral()) throw std::domain_error("model is not integral: " + to_string(*this));
  return {a1.get_num(), a2.get_num(), a3.get_num(), a4.get_num(), a6.get_num()};
}

ModelInvariants compute_invariants(const WeierstrassModel& m) {
  auto v = invariants_of<BigRat>(m.a1, m.a2, m.a3, m.a4, m.a6);
  return {v.b2, v.b4, v.b6, v.b8, v.c4, v.c6, v.delta};
}

IntegralInvariants compute_invariants(const std::array<BigInt, 5>& a) {
  auto v = invariants_of<BigInt>(a[0], a[1], a[2], a[3], a[4]);
  return {v.b2, v.b4, v.b6, v.b8, v.c4, v.c6, v.delta};
}

BigRat j_invariant(const WeierstrassModel& model) {
  auto inv = compute_invariants(model);
  if (inv.delta == 0) throw SingularModel();
  return inv.c4 * inv.c4 * inv.c4 / inv.delta;
}

Isomorphism Isomorphism::then(const Isomorphism& next) const {
  Isomorphism out;
  out.u = u * next.u;
  out.r = u * u * next.r + r;
  out.s = u * next.s + s;
  out.t = u * u * u * next.t + u * u * s * next.r + t;
  return out;
}

Isomorphism Isomorphism::inverse() const {
  if (u == 0) throw std::invalid_argument("isomorphism with u = 0");
  Isomorphism out;
  out.u = 1 / u;
  out.r = -r / (u * u);
  out.s = -s / u;
  out.t = (r * s - t) / (u * u * u);
  return out;
}

WeierstrassModel transform(const WeierstrassModel& m, const Isomorphism& iso) {
  if (iso.u == 0) throw std::invalid_argument("isomorphism with u = 0");
  const BigRat& u = iso.u;
  const BigRat& r = iso.r;
  const BigRat& s = iso.s;
  const BigRat& t = iso.t;
  BigRat u2 = u * u;
  BigRat u3 = u2 * u;
  WeierstrassModel out;
  out.a1 = (m.a1 + 2 * s) / u;
  out.a2 = (m.a2 - s * m.a1 + 3 * r - s * s) / u2;
  out.a3 = (m.a3 + r * m.a1 + 2 * t) / u3;
  out.a4 = (m.a4 - s * m.a3 + 2 * r * m.a2 - (t + r * s) * m.a1 + 3 * r * r - 2 * s * t) / (u2 * u2);
  out.a6 = (m.a6 + r * m.a4 + r * r * m.a2 + r * r * r - t * m.a3 - t * t - r * t * m.a1) / (u3 * u3);
  return out;
}

bool is_on_curve(const WeierstrassModel& m, const AffinePoint& pt) {
  if (pt.infinity) return true;
  const BigRat& x = pt.x;
  const BigRat& y = pt.y;
  return y * y + m.a1 * x * y + m.a3 * y == x * x * x + m.a2 * x * x + m.a4 * x + m.a6;
}

AffinePoint negate(const WeierstrassModel& m, const AffinePoint& pt) {
  if (pt.infinity) return pt;
  return {pt.x, -pt.y - m.a1 * pt.x - m.a3, false};
}

AffinePoint add(const WeierstrassModel& m, const AffinePoint& p, const AffinePoint& q) {
  if (p.infinity) return q;
  if (q.infinity) return p;
  BigRat lambda, nu;
  if (p.x == q.x) {
    if (p.y + q.y + m.a1 * q.x + m.a3 == 0) return AffinePoint::at_infinity();
    BigRat denom = 2 * p.y + m.a1 * p.x + m.a3;
    lambda = (3 * p.x * p.x + 2 * m.a2 * p.x + m.a4 - m.a1 * p.y) / denom;
    nu = (-p.x * p.x * p.x + m.a4 * p.x + 2 * m.a6 - m.a3 * p.y) / denom;
  } else {
    BigRat dx = q.x - p.x;
    lambda = (q.y - p.y) / dx;
    nu = (p.y * q.x - q.y * p.x) / dx;
  }
  BigRat x3 = lambda * lambda + m.a1 * lambda - m.a2 - p.x - q.x;
  BigRat y3 = -(lambda + m.a1) * x3 - nu - m.a3;
  return {x3, y3, false};
}

AffinePoint multiply(const WeierstrassModel& m, const AffinePoint& pt, long k) {
  AffinePoint base = k < 0 ? negate(m, pt) : pt;
  unsigned long n = k < 0 ? static_cast<unsigned long>(-k) : static_cast<unsigned long>(k);
  AffinePoint acc = AffinePoint::at_infinity();
  while (n) {
    if (n & 1) acc = add(m, acc, base);
    base = add(m, base, base);
    n >>= 1;
  }
  return acc;
}

std::optional<int> point_order(const WeierstrassModel& m, const AffinePoint& pt, int cap) {
  if (compute_invariants(m).delta == 0) throw SingularModel();
  if (!is_on_curve(m, pt)) throw std::invalid_argument("point is not on the curve");
  AffinePoint acc = pt;
  for (int k = 1; k <= cap; ++k) {
    if (acc.infinity) return k;
    acc = add(m, acc, pt);
  }
  return std::nullopt;
}

std::vector<AffinePoint> two_torsion_points(const WeierstrassModel& m) {
  auto inv = compute_invariants(m);
  if (inv.delta == 0) throw SingularModel();
  // Clear denominators of 4x^3 + b2 x^2 + 2 b4 x + b6, then substitute x = X / lead.
  std::array<BigRat, 4> coeff = {BigRat(4), inv.b2, 2 * inv.b4, inv.b6};
  BigInt den = 1;
  for (const auto& c : coeff) {
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  }
  std::array<BigInt, 4> ic;
  for (std::size_t i = 0; i < 4; ++i) ic[i] = BigRat(coeff[i] * den).get_num();
  const BigInt& lead = ic[0];
  auto roots = integer_roots_monic_cubic(ic[1], lead * ic[2], lead * lead * ic[3]);
  std::vector<AffinePoint> out;
  for (const BigInt& X : roots) {
    BigRat x(X, lead);
    x.canonicalize();
    BigRat y = -(m.a1 * x + m.a3) / 2;
    out.push_back({x, y, false});
  }
  return out;
}

std::string to_string(const WeierstrassModel& m) {
  return "[" + m.a1.get_str() + "," + m.a2.get_str() + "," + m.a3.get_str() + "," + m.a4.get_str() + "," +
         m.a6.get_str() + "]";
}

}  // namespace szpiro
