#include "szpiro/reduction.hpp"

#include <algorithm>
#include <set>

namespace szpiro {

namespace {

using Coeffs = std::array<BigInt, 5>;  // a1, a2, a3, a4, a6

BigInt mod(const BigInt& a, const BigInt& m) {
  BigInt r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

bool divides(const BigInt& d, const BigInt& n) { return mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()) != 0; }

BigInt inverse_mod(const BigInt& a, const BigInt& m) {
  BigInt out;
  if (mpz_invert(out.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) {
    throw std::logic_error("no inverse of " + a.get_str() + " mod " + m.get_str());
  }
  return out;
}

BigInt exact_div(const BigInt& n, const BigInt& d) {
  BigInt q;
  mpz_divexact(q.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  return q;
}

// Valuation capped so that v(0) reads as "very large".
unsigned val(const BigInt& n, const BigInt& p) {
  if (n == 0) return 1000;
  return valuation_unchecked(n, p);
}

// Integral change of variables with u = 1.
void shift(Coeffs& a, const BigInt& r, const BigInt& s, const BigInt& t) {
  const BigInt a1 = a[0], a2 = a[1], a3 = a[2], a4 = a[3], a6 = a[4];
  a[0] = a1 + 2 * s;
  a[1] = a2 - s * a1 + 3 * r - s * s;
  a[2] = a3 + r * a1 + 2 * t;
  a[3] = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t;
  a[4] = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
}

void require(bool ok, const char* what) {
  if (!ok) throw std::logic_error(std::string("Tate's algorithm invariant violated: ") + what);
}

LocalReductionData make_local(const BigInt& p, unsigned vd, long fp, std::string label, bool semistable) {
  require(fp >= 0, "negative conductor exponent");
  return {p, vd, static_cast<unsigned>(fp), std::move(label), semistable};
}

LocalReductionData tate_integral(Coeffs a, const BigInt& p) {
  auto inv = compute_invariants(a);
  if (inv.delta == 0) throw SingularModel();
  const unsigned vd = valuation_unchecked(inv.delta, p);
  if (vd == 0) return make_local(p, 0, 0, "I0", true);
  if (!divides(p, inv.c4)) return make_local(p, vd, 1, "I" + std::to_string(vd), true);

  const bool small = p <= 3;
  const BigInt p2 = p * p;
  const BigInt p3 = p2 * p;
  const BigInt inv2 = p == 2 ? BigInt(0) : inverse_mod(BigInt(2), p2);

  // Move the singular point of the reduction to (0, 0).
  BigInt r, t;
  if (small) {
    bool found = false;
    const long pl = p.get_si();
    for (long x = 0; x < pl && !found; ++x) {
      for (long y = 0; y < pl && !found; ++y) {
        BigInt X = x, Y = y;
        BigInt F = Y * Y + a[0] * X * Y + a[2] * Y - X * X * X - a[1] * X * X - a[3] * X - a[4];
        BigInt Fx = a[0] * Y - 3 * X * X - 2 * a[1] * X - a[3];
        BigInt Fy = 2 * Y + a[0] * X + a[2];
        if (divides(p, F) && divides(p, Fx) && divides(p, Fy)) {
          r = X;
          t = Y;
          found = true;
        }
      }
    }
    require(found, "no singular point mod p");
  } else {
    // p | c4 here, so the singular point sits over the triple root x = -b2/12.
    r = mod(-inv.b2 * inverse_mod(BigInt(12), p), p);
    t = mod(-(a[0] * r + a[2]) * inverse_mod(BigInt(2), p), p);
  }
  shift(a, r, 0, t);
  require(divides(p, a[2]) && divides(p, a[3]) && divides(p, a[4]), "singular point not at origin");

  inv = compute_invariants(a);
  if (!divides(p, inv.b2)) return make_local(p, vd, 1, "I" + std::to_string(vd), true);
  if (val(a[4], p) < 2) return make_local(p, vd, vd, "II", false);
  if (val(inv.b8, p) < 3) return make_local(p, vd, static_cast<long>(vd) - 1, "III", false);
  if (val(inv.b6, p) < 3) return make_local(p, vd, static_cast<long>(vd) - 2, "IV", false);

  BigInt s;
  if (p == 2) {
    s = mod(a[1], p);
    t = 2 * mod(exact_div(a[4], 4), p);
  } else {
    s = mod(-a[0] * inv2, p);
    t = mod(-a[2] * inv2, p2);
  }
  shift(a, 0, s, t);
  require(divides(p, a[0]) && divides(p, a[1]) && divides(p2, a[2]) && divides(p2, a[3]) && divides(p3, a[4]),
          "divisibility after (s, t) shift");

  // Auxiliary cubic T^3 + b T^2 + c T + d.
  BigInt b = exact_div(a[1], p);
  BigInt c = exact_div(a[3], p2);
  BigInt d = exact_div(a[4], p3);
  BigInt w = 27 * d * d - b * b * c * c + 4 * b * b * b * d - 18 * b * c * d + 4 * c * c * c;
  BigInt x = 3 * c - b * b;

  if (!divides(p, w)) return make_local(p, vd, static_cast<long>(vd) - 4, "I0*", false);

  if (!divides(p, x)) {
    BigInt root;
    if (small) {
      bool found = false;
      for (long k = 0; k < p.get_si() && !found; ++k) {
        BigInt T = k;
        BigInt P = ((T + b) * T + c) * T + d;
        BigInt dP = 3 * T * T + 2 * b * T + c;
        if (divides(p, P) && divides(p, dP)) {
          root = T;
          found = true;
        }
      }
      require(found, "no double root of the auxiliary cubic");
    } else {
      root = mod((b * c - 9 * d) * inverse_mod(2 * x, p), p);
    }
    shift(a, p * root, 0, 0);
    unsigned m = 1;
    BigInt mx = p2, my = p2;
    for (;;) {
      BigInt xa3 = exact_div(a[2], my);
      BigInt xa6 = exact_div(a[4], mx * my);
      if (!divides(p, xa3 * xa3 + 4 * xa6)) break;
      BigInt tt = p == 2 ? BigInt(my * mod(xa6, p)) : BigInt(my * mod(-xa3 * inv2, p));
      shift(a, 0, 0, tt);
      my *= p;
      ++m;
      BigInt xa2 = exact_div(a[1], p);
      BigInt xa4 = exact_div(a[3], p * mx);
      xa6 = exact_div(a[4], mx * my);
      if (!divides(p, xa4 * xa4 - 4 * xa2 * xa6)) break;
      BigInt rr = p == 2 ? BigInt(mx * mod(xa6 * xa2, p)) : BigInt(mx * mod(-xa4 * inverse_mod(2 * xa2, p), p));
      shift(a, rr, 0, 0);
      mx *= p;
      ++m;
      require(m <= vd, "I_m* loop did not terminate");
    }
    return make_local(p, vd, static_cast<long>(vd) - static_cast<long>(m) - 4, "I" + std::to_string(m) + "*",
                      false);
  }

  BigInt root = p == 3 ? mod(-d, p) : mod(-b * inverse_mod(BigInt(3), p), p);
  shift(a, p * root, 0, 0);
  require(divides(p2, a[1]) && divides(p3, a[3]) && divides(p2 * p2, a[4]), "triple root not at origin");
  BigInt x3 = exact_div(a[2], p2);
  BigInt x6 = exact_div(a[4], p2 * p2);
  if (!divides(p, x3 * x3 + 4 * x6)) return make_local(p, vd, static_cast<long>(vd) - 6, "IV*", false);
  t = p == 2 ? BigInt(p2 * mod(x6, p)) : BigInt(p2 * mod(-x3 * inv2, p));
  shift(a, 0, 0, t);
  if (val(a[3], p) < 4) return make_local(p, vd, static_cast<long>(vd) - 7, "III*", false);
  if (val(a[4], p) < 6) return make_local(p, vd, static_cast<long>(vd) - 8, "II*", false);
  throw NonMinimalModel(p);
}

bool kraus_local(const BigInt& c4, const BigInt& c6, unsigned long p) {
  if (p == 3) return c6 == 0 || valuation_unchecked(c6, 3UL) != 2;
  if (p == 2) {
    BigInt m4 = mod(c6, 4), m32 = mod(c6, 32);
    if (m4 == 3) return true;
    bool v4 = c4 == 0 || valuation_unchecked(c4, 2UL) >= 4;
    return v4 && (m32 == 0 || m32 == 8);
  }
  return true;
}

// Reduced integral model with the given (Kraus-valid) invariants.
Coeffs model_from_invariants(const BigInt& c4, const BigInt& c6) {
  for (long b2v = -5; b2v <= 6; ++b2v) {
    BigInt b2 = b2v;
    BigInt n4 = b2 * b2 - c4;
    if (!divides(BigInt(24), n4)) continue;
    BigInt b4 = exact_div(n4, 24);
    BigInt n6 = -b2 * b2 * b2 + 36 * b2 * b4 - c6;
    if (!divides(BigInt(216), n6)) continue;
    BigInt b6 = exact_div(n6, 216);
    BigInt a1 = mod(b2, 2);
    BigInt a3 = mod(b6, 2);
    if (!divides(BigInt(4), b2 - a1) || !divides(BigInt(2), b4 - a1 * a3) || !divides(BigInt(4), b6 - a3)) continue;
    Coeffs a = {a1, exact_div(b2 - a1, 4), a3, exact_div(b4 - a1 * a3, 2), exact_div(b6 - a3, 4)};
    auto inv = compute_invariants(a);
    if (inv.c4 == c4 && inv.c6 == c6) return a;
  }
  throw std::logic_error("no integral model for c4 = " + c4.get_str() + ", c6 = " + c6.get_str());
}

}  // namespace

bool kraus_integral(const BigInt& c4, const BigInt& c6) {
  BigInt num = c4 * c4 * c4 - c6 * c6;
  if (num == 0 || !divides(BigInt(1728), num)) return false;
  return kraus_local(c4, c6, 2) && kraus_local(c4, c6, 3);
}

MinimalModelResult minimal_model(const WeierstrassModel& model, std::span<const BigInt> hint_primes) {
  // Clear denominators: x = X / D^2, y = Y / D^3.
  BigInt D = 1;
  for (const BigRat* c : {&model.a1, &model.a2, &model.a3, &model.a4, &model.a6}) {
    mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), c->get_den_mpz_t());
  }
  Isomorphism to_integral{BigRat(1, 1) / BigRat(D), 0, 0, 0};
  WeierstrassModel integral = D == 1 ? model : transform(model, to_integral);
  Coeffs a = integral.integer_coefficients();
  auto inv = compute_invariants(a);
  if (inv.delta == 0) throw SingularModel();

  // Primes where the model can fail to be minimal divide gcd(c4, c6, delta).
  BigInt g;
  mpz_gcd(g.get_mpz_t(), inv.c4.get_mpz_t(), inv.c6.get_mpz_t());
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), inv.delta.get_mpz_t());
  std::set<BigInt> candidates = {2, 3};
  if (g > 1) {
    FactorOptions fo;
    fo.hint_primes = hint_primes;
    for (const auto& pp : factorize(g, fo)) candidates.insert(pp.prime);
  }

  BigInt u = 1;
  for (const BigInt& p : candidates) {
    unsigned e = valuation_unchecked(inv.delta, p) / 12;
    if (inv.c4 != 0) e = std::min(e, valuation_unchecked(inv.c4, p) / 4);
    if (inv.c6 != 0) e = std::min(e, valuation_unchecked(inv.c6, p) / 6);
    if (p <= 3) {
      const unsigned long pl = p.get_ui();
      while (e > 0) {
        BigInt pe = ipow(p, e);
        BigInt c4e = exact_div(inv.c4, ipow(pe, 4));
        BigInt c6e = exact_div(inv.c6, ipow(pe, 6));
        BigInt num = c4e * c4e * c4e - c6e * c6e;
        if (divides(BigInt(1728), num) && kraus_local(c4e, c6e, pl)) break;
        --e;
      }
    }
    if (e > 0) u *= ipow(p, e);
  }

  MinimalModelResult out;
  out.scaling_u = u;
  Coeffs m = model_from_invariants(exact_div(inv.c4, ipow(u, 4)), exact_div(inv.c6, ipow(u, 6)));
  out.minimal = WeierstrassModel::from_integers(m[0], m[1], m[2], m[3], m[4]);
  out.delta_min = exact_div(inv.delta, ipow(u, 12));

  BigRat ur(u);
  Isomorphism step;
  step.u = ur;
  step.s = (ur * out.minimal.a1 - integral.a1) / 2;
  step.r = (ur * ur * out.minimal.a2 - integral.a2 + step.s * integral.a1 + step.s * step.s) / 3;
  step.t = (ur * ur * ur * out.minimal.a3 - integral.a3 - step.r * integral.a1) / 2;
  out.iso = D == 1 ? step : to_integral.then(step);
  if (transform(model, out.iso) != out.minimal) {
    throw std::logic_error("minimal model isomorphism check failed for " + to_string(model));
  }
  return out;
}

LocalReductionData tate_local(const WeierstrassModel& minimal, const BigInt& p) {
  if (!is_prime(p)) throw ArithmeticError("tate_local: " + p.get_str() + " is not prime");
  return tate_integral(minimal.integer_coefficients(), p);
}

bool ReductionSummary::semistable() const {
  return std::all_of(local.begin(), local.end(), [](const LocalReductionData& l) { return l.semistable; });
}

ReductionSummary analyze(const WeierstrassModel& model, const FactorOptions& opts) {
  ReductionSummary out;
  out.min = minimal_model(model, opts.hint_primes);
  auto a = out.min.minimal.integer_coefficients();
  out.invariants = compute_invariants(a);
  out.delta_factorization = factorize(out.min.delta_min, opts);
  out.conductor = 1;
  for (const auto& pp : out.delta_factorization) {
    auto local = tate_integral(a, pp.prime);
    if (local.fp > 0) out.conductor *= ipow(pp.prime, local.fp);
    out.local.push_back(std::move(local));
  }
  return out;
}

BigInt conductor(const WeierstrassModel& model, const FactorOptions& opts) { return analyze(model, opts).conductor; }

std::vector<SemistabilityEntry> semistability_report(const WeierstrassModel& model, const FactorOptions& opts) {
  auto summary = analyze(model, opts);
  std::vector<SemistabilityEntry> out;
  for (const auto& pp : summary.delta_factorization) {
    out.push_back({pp.prime, !divides(pp.prime, summary.invariants.c4)});
  }
  return out;
}

}  // namespace szpiro
