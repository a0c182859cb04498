#include "szpiro/sharpness.hpp"

#include "szpiro/bounds.hpp"
#include "szpiro/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <set>

namespace szpiro {

namespace {

using T = Torsion;
using u128 = unsigned __int128;

IntPoly P(std::initializer_list<long> high_first) { return IntPoly::from_high(high_first); }

IntPoly P_big(std::initializer_list<const char*> high_first) {
  std::vector<BigInt> c;
  for (auto it = std::rbegin(high_first); it != std::rend(high_first); ++it) c.emplace_back(*it);
  return IntPoly(std::move(c));
}

std::map<T, SharpFamilySpec> make_specs() {
  std::map<T, SharpFamilySpec> m;
  const IntPoly n = P({1, 0});
  auto add = [&](T id, IntPoly A, IntPoly B, IntPoly D, IntPoly w, std::vector<PowerFactor> H, std::vector<IntPoly> f) {
    m[id] = SharpFamilySpec{id, std::move(A), std::move(B), std::move(D), std::move(w), std::move(H), std::move(f)};
  };
  add(T::C1, {}, {}, {}, P({1}), {{P({144, 48}), 3}}, {P({12, 7}), P({144, 60, 13})});
  add(T::C2, P({-1}), P({8}), n, P({2}), {{P({192, 1}), 3}}, {n, P({64, -1})});
  add(T::C3, P({1}), n, {}, P({1}), {{P({216, -36, 1}), 2}}, {n, P({27, -1})});
  add(T::C4, P({256, 0, 0}), P({4, 0, -1}), {}, P({32, 0}), {{P({5136, 0, -264, 0, 1}), 3}},
      {n, P({2, -1}), P({2, 1}), P({20, 0, -1})});
  add(T::C5, P({2, 1}), n, {}, P({1}), {{P({421, 526, 206, 26, 1}), 2}, {P({5, 4, 1}), 2}},
      {n, P({2, 1}), P({25, 15, 1})});
  add(T::C6, P({3, 1}), n, {}, P({1}), {{P({120, 84, 18, 1}), 3}, {P({6, 1}), 3}},
      {n, P({12, 1}), P({3, 1}), P({4, 1})});
  add(T::C7, P({3, 1}), n, {}, P({1}),
      {{P({577801, 2519622, 4989285, 5920782, 4680102, 2590434, 1027173, 293286, 59682, 8414, 777, 42, 1}), 2}},
      {n, P({2, 1}), P({3, 1}), P({49, 49, 14, 1})});
  add(T::C8, P({4, 1}), n, {}, P({1}),
      {{P({2696, 5984, 5424, 2272, 184, -224, -96, -16, -1}), 2}, {P({56, 16, -16, -8, -1}), 2}},
      {n, P({4, 1}), P({2, 1}), P({3, 1}), P({8, 0, -1})});
  add(T::C9, P({2, 1}), n, {}, P({1}),
      {{P({22329, 242514, 1250883, 4061502, 9272961, 15760494, 20613420, 21173562, 17291556, 11299356, 5916807,
           2474496, 819423, 211626, 41607, 5994, 594, 36, 1}),
        2}},
      {n, P({1, 1}), P({2, 1}), P({3, 3, 1}), P({9, 18, 9, 1})});
  add(T::C10, P({4, 1}), n, {}, P({1}),
      {{P({635920, 2733440, 5299680, 6129200, 4710480, 2534880, 979520, 273840, 54960, 7720, 720, 40, 1}), 3}},
      {n, P({2, 1}), P({4, 1}), P({3, 1}), P({20, 10, 1}), P({5, 5, 1})});
  add(T::C12, P({6, 1}), n, {}, P({1}),
      {{P_big({"42787896", "129338064", "173452752", "137824296", "72709428", "26936592", "7205496", "1405032",
               "198498", "19836", "1332", "54", "1"}),
        3},
       {P({366, 348, 120, 18, 1}), 3}},
      {n, P({6, 1}), P({4, 1}), P({5, 1}), P({6, 6, 1}), P({26, 10, 1}), P({21, 9, 1})});
  add(T::C2xC2, P({16, 0}), P({4, 1}), P({1}), P({2}), {{P({208, -8, 1}), 3}}, {n, P({4, 1}), P({12, -1})});
  add(T::C2xC4, P({2, 1}), n, {}, P({1}), {{P({976, 672, 200, 24, 1}), 3}}, {n, P({2, 1}), P({10, 1}), P({6, 1})});
  add(T::C2xC6, P({8, 3}), P({-1}), {}, P({16}),
      {{P({439104, 1005408, 958080, 486360, 138720, 21078, 1333}), 3}, {P({84, 66, 13}), 3}},
      {P({3, 1}), P({12, 5}), P({18, 7}), P({2, 1}), P({5, 2}), P({8, 3})});
  add(T::C2xC8, P({4, 0}), P({1, 1}), {}, P({64}),
      {{P({51361, 180064, 301720, 511840, 1140780, 2129632, 2812328, 2658400, 1853894, 973088, 387560, 116768, 26220,
           4256, 472, 32, 1}),
        3}},
      {n, P({1, 1}), P({2, 1}), P({3, 1}), P({1, -2, -1}), P({7, 6, 1}), P({5, 4, 1})});
  return m;
}

const std::map<T, SharpFamilySpec>& specs() {
  static const std::map<T, SharpFamilySpec> table = make_specs();
  return table;
}

// The family model at parameter values (a, b, d), bypassing validation.
template <class R>
WeierstrassModel model_from_abd(T id, const R& a, const R& b, const R& d) {
  switch (id) {
    case T::C2:
    case T::C2xC2:
      return family_model(id, std::vector<BigRat>{BigRat(a), BigRat(b), BigRat(d)});
    case T::C3:
      return family_model(id, std::vector<BigRat>{1, 1, BigRat(a), BigRat(b)});  // c = d = 1, e = a
    case T::C4:
      return family_model(id, std::vector<BigRat>{1, BigRat(a), BigRat(b)});  // c = 1, d = a
    default:
      return family_model(id, std::vector<BigRat>{BigRat(a), BigRat(b)});
  }
}

WeierstrassModel model_at(T id, const BigRat& n) {
  if (id == T::C1) return {0, 0, 1, 3 * n + 1, 0};
  const auto& s = sharp_spec(id);
  return model_from_abd(id, s.A(n), s.B(n), s.D(n));
}

struct InvariantPolys {
  IntPoly c4, c6;
};

IntPoly to_int_poly(const RatPoly& p) {
  std::vector<BigInt> c;
  for (const auto& q : p.coeff) {
    if (q.get_den() != 1) throw std::logic_error("invariant polynomial has non-integer coefficients");
    c.push_back(q.get_num());
  }
  return IntPoly(std::move(c));
}

const InvariantPolys& invariant_polys(T id) {
  static std::mutex mu;
  static std::map<T, InvariantPolys> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(id);
  if (it != cache.end()) return it->second;
  InvariantPolys ip;
  ip.c4 = to_int_poly(interpolate([&](const BigRat& n) { return compute_invariants(model_at(id, n)).c4; }, 52));
  ip.c6 = to_int_poly(interpolate([&](const BigRat& n) { return compute_invariants(model_at(id, n)).c6; }, 52));
  return cache.emplace(id, std::move(ip)).first->second;
}

BigInt eval_f(const SharpFamilySpec& s, const BigInt& n) {
  BigInt f = 1;
  for (const auto& g : s.f) f *= g(n);
  return f;
}

std::set<BigInt> primes_of(const Factorization& f) {
  std::set<BigInt> out;
  for (const auto& pe : f) out.insert(pe.prime);
  return out;
}

// ---- squarefree sieve helpers ----

u128 to_u128(const BigInt& v) {
  BigInt a = abs(v);
  u128 out = 0;
  std::size_t count = 0;
  std::uint64_t words[2] = {0, 0};
  mpz_export(words, &count, -1, sizeof(std::uint64_t), 0, 0, a.get_mpz_t());
  out = (static_cast<u128>(words[1]) << 64) | words[0];
  return out;
}

BigInt from_u128(u128 v) {
  std::uint64_t words[2] = {static_cast<std::uint64_t>(v), static_cast<std::uint64_t>(v >> 64)};
  BigInt out;
  mpz_import(out.get_mpz_t(), 2, -1, sizeof(std::uint64_t), 0, 0, words);
  return out;
}

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool is_square128(u128 v) {
  BigInt b = from_u128(v);
  return mpz_perfect_square_p(b.get_mpz_t()) != 0;
}

using ModPoly = std::vector<std::uint64_t>;  // low degree first, trimmed

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  b %= p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

void trim(ModPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

ModPoly poly_mod(ModPoly a, const ModPoly& m, std::uint64_t p) {
  std::uint64_t inv = powmod(m.back(), p - 2, p);
  while (a.size() >= m.size()) {
    std::uint64_t coef = a.back() * inv % p;
    std::size_t shift = a.size() - m.size();
    for (std::size_t i = 0; i < m.size(); ++i) a[shift + i] = (a[shift + i] + (p - coef) * m[i]) % p;
    trim(a);
  }
  return a;
}

ModPoly poly_mulmod(const ModPoly& a, const ModPoly& b, const ModPoly& m, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  ModPoly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
  trim(c);
  return poly_mod(std::move(c), m, p);
}

ModPoly poly_powmod(ModPoly base, std::uint64_t e, const ModPoly& m, std::uint64_t p) {
  ModPoly r{1};
  base = poly_mod(std::move(base), m, p);
  while (e) {
    if (e & 1) r = poly_mulmod(r, base, m, p);
    base = poly_mulmod(base, base, m, p);
    e >>= 1;
  }
  return r;
}

ModPoly poly_gcd(ModPoly a, ModPoly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    ModPoly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    std::uint64_t inv = powmod(a.back(), p - 2, p);
    for (auto& c : a) c = c * inv % p;
  }
  return a;
}

ModPoly poly_sub(ModPoly a, const ModPoly& b, std::uint64_t p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  trim(a);
  return a;
}

// Splits a monic product of distinct linear factors into its roots.
void split_roots(const ModPoly& g, std::uint64_t p, std::vector<std::uint64_t>& roots, std::uint64_t& seed) {
  if (g.size() <= 1) return;
  if (g.size() == 2) {
    roots.push_back((p - g[0]) % p);
    return;
  }
  while (true) {
    ModPoly shifted{seed++ % p, 1};
    ModPoly h = poly_sub(poly_powmod(shifted, (p - 1) / 2, g, p), ModPoly{1}, p);
    ModPoly d = poly_gcd(g, h, p);
    if (d.size() > 1 && d.size() < g.size()) {
      split_roots(d, p, roots, seed);
      // g / d by long division
      ModPoly q(g.size() - d.size() + 1, 0), r = g;
      for (std::size_t i = q.size(); i-- > 0;) {
        q[i] = r[i + d.size() - 1];
        for (std::size_t j = 0; j < d.size(); ++j) r[i + j] = (r[i + j] + (p - q[i]) * d[j]) % p;
      }
      split_roots(q, p, roots, seed);
      return;
    }
  }
}

std::vector<std::uint64_t> roots_mod_p(const IntPoly& g, std::uint64_t p) {
  ModPoly h;
  for (const auto& c : g.coeff) {
    BigInt r;
    mpz_fdiv_r_ui(r.get_mpz_t(), c.get_mpz_t(), p);
    h.push_back(r.get_ui());
  }
  trim(h);
  std::vector<std::uint64_t> roots;
  if (h.size() <= 1) return roots;
  if (p < 1024) {
    for (std::uint64_t x = 0; x < p; ++x) {
      std::uint64_t acc = 0;
      for (auto it = h.rbegin(); it != h.rend(); ++it) acc = (acc * x + *it) % p;
      if (acc == 0) roots.push_back(x);
    }
    return roots;
  }
  std::uint64_t inv = powmod(h.back(), p - 2, p);
  for (auto& c : h) c = c * inv % p;
  ModPoly xp = poly_powmod(ModPoly{0, 1}, p, h, p);
  ModPoly g1 = poly_gcd(h, poly_sub(xp, ModPoly{0, 1}, p), p);
  std::uint64_t seed = 1;
  split_roots(g1, p, roots, seed);
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::vector<std::uint32_t> primes_up_to(std::uint32_t limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<std::uint32_t> out;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

BigInt content(const IntPoly& g) {
  BigInt c = 0;
  for (const auto& x : g.coeff) mpz_gcd(c.get_mpz_t(), c.get_mpz_t(), x.get_mpz_t());
  return c;
}

}  // namespace

int SharpFamilySpec::height_degree() const {
  int d = 0;
  for (const auto& h : height) d += h.poly.degree() * static_cast<int>(h.exponent);
  return d;
}

int SharpFamilySpec::f_degree() const {
  int d = 0;
  for (const auto& g : f) d += g.degree();
  return d;
}

const SharpFamilySpec& sharp_spec(Torsion id) {
  auto it = specs().find(id);
  if (it == specs().end()) throw std::invalid_argument("no sharpness family for " + std::string(name(id)));
  return it->second;
}

WeierstrassModel build_FT(Torsion id, const BigInt& n) {
  auto m = model_at(id, BigRat(n));
  if (compute_invariants(m).delta == 0) throw SingularModel();
  return m;
}

SharpValues sharp_polynomials(Torsion id, const BigInt& n) {
  const auto& s = sharp_spec(id);
  SharpValues v;
  v.H = 1;
  for (const auto& h : s.height) v.H *= ipow(abs(h.poly(n)), h.exponent);
  v.f = eval_f(s, n);
  return v;
}

SharpConsistencyReport verify_sharp_consistency(Torsion id, const BigInt& n) {
  if (abs(n) <= 1) throw std::invalid_argument("n must satisfy |n| > 1");
  const auto& s = sharp_spec(id);
  SharpConsistencyReport rep;
  rep.id = id;
  rep.n = n;
  rep.model = build_FT(id, n);
  auto tab = sharp_polynomials(id, n);
  rep.H = tab.H;
  rep.f = tab.f;

  std::vector<BigInt> fvals;
  for (const auto& g : s.f) fvals.push_back(g(n));
  auto ffact = factorize_product(fvals);
  std::vector<BigInt> hints;
  for (const auto& pe : ffact) hints.push_back(pe.prime);
  FactorOptions opts;
  opts.hint_primes = hints;
  auto summary = analyze(rep.model, opts);

  rep.scaling_u = summary.min.scaling_u;
  rep.expected_w = abs(s.w(n));
  rep.w_ok = rep.scaling_u == rep.expected_w;
  if (!rep.w_ok) {
    rep.discrepancies.push_back("minimal-model scaling " + rep.scaling_u.get_str() + " != w_T = " +
                                rep.expected_w.get_str());
  }

  const auto& inv = summary.invariants;
  rep.height = naive_height(inv.c4, inv.c6);
  rep.height_ok = rep.height == rep.H;
  if (!rep.height_ok) {
    rep.discrepancies.push_back("naive height " + rep.height.get_str() + " != H_T(n) = " + rep.H.get_str());
  }
  bool c6_larger = inv.c6 * inv.c6 > abs(inv.c4 * inv.c4 * inv.c4);
  bool expect_c6 = id == T::C3 || id == T::C5 || id == T::C7 || id == T::C8 || id == T::C9;
  rep.max_case_matches = c6_larger == expect_c6;

  rep.radical_ok = primes_of(summary.delta_factorization) == primes_of(ffact);
  if (!rep.radical_ok) rep.discrepancies.push_back("rad(minimal discriminant) != rad(f_T(n))");

  rep.semistable_ok = summary.semistable();
  if (!rep.semistable_ok) rep.discrepancies.push_back("not semistable");

  rep.conductor = summary.conductor;
  rep.squarefree = is_squarefree_of(ffact);
  rep.conductor_ok = !rep.squarefree || rep.conductor == abs(rep.f);
  if (!rep.conductor_ok) {
    rep.discrepancies.push_back("conductor " + rep.conductor.get_str() + " != |f_T(n)| = " + BigInt(abs(rep.f)).get_str());
  }

  rep.torsion_ok = true;
  if (id != T::C1) {
    const auto& tr = traits(id);
    auto order = point_order(rep.model, AffinePoint{0, 0, false});
    rep.torsion_ok = order == tr.cyclic_order;
    if (tr.full_two_torsion) rep.torsion_ok = rep.torsion_ok && two_torsion_points(rep.model).size() == 3;
    if (!rep.torsion_ok) rep.discrepancies.push_back("(0,0) does not have the expected order");
  }
  return rep;
}

std::vector<bool> squarefree_values(const std::vector<IntPoly>& factors, long lo, long hi) {
  if (hi < lo) return {};
  const std::size_t len = static_cast<std::size_t>(hi - lo) + 1;
  std::vector<bool> bad(len, false);
  for (const auto& g : factors) {
    if (g.is_zero() || content(g) != 1) throw std::invalid_argument("sieve factors must be primitive");
  }

  BigInt M = std::max(std::abs(lo), std::abs(hi));
  BigInt maxval = 0;
  for (const auto& g : factors) {
    BigInt bound = 0;
    for (auto it = g.coeff.rbegin(); it != g.coeff.rend(); ++it) bound = bound * M + abs(*it);
    maxval = std::max(maxval, bound);
  }

  // Values too wide for 128-bit cofactors: test each product directly.
  if (mpz_sizeinbase(maxval.get_mpz_t(), 2) > 125) {
    std::vector<bool> out(len);
    for (std::size_t i = 0; i < len; ++i) {
      BigInt n = lo + static_cast<long>(i);
      std::vector<BigInt> vals;
      bool zero = false;
      for (const auto& g : factors) {
        vals.push_back(g(n));
        zero = zero || vals.back() == 0;
      }
      out[i] = !zero && is_squarefree_of(factorize_product(vals));
    }
    return out;
  }

  // Strip primes up to P; afterwards every cofactor below P^3 is squarefree
  // unless it is a perfect square.
  BigInt cube_root;
  mpz_root(cube_root.get_mpz_t(), maxval.get_mpz_t(), 3);
  constexpr std::uint32_t kMaxSieve = 1u << 26;
  std::uint32_t P = 1024;
  if (cube_root + 2 > P) P = cube_root + 2 > kMaxSieve ? kMaxSieve : static_cast<std::uint32_t>(cube_root.get_ui() + 2);
  const u128 P2 = static_cast<u128>(P) * P;
  const u128 P3 = P2 * P;

  std::vector<std::vector<u128>> rem(factors.size(), std::vector<u128>(len));
  for (std::size_t j = 0; j < factors.size(); ++j) {
    for (std::size_t i = 0; i < len; ++i) {
      BigInt v = factors[j](BigInt(lo + static_cast<long>(i)));
      if (v == 0) bad[i] = true;
      rem[j][i] = to_u128(v);
    }
  }

  std::vector<std::uint8_t> cnt(len, 0);
  std::vector<std::size_t> touched;
  for (std::uint32_t p : primes_up_to(P)) {
    touched.clear();
    for (std::size_t j = 0; j < factors.size(); ++j) {
      for (std::uint64_t r : roots_mod_p(factors[j], p)) {
        long off = static_cast<long>((static_cast<std::int64_t>(r) - lo) % static_cast<std::int64_t>(p));
        if (off < 0) off += p;
        for (std::size_t i = static_cast<std::size_t>(off); i < len; i += p) {
          u128& v = rem[j][i];
          if (v == 0) continue;
          std::uint8_t e = 0;
          while (v % p == 0) {
            v /= p;
            ++e;
          }
          if (cnt[i] == 0) touched.push_back(i);
          cnt[i] = static_cast<std::uint8_t>(std::min(cnt[i] + e, 2));
        }
      }
    }
    for (std::size_t i : touched) {
      if (cnt[i] >= 2) bad[i] = true;
      cnt[i] = 0;
    }
  }

  std::vector<bool> out(len);
  for (std::size_t i = 0; i < len; ++i) {
    if (bad[i]) continue;
    bool ok = true;
    for (std::size_t j = 0; j < factors.size() && ok; ++j) {
      u128 v = rem[j][i];
      if (v < P2) continue;
      if (v < P3) {
        ok = !is_square128(v);
      } else {
        ok = is_squarefree(from_u128(v));
      }
    }
    for (std::size_t j = 0; j < factors.size() && ok; ++j)
      for (std::size_t k = j + 1; k < factors.size() && ok; ++k)
        if (rem[j][i] > 1 && rem[k][i] > 1 && gcd128(rem[j][i], rem[k][i]) != 1) ok = false;
    out[i] = ok;
  }
  return out;
}

std::vector<long> sieve_ST(Torsion id, long lo, long hi) {
  if (lo > hi) throw std::invalid_argument("n_lo must not exceed n_hi");
  auto flags = squarefree_values(sharp_spec(id).f, lo, hi);
  std::vector<long> out;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    long n = lo + static_cast<long>(i);
    if (flags[i] && std::abs(n) > 1) out.push_back(n);
  }
  return out;
}

ConvergenceResult convergence_scan(Torsion id, const ConvergenceOptions& opts) {
  if (opts.n_max < opts.n_min) throw std::invalid_argument("n_max must not be below n_min");
  const auto& s = sharp_spec(id);
  const auto& ip = invariant_polys(id);
  const SzpiroExponent l = traits(id).l;
  auto members = sieve_ST(id, opts.n_min, opts.n_max);
  if (members.size() < 10) {
    throw std::runtime_error("only " + std::to_string(members.size()) + " members of S_T in range; need at least 10");
  }

  auto records = parallel_map<SharpnessRecord>(members.size(), opts.jobs, [&](std::size_t i) {
    SharpnessRecord r;
    r.id = id;
    r.n = members[i];
    BigInt n = r.n;
    BigInt c4 = ip.c4(n), c6 = ip.c6(n);
    BigInt w12 = ipow(abs(s.w(n)), 12);
    BigInt raw = naive_height(c4, c6);
    if (raw % w12 != 0) throw std::logic_error("height not divisible by w^12 at n = " + n.get_str());
    r.height = raw / w12;
    r.f_value = eval_f(s, n);
    r.conductor = abs(r.f_value);
    r.sigma_m = szpiro_ratio(r.height, r.conductor);
    r.exceeds_l = exceeds(r.height, r.conductor, l);
    return r;
  });

  ConvergenceResult res;
  if (opts.spot_stride > 0) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < members.size(); i += opts.spot_stride) idx.push_back(i);
    auto spots = parallel_map<std::string>(idx.size(), opts.jobs, [&](std::size_t k) {
      const auto& r = records[idx[k]];
      auto rep = verify_sharp_consistency(id, r.n);
      std::string msg;
      if (!rep.ok()) msg = "n=" + std::to_string(r.n) + ": " + rep.discrepancies.front();
      else if (rep.height != r.height || rep.conductor != r.conductor) msg = "n=" + std::to_string(r.n) + ": scan values disagree with the curve";
      return msg;
    });
    res.spot_checks = idx.size();
    for (auto& m : spots) {
      if (!m.empty()) res.discrepancies.push_back(std::move(m));
    }
  }

  long double sx = 0, sy = 0, sxx = 0, sxy = 0;
  FitSummary& fit = res.fit;
  fit.count = records.size();
  fit.min_excess = INFINITY;
  for (const auto& r : records) {
    long double x = 1.0L / log_abs(r.f_value);
    long double y = r.sigma_m;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    fit.min_excess = std::min(fit.min_excess, r.sigma_m - l.value());
    fit.all_exceed = fit.all_exceed && r.exceeds_l;
  }
  long double k = static_cast<long double>(records.size());
  long double denom = k * sxx - sx * sx;
  fit.slope = denom == 0 ? 0.0 : static_cast<double>((k * sxy - sx * sy) / denom);
  fit.intercept = static_cast<double>((sy - static_cast<long double>(fit.slope) * sx) / k);
  fit.last_sigma = records.back().sigma_m;
  if (opts.keep_records) res.records = std::move(records);
  return res;
}

BigRat degree_ratio(Torsion id) {
  const auto& s = sharp_spec(id);
  BigRat r(s.height_degree(), s.f_degree());
  r.canonicalize();
  return r;
}

bool degree_limit_check(Torsion id) {
  const auto& l = traits(id).l;
  BigRat expected(l.p, l.q);
  expected.canonicalize();
  return degree_ratio(id) == expected;
}

}  // namespace szpiro
