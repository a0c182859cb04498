#include "szpiro/arith.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

namespace szpiro {

namespace {

constexpr std::uint32_t kSieveLimit = 1'000'000;
constexpr std::uint32_t kWordTrialLimit = 4096;

// 3.317044064679887385961981e24: all thirteen prime bases below 41 are
// sufficient for Miller-Rabin to be deterministic up to here.
const BigInt& deterministic_mr_limit() {
  static const BigInt limit("3317044064679887385961981");
  return limit;
}

constexpr std::uint32_t kMrBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 b, u64 e, u64 m) {
  u64 r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

bool mr_witness_u64(u64 n, u64 a, u64 d, unsigned s) {
  u64 x = powmod(a % n, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned i = 1; i < s; ++i) {
    x = mulmod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

bool mr_witness(const BigInt& n, unsigned long a, const BigInt& d, unsigned s) {
  BigInt x;
  BigInt base = a;
  mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  BigInt nm1 = n - 1;
  if (x == 1 || x == nm1) return true;
  for (unsigned i = 1; i < s; ++i) {
    x = x * x % n;
    if (x == nm1) return true;
  }
  return false;
}

bool fits_u64(const BigInt& n) { return sgn(n) >= 0 && mpz_sizeinbase(n.get_mpz_t(), 2) <= 64; }

u64 to_u64(const BigInt& n) {
  u64 out = 0;
  mpz_export(&out, nullptr, -1, sizeof(u64), 0, 0, n.get_mpz_t());
  return out;
}

BigInt from_u64(u64 v) {
  BigInt out;
  mpz_import(out.get_mpz_t(), 1, -1, sizeof(u64), 0, 0, &v);
  return out;
}

u64 gcd_u64(u64 a, u64 b) { return std::gcd(a, b); }

// Brent's variant of Pollard rho. Returns a nontrivial factor or 0.
u64 rho_u64(u64 n, u64 c, u64& budget) {
  if (n % 2 == 0) return 2;
  u64 y = 2, x = 2, q = 1, g = 1, ys = 2;
  const u64 m = 128;
  u64 r = 1;
  auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
  do {
    x = y;
    for (u64 i = 0; i < r; ++i) y = f(y);
    u64 k = 0;
    do {
      ys = y;
      for (u64 i = 0; i < std::min(m, r - k); ++i) {
        y = f(y);
        q = mulmod(q, x > y ? x - y : y - x, n);
      }
      g = gcd_u64(q, n);
      k += m;
      if (budget <= m) return 0;
      budget -= m;
    } while (k < r && g == 1);
    r *= 2;
  } while (g == 1);
  if (g == n) {
    do {
      ys = f(ys);
      g = gcd_u64(x > ys ? x - ys : ys - x, n);
    } while (g == 1);
  }
  return g == n ? 0 : g;
}

BigInt rho_big(const BigInt& n, unsigned long c, std::uint64_t& budget) {
  BigInt y = 2, x = 2, q = 1, g = 1, ys = 2, diff;
  const std::uint64_t m = 128;
  std::uint64_t r = 1;
  auto f = [&](BigInt& v) {
    v = v * v + c;
    mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
  };
  do {
    x = y;
    for (std::uint64_t i = 0; i < r; ++i) f(y);
    std::uint64_t k = 0;
    do {
      ys = y;
      for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
        f(y);
        diff = abs(x - y);
        q = q * diff % n;
      }
      mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      k += m;
      if (budget <= m) return 0;
      budget -= m;
    } while (k < r && g == 1);
    r *= 2;
  } while (g == 1);
  if (g == n) {
    do {
      f(ys);
      diff = abs(x - ys);
      mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
    } while (g == 1);
  }
  return g == n ? BigInt(0) : g;
}

using Accumulator = std::map<BigInt, unsigned>;

Factorization to_factorization(const Accumulator& acc) {
  Factorization out;
  out.reserve(acc.size());
  for (const auto& [p, e] : acc) out.push_back({p, e});
  return out;
}

// Splits a word-size composite into primes. Returns false when the budget runs out,
// leaving the unsplit remainder in `rest`.
bool split_u64(u64 n, Accumulator& acc, u64& budget, std::vector<u64>& rest) {
  if (n == 1) return true;
  if (is_prime_u64(n)) {
    acc[from_u64(n)] += 1;
    return true;
  }
  for (u64 c = 1; c < 64; ++c) {
    u64 d = rho_u64(n, c, budget);
    if (d == 0 && budget <= 128) break;
    if (d != 0) {
      return split_u64(d, acc, budget, rest) && split_u64(n / d, acc, budget, rest);
    }
  }
  rest.push_back(n);
  return false;
}

bool split_big(const BigInt& n, Accumulator& acc, std::uint64_t& budget, std::vector<BigInt>& rest) {
  if (n == 1) return true;
  if (fits_u64(n)) {
    std::vector<u64> r64;
    bool ok = split_u64(to_u64(n), acc, budget, r64);
    for (u64 v : r64) rest.push_back(from_u64(v));
    return ok;
  }
  if (is_prime(n)) {
    acc[n] += 1;
    return true;
  }
  for (unsigned long c = 1; c < 64; ++c) {
    BigInt d = rho_big(n, c, budget);
    if (d == 0 && budget <= 128) break;
    if (d != 0) {
      bool a = split_big(d, acc, budget, rest);
      bool b = split_big(BigInt(n / d), acc, budget, rest);
      return a && b;
    }
  }
  rest.push_back(n);
  return false;
}

void strip_hints(BigInt& m, std::span<const BigInt> hints, Accumulator& acc) {
  for (const BigInt& p : hints) {
    if (p < 2) continue;
    if (!mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) continue;
    if (!is_prime(p)) throw ArithmeticError("factor hint " + p.get_str() + " is not prime");
    unsigned e = static_cast<unsigned>(mpz_remove(m.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t()));
    acc[p] += e;
  }
}

void factor_into(const BigInt& n, const FactorOptions& opts, Accumulator& acc) {
  if (n == 0) throw ArithmeticError("cannot factor zero");
  BigInt m = abs(n);
  strip_hints(m, opts.hint_primes, acc);

  std::uint64_t budget = opts.rho_budget;
  std::vector<BigInt> rest;

  if (!fits_u64(m)) {
    const auto& primes = small_primes();
    bool checked_prime = false;
    for (std::uint32_t p : primes) {
      if (p >= opts.trial_bound) break;
      if (mpz_cmp_ui(m.get_mpz_t(), static_cast<unsigned long>(p) * p) < 0) break;
      if (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
        BigInt bp = p;
        unsigned e = static_cast<unsigned>(mpz_remove(m.get_mpz_t(), m.get_mpz_t(), bp.get_mpz_t()));
        acc[bp] += e;
        checked_prime = false;
      }
      if (fits_u64(m)) break;
      // Once the cheap primes are gone, a prime cofactor ends the search.
      if (p > 1000 && !checked_prime) {
        checked_prime = true;
        if (is_prime(m)) break;
      }
    }
  }
  if (fits_u64(m)) {
    u64 w = to_u64(m);
    for (std::uint32_t p : small_primes()) {
      if (p >= kWordTrialLimit || static_cast<u64>(p) * p > w) break;
      if (w % p == 0) {
        unsigned e = 0;
        while (w % p == 0) {
          w /= p;
          ++e;
        }
        acc[BigInt(p)] += e;
      }
    }
    std::vector<u64> r64;
    split_u64(w, acc, budget, r64);
    for (u64 v : r64) rest.push_back(from_u64(v));
  } else {
    split_big(m, acc, budget, rest);
  }
  if (!rest.empty()) {
    BigInt cof = 1;
    for (const auto& r : rest) cof *= r;
    throw UnfactoredCofactor(to_factorization(acc), cof);
  }
}

}  // namespace

UnfactoredCofactor::UnfactoredCofactor(Factorization partial, BigInt cofactor)
    : std::runtime_error("unfactored cofactor " + cofactor.get_str() + " (factoring budget exceeded)"),
      partial_(std::move(partial)),
      cofactor_(std::move(cofactor)) {}

const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    std::vector<bool> composite(kSieveLimit, false);
    std::vector<std::uint32_t> out;
    out.reserve(78498);
    for (std::uint32_t i = 2; i < kSieveLimit; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (std::uint64_t j = static_cast<std::uint64_t>(i) * i; j < kSieveLimit; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint32_t p : kMrBases) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint32_t a : kMrBases) {
    if (!mr_witness_u64(n, a, d, s)) return false;
  }
  return true;
}

bool is_prime(const BigInt& n) {
  if (n < 2) return false;
  if (fits_u64(n)) return is_prime_u64(to_u64(n));
  for (std::uint32_t p : kMrBases) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
  }
  BigInt d = n - 1;
  unsigned s = static_cast<unsigned>(mpz_scan1(d.get_mpz_t(), 0));
  mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
  for (std::uint32_t a : kMrBases) {
    if (!mr_witness(n, a, d, s)) return false;
  }
  if (n >= deterministic_mr_limit()) return mpz_probab_prime_p(n.get_mpz_t(), 25) != 0;
  return true;
}

unsigned valuation_unchecked(const BigInt& n, const BigInt& p) {
  if (n == 0) throw ArithmeticError("valuation undefined for zero");
  if (!mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) return 0;
  BigInt tmp;
  return static_cast<unsigned>(mpz_remove(tmp.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

unsigned valuation_unchecked(const BigInt& n, unsigned long p) {
  if (n == 0) throw ArithmeticError("valuation undefined for zero");
  if (!mpz_divisible_ui_p(n.get_mpz_t(), p)) return 0;
  BigInt tmp, bp = p;
  return static_cast<unsigned>(mpz_remove(tmp.get_mpz_t(), n.get_mpz_t(), bp.get_mpz_t()));
}

unsigned p_adic_valuation(const BigInt& n, const BigInt& p) {
  if (n == 0) throw ArithmeticError("valuation undefined for zero");
  if (!is_prime(p)) throw ArithmeticError("valuation base " + p.get_str() + " is not prime");
  return valuation_unchecked(n, p);
}

Factorization factorize(const BigInt& n, const FactorOptions& opts) {
  Accumulator acc;
  factor_into(n, opts, acc);
  return to_factorization(acc);
}

Factorization factorize_product(std::span<const BigInt> factors, const FactorOptions& opts) {
  Accumulator acc;
  for (const BigInt& f : factors) factor_into(f, opts, acc);
  return to_factorization(acc);
}

BigInt expand(const Factorization& f) {
  BigInt out = 1;
  for (const auto& pp : f) out *= ipow(pp.prime, pp.exponent);
  return out;
}

BigInt radical_of(const Factorization& f) {
  BigInt out = 1;
  for (const auto& pp : f) out *= pp.prime;
  return out;
}

bool is_squarefree_of(const Factorization& f) {
  return std::all_of(f.begin(), f.end(), [](const PrimePower& pp) { return pp.exponent == 1; });
}

BigInt radical(const BigInt& n, const FactorOptions& opts) {
  if (n == 0) throw ArithmeticError("radical undefined for zero");
  return radical_of(factorize(n, opts));
}

bool is_squarefree(const BigInt& n, const FactorOptions& opts) {
  if (n == 0) throw ArithmeticError("squarefree test undefined for zero");
  return is_squarefree_of(factorize(n, opts));
}

std::vector<std::pair<std::uint64_t, unsigned>> factorize_u64(std::uint64_t n) {
  if (n == 0) throw ArithmeticError("cannot factor zero");
  Accumulator acc;
  for (std::uint32_t p : small_primes()) {
    if (p >= kWordTrialLimit || static_cast<u64>(p) * p > n) break;
    if (n % p == 0) {
      unsigned e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      acc[BigInt(p)] += e;
    }
  }
  u64 budget = FactorOptions{}.rho_budget;
  std::vector<u64> rest;
  split_u64(n, acc, budget, rest);
  if (!rest.empty()) throw UnfactoredCofactor(to_factorization(acc), from_u64(rest.front()));
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  for (const auto& [p, e] : acc) out.emplace_back(to_u64(p), e);
  return out;
}

double log_abs(const BigInt& n) {
  if (n == 0) throw ArithmeticError("log of zero");
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, n.get_mpz_t());
  return std::log(std::fabs(mant)) + static_cast<double>(exp) * std::log(2.0);
}

BigInt ipow(const BigInt& base, unsigned long e) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

BigRat rpow(const BigRat& base, long e) {
  if (e < 0) {
    if (base == 0) throw ArithmeticError("negative power of zero");
    return rpow(BigRat(1) / base, -e);
  }
  BigRat out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(e));
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(e));
  return out;
}

std::string to_string(const BigInt& n) { return n.get_str(); }

std::string to_string(const BigRat& q) { return q.get_str(); }

BigRat parse_rational(const std::string& text) {
  std::string t;
  for (char ch : text) {
    if (ch != ' ') t.push_back(ch);
  }
  if (t.empty()) throw std::invalid_argument("empty number");
  auto valid_int = [](const std::string& s) {
    std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i >= s.size()) return false;
    return std::all_of(s.begin() + static_cast<std::ptrdiff_t>(i), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  auto slash = t.find('/');
  std::string num = t.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : t.substr(slash + 1);
  if (!num.empty() && num[0] == '+') num.erase(0, 1);
  if (!valid_int(num) || !valid_int(den)) throw std::invalid_argument("not a rational number: " + text);
  BigInt n(num), d(den);
  if (d == 0) throw std::invalid_argument("zero denominator: " + text);
  BigRat q(n, d);
  q.canonicalize();
  return q;
}

}  // namespace szpiro
