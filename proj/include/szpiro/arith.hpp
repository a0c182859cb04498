#pragma once

// Exact integer support: valuations, radicals, squarefree tests and
// factorization at desk scale. BigInt/BigRat are GMP's C++ classes.

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace szpiro {

using BigInt = mpz_class;
using BigRat = mpq_class;

/// Raised when an arithmetic precondition fails (zero argument, non-prime modulus, ...).
class ArithmeticError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct PrimePower {
  BigInt prime;
  unsigned exponent = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Primes strictly increasing, exponents positive.
using Factorization = std::vector<PrimePower>;

/// Thrown when the factoring budget runs out. `partial` holds the primes found
/// so far; `cofactor` is the part of |n| that could not be split.
class UnfactoredCofactor : public std::runtime_error {
 public:
  UnfactoredCofactor(Factorization partial, BigInt cofactor);

  const Factorization& partial() const noexcept { return partial_; }
  const BigInt& cofactor() const noexcept { return cofactor_; }

 private:
  Factorization partial_;
  BigInt cofactor_;
};

struct FactorOptions {
  /// Trial division runs over primes below this bound (capped at sqrt of the cofactor).
  std::uint32_t trial_bound = 1'000'000;
  /// Brent-rho iterations allowed per composite before giving up.
  std::uint64_t rho_budget = 20'000'000;
  /// Primes known (or suspected) to divide n; they are stripped first.
  std::span<const BigInt> hint_primes = {};
};

/// Deterministic Miller-Rabin for n < 3.3e24 (first thirteen prime bases);
/// beyond that GMP's BPSW-based test is added.
bool is_prime(const BigInt& n);
bool is_prime_u64(std::uint64_t n);

/// Largest k with p^k | n. Throws ArithmeticError for n == 0 or composite p.
unsigned p_adic_valuation(const BigInt& n, const BigInt& p);

/// Valuation without the primality check, for hot loops where p is known prime.
unsigned valuation_unchecked(const BigInt& n, const BigInt& p);
unsigned valuation_unchecked(const BigInt& n, unsigned long p);

/// Product of the distinct primes dividing n; radical(+-1) = 1.
BigInt radical(const BigInt& n, const FactorOptions& opts = {});

/// True iff no prime square divides n. Uses the full factorization.
bool is_squarefree(const BigInt& n, const FactorOptions& opts = {});

/// Complete factorization of |n|; factorize(+-1) is empty.
Factorization factorize(const BigInt& n, const FactorOptions& opts = {});

/// Factorization of a product given its factors (merges exponents).
Factorization factorize_product(std::span<const BigInt> factors, const FactorOptions& opts = {});

BigInt expand(const Factorization& f);
BigInt radical_of(const Factorization& f);
bool is_squarefree_of(const Factorization& f);

/// Primes below 10^6, sieved once.
const std::vector<std::uint32_t>& small_primes();

/// Factorization of a machine-word integer (short trial division plus Brent rho).
std::vector<std::pair<std::uint64_t, unsigned>> factorize_u64(std::uint64_t n);

/// Natural log of |n| for n != 0, accurate for magnitudes far beyond double range.
double log_abs(const BigInt& n);

BigInt ipow(const BigInt& base, unsigned long e);
BigRat rpow(const BigRat& base, long e);

std::string to_string(const BigInt& n);
std::string to_string(const BigRat& q);

/// Parses "123", "-7", "3/4".
BigRat parse_rational(const std::string& text);

}  // namespace szpiro
