#pragma once

// Global minimal models (Laska-Kraus-Connell), Tate's algorithm per prime,
// conductor assembly and the semistability classification.

#include "szpiro/arith.hpp"
#include "szpiro/weierstrass.hpp"

#include <span>
#include <string>
#include <vector>

namespace szpiro {

struct MinimalModelResult {
  WeierstrassModel minimal;  ///< integral, reduced (a1, a3 in {0,1}, a2 in {-1,0,1})
  /// delta = scaling_u^12 * delta_min, where delta belongs to the input model
  /// after clearing denominators (the input itself when it is integral).
  BigInt scaling_u;
  Isomorphism iso;           ///< transform(input, iso) == minimal
  BigInt delta_min;
};

/// Global minimal model of a nonsingular model with rational coefficients.
/// `hint_primes` may list primes dividing the discriminant to speed up the search.
MinimalModelResult minimal_model(const WeierstrassModel& model, std::span<const BigInt> hint_primes = {});

/// Kraus's criterion: (c4, c6) are the invariants of some integral model.
bool kraus_integral(const BigInt& c4, const BigInt& c6);

struct LocalReductionData {
  BigInt p;
  unsigned vp_delta = 0;
  unsigned fp = 0;
  std::string kodaira;  ///< "I0", "I7", "II", "I2*", "IV*", ...
  bool semistable = true;
};

/// Raised when Tate's algorithm meets a model that is not minimal at p.
class NonMinimalModel : public std::domain_error {
 public:
  explicit NonMinimalModel(const BigInt& p)
      : std::domain_error("model is not minimal at p = " + p.get_str()) {}
};

/// Tate's algorithm at one prime for a model that is minimal at p.
LocalReductionData tate_local(const WeierstrassModel& minimal, const BigInt& p);

/// Everything the conductor computation produces for one curve.
struct ReductionSummary {
  MinimalModelResult min;
  IntegralInvariants invariants;        ///< of the minimal model
  Factorization delta_factorization;    ///< of |delta_min|
  std::vector<LocalReductionData> local;  ///< one entry per prime dividing delta_min
  BigInt conductor;

  bool semistable() const;
};

/// Minimal model, factorization of the minimal discriminant and local data at
/// every bad prime. Propagates UnfactoredCofactor when factoring fails.
ReductionSummary analyze(const WeierstrassModel& model, const FactorOptions& opts = {});

BigInt conductor(const WeierstrassModel& model, const FactorOptions& opts = {});

struct SemistabilityEntry {
  BigInt p;
  bool semistable = true;
};

/// For each p | delta_min: semistable iff p does not divide c4 of the minimal model.
std::vector<SemistabilityEntry> semistability_report(const WeierstrassModel& model, const FactorOptions& opts = {});

}  // namespace szpiro
