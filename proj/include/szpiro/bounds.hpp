#pragma once

// Naive height, the modified Szpiro ratio, ABC quality, the homogeneity
// identities, the phi functions and the height-vs-delta inequality.

#include "szpiro/arith.hpp"
#include "szpiro/families.hpp"
#include "szpiro/poly.hpp"
#include "szpiro/reduction.hpp"
#include "szpiro/weierstrass.hpp"

#include <optional>
#include <string>
#include <vector>

namespace szpiro {

/// max{|c4^3|, c6^2} from given (minimal-model) invariants.
BigInt naive_height(const BigInt& c4, const BigInt& c6);
/// Naive height of the global minimal model. Throws SingularModel.
BigInt naive_height(const WeierstrassModel& model);

/// log(height) / log(N), computed from exact integers.
/// Throws std::domain_error when N == 1.
double szpiro_ratio(const BigInt& height, const BigInt& conductor);
double szpiro_ratio(const WeierstrassModel& model, const FactorOptions& opts = {});

/// height^q > N^p exactly.
bool exceeds(const BigInt& height, const BigInt& conductor, const SzpiroExponent& bound);
bool exceeds(const WeierstrassModel& model, const SzpiroExponent& bound, const FactorOptions& opts = {});

/// log c / log rad(abc). Requires a, b > 0, a + b = c and gcd(a, b) = 1.
double abc_quality(const BigInt& a, const BigInt& b, const BigInt& c);

/// One (T, u_T) pair of the phi nonnegativity check. For C4, v selects u = c (1) or u = 2c (2).
struct PhiSpec {
  Torsion id = Torsion::C5;
  long v = 1;

  /// Which slot carries x; the rest are 1.
  std::vector<BigRat> slots_at(const BigRat& x) const;
  /// The u^{-12} (v^{-12} for C4, 1 for C3) prefactor.
  BigRat height_factor() const;
  std::string describe() const;
};

/// Every (T, u) pair of the allowed u_T table (both C4 branches included).
std::vector<PhiSpec> all_phi_specs();

/// Parses "1", "2", "c" or "2c" into the branch v for T. Throws ContractViolation if not allowed.
PhiSpec make_phi_spec(Torsion id, const std::string& u);

struct PhiValue {
  int sign = 0;         ///< exact sign of phi(x)
  double approx = 0.0;  ///< phi(x), accurate to about 2^-200 absolute
};

PhiValue phi_eval(const PhiSpec& spec, const BigRat& x);

struct PhiScanResult {
  std::size_t points = 0;
  double min_value = 0.0;
  BigRat argmin;
  std::vector<BigRat> violations;  ///< grid points with phi < 0
  std::vector<BigRat> zeros;       ///< grid points with phi == 0
};

/// phi at every x = k / denominator with |x| <= range. Work is split across
/// `jobs` threads; results are merged in grid order.
PhiScanResult phi_scan(const PhiSpec& spec, long denominator, const BigRat& range, unsigned jobs = 1);
/// Same grid restricted to [center - radius, center + radius].
PhiScanResult phi_scan_window(const PhiSpec& spec, long denominator, double center, const BigRat& radius,
                              unsigned jobs = 1);

/// Leading-term comparison as |x| -> infinity.
struct TailDominance {
  int deg_alpha = -1, deg_beta = -1, deg_delta = -1;
  BigRat lhs_degree;  ///< degree of max{|alpha|^3, beta^2}
  BigRat rhs_degree;  ///< l_T * deg(delta)
  bool dominates = false;
};

TailDominance phi_tail(const PhiSpec& spec);

/// alpha, beta and delta_T in x along the substitution pattern.
struct PhiPolys {
  RatPoly alpha, beta, delta;
};
const PhiPolys& phi_polys(const PhiSpec& spec);

struct HomogeneityReport {
  bool alpha = false, beta = false, delta = false;
  bool ok() const { return alpha && beta && delta; }
};

/// The three scaling identities for alpha, beta and delta_T at the instance.
/// Throws std::invalid_argument when the leading parameter is zero or for C3_0.
HomogeneityReport homogeneity_check(const FamilyInstance& inst);

struct HeightBoundReport {
  BigInt height;  ///< u^{-12} max{|alpha^3|, beta^2}
  BigInt delta;   ///< delta_{T,u}, or 27 a^2 for C3_0
  bool ok = false;
};

/// |delta_{T,u}|^l < u^{-12} max{|alpha^3|, beta^2}, compared as integer powers.
HeightBoundReport verify_height_bound(const FamilyInstance& inst);
HeightBoundReport verify_height_bound(const FamilyInstance& inst, const ReductionSummary& summary);

}  // namespace szpiro
