#pragma once

// The one-parameter families F_T(n) whose modified Szpiro ratio tends to l_T,
// the tabulated height and conductor polynomials H_T(n) and f_T(n), the
// squarefree sieve for f_T and the convergence experiment.

#include "szpiro/arith.hpp"
#include "szpiro/families.hpp"
#include "szpiro/poly.hpp"
#include "szpiro/reduction.hpp"
#include "szpiro/weierstrass.hpp"

#include <string>
#include <vector>

namespace szpiro {

struct PowerFactor {
  IntPoly poly;
  unsigned exponent = 1;
};

struct SharpFamilySpec {
  Torsion id = Torsion::C1;
  IntPoly A, B, D;  ///< parameters of F_T(n) as polynomials in n (D unused except C2, C2xC2)
  IntPoly w;        ///< scaling between the model and its minimal model (32n for C4)
  std::vector<PowerFactor> height;  ///< H_T(n) = prod |h_i(n)|^{e_i}
  std::vector<IntPoly> f;           ///< f_T(n) = prod f_j(n)

  int height_degree() const;
  int f_degree() const;
};

const SharpFamilySpec& sharp_spec(Torsion id);

/// F_T(n). Throws SingularModel for degenerate n.
WeierstrassModel build_FT(Torsion id, const BigInt& n);

struct SharpValues {
  BigInt H, f;
};

/// H_T(n) and f_T(n) from the stored tables.
SharpValues sharp_polynomials(Torsion id, const BigInt& n);

struct SharpConsistencyReport {
  Torsion id = Torsion::C1;
  BigInt n;
  WeierstrassModel model;
  BigInt scaling_u, expected_w;
  BigInt height, H, f, conductor;
  bool squarefree = false;
  bool w_ok = false, height_ok = false, radical_ok = false, semistable_ok = false, conductor_ok = false,
       torsion_ok = false;
  /// Whether the larger of |c4^3| and c6^2 is the one the tables predict. Informational.
  bool max_case_matches = true;
  std::vector<std::string> discrepancies;

  bool ok() const { return discrepancies.empty(); }
};

/// Cross-checks F_T(n) against the tables: w^12 scaling, naive height, radical
/// of the minimal discriminant, semistability, N = |f| when f is squarefree,
/// and the order of (0,0). Requires |n| > 1.
SharpConsistencyReport verify_sharp_consistency(Torsion id, const BigInt& n);

/// flags[i] is true iff prod_j factors[j](lo + i) is a nonzero squarefree integer.
/// Factors must be primitive (content 1).
std::vector<bool> squarefree_values(const std::vector<IntPoly>& factors, long lo, long hi);

/// S_T in [lo, hi]: |n| > 1 and f_T(n) squarefree.
std::vector<long> sieve_ST(Torsion id, long lo, long hi);

struct SharpnessRecord {
  Torsion id = Torsion::C1;
  long n = 0;
  BigInt height;
  BigInt f_value;
  bool squarefree = true;
  BigInt conductor;     ///< |f| (n is in S_T)
  double sigma_m = 0.0;
  bool exceeds_l = false;  ///< height^q > N^p exactly
};

struct FitSummary {
  std::size_t count = 0;
  double intercept = 0.0;  ///< sigma_m extrapolated to 1/log|f| = 0
  double slope = 0.0;
  double min_excess = 0.0;  ///< min(sigma_m - l_T)
  double last_sigma = 0.0;
  bool all_exceed = true;
};

struct ConvergenceOptions {
  long n_min = 2;
  long n_max = 1000;
  unsigned jobs = 1;
  bool keep_records = true;
  /// Every `spot_stride`-th member of S_T is rebuilt and run through the full
  /// conductor computation (0 disables).
  std::size_t spot_stride = 0;
};

struct ConvergenceResult {
  std::vector<SharpnessRecord> records;
  FitSummary fit;
  std::size_t spot_checks = 0;
  std::vector<std::string> discrepancies;
};

/// sigma_m(F_T(n)) over n in S_T and [n_min, n_max], with a least-squares fit of
/// sigma_m against 1/log|f_T(n)|. Throws std::runtime_error for fewer than 10 hits.
ConvergenceResult convergence_scan(Torsion id, const ConvergenceOptions& opts);

/// deg(H_T) / deg(f_T) as a fraction.
BigRat degree_ratio(Torsion id);
/// degree_ratio(T) == l_T.
bool degree_limit_check(Torsion id);

}  // namespace szpiro
