#pragma once

// The parameterized torsion families E_T(a, b[, d]) and E_{C3^0}(a), their
// conductor-bounding polynomials delta_{T,u}, and recovery of the scaling u_T
// that takes the family model to a global minimal model.

#include "szpiro/arith.hpp"
#include "szpiro/reduction.hpp"
#include "szpiro/weierstrass.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace szpiro {

enum class Torsion { C1, C2, C3, C4, C5, C6, C7, C8, C9, C10, C12, C2xC2, C2xC4, C2xC6, C2xC8, C3_0 };

/// Lower bound l_T = p / q on the modified Szpiro ratio, in lowest terms.
struct SzpiroExponent {
  long p = 1;
  long q = 1;

  double value() const { return static_cast<double>(p) / static_cast<double>(q); }
  friend bool operator==(const SzpiroExponent&, const SzpiroExponent&) = default;
};

/// A member of the allowed u_T set, written u_T = v * base where base is
/// c^2 d for C3, c for C4 and 1 otherwise.
struct UBranch {
  long v = 1;
  BigRat delta_factor;  ///< delta_{T,u} = delta_factor * delta_T
};

struct FamilyTraits {
  Torsion id;
  std::string_view name;
  int arity = 2;          ///< number of raw parameters (a; a,b; a,b,d)
  int m = 0;              ///< homogeneity weight m_T (0 when not defined)
  SzpiroExponent l;
  std::vector<UBranch> branches;
  int cyclic_order = 1;   ///< order of the largest cyclic factor of T
  bool full_two_torsion = false;  ///< T = C2 x C2N
};

const FamilyTraits& traits(Torsion t);
std::string_view name(Torsion t);
/// Accepts "C5", "C2xC4", "C3_0", "C3^0", ... Throws std::invalid_argument.
Torsion parse_torsion(std::string_view text);

/// C2..C12 and C2xC2..C2xC8 (fourteen two- or three-parameter families) plus C3_0.
std::span<const Torsion> parameterized_families();
/// All fifteen Mazur groups, C1 first (C3_0 excluded).
std::span<const Torsion> mazur_groups();

/// Raised when parameters violate the validity conditions of the family.
class InvalidParameters : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a computed quantity contradicts the expected structure
/// (u_T outside the allowed set, non-integral delta, ...).
class ContractViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// a = c^3 d^2 e (C3, gcd(d,e) = 1, de squarefree) or a = c^2 d (C4, d squarefree, e = 1).
struct Decomposition {
  BigInt c = 1, d = 1, e = 1;
  friend bool operator==(const Decomposition&, const Decomposition&) = default;
};

Decomposition decompose_a(Torsion id, const BigInt& a);

struct FamilyInstance {
  Torsion id = Torsion::C5;
  BigInt a = 1, b = 1, d = 1;          ///< d only meaningful for C2 and C2xC2
  std::optional<Decomposition> split;  ///< set for C3 and C4

  /// Parameter slots in the order the polynomials are written:
  /// (a,b,d) for C2 and C2xC2, (c,d,e,b) for C3, (c,d,b) for C4, (a) for C3_0, (a,b) otherwise.
  std::vector<BigRat> slots() const;
  std::string describe() const;
};

/// Checks the validity conditions and returns the normalized instance.
/// `d` is required for C2 and C2xC2 and ignored elsewhere; `b` is ignored for C3_0.
FamilyInstance validate_params(Torsion id, const BigInt& a, const BigInt& b, std::optional<BigInt> d = std::nullopt);

/// The family model evaluated at arbitrary rational slot values.
WeierstrassModel family_model(Torsion id, std::span<const BigRat> slots);
/// delta_T (the base polynomial, without the u-dependent factor) at rational slot values.
BigRat delta_base(Torsion id, std::span<const BigRat> slots);

WeierstrassModel build_model(const FamilyInstance& inst);

struct FamilyInvariants {
  BigInt alpha, beta, gamma;  ///< c4, c6, delta of the family model
};
FamilyInvariants family_invariants(const FamilyInstance& inst);

/// Branch with u_T = branch.v * base. Throws ContractViolation for an unknown v.
const UBranch& branch(Torsion id, long v);
/// base factor of u_T: c^2 d (C3), c (C4), 1 otherwise.
BigInt u_base(const FamilyInstance& inst);

struct UTRecovery {
  BigInt u;      ///< gamma = u^12 * delta_min
  long v = 0;    ///< branch index, u = v * base
};

/// Recovers u_T from the minimal discriminant; throws ContractViolation if it
/// falls outside the allowed set.
UTRecovery recover_uT(const FamilyInstance& inst);
UTRecovery recover_uT(const FamilyInstance& inst, const ReductionSummary& summary);

/// delta_{T,u} at the instance for branch v. Throws ContractViolation if the
/// scaled value is not an integer or v is not an allowed branch.
BigInt delta_eval(const FamilyInstance& inst, long v);

struct PrimeBoundCheck {
  BigInt p;
  unsigned v_conductor = 0;
  unsigned v_delta = 0;
  bool ok = true;
};

struct ConductorBoundReport {
  BigInt conductor;
  BigInt bound;  ///< |delta_{T,u}|, or 27 a^2 for C3_0
  UTRecovery ut;
  std::vector<PrimeBoundCheck> primes;
  bool global_ok = true;

  bool ok() const;
  std::string describe() const;
};

/// Per-prime v_p(N) <= v_p(delta_{T,u}) and N <= |delta_{T,u}| (N <= 27 a^2 for C3_0).
ConductorBoundReport verify_conductor_bound(const FamilyInstance& inst);
ConductorBoundReport verify_conductor_bound(const FamilyInstance& inst, const ReductionSummary& summary);

struct TorsionCertificate {
  std::optional<int> order_of_origin;  ///< order of (0,0), capped at 16
  int expected_order = 1;
  std::size_t two_torsion_points = 0;  ///< rational points of exact order 2
  bool ok = false;
};

/// (0,0) has exact order equal to the largest cyclic factor of T; for C2 x C2N
/// all three points of order 2 are rational as well.
TorsionCertificate certify_torsion(const FamilyInstance& inst);

/// Every valid instance with |parameters| <= bound (a > 0 where required).
/// C3_0 uses a <= bound_c3_0.
std::vector<FamilyInstance> enumerate_instances(Torsion id, long bound, long bound_c3_0 = 100);

}  // namespace szpiro
