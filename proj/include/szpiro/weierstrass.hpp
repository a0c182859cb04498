#pragma once

// Weierstrass models over Q, their invariants, changes of variables and the
// chord-tangent group law on rational points.

#include "szpiro/arith.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace szpiro {

/// Raised for operations that need a nonsingular model.
class SingularModel : public std::domain_error {
 public:
  SingularModel() : std::domain_error("singular model (discriminant is zero)") {}
};

/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6
struct WeierstrassModel {
  BigRat a1, a2, a3, a4, a6;

  static WeierstrassModel from_integers(const BigInt& a1, const BigInt& a2, const BigInt& a3, const BigInt& a4,
                                        const BigInt& a6);

  bool is_integral() const;
  /// Coefficients as integers; throws std::domain_error if the model is not integral.
  std::array<BigInt, 5> integer_coefficients() const;

  friend bool operator==(const WeierstrassModel&, const WeierstrassModel&) = default;
};

struct ModelInvariants {
  BigRat b2, b4, b6, b8, c4, c6, delta;
};

ModelInvariants compute_invariants(const WeierstrassModel& model);

/// Integer invariants of an integral model.
struct IntegralInvariants {
  BigInt b2, b4, b6, b8, c4, c6, delta;
};
IntegralInvariants compute_invariants(const std::array<BigInt, 5>& a);

/// c4^3 / delta. Throws SingularModel when delta == 0.
BigRat j_invariant(const WeierstrassModel& model);

/// x = u^2 x' + r,  y = u^3 y' + u^2 s x' + t.
struct Isomorphism {
  BigRat u{1}, r{0}, s{0}, t{0};

  /// Apply `this`, then `next`.
  Isomorphism then(const Isomorphism& next) const;
  Isomorphism inverse() const;

  friend bool operator==(const Isomorphism&, const Isomorphism&) = default;
};

WeierstrassModel transform(const WeierstrassModel& model, const Isomorphism& iso);

struct AffinePoint {
  BigRat x, y;
  bool infinity = false;

  static AffinePoint at_infinity() { return {0, 0, true}; }

  friend bool operator==(const AffinePoint&, const AffinePoint&) = default;
};

bool is_on_curve(const WeierstrassModel& model, const AffinePoint& pt);

/// Group law. Inputs must lie on the curve; the model is not re-validated here.
AffinePoint negate(const WeierstrassModel& model, const AffinePoint& pt);
AffinePoint add(const WeierstrassModel& model, const AffinePoint& p, const AffinePoint& q);
AffinePoint multiply(const WeierstrassModel& model, const AffinePoint& pt, long k);

/// Exact order of `pt` if it is at most `cap`, std::nullopt otherwise.
/// Throws SingularModel for singular models and std::invalid_argument for points off the curve.
std::optional<int> point_order(const WeierstrassModel& model, const AffinePoint& pt, int cap = 16);

/// All rational points of exact order 2, found from the rational roots of
/// 4x^3 + b2 x^2 + 2 b4 x + b6.
std::vector<AffinePoint> two_torsion_points(const WeierstrassModel& model);

std::string to_string(const WeierstrassModel& model);

}  // namespace szpiro
