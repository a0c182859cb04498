#pragma once

// Dense univariate polynomials over BigInt or BigRat, coefficients stored
// lowest degree first.

#include "szpiro/arith.hpp"

#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace szpiro {

template <class R>
struct Poly {
  std::vector<R> coeff;  ///< coeff[i] multiplies x^i

  Poly() = default;
  explicit Poly(std::vector<R> c) : coeff(std::move(c)) { trim(); }

  /// Highest degree first, the way polynomials are usually written.
  static Poly from_high(std::initializer_list<long> high_first) {
    std::vector<R> c;
    for (auto it = std::rbegin(high_first); it != std::rend(high_first); ++it) c.emplace_back(*it);
    return Poly(std::move(c));
  }

  void trim() {
    while (!coeff.empty() && coeff.back() == 0) coeff.pop_back();
  }

  bool is_zero() const { return coeff.empty(); }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeff.size()) - 1; }
  R leading() const { return coeff.empty() ? R(0) : coeff.back(); }

  template <class X>
  X operator()(const X& x) const {
    X acc = 0;
    for (auto it = coeff.rbegin(); it != coeff.rend(); ++it) acc = acc * x + X(*it);
    return acc;
  }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<R> c(a.coeff.size() + b.coeff.size() - 1, R(0));
    for (std::size_t i = 0; i < a.coeff.size(); ++i)
      for (std::size_t j = 0; j < b.coeff.size(); ++j) c[i + j] += a.coeff[i] * b.coeff[j];
    return Poly(std::move(c));
  }

  friend bool operator==(const Poly&, const Poly&) = default;
};

using IntPoly = Poly<BigInt>;
using RatPoly = Poly<BigRat>;

/// Recovers the polynomial f of degree < max_points from its values at
/// x = 0, 1, ..., max_points - 1 (Newton divided differences), then checks it
/// at a few extra points. Throws std::logic_error if f is not a polynomial of
/// that degree.
inline RatPoly interpolate(const std::function<BigRat(const BigRat&)>& f, int max_points) {
  std::vector<BigRat> xs, dd;
  for (int i = 0; i < max_points; ++i) {
    xs.emplace_back(i);
    dd.push_back(f(xs.back()));
  }
  for (int j = 1; j < max_points; ++j)
    for (int i = max_points - 1; i >= j; --i) dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);

  // Expand the Newton form into monomial coefficients.
  std::vector<BigRat> c(1, dd[max_points - 1]);
  for (int k = max_points - 2; k >= 0; --k) {
    std::vector<BigRat> next(c.size() + 1, BigRat(0));
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= c[i] * xs[k];
    }
    next[0] += dd[k];
    c = std::move(next);
  }
  RatPoly p(std::move(c));
  for (long extra : {-7L, -3L, 101L, 257L}) {
    BigRat x(extra, 3);
    x.canonicalize();
    if (p(x) != f(x)) throw std::logic_error("interpolation check failed: degree bound too small");
  }
  return p;
}

}  // namespace szpiro
