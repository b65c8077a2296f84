#pragma once

#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "braid/rational.hpp"

namespace braid {

// Base ring: exact rationals (order == 0) or Q[h]/(h^order).
struct Ring {
  int order = 0;

  static Ring rational() { return {0}; }
  static Ring series(int n) { return {n}; }
  bool is_series() const { return order > 0; }
  int width() const { return order > 0 ? order : 1; }
  friend bool operator==(Ring a, Ring b) { return a.order == b.order; }
  std::string str() const;
};

// Element of the base ring. coefficients_[k] multiplies h^k; there are exactly
// ring.width() coefficients, so no stored term ever has order >= N.
class Scalar {
 public:
  Scalar() : coeffs_(1) {}
  explicit Scalar(Ring ring) : ring_(ring), coeffs_(ring.width()) {}
  Scalar(Ring ring, const Rational& c) : Scalar(ring) { coeffs_[0] = c; }
  static Scalar h(Ring ring);  // the deformation parameter; zero when ring.order == 1
  static Scalar from_coefficients(Ring ring, const std::vector<Rational>& cs);

  Ring ring() const { return ring_; }
  const Rational& coeff(int k) const { return coeffs_[k]; }
  bool is_zero() const;
  bool is_one() const;
  // Lowest k with a nonzero h^k coefficient; width() for zero.
  int valuation() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator*=(const Rational& r);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator*(Scalar a, const Rational& r) { return a *= r; }
  friend bool operator==(const Scalar& a, const Scalar& b);

  Scalar inverse() const;
  // Keeps only the coefficients of h^k with k < n (n <= width).
  Scalar truncated(int n) const;
  // Reinterprets the value in another ring, dropping orders that do not fit.
  Scalar in_ring(Ring r) const;

  std::string str() const;

 private:
  Ring ring_;
  boost::container::small_vector<Rational, 4> coeffs_;
};

// Throws RingMismatch unless a == b.
void require_same_ring(Ring a, Ring b);

}  // namespace braid
