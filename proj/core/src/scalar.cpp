#include "braid/scalar.hpp"

#include "braid/errors.hpp"

namespace braid {

std::string Ring::str() const { return order == 0 ? "Q" : "Q[h]/(h^" + std::to_string(order) + ")"; }

void require_same_ring(Ring a, Ring b) {
  if (!(a == b)) fail(ErrorKind::RingMismatch, a.str() + " vs " + b.str());
}

Scalar Scalar::h(Ring ring) {
  Scalar s(ring);
  if (!ring.is_series()) fail(ErrorKind::WrongRing, "h requires a truncated-series ring");
  if (ring.order > 1) s.coeffs_[1] = Rational(1);
  return s;
}

Scalar Scalar::from_coefficients(Ring ring, const std::vector<Rational>& cs) {
  Scalar s(ring);
  if (!ring.is_series() && cs.size() > 1) {
    for (std::size_t k = 1; k < cs.size(); ++k)
      if (!cs[k].is_zero()) fail(ErrorKind::WrongRing, "h-dependent coefficient in the rational ring");
  }
  for (std::size_t k = 0; k < cs.size() && static_cast<int>(k) < ring.width(); ++k) s.coeffs_[k] = cs[k];
  return s;
}

bool Scalar::is_zero() const {
  for (const auto& c : coeffs_)
    if (!c.is_zero()) return false;
  return true;
}

bool Scalar::is_one() const {
  if (!coeffs_[0].is_one()) return false;
  for (std::size_t k = 1; k < coeffs_.size(); ++k)
    if (!coeffs_[k].is_zero()) return false;
  return true;
}

int Scalar::valuation() const {
  for (std::size_t k = 0; k < coeffs_.size(); ++k)
    if (!coeffs_[k].is_zero()) return static_cast<int>(k);
  return ring_.width();
}

Scalar Scalar::operator-() const {
  Scalar r(*this);
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  require_same_ring(ring_, o.ring_);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  require_same_ring(ring_, o.ring_);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  return *this;
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  require_same_ring(a.ring_, b.ring_);
  Scalar r(a.ring_);
  const int n = a.ring_.width();
  for (int i = 0; i < n; ++i) {
    if (a.coeffs_[i].is_zero()) continue;
    for (int j = 0; i + j < n; ++j) {
      if (b.coeffs_[j].is_zero()) continue;
      r.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return r;
}

Scalar& Scalar::operator*=(const Scalar& o) { return *this = *this * o; }

Scalar& Scalar::operator*=(const Rational& r) {
  for (auto& c : coeffs_) c *= r;
  return *this;
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (!(a.ring_ == b.ring_)) return false;
  for (std::size_t k = 0; k < a.coeffs_.size(); ++k)
    if (!(a.coeffs_[k] == b.coeffs_[k])) return false;
  return true;
}

Scalar Scalar::inverse() const {
  if (coeffs_[0].is_zero()) fail(ErrorKind::NotInvertible, "constant term of " + str() + " is zero");
  // a = c0 (1 - u) with u of positive valuation; a^{-1} = c0^{-1} sum_k u^k.
  const Rational c0inv = coeffs_[0].inverse();
  Scalar u(*this);
  u *= -c0inv;
  u.coeffs_[0] = Rational(0);
  Scalar sum(ring_, Rational(1)), power(ring_, Rational(1));
  for (int k = 1; k < ring_.width(); ++k) {
    power *= u;
    sum += power;
  }
  sum *= c0inv;
  return sum;
}

Scalar Scalar::truncated(int n) const {
  Scalar r(*this);
  for (std::size_t k = std::max(n, 0); k < r.coeffs_.size(); ++k) r.coeffs_[k] = Rational(0);
  return r;
}

Scalar Scalar::in_ring(Ring target) const {
  Scalar r(target);
  for (int k = 0; k < target.width() && k < ring_.width(); ++k) r.coeffs_[k] = coeffs_[k];
  return r;
}

std::string Scalar::str() const {
  if (!ring_.is_series()) return coeffs_[0].str();
  std::string out;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    const Rational& c = coeffs_[k];
    if (c.is_zero()) continue;
    std::string mag = (c.sign() < 0 ? -c : c).str();
    if (!out.empty()) out += c.sign() < 0 ? " - " : " + ";
    else if (c.sign() < 0) out += "-";
    if (k == 0) {
      out += mag;
    } else {
      if (mag != "1") out += mag + "*";
      out += k == 1 ? "h" : "h^" + std::to_string(k);
    }
  }
  return out.empty() ? "0" : out;
}

}  // namespace braid
