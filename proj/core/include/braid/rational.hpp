#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace braid {

using BigRational = boost::multiprecision::cpp_rational;

// Exact rational number. Values that fit in int64 numerator/denominator stay
// inline; anything larger is promoted to an arbitrary-precision rational.
// Invariant: den_ > 0, gcd(num_, den_) == 1, big_ is set only when the value
// does not fit the small representation.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t n) : num_(n) {}  // NOLINT: implicit integer promotion is intended
  Rational(std::int64_t n, std::int64_t d);
  explicit Rational(const BigRational& b);

  static Rational parse(const std::string& s);

  bool is_zero() const { return !big_ && num_ == 0; }
  bool is_one() const { return !big_ && num_ == 1 && den_ == 1; }
  bool is_integer() const;
  int sign() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);
  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b);
  friend bool operator<(const Rational& a, const Rational& b);

  Rational inverse() const;
  BigRational big() const;
  std::string str() const;
  std::size_t hash() const;

 private:
  static Rational from_parts(__int128 n, __int128 d);
  void assign_big(const BigRational& b);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::shared_ptr<const BigRational> big_;
};

}  // namespace braid
