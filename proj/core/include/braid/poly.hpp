#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "braid/linear.hpp"
#include "braid/scalar.hpp"

namespace braid {

// Exponent vector packed 8 bits per variable: at most 8 variables, exponents
// at most 255. Numeric order of the packed word is the canonical term order.
using Mono = std::uint64_t;

namespace mono {
constexpr int kMaxVars = 8;
constexpr int kMaxExp = 255;
inline int exp(Mono m, int i) { return static_cast<int>((m >> (8 * i)) & 0xff); }
inline Mono unit(int i, int e = 1) { return static_cast<Mono>(e) << (8 * i); }
Mono mul(Mono a, Mono b);  // throws IndexOutOfRange on exponent overflow
inline bool divides(Mono a, Mono b) {
  for (int i = 0; i < kMaxVars; ++i)
    if (exp(a, i) > exp(b, i)) return false;
  return true;
}
inline Mono quotient(Mono b, Mono a) { return b - a; }  // requires divides(a, b)
int degree(Mono m);
std::string str(Mono m, const std::vector<std::string>& names, const char* sep = " ");
}  // namespace mono

// Commutative polynomial in `arity` variables over a base ring, with the raw
// (relation-free) product. Relations such as adjoined inverses are applied by
// the owning coordinate algebra, not here.
class Poly {
 public:
  using Terms = Linear<Mono, Scalar>;

  Poly() = default;
  Poly(int arity, Ring ring) : arity_(arity), ring_(ring) {}
  Poly(int arity, Ring ring, Terms t) : arity_(arity), ring_(ring), terms_(std::move(t)) {}
  static Poly constant(int arity, const Scalar& s) { return Poly(arity, s.ring(), Terms(Mono{0}, s)); }
  static Poly monomial(int arity, Mono m, const Scalar& s) { return Poly(arity, s.ring(), Terms(m, s)); }
  static Poly variable(int arity, Ring ring, int i);

  int arity() const { return arity_; }
  Ring ring() const { return ring_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.is_zero(); }
  Scalar coefficient(Mono m) const;
  Scalar constant_term() const { return coefficient(0); }
  int degree() const;

  Poly operator-() const { return Poly(arity_, ring_, -terms_); }
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly scaled(const Scalar& s) const;
  friend bool operator==(const Poly& a, const Poly& b) {
    return a.arity_ == b.arity_ && a.ring_ == b.ring_ && a.terms_ == b.terms_;
  }

  Poly derivative(int var) const;
  Poly truncated(int n) const;
  Poly in_ring(Ring r) const;
  // Substitutes values[i] for variable i (values may have a different arity).
  Poly substitute(const std::vector<Poly>& values, int target_arity) const;

  std::string str(const std::vector<std::string>& names) const;

  // Parses sums of products such as "3/2 x^2 y - (1 + x)^2"; the symbol h
  // denotes the deformation parameter unless it is a variable name.
  static Poly parse(const std::string& text, const std::vector<std::string>& names, Ring ring);

 private:
  int arity_ = 0;
  Ring ring_;
  Terms terms_;
};

Poly pow(const Poly& p, int k);

// Parses a single scalar such as "2/3", "1 + h" or "-1/2 h^2".
Scalar parse_scalar(const std::string& text, Ring ring);

}  // namespace braid
