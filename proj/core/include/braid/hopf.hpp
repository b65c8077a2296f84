#pragma once

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "braid/linear.hpp"
#include "braid/poly.hpp"
#include "braid/report.hpp"

namespace braid {

// Lie algebra over the base ring by structure constants [x_i, x_j] = c[i][j][k] x_k.
class LieAlgebra {
 public:
  // Throws JacobiViolation if c is not antisymmetric or violates Jacobi.
  LieAlgebra(std::vector<std::string> names, Ring ring, std::vector<std::vector<std::vector<Scalar>>> c);
  static LieAlgebra abelian(std::vector<std::string> names, Ring ring);

  int dim() const { return static_cast<int>(names_.size()); }
  Ring ring() const { return ring_; }
  const std::vector<std::string>& names() const { return names_; }
  int index(const std::string& name) const;  // throws UnknownName
  const Scalar& c(int i, int j, int k) const { return c_[i][j][k]; }
  bool bracket_zero(int i, int j) const;
  bool is_abelian() const;

 private:
  std::vector<std::string> names_;
  Ring ring_;
  std::vector<std::vector<std::vector<Scalar>>> c_;
};

// Element of U(g): linear combination of PBW monomials x_1^{a_1}...x_m^{a_m}.
class HopfElement {
 public:
  using Terms = Linear<Mono, Scalar>;

  HopfElement() = default;
  explicit HopfElement(Ring ring) : ring_(ring) {}
  HopfElement(Ring ring, Terms t) : ring_(ring), terms_(std::move(t)) {}
  static HopfElement unit(Ring ring) { return monomial(Mono{0}, Scalar(ring, Rational(1))); }
  static HopfElement monomial(Mono m, const Scalar& s) { return HopfElement(s.ring(), Terms(m, s)); }
  static HopfElement generator(Ring ring, int i) { return monomial(mono::unit(i), Scalar(ring, Rational(1))); }

  Ring ring() const { return ring_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.is_zero(); }
  Scalar coefficient(Mono m) const;
  int degree() const;

  HopfElement operator-() const { return HopfElement(ring_, -terms_); }
  HopfElement& operator+=(const HopfElement& o);
  HopfElement& operator-=(const HopfElement& o);
  friend HopfElement operator+(HopfElement a, const HopfElement& b) { return a += b; }
  friend HopfElement operator-(HopfElement a, const HopfElement& b) { return a -= b; }
  HopfElement scaled(const Scalar& s) const { return HopfElement(ring_, terms_.scaled(s)); }
  friend bool operator==(const HopfElement& a, const HopfElement& b) { return a.terms_ == b.terms_; }

  std::string str(const std::vector<std::string>& names) const;

 private:
  Ring ring_;
  Terms terms_;
};

// Key of a rank <= 3 tensor term; unused legs hold the unit monomial.
using TensorKey = std::array<Mono, 3>;

class TensorElement {
 public:
  using Terms = Linear<TensorKey, Scalar>;

  TensorElement() = default;
  TensorElement(int rank, Ring ring) : rank_(rank), ring_(ring) {}
  TensorElement(int rank, Ring ring, Terms t) : rank_(rank), ring_(ring), terms_(std::move(t)) {}
  static TensorElement unit(int rank, Ring ring);
  // a_1 (x) ... (x) a_r
  static TensorElement pure(const std::vector<HopfElement>& legs);

  int rank() const { return rank_; }
  Ring ring() const { return ring_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.is_zero(); }

  TensorElement operator-() const { return TensorElement(rank_, ring_, -terms_); }
  TensorElement& operator+=(const TensorElement& o);
  TensorElement& operator-=(const TensorElement& o);
  friend TensorElement operator+(TensorElement a, const TensorElement& b) { return a += b; }
  friend TensorElement operator-(TensorElement a, const TensorElement& b) { return a -= b; }
  TensorElement scaled(const Scalar& s) const { return TensorElement(rank_, ring_, terms_.scaled(s)); }
  friend bool operator==(const TensorElement& a, const TensorElement& b) {
    return a.rank_ == b.rank_ && a.terms_ == b.terms_;
  }

  // Reorders legs: result leg i is input leg perm[i].
  TensorElement permuted(const std::vector<int>& perm) const;
  TensorElement flipped() const { return permuted({1, 0}); }
  // Places the legs of this tensor at `positions` (0-based) of a rank-r tensor.
  TensorElement leg_embed(int r, const std::vector<int>& positions) const;
  // Drops every term whose coefficient has h-order >= n.
  TensorElement truncated(int n) const;

  std::string str(const std::vector<std::string>& names) const;

 private:
  int rank_ = 1;
  Ring ring_;
  Terms terms_;
};

// U(g) with its undeformed Hopf structure. Products of PBW monomials are
// memoized; the memo is guarded so one instance can serve several threads.
class Enveloping {
 public:
  explicit Enveloping(LieAlgebra lie);

  const LieAlgebra& lie() const { return lie_; }
  Ring ring() const { return lie_.ring(); }
  int dim() const { return lie_.dim(); }
  const std::vector<std::string>& names() const { return lie_.names(); }

  HopfElement pbw_normalize(const std::vector<int>& word, const Scalar& coeff) const;
  HopfElement mul(const HopfElement& a, const HopfElement& b) const;
  const HopfElement& mul_mono(Mono a, Mono b) const;
  HopfElement unit() const { return HopfElement::unit(ring()); }
  HopfElement generator(int i) const;

  TensorElement coproduct(const HopfElement& h) const;
  Scalar counit(const HopfElement& h) const { return h.coefficient(0); }
  HopfElement antipode(const HopfElement& h) const;
  // Replaces S on one generator; S is extended as an anti-homomorphism.
  // Used to build corrupted fixtures, never by the engine itself.
  void override_antipode(int generator, HopfElement image);

  TensorElement tensor_mul(const TensorElement& t, const TensorElement& u) const;
  TensorElement tensor_mul(std::initializer_list<const TensorElement*> factors) const;
  // mu on all legs of a rank-2 tensor.
  HopfElement multiply_legs(const TensorElement& t) const;
  // Inverse of t = 1 (x)..(x) 1 + (positive h-order); exact mod h^N.
  TensorElement tensor_inverse(const TensorElement& t) const;
  HopfElement inverse(const HopfElement& h) const;  // same series, rank 1

  // Applies a linear map HopfElement -> TensorElement(k) on leg `leg`.
  template <class F>
  TensorElement map_leg(const TensorElement& t, int leg, int out_rank, F&& f) const;
  TensorElement antipode_leg(const TensorElement& t, int leg) const;
  TensorElement counit_leg(const TensorElement& t, int leg) const;

  std::vector<Mono> monomials_up_to(int degree) const;

 private:
  const HopfElement& mul_gen_left(int j, Mono m) const;
  HopfElement mul_gen_left(int j, const HopfElement& h) const;

  LieAlgebra lie_;
  std::vector<std::optional<HopfElement>> antipode_override_;
  mutable std::mutex memo_mutex_;
  mutable std::map<std::pair<int, Mono>, std::unique_ptr<HopfElement>> gen_memo_;
  mutable std::map<std::pair<Mono, Mono>, std::unique_ptr<HopfElement>> mono_memo_;
};

// Pair R, R^{-1}. A valid structure has R_21 = R^{-1}.
struct TriangularStructure {
  TensorElement R;
  TensorElement Rinv;
};

// U(g) twisted by a (total) Drinfel'd twist F: Delta_F = F Delta F^{-1},
// S_F = beta S beta^{-1} with beta = F_1 S(F_2), R_F = F_21 R F^{-1}, R = 1 (x) 1.
// The untwisted algebra is the case F = 1 (x) 1.
class HopfAlgebra {
 public:
  explicit HopfAlgebra(std::shared_ptr<const Enveloping> u);
  HopfAlgebra(std::shared_ptr<const Enveloping> u, TensorElement F, TensorElement Finv);

  const Enveloping& env() const { return *u_; }
  std::shared_ptr<const Enveloping> env_ptr() const { return u_; }
  Ring ring() const { return u_->ring(); }
  int dim() const { return u_->dim(); }
  const std::vector<std::string>& names() const { return u_->names(); }
  bool is_twisted() const { return twisted_; }
  const TensorElement& twist() const { return F_; }
  const TensorElement& twist_inverse() const { return Finv_; }

  HopfElement mul(const HopfElement& a, const HopfElement& b) const { return u_->mul(a, b); }
  TensorElement coproduct(const HopfElement& h) const;
  const TensorElement& coproduct_mono(Mono m) const;
  Scalar counit(const HopfElement& h) const { return u_->counit(h); }
  HopfElement antipode(const HopfElement& h) const;
  const HopfElement& beta() const { return beta_; }
  const HopfElement& beta_inverse() const { return beta_inv_; }
  const TriangularStructure& triangular() const { return tri_; }
  const TensorElement& R() const { return tri_.R; }
  const TensorElement& Rinv() const { return tri_.Rinv; }

  TensorElement coproduct_leg(const TensorElement& t, int leg) const;
  TensorElement antipode_leg(const TensorElement& t, int leg) const;

 private:
  std::shared_ptr<const Enveloping> u_;
  bool twisted_ = false;
  TensorElement F_, Finv_;
  HopfElement beta_, beta_inv_;
  TriangularStructure tri_;
  // Shared by copies: the memoized values depend only on immutable data.
  struct Memo {
    std::mutex mutex;
    std::map<Mono, std::unique_ptr<TensorElement>> coproduct;
  };
  std::shared_ptr<Memo> memo_ = std::make_shared<Memo>();
};

// Hopf axioms on all PBW monomials of degree <= depth.
Report check_hopf(const HopfAlgebra& H, int depth);
// Quasi-cocommutativity, hexagons, unitarity R_21 = R^{-1}, inverse witness, QYBE.
Report check_triangular(const HopfAlgebra& H, const TriangularStructure& tri, int depth);

// Template definition.
template <class F>
TensorElement Enveloping::map_leg(const TensorElement& t, int leg, int out_rank, F&& f) const {
  const int r = t.rank();
  const int new_rank = r - 1 + out_rank;
  std::vector<TensorElement::Terms::Term> out;
  for (const auto& [key, c] : t.terms().terms()) {
    TensorElement img = f(HopfElement::monomial(key[leg], Scalar(ring(), Rational(1))));
    for (const auto& [ikey, ic] : img.terms().terms()) {
      TensorKey k{};
      int pos = 0;
      for (int i = 0; i < leg; ++i) k[pos++] = key[i];
      for (int i = 0; i < out_rank; ++i) k[pos++] = ikey[i];
      for (int i = leg + 1; i < r; ++i) k[pos++] = key[i];
      out.emplace_back(k, c * ic);
    }
  }
  return TensorElement(new_rank, ring(), TensorElement::Terms::from_terms(std::move(out)));
}

}  // namespace braid
