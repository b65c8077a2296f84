#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "braid/hopf.hpp"
#include "braid/poly.hpp"

namespace braid {

// Polynomial coordinates x_1..x_n with optionally adjoined inverses w_i = 1/u_i
// of declared polynomials u_i in the x's. Elements are polynomials in
// (x, w) reduced modulo w_i u_i - 1. Reduction rewrites w_i LM(u_i) for the
// graded-lex leading monomial; leading monomials of distinct relations must be
// coprime, which makes the relations a Groebner basis and normal forms unique.
class CoordinateAlgebra {
 public:
  struct Inverse {
    std::string name;
    Poly u;  // over the coordinates only, arity n
  };

  CoordinateAlgebra(std::vector<std::string> coordinates, Ring ring, std::vector<Inverse> inverses = {});

  Ring ring() const { return ring_; }
  int n_coords() const { return n_; }
  int arity() const { return static_cast<int>(names_.size()); }  // coordinates, then inverses
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<std::string>& coordinate_names() const { return coord_names_; }
  const std::vector<Inverse>& inverses() const { return inverses_; }
  int index(const std::string& name) const;  // throws UnknownName

  Poly zero() const { return Poly(arity(), ring_); }
  Poly one() const { return constant(Scalar(ring_, Rational(1))); }
  Poly constant(const Scalar& s) const { return Poly::constant(arity(), s); }
  Poly variable(int i) const { return Poly::variable(arity(), ring_, i); }
  Poly monomial(Mono m) const { return reduce(Poly::monomial(arity(), m, Scalar(ring_, Rational(1)))); }
  Poly parse(const std::string& text) const { return reduce(Poly::parse(text, names_, ring_)); }
  std::string str(const Poly& p) const { return p.str(names_); }

  Poly reduce(const Poly& p) const;
  bool is_reduced(Mono m) const;
  Poly mul(const Poly& a, const Poly& b) const;  // the commutative product mu

  // Values of a derivation on every variable, given its values on the
  // coordinates: V(w) = -w^2 V(u).
  std::vector<Poly> extend_derivation(const std::vector<Poly>& coordinate_images) const;
  // sum_v dp/dv V(v), reduced.
  Poly apply_derivation(const std::vector<Poly>& images, const Poly& p) const;

  // Reduced monomials in the coordinates of degree <= d, then each inverse variable.
  std::vector<Mono> monomials_up_to(int d) const;

  std::shared_ptr<const CoordinateAlgebra> with_ring(Ring r) const;

 private:
  struct Rule {
    int var;      // index of w
    Mono lead;    // LM(u)
    Mono pattern; // w * LM(u)
    Scalar lead_inv;
    Poly tail;    // u - lc * LM(u)
  };

  Ring ring_;
  int n_;
  std::vector<std::string> coord_names_;
  std::vector<std::string> names_;
  std::vector<Inverse> inverses_;
  std::vector<Rule> rules_;
};

using CoordinatePtr = std::shared_ptr<const CoordinateAlgebra>;

// Linear combination of a (x) b for reduced monomials a, b of one coordinate algebra.
using PolyPair = std::pair<Mono, Mono>;
using PolyTensor = Linear<PolyPair, Scalar>;

// Left H-module algebra on a coordinate algebra, H = U(g) (possibly twisted).
// Each Lie generator acts as a derivation given by its values on coordinates.
// The product in force is the star product of the total twist of H:
// a * b = (F^{-1}_1 |> a)(F^{-1}_2 |> b); for untwisted H this is mu.
class ModuleAlgebra {
 public:
  // images[g][j] = x_g |> (coordinate j). Throws SchemaError if the
  // assignment does not respect brackets on every variable.
  ModuleAlgebra(CoordinatePtr coords, HopfAlgebra H, std::vector<std::vector<Poly>> images);

  const CoordinateAlgebra& coords() const { return *coords_; }
  CoordinatePtr coords_ptr() const { return coords_; }
  const HopfAlgebra& hopf() const { return H_; }
  Ring ring() const { return coords_->ring(); }
  bool is_twisted() const { return H_.is_twisted(); }
  const std::vector<std::vector<Poly>>& generator_images() const { return images_; }

  Poly act(const HopfElement& xi, const Poly& a) const;
  const Poly& act_mono(Mono xi, Mono a) const;
  Poly act_generator(int g, const Poly& a) const;
  // sum t_1 |> a (x) t_2 |> b for a rank-2 tensor t.
  PolyTensor act_tensor(const TensorElement& t, const Poly& a, const Poly& b) const;

  Poly mul(const Poly& a, const Poly& b) const;  // product in force
  Poly plain_mul(const Poly& a, const Poly& b) const { return coords_->mul(a, b); }
  const Poly& mul_mono(Mono a, Mono b) const;
  // mu or star applied to a tensor of monomial pairs.
  Poly multiply(const PolyTensor& t) const;

  // Same coordinates and action, H replaced by a twist of it.
  ModuleAlgebra with_hopf(HopfAlgebra H) const;

  // c(a (x) b) = R^{-1} (b (x) a).
  PolyTensor braid(const PolyTensor& t) const;
  PolyTensor braid(const Poly& a, const Poly& b) const;

  std::string str(const Poly& p) const { return coords_->str(p); }
  std::string str(const PolyTensor& t) const;

 private:
  struct Memo {
    std::mutex mutex;
    std::map<std::pair<int, Mono>, std::unique_ptr<Poly>> derivation;
    std::map<std::pair<Mono, Mono>, std::unique_ptr<Poly>> action;
  };
  struct ProductMemo {
    std::mutex mutex;
    std::map<std::pair<Mono, Mono>, std::unique_ptr<Poly>> product;
  };
  const Poly& derivation_mono(int g, Mono a) const;

  CoordinatePtr coords_;
  HopfAlgebra H_;
  std::vector<std::vector<Poly>> images_;  // full images on every variable
  std::shared_ptr<Memo> memo_ = std::make_shared<Memo>();
  std::shared_ptr<ProductMemo> product_memo_ = std::make_shared<ProductMemo>();
};

PolyTensor pure_tensor(const Poly& a, const Poly& b);

// Module-algebra axioms xi |> (ab) = (xi_1 |> a)(xi_2 |> b), xi |> 1 = eps(xi) 1,
// and bracket compatibility, for PBW monomials <= depth and monomials <= degree.
Report check_module_algebra(const ModuleAlgebra& A, int depth, int degree);
// b a = (R^{-1}_1 |> a)(R^{-1}_2 |> b) for the product in force and the given structure.
Report check_braided_commutative(const ModuleAlgebra& A, const TriangularStructure& tri, int degree);
// (a b) c = a (b c) on monomial triples of degree <= degree.
Report check_star_associative(const ModuleAlgebra& A, int degree);
// c o c = id on monomial pairs.
Report check_braiding_involutive(const ModuleAlgebra& A, int degree);

}  // namespace braid
