#pragma once

#include <memory>

#include "braid/hopf.hpp"
#include "braid/twist.hpp"

// Small Lie algebras shared by the unit tests.
namespace fx {

inline std::shared_ptr<braid::Enveloping> abelian(int n, braid::Ring ring) {
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("P" + std::to_string(i));
  return std::make_shared<braid::Enveloping>(braid::LieAlgebra::abelian(names, ring));
}

// [x1, x2] = x3, x3 central.
inline std::shared_ptr<braid::Enveloping> heisenberg(braid::Ring ring) {
  using braid::Scalar;
  std::vector<std::vector<std::vector<Scalar>>> c(3, std::vector<std::vector<Scalar>>(3, std::vector<Scalar>(3, Scalar(ring))));
  c[0][1][2] = Scalar(ring, 1);
  c[1][0][2] = Scalar(ring, -1);
  return std::make_shared<braid::Enveloping>(braid::LieAlgebra({"x1", "x2", "x3"}, ring, c));
}

inline braid::TensorElement pure2(const braid::Enveloping& U, braid::Mono a, braid::Mono b, const braid::Scalar& c) {
  return braid::TensorElement::pure({braid::HopfElement::monomial(a, c), braid::HopfElement::monomial(b, braid::Scalar(c.ring(), 1))});
}

}  // namespace fx

#include "braid/modalg.hpp"

namespace fx {

// Q[x, y] (with optional inverses) where P1, P2 act as d/dx, d/dy.
inline braid::ModuleAlgebra plane(braid::Ring ring, std::vector<braid::CoordinateAlgebra::Inverse> inv = {}) {
  auto coords = std::make_shared<braid::CoordinateAlgebra>(std::vector<std::string>{"x", "y"}, ring, inv);
  auto U = abelian(2, ring);
  braid::Poly one = coords->one(), zero = coords->zero();
  return braid::ModuleAlgebra(coords, braid::HopfAlgebra(U), {{one, zero}, {zero, one}});
}

inline braid::TensorElement h_bivector(braid::Ring ring, int a, int b, braid::Rational c = braid::Rational(1)) {
  return braid::TensorElement(2, ring,
                              braid::TensorElement::Terms(braid::TensorKey{braid::mono::unit(a), braid::mono::unit(b), 0},
                                                          braid::Scalar::h(ring) * c));
}

// Moyal-type plane: F = exp(h P1 (x) P2).
inline braid::ModuleAlgebra moyal(braid::Ring ring) {
  braid::ModuleAlgebra A = plane(ring);
  const auto& U = A.hopf().env();
  return A.with_hopf(braid::twist_hopf(A.hopf(), braid::exp_twist(U, h_bivector(ring, 0, 1)), 3));
}

}  // namespace fx

namespace fx {

// Q[x, y] with D = x d/dx and P = d/dy (commuting); D moves the frame: [D, d_x] = -d_x.
inline braid::ModuleAlgebra dilation_plane(braid::Ring ring) {
  auto coords = std::make_shared<braid::CoordinateAlgebra>(std::vector<std::string>{"x", "y"}, ring);
  auto U = std::make_shared<braid::Enveloping>(braid::LieAlgebra::abelian({"D", "P"}, ring));
  braid::Poly one = coords->one(), zero = coords->zero(), x = coords->variable(0);
  return braid::ModuleAlgebra(coords, braid::HopfAlgebra(U), {{x, zero}, {zero, one}});
}

}  // namespace fx

namespace fx {

// Q[x, y, w] with w (1 + x^2) = 1; a single generator acts as d/dy (d/dx if along_x).
inline braid::ModuleAlgebra strip(braid::Ring ring, bool along_x = false) {
  auto base = std::make_shared<braid::CoordinateAlgebra>(std::vector<std::string>{"x", "y"}, ring);
  auto coords = std::make_shared<braid::CoordinateAlgebra>(
      std::vector<std::string>{"x", "y"}, ring,
      std::vector<braid::CoordinateAlgebra::Inverse>{{"w", base->parse("1 + x^2")}});
  auto U = abelian(1, ring);
  if (along_x) return braid::ModuleAlgebra(coords, braid::HopfAlgebra(U), {{coords->one(), coords->zero()}});
  return braid::ModuleAlgebra(coords, braid::HopfAlgebra(U), {{coords->zero(), coords->one()}});
}

// Q[x, y, u] with u x = 1, D = x d/dx and P = d/dy.
inline braid::ModuleAlgebra half_plane(braid::Ring ring) {
  auto base = std::make_shared<braid::CoordinateAlgebra>(std::vector<std::string>{"x", "y"}, ring);
  auto coords = std::make_shared<braid::CoordinateAlgebra>(
      std::vector<std::string>{"x", "y"}, ring, std::vector<braid::CoordinateAlgebra::Inverse>{{"u", base->parse("x")}});
  auto U = std::make_shared<braid::Enveloping>(braid::LieAlgebra::abelian({"D", "P"}, ring));
  braid::Poly one = coords->one(), zero = coords->zero(), x = coords->variable(0);
  return braid::ModuleAlgebra(coords, braid::HopfAlgebra(U), {{x, zero}, {zero, one}});
}

}  // namespace fx
