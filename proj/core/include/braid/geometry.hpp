#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <tuple>
#include <vector>

#include "braid/calculus.hpp"

namespace braid {

// Christoffel data gamma[a][b][c] = Gamma^c_{ab}: nabla_{E_a} E_b = sum_c Gamma^c_{ab} * E_c.
using Christoffel = std::vector<std::vector<std::vector<Poly>>>;

// Equivariant covariant derivative on the frame of a calculus. Everything
// else follows from A-linearity in X and the braided Leibniz rule in s;
// multivectors and forms are reached as braided derivations of the wedge,
// with the dual connection on one-forms fixed by the braided dual pairing.
class Connection {
 public:
  Connection(const Calculus& C, Christoffel gamma);
  static Connection flat(const Calculus& C);

  const Calculus& calculus() const { return C_; }
  const Christoffel& christoffel() const { return gamma_; }
  const Poly& christoffel(int c, int a, int b) const { return gamma_[a][b][c]; }

  // X of grade 1; s a multivector or form of any grade.
  Graded operator()(const Graded& X, const Graded& s) const;
  Graded covariant_derivative(const Graded& X, const Graded& s) const { return (*this)(X, s); }

 private:
  struct Memo;
  Graded along(int a, const Graded& s) const;
  Graded along_combo(const Graded& X, const Graded& s) const;  // X a constant frame combination
  const Graded& along_word(Kind kind, int a, Word w) const;
  const Graded& dual_frame(int a, int b) const;

  Calculus C_;
  Christoffel gamma_;
  std::shared_ptr<Memo> memo_;
};

Graded curvature(const Connection& nabla, const Graded& X, const Graded& Y, const Graded& Z);
Graded torsion(const Connection& nabla, const Graded& X, const Graded& Y);

// g_ab = g(E_a, E_b), left A-linear in slot one and braided left A-linear in
// slot two: g(X, a Y) = (R^{-1}_1 |> a) * g(R^{-1}_2 |> X, Y). Non-degeneracy
// is certified by a two-sided inverse matrix; without a witness the pairing is
// inverted with constant pivots when possible.
class Metric {
 public:
  Metric(const Calculus& C, PolyMatrix g, std::optional<PolyMatrix> inverse = std::nullopt);

  const Calculus& calculus() const { return C_; }
  const PolyMatrix& matrix() const { return g_; }
  const std::optional<PolyMatrix>& inverse() const { return inverse_; }
  const Poly& entry(int a, int b) const { return g_[a][b]; }

  Poly operator()(const Graded& X, const Graded& Y) const;

 private:
  Calculus C_;
  PolyMatrix g_;
  std::optional<PolyMatrix> inverse_;
};

// H-equivariance, A-linearity in X, braided Leibniz in s, the right-module
// laws, and the defining identity of the dual connection.
Report check_connection_axioms(const Connection& nabla, int depth, int degree);
// Braided symmetry, H-equivariance, linearity in both slots, inverse witness.
Report check_metric(const Metric& g, int depth, int degree);
// Metric compatibility and vanishing torsion on the generated family.
Report check_levi_civita(const Connection& nabla, const Metric& g, int degree);

// The six-term braided Koszul formula solved against the inverse witness.
// Throws MetricCheckFailed or InverseWitnessInvalid.
Connection levi_civita(const Metric& g, int depth = 3, int degree = 1);

// Adds `count` seeded nonzero constant tensors to Gamma; the check passes iff
// every perturbation breaks metric compatibility or torsion-freeness.
Report perturbation_suite(const Connection& nabla, const Metric& g, int count, std::uint64_t seed, int degree = 1);

// nabla^F_X s = nabla_{F^{-1}_1 |> X}(F^{-1}_2 |> s) and
// g_F(X, Y) = g(F^{-1}_1 |> X, F^{-1}_2 |> Y), carried to the frame of the
// twisted calculus through the Drinfel'd transport.
Connection twist_connection(const Connection& nabla, const Calculus& twisted, const Twist& F);
Metric twist_metric(const Metric& g, const Calculus& twisted, const Twist& F);

}  // namespace braid
