#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "braid/geometry.hpp"

namespace braid {

// An ideal C of the algebra of a calculus with H |> C in C. Coordinate ideals
// (generated by a subset of the coordinates) carry the quotient calculus on
// A/C; oracle ideals only decide membership through a user normal form.
// The frame splits into tangent elements (E_a(C) in C) and normal ones.
class SubmanifoldIdeal {
 public:
  using NormalForm = std::function<Poly(const Poly&)>;

  // Throws UnknownName, or SchemaError when some killed inverse forces 1 in C.
  static SubmanifoldIdeal coordinates(const Calculus& C, const std::vector<std::string>& killed);
  // nf must send C to 0 and be multiplicative modulo C; spot-checked on
  // monomial pairs of degree <= degree, throwing OracleUnsound otherwise.
  static SubmanifoldIdeal oracle(const Calculus& C, std::vector<Poly> generators, NormalForm nf, int degree = 2);

  const Calculus& ambient() const;
  const std::vector<Poly>& generators() const;
  bool is_coordinate_ideal() const;
  const std::vector<int>& tangent_frame() const;
  const std::vector<int>& normal_frame() const;

  // The calculus on A/C over the projected tangent frame. has_quotient() is
  // false for oracle ideals and when the tangent frame does not project onto
  // a frame of A/C; quotient() then throws Unsupported with the reason.
  bool has_quotient() const;
  const std::string& quotient_error() const;
  const Calculus& quotient() const;

  // Canonical representative: an element of A/C for coordinate ideals, the
  // oracle normal form (an element of A) otherwise.
  Poly project(const Poly& a) const;
  bool contains(const Poly& a) const;
  // A representative in A of pr(a); a - lift(a) lies in C.
  Poly lift(const Poly& a) const;
  // A representative in A of an element of A/C (coordinate ideals only).
  Poly embed(const Poly& q) const;

  // X(c) in C for every generator c.
  bool is_tangent(const Graded& X) const;
  // Multivectors whose normal words carry coefficients in C, and any form.
  // Throws NotTangent or Unsupported.
  Graded project(const Graded& U) const;

  // Terms c E_a with c in C and E_a a frame element summing to X, where X
  // lies in the kernel of the derivation projection. Throws AxiomOneUnwitnessed.
  std::vector<std::pair<Poly, Graded>> kernel_witness(const Graded& X) const;

 private:
  struct State;
  explicit SubmanifoldIdeal(std::shared_ptr<const State> s) : state_(std::move(s)) {}
  std::shared_ptr<const State> state_;
};

// Tangent part X - N and normal part N = sum_n lift(pr(x^n)) E_n over the
// normal frame. Requires g block-diagonal across the split (NoBlockSplit).
std::pair<Graded, Graded> normal_decomposition(const Graded& X, const Metric& g, const SubmanifoldIdeal& C);
// pr_g = pr o tangent part.
Graded project_g(const Graded& X, const Metric& g, const SubmanifoldIdeal& C);

// The tangent block of g and of its inverse witness, projected. Throws
// NoBlockSplit, AxiomOneUnwitnessed or Unsupported.
Metric project_metric(const Metric& g, const SubmanifoldIdeal& C, int degree = 1);
// Christoffel data pr(Gamma^u_{ts}) over tangent indices: the connection
// pr(X), pr(Y) |-> pr_g(nabla_X Y).
Connection project_connection(const Connection& nabla, const Metric& g, const SubmanifoldIdeal& C, int degree = 1);

// Generated tangent multivectors: frame wedges over tangent indices with
// monomial coefficients, plus c E_n for generators c and normal n.
std::vector<Graded> tangent_family(const SubmanifoldIdeal& C, int max_grade, int degree);

// Stability of C, pr an algebra map, surjectivity onto the quotient frame,
// the kernel of the derivation projection, the recursive kernel of forms and
// closure of tangent fields under the bracket.
Report check_sequence(const SubmanifoldIdeal& C, int depth, int degree);
// pr intertwines the action, equivariance, wedge, Schouten bracket, Lie
// derivative, insertion and d on the generated tangent family.
Report projection_suite(const SubmanifoldIdeal& C, int depth, int degree, const std::string& suite = "projection");
// Block split, kernel witnesses c_i X^i with c_i in C, the projected metric
// being a metric, and pr_g against the projected connection, torsion and
// curvature on tangent frame inputs. With expect_levi_civita the projection is also compared with the
// Levi-Civita connection of the projected metric.
Report metric_projection_suite(const Connection& nabla, const Metric& g, const SubmanifoldIdeal& C, int depth, int degree,
                               bool expect_levi_civita);

// Precondition: every PBW monomial of H up to depth (the twist legs among
// them) keeps C stable; when it fails the remaining checks are skipped.
// Then projection_suite on the twisted calculus and, given a metric, the
// twisted metric, connection, torsion and curvature against the twist of the
// projected ones.
Report twist_projection_suite(const Calculus& classical, const std::vector<std::string>& killed, const Twist& F, int depth,
                              int degree, const std::optional<Metric>& g = std::nullopt);

}  // namespace braid
