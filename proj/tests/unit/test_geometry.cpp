#include "doctest.h"
#include "fixtures.hpp"

#include "braid/errors.hpp"
#include "braid/geometry.hpp"

using namespace braid;

namespace {

Ring Q = Ring::rational();
Ring R3 = Ring::series(3);

Poly P(const ModuleAlgebra& A, const std::string& s) { return A.coords().parse(s); }

// Oracle partial derivative d/dx_i, extended to inverse variables.
Poly partial(const CoordinateAlgebra& C, int i, const Poly& p) {
  std::vector<Poly> images(C.n_coords(), C.zero());
  images[i] = C.one();
  return C.apply_derivation(C.extend_derivation(images), p);
}

using Tensor3 = std::vector<std::vector<std::vector<Poly>>>;

// Classical Christoffel symbols on a coordinate frame:
// Gamma^k_ij = 1/2 g^kl (d_i g_lj + d_j g_li - d_l g_ij), stored as [i][j][k].
Tensor3 classical_christoffel(const CoordinateAlgebra& C, const PolyMatrix& g, const PolyMatrix& ginv) {
  const int n = static_cast<int>(g.size());
  const Scalar half(C.ring(), Rational(1, 2));
  Tensor3 out(n, std::vector<std::vector<Poly>>(n, std::vector<Poly>(n, C.zero())));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const Poly s = partial(C, i, g[l][j]) + partial(C, j, g[l][i]) - partial(C, l, g[i][j]);
          out[i][j][k] += C.mul(ginv[k][l], s).scaled(half);
        }
  return out;
}

// R^l_kij = d_i Gamma^l_jk - d_j Gamma^l_ik + Gamma^l_im Gamma^m_jk - Gamma^l_jm Gamma^m_ik,
// so that R(d_i, d_j) d_k = sum_l R^l_kij d_l.
std::vector<Poly> classical_riemann(const CoordinateAlgebra& C, const Tensor3& G, int i, int j, int k) {
  const int n = static_cast<int>(G.size());
  std::vector<Poly> out(n, C.zero());
  for (int l = 0; l < n; ++l) {
    out[l] = partial(C, i, G[j][k][l]) - partial(C, j, G[i][k][l]);
    for (int m = 0; m < n; ++m) out[l] += C.mul(G[i][m][l], G[j][k][m]) - C.mul(G[j][m][l], G[i][k][m]);
  }
  return out;
}

Christoffel zero_gamma(const Calculus& C) { return Connection::flat(C).christoffel(); }

PolyMatrix diag(const ModuleAlgebra& A, std::vector<std::string> entries) {
  const int n = static_cast<int>(entries.size());
  PolyMatrix out(n, std::vector<Poly>(n, A.coords().zero()));
  for (int i = 0; i < n; ++i) out[i][i] = P(A, entries[i]);
  return out;
}

void require_pass(const Report& r) {
  for (const auto& c : r.checks()) CHECK_MESSAGE(c.pass, c.suite << "/" << c.name << ": " << c.counterexample);
}

}  // namespace

TEST_CASE("flat connection examples") {
  ModuleAlgebra A = fx::plane(Q);
  Calculus C(A, Frame::coordinate(A));
  const Connection flat = Connection::flat(C);
  CHECK(flat(C.vector(0), C.vector(1, P(A, "y"))).is_zero());
  CHECK(flat(C.vector(0), C.vector(1, P(A, "x"))) == C.vector(1));
  CHECK(flat(C.vector(0, P(A, "y")), C.vector(1, P(A, "x^2"))) == C.vector(1, P(A, "2 x y")));
  CHECK(curvature(flat, C.vector(0), C.vector(1), C.vector(0)).is_zero());
  CHECK(torsion(flat, C.vector(0, P(A, "x")), C.vector(1, P(A, "x y"))).is_zero());
  CHECK_THROWS_AS(flat(C.vector(0) + C.wedge(C.vector(0), C.vector(1)), C.vector(1)), Error);
  require_pass(check_connection_axioms(flat, 3, 2));
}

TEST_CASE("asymmetric Christoffel data") {
  ModuleAlgebra A = fx::plane(Q);
  Calculus C(A, Frame::coordinate(A));
  Christoffel gamma = zero_gamma(C);
  gamma[0][1][0] = A.coords().one();  // Gamma^1_12 = 1
  const Connection nabla(C, gamma);
  const Graded e1 = C.vector(0), e2 = C.vector(1);
  CHECK(torsion(nabla, e1, e2) == e1 - C.bracket(e1, e2));
  CHECK(torsion(nabla, e2, e1) == -e1);

  // With Gamma^2_11 = -1 as well, nabla_{e_1} is skew for g = 1: only torsion fails.
  gamma[0][0][1] = -A.coords().one();
  const Connection skew(C, gamma);
  const Metric g(C, diag(A, {"1", "1"}));
  require_pass(check_connection_axioms(skew, 2, 1));
  const Report r = check_levi_civita(skew, g, 1);
  CHECK(r.find("metric-compatibility")->pass);
  CHECK_FALSE(r.find("torsion-free")->pass);
}

TEST_CASE("non-invariant Christoffel data breaks equivariance") {
  ModuleAlgebra A = fx::plane(Q);
  Calculus C(A, Frame::coordinate(A));
  Christoffel gamma = zero_gamma(C);
  gamma[0][0][0] = P(A, "y");
  const Report r = check_connection_axioms(Connection(C, gamma), 2, 1);
  CHECK_FALSE(r.find("equivariance")->pass);
  CHECK(r.find("left-linearity")->pass);
  CHECK(r.find("leibniz")->pass);
}

TEST_CASE("metric checks") {
  {
    ModuleAlgebra A = fx::plane(Q);
    Calculus C(A, Frame::coordinate(A));
    const Metric g(C, diag(A, {"1", "1"}));
    require_pass(check_metric(g, 3, 2));
    CHECK(g(C.vector(0, P(A, "x")), C.vector(0, P(A, "y")) + C.vector(1)) == P(A, "x y"));
    const Metric noninvertible(C, diag(A, {"1", "0"}));
    CHECK_FALSE(check_metric(noninvertible, 1, 1).find("inverse-witness")->pass);
  }
  {
    ModuleAlgebra A = fx::strip(Q);
    Calculus C(A, Frame::coordinate(A));
    const Metric g(C, diag(A, {"1", "1 + x^2"}), diag(A, {"1", "w"}));
    require_pass(check_metric(g, 3, 2));
    CHECK_THROWS_AS(levi_civita(Metric(C, diag(A, {"1", "1 + x^2"}), diag(A, {"1", "1"}))), Error);
  }
  {
    ModuleAlgebra A = fx::strip(Q, true);
    Calculus C(A, Frame::coordinate(A));
    const Metric g(C, diag(A, {"1", "1 + x^2"}), diag(A, {"1", "w"}));
    const Report r = check_metric(g, 3, 2);
    CHECK_FALSE(r.find("equivariance")->pass);
    CHECK(r.find("braided-symmetry")->pass);
    try {
      levi_civita(g);
      FAIL("expected MetricCheckFailed");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::MetricCheckFailed);
    }
  }
}

TEST_CASE("Levi-Civita of constant and warped metrics") {
  {
    ModuleAlgebra A = fx::plane(Q);
    Calculus C(A, Frame::coordinate(A));
    const Metric g(C, diag(A, {"2", "3"}));
    const Connection lc = levi_civita(g);
    for (const auto& row : lc.christoffel())
      for (const auto& col : row)
        for (const auto& e : col) CHECK(e.is_zero());
  }
  ModuleAlgebra A = fx::strip(Q);
  Calculus C(A, Frame::coordinate(A));
  const PolyMatrix gm = diag(A, {"1", "1 + x^2"}), ginv = diag(A, {"1", "w"});
  const Metric g(C, gm, ginv);
  const Connection lc = levi_civita(g);
  const Tensor3 oracle = classical_christoffel(A.coords(), gm, ginv);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) CHECK_MESSAGE(lc.christoffel(c, a, b) == oracle[a][b][c], a << b << c);
  // Frozen from the oracle.
  CHECK(lc.christoffel(1, 0, 1) == P(A, "x w"));
  CHECK(lc.christoffel(1, 1, 0) == P(A, "x w"));
  CHECK(lc.christoffel(0, 1, 1) == P(A, "-x"));
  CHECK(lc.christoffel(0, 0, 0).is_zero());

  require_pass(check_connection_axioms(lc, 2, 1));
  require_pass(check_levi_civita(lc, g, 2));
  require_pass(perturbation_suite(lc, g, 20, 7));

  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        const std::vector<Poly> r = classical_riemann(A.coords(), oracle, i, j, k);
        const Graded expect = C.vector(0, r[0]) + C.vector(1, r[1]);
        CHECK(curvature(lc, C.vector(i), C.vector(j), C.vector(k)) == expect);
      }
  // Curvature is a tensor classically.
  const Graded X = C.vector(0, P(A, "y")), Y = C.vector(1, P(A, "x")), Z = C.vector(1, P(A, "x y"));
  const Poly a = P(A, "x^2 + y");
  const Graded base = curvature(lc, X, Y, Z);
  CHECK(curvature(lc, C.left_mul(a, X), Y, Z) == C.left_mul(a, base));
  CHECK(curvature(lc, X, C.left_mul(a, Y), Z) == C.left_mul(a, base));
  CHECK(curvature(lc, X, Y, C.left_mul(a, Z)) == C.left_mul(a, base));
}

TEST_CASE("dual connection and extension to higher grades") {
  ModuleAlgebra A = fx::strip(Q);
  Calculus C(A, Frame::coordinate(A));
  const Connection lc = levi_civita(Metric(C, diag(A, {"1", "1 + x^2"}), diag(A, {"1", "w"})));
  // Classically nabla_{d_i} dx^k = -Gamma^k_ij dx^j.
  CHECK(lc(C.vector(0), C.dual(1)) == C.dual(1, P(A, "-x w")));
  CHECK(lc(C.vector(1), C.dual(0)) == C.dual(1, P(A, "x")));
  CHECK(lc(C.vector(1), C.dual(1)) == C.dual(0, P(A, "-x w")));
  // Derivation of the wedge: nabla_{d_x}(d_x ^ d_y) = d_x ^ Gamma^2_12 d_y.
  CHECK(lc(C.vector(0), C.wedge(C.vector(0), C.vector(1))) == C.wedge(C.vector(0), C.vector(1, P(A, "x w"))));
  CHECK(lc(C.vector(1), C.function(P(A, "x y"))) == C.function(P(A, "x")));
}

TEST_CASE("twisting is identity for the trivial twist and invariant legs") {
  ModuleAlgebra A = fx::strip(R3);
  Calculus C(A, Frame::coordinate(A));
  const Metric g(C, diag(A, {"1", "1 + x^2"}), diag(A, {"1", "w"}));
  const Connection lc = levi_civita(g);
  const auto& U = A.hopf().env();

  const Twist trivial = exp_twist(U, TensorElement(2, R3));
  const Calculus C1 = twisted_calculus(C, trivial, 3);
  CHECK(twist_metric(g, C1, trivial).matrix() == g.matrix());
  CHECK(twist_connection(lc, C1, trivial).christoffel() == lc.christoffel());

  // F = exp(h P_y (x) P_y): the legs annihilate every entry.
  const Twist F = exp_twist(U, fx::h_bivector(R3, 0, 0));
  const Calculus CF = twisted_calculus(C, F, 3);
  const Metric gF = twist_metric(g, CF, F);
  CHECK(gF.matrix() == g.matrix());
  const Connection twisted = twist_connection(lc, CF, F);
  const Connection lcF = levi_civita(gF);
  CHECK(twisted.christoffel() == lc.christoffel());
  CHECK(lcF.christoffel() == twisted.christoffel());
  require_pass(check_levi_civita(lcF, gF, 1));
}

TEST_CASE("twist naturality with a twist that moves the frame") {
  // g = dx^2 / x^2 + dy^2 is D- and P-invariant; classically Gamma^x_xx = -1/x.
  ModuleAlgebra A = fx::half_plane(R3);
  Calculus C(A, Frame::coordinate(A));
  const Metric g(C, diag(A, {"u^2", "1"}), diag(A, {"x^2", "1"}));
  require_pass(check_metric(g, 3, 1));
  const Connection lc = levi_civita(g);
  CHECK(lc.christoffel(0, 0, 0) == P(A, "-u"));
  require_pass(check_levi_civita(lc, g, 1));

  const Twist F = exp_twist(A.hopf().env(), fx::h_bivector(R3, 1, 0));  // exp(h P (x) D)
  const Calculus CF = twisted_calculus(C, F, 3);
  const Metric gF = twist_metric(g, CF, F);
  require_pass(check_metric(gF, 2, 1));
  const Connection viaTwist = twist_connection(lc, CF, F);
  const Connection viaMetric = levi_civita(gF, 2, 1);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        CHECK_MESSAGE(viaTwist.christoffel(c, a, b) == viaMetric.christoffel(c, a, b),
                      a << b << c << ": " << CF.algebra().str(viaTwist.christoffel(c, a, b)) << " vs "
                        << CF.algebra().str(viaMetric.christoffel(c, a, b)));
  require_pass(check_connection_axioms(viaTwist, 2, 1));
  require_pass(check_levi_civita(viaTwist, gF, 1));
}

TEST_CASE("twist naturality when both legs move the frame") {
  // F = exp(h D (x) D) with D^k d_x = (-1)^k d_x, so g_F(d_x, d_x) = sum_k (-h)^k / k! u^2;
  // the Levi-Civita connection ignores the constant rescaling.
  ModuleAlgebra A = fx::half_plane(R3);
  Calculus C(A, Frame::coordinate(A));
  const Metric g(C, diag(A, {"u^2", "1"}), diag(A, {"x^2", "1"}));
  const Connection lc = levi_civita(g);
  const Twist F = exp_twist(A.hopf().env(), fx::h_bivector(R3, 0, 0));
  const Calculus CF = twisted_calculus(C, F, 3);
  const Metric gF = twist_metric(g, CF, F);
  CHECK(gF.entry(0, 0) == P(CF.algebra(), "(1 - h + 1/2 h^2) u^2"));
  require_pass(check_metric(gF, 2, 1));
  const Connection viaTwist = twist_connection(lc, CF, F);
  const Connection viaMetric = levi_civita(gF, 2, 1);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        CHECK_MESSAGE(viaTwist.christoffel(c, a, b) == viaMetric.christoffel(c, a, b),
                      a << b << c << ": " << CF.algebra().str(viaTwist.christoffel(c, a, b)) << " vs "
                        << CF.algebra().str(viaMetric.christoffel(c, a, b)));
  CHECK(viaTwist.christoffel(0, 0, 0) == P(CF.algebra(), "-u"));
  require_pass(check_connection_axioms(viaTwist, 2, 1));
  require_pass(check_levi_civita(viaTwist, gF, 1));
}
