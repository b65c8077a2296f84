#include "doctest.h"
#include "fixtures.hpp"

#include "braid/errors.hpp"
#include "braid/submanifold.hpp"

using namespace braid;

namespace {

Ring Q = Ring::rational();
Ring R3 = Ring::series(3);

// Q[x, y, z] (plus inverses); generator g acts on (x, y, z) by images[g].
ModuleAlgebra space(Ring ring, const std::vector<std::vector<std::string>>& images,
                    std::vector<std::pair<std::string, std::string>> inverses = {}) {
  const std::vector<std::string> names{"x", "y", "z"};
  auto base = std::make_shared<CoordinateAlgebra>(names, ring);
  std::vector<CoordinateAlgebra::Inverse> inv;
  for (const auto& [w, u] : inverses) inv.push_back({w, base->parse(u)});
  auto coords = std::make_shared<CoordinateAlgebra>(names, ring, inv);
  std::vector<std::vector<Poly>> im;
  for (const auto& row : images) {
    std::vector<Poly> r;
    for (const auto& s : row) r.push_back(coords->parse(s));
    im.push_back(std::move(r));
  }
  return ModuleAlgebra(coords, HopfAlgebra(fx::abelian(static_cast<int>(images.size()), ring)), std::move(im));
}

Calculus coordinate_calculus(const ModuleAlgebra& A) { return Calculus(A, Frame::coordinate(A)); }

PolyMatrix matrix(const ModuleAlgebra& A, const std::vector<std::vector<std::string>>& rows) {
  PolyMatrix out;
  for (const auto& r : rows) {
    std::vector<Poly> row;
    for (const auto& s : r) row.push_back(A.coords().parse(s));
    out.push_back(std::move(row));
  }
  return out;
}

bool passes(const Report& r) {
  for (const auto& c : r.checks())
    if (!c.pass) MESSAGE(c.suite << "/" << c.name << ": " << c.counterexample);
  return r.all_pass();
}

std::vector<std::string> failing(const Report& r) {
  std::vector<std::string> out;
  for (const auto& c : r.checks())
    if (!c.pass) out.push_back(c.name);
  return out;
}

// Oracle partial derivative and classical Christoffel symbols on a coordinate frame.
Poly partial(const CoordinateAlgebra& C, int i, const Poly& p) {
  std::vector<Poly> images(C.n_coords(), C.zero());
  images[i] = C.one();
  return C.apply_derivation(C.extend_derivation(images), p);
}

Christoffel classical_christoffel(const CoordinateAlgebra& C, const PolyMatrix& g, const PolyMatrix& ginv) {
  const int n = static_cast<int>(g.size());
  const Scalar half(C.ring(), Rational(1, 2));
  Christoffel out(n, std::vector<std::vector<Poly>>(n, std::vector<Poly>(n, C.zero())));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          out[i][j][k] += C.mul(ginv[k][l], partial(C, i, g[l][j]) + partial(C, j, g[l][i]) - partial(C, l, g[i][j])).scaled(half);
  return out;
}

}  // namespace

TEST_CASE("coordinate ideal: projection of functions") {
  const ModuleAlgebra A = space(Q, {{"1", "0", "0"}, {"0", "1", "0"}});
  const Calculus C = coordinate_calculus(A);
  const auto I = SubmanifoldIdeal::coordinates(C, {"z"});
  REQUIRE(I.has_quotient());
  const auto& Aq = I.quotient().algebra().coords();
  CHECK(Aq.names() == std::vector<std::string>{"x", "y"});
  CHECK(I.project(A.coords().parse("x + z^2 y")) == Aq.parse("x"));
  CHECK(I.project(A.coords().one()) == Aq.one());
  CHECK(I.project(A.coords().parse("z (x + 1)")).is_zero());
  CHECK(I.contains(A.coords().parse("x z - 3 z^2")));
  CHECK_FALSE(I.contains(A.coords().parse("x")));
  CHECK(I.lift(A.coords().parse("x y + z")) == A.coords().parse("x y"));
  CHECK_THROWS_AS(SubmanifoldIdeal::coordinates(C, {"t"}), Error);
}

TEST_CASE("tangency labels and the frame split") {
  const ModuleAlgebra A = space(Q, {{"1", "0", "0"}, {"0", "1", "0"}});
  const Calculus C = coordinate_calculus(A);
  const auto I = SubmanifoldIdeal::coordinates(C, {"z"});
  const Poly z = A.coords().parse("z");
  CHECK(I.is_tangent(C.vector(0)));
  CHECK(I.is_tangent(C.vector(1)));
  CHECK_FALSE(I.is_tangent(C.vector(2)));
  CHECK(I.is_tangent(C.vector(2, z)));
  CHECK(I.tangent_frame() == std::vector<int>{0, 1});
  CHECK(I.normal_frame() == std::vector<int>{2});
}

TEST_CASE("projection of multivectors and forms") {
  const ModuleAlgebra A = space(Q, {{"1", "0", "0"}, {"0", "1", "0"}});
  const Calculus C = coordinate_calculus(A);
  const auto I = SubmanifoldIdeal::coordinates(C, {"z"});
  const Calculus& Qc = I.quotient();
  auto p = [&](const std::string& s) { return A.coords().parse(s); };
  auto q = [&](const std::string& s) { return Qc.algebra().coords().parse(s); };

  // pr(x d_x ^ d_y) = x d_x ^ d_y over Q[x, y].
  CHECK(I.project(C.make(Kind::Vector, 0b011, p("x"))) == Qc.make(Kind::Vector, 0b11, q("x")));
  CHECK(I.project(C.vector(2, p("z x"))).is_zero());
  CHECK_THROWS_AS(I.project(C.vector(2)), Error);
  try {
    I.project(C.vector(2));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotTangent);
  }

  CHECK(I.project(C.dual(0)) == Qc.dual(0));
  CHECK(I.project(C.dual(2)).is_zero());
  CHECK(I.project(C.dual(2, p("x"))).is_zero());

  // d(pr(x z)) = 0 and pr(d(x z)) = pr(z dx + x dz) vanish on the tangent frame.
  const Graded dxz = C.d(C.function(p("x z"), Kind::Form));
  const Graded lhs = I.project(dxz), rhs = Qc.d(Qc.function(I.project(p("x z")), Kind::Form));
  for (int t = 0; t < 2; ++t) {
    CHECK(Qc.eval(lhs, {Qc.vector(t)}).is_zero());
    CHECK(Qc.eval(rhs, {Qc.vector(t)}).is_zero());
  }

  // pr([d_x, x d_y]) = [pr d_x, pr(x d_y)] = d_y.
  const Graded X = C.vector(0), Y = C.vector(1, p("x"));
  CHECK(I.project(C.bracket(X, Y)) == Qc.bracket(I.project(X), I.project(Y)));
  CHECK(I.project(C.bracket(X, Y)) == Qc.vector(1));
}

TEST_CASE("exact sequence and projection suites, untwisted") {
  const ModuleAlgebra A = space(Q, {{"1", "0", "0"}, {"0", "1", "0"}});
  const Calculus C = coordinate_calculus(A);
  const auto I = SubmanifoldIdeal::coordinates(C, {"z"});
  const Report seq = check_sequence(I, 2, 2);
  CHECK(passes(seq));
  CHECK(seq.skipped().empty());
  CHECK(passes(projection_suite(I, 2, 1)));
}

TEST_CASE("a frame without a tangent spanning set fails surjectivity only") {
  const ModuleAlgebra A = space(Q, {{"1", "0", "0"}, {"0", "1", "0"}});
  const Poly one = A.coords().one(), zero = A.coords().zero();
  const Frame frame(A, {{one, zero, one}, {zero, one, zero}, {zero, zero, one}});
  const Calculus C(A, frame);
  const auto I = SubmanifoldIdeal::coordinates(C, {"z"});
  CHECK(I.tangent_frame() == std::vector<int>{1});
  CHECK_FALSE(I.has_quotient());
  const Report r = check_sequence(I, 2, 1);
  CHECK(failing(r) == std::vector<std::string>{"surjectivity"});
  CHECK(r.skipped().size() == 3);
}

TEST_CASE("inverse variables pass to the quotient") {
  const ModuleAlgebra A = space(Q, {{"0", "1", "0"}}, {{"w", "1 + x^2 + z"}, {"v", "1 + z"}});
  const Calculus C = coordinate_calculus(A);
  const auto I = SubmanifoldIdeal::coordinates(C, {"z"});
  REQUIRE(I.has_quotient());
  const auto& Aq = I.quotient().algebra().coords();
  CHECK(Aq.names() == std::vector<std::string>{"x", "y", "w"});
  CHECK(I.project(A.coords().parse("v")) == Aq.one());
  CHECK(I.contains(A.coords().parse("w (1 + x^2) - 1")));
  CHECK(I.contains(A.coords().parse("v - 1")));
  CHECK(I.project(A.coords().parse("w")) == Aq.parse("w"));
  CHECK(passes(check_sequence(I, 1, 1)));
}

TEST_CASE("oracle ideals") {
  const ModuleAlgebra A = space(Q, {{"1", "0", "0"}, {"0", "1", "0"}});
  const Calculus C = coordinate_calculus(A);
  const CoordinateAlgebra& X = A.coords();
  const Poly z = X.parse("z");
  // z |-> 0 on every variable.
  auto zero_z = [&](const Poly& a) { return X.reduce(a.substitute({X.variable(0), X.variable(1), X.zero()}, X.arity())); };
  const auto O = SubmanifoldIdeal::oracle(C, {z}, zero_z);
  const auto I = SubmanifoldIdeal::coordinates(C, {"z"});
  CHECK_FALSE(O.is_coordinate_ideal());
  CHECK_FALSE(O.has_quotient());
  CHECK_THROWS_AS(O.quotient(), Error);
  CHECK(O.tangent_frame() == I.tangent_frame());
  for (const char* s : {"x + z^2 y", "z (x + 1)", "1", "x y - y z"}) {
    const Poly a = X.parse(s);
    CHECK(O.project(a) == I.lift(a));
    CHECK(O.contains(a) == I.contains(a));
  }
  CHECK(O.is_tangent(C.vector(2, z)));
  CHECK_FALSE(O.is_tangent(C.vector(2)));
  const Report r = check_sequence(O, 2, 2);
  CHECK(passes(r));
  CHECK(r.skipped().size() == 3);

  // Drops the monomial z only: sends the generator to 0 but not z^2.
  auto unsound = [&](const Poly& a) { return a - X.monomial(mono::unit(2)).scaled(a.coefficient(mono::unit(2))); };
  try {
    SubmanifoldIdeal::oracle(C, {z}, unsound);
    FAIL("unsound oracle accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OracleUnsound);
  }
}

TEST_CASE("block metric: projection reproduces the quotient Levi-Civita connection") {
  const ModuleAlgebra A = space(Q, {{"0", "1", "0"}}, {{"w", "1 + x^2"}});
  const Calculus C = coordinate_calculus(A);
  const auto I = SubmanifoldIdeal::coordinates(C, {"z"});
  const Metric g(C, matrix(A, {{"1", "0", "0"}, {"0", "1 + x^2", "0"}, {"0", "0", "1"}}),
                 matrix(A, {{"1", "0", "0"}, {"0", "w", "0"}, {"0", "0", "1"}}));
  const Connection nabla = levi_civita(g, 2, 1);
  const Metric gq = project_metric(g, I);
  const Calculus& Qc = I.quotient();
  const PolyMatrix expected = matrix(Qc.algebra(), {{"1", "0"}, {"0", "1 + x^2"}});
  CHECK(gq.matrix() == expected);
  CHECK(*gq.inverse() == matrix(Qc.algebra(), {{"1", "0"}, {"0", "w"}}));

  // Independent route: the classical formula on the projected metric.
  const Connection nq = project_connection(nabla, g, I);
  CHECK(nq.christoffel() == classical_christoffel(Qc.algebra().coords(), expected, *gq.inverse()));
  CHECK(nq.christoffel() == levi_civita(gq, 2, 1).christoffel());
  CHECK(nq.christoffel(1, 0, 1) == Qc.algebra().coords().parse("x w"));

  const Report r = metric_projection_suite(nabla, g, I, 2, 1, true);
  CHECK(passes(r));
  CHECK(r.skipped().empty());
  CHECK(r.find("levi-civita") != nullptr);
}

TEST_CASE("normal decomposition") {
  const ModuleAlgebra A = space(Q, {{"0", "1", "0"}}, {{"w", "1 + x^2"}});
  const Calculus C = coordinate_calculus(A);
  const auto I = SubmanifoldIdeal::coordinates(C, {"z"});
  const Metric g(C, matrix(A, {{"1", "0", "0"}, {"0", "1 + x^2", "0"}, {"0", "0", "1"}}),
                 matrix(A, {{"1", "0", "0"}, {"0", "w", "0"}, {"0", "0", "1"}}));
  auto p = [&](const std::string& s) { return A.coords().parse(s); };

  const Graded X = C.vector(0) + C.vector(2, p("z"));
  const auto [t, n] = normal_decomposition(X, g, I);
  CHECK(t == X);
  CHECK(n.is_zero());

  // Oracle: N = c d_z with c free of z makes X - N tangent and N normal to d_x, d_y.
  const Graded Y = C.vector(0) + C.vector(2, p("1 + x + z"));
  const auto [ty, ny] = normal_decomposition(Y, g, I);
  CHECK(ny == C.vector(2, p("1 + x")));
  CHECK(ty == C.vector(0) + C.vector(2, p("z")));
  CHECK(I.is_tangent(ty));
  for (int a = 0; a < 2; ++a) CHECK(g(ny, C.vector(a)).is_zero());
  CHECK(project_g(Y, g, I) == I.quotient().vector(0));
}

TEST_CASE("metrics that couple tangent and normal directions are rejected") {
  const ModuleAlgebra A = space(Q, {{"0", "1", "0"}});
  const Calculus C = coordinate_calculus(A);
  const auto I = SubmanifoldIdeal::coordinates(C, {"z"});
  const Metric g(C, matrix(A, {{"1", "0", "1"}, {"0", "1", "0"}, {"1", "0", "2"}}),
                 matrix(A, {{"2", "0", "-1"}, {"0", "1", "0"}, {"-1", "0", "1"}}));
  try {
    project_metric(g, I);
    FAIL("coupled metric accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoBlockSplit);
  }
  const Report r = metric_projection_suite(levi_civita(g, 1, 1), g, I, 1, 1, true);
  CHECK(failing(r) == std::vector<std::string>{"block-split"});
  CHECK_FALSE(r.skipped().empty());
}

TEST_CASE("curvature projects only without extrinsic curvature") {
  // z-dependent g_xx and g_yy: the connection still projects to the quotient
  // Levi-Civita connection, but with II(d_x, d_x) and II(d_y, d_y) both
  // nonzero the Gauss equation adds a term to the curvature.
  const ModuleAlgebra A = space(Q, {{"0", "1", "0"}}, {{"v", "1 + z"}, {"w", "1 + x^2 + z"}});
  const Calculus C = coordinate_calculus(A);
  const auto I = SubmanifoldIdeal::coordinates(C, {"z"});
  const Metric g(C, matrix(A, {{"1 + z", "0", "0"}, {"0", "1 + x^2 + z", "0"}, {"0", "0", "1"}}),
                 matrix(A, {{"v", "0", "0"}, {"0", "w", "0"}, {"0", "0", "1"}}));
  const Report r = metric_projection_suite(levi_civita(g, 1, 1), g, I, 1, 1, true);
  CHECK(failing(r) == std::vector<std::string>{"curvature"});
}

TEST_CASE("twisted projection: exp(h P_x (x) P_y) at order 3") {
  const ModuleAlgebra A = space(R3, {{"1", "0", "0"}, {"0", "1", "0"}});
  const Calculus C = coordinate_calculus(A);
  const Twist F = exp_twist(A.hopf().env(), fx::h_bivector(R3, 0, 1));
  const Metric g(C, matrix(A, {{"1", "1", "0"}, {"1", "2", "0"}, {"0", "0", "1"}}),
                 matrix(A, {{"2", "-1", "0"}, {"-1", "1", "0"}, {"0", "0", "1"}}));
  const Report r = twist_projection_suite(C, {"z"}, F, 2, 1, g);
  CHECK(passes(r));
  CHECK(r.skipped().empty());
  CHECK(r.find("twisted-curvature") != nullptr);

  const Calculus CF = twisted_calculus(C, F, 2);
  const auto IF = SubmanifoldIdeal::coordinates(CF, {"z"});
  CHECK(passes(check_sequence(IF, 2, 1)));
  // The star product survives the projection: pr(x * y) = x * y = x y + h/2.
  const auto& Aq = IF.quotient().algebra();
  CHECK(IF.project(CF.algebra().mul(A.coords().parse("x"), A.coords().parse("y z + y"))) ==
        Aq.mul(Aq.coords().parse("x"), Aq.coords().parse("y")));
}

TEST_CASE("trivial twist reduces to the untwisted projection") {
  const ModuleAlgebra A = space(R3, {{"1", "0", "0"}, {"0", "1", "0"}});
  const Calculus C = coordinate_calculus(A);
  const Twist F{TensorElement::unit(2, R3), TensorElement::unit(2, R3)};
  CHECK(passes(twist_projection_suite(C, {"z"}, F, 1, 1)));
}

TEST_CASE("a twist leg acting as d_z is rejected") {
  const ModuleAlgebra A = space(R3, {{"1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}});
  const Calculus C = coordinate_calculus(A);
  const Twist F = exp_twist(A.hopf().env(), fx::h_bivector(R3, 0, 2));
  const Report r = twist_projection_suite(C, {"z"}, F, 2, 1);
  CHECK(failing(r) == std::vector<std::string>{"ideal-stable"});
  CHECK(r.skipped().size() == 7);
  CHECK(r.find("ideal-stable")->counterexample.find("is not in C") != std::string::npos);
}
