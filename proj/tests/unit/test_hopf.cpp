#include <map>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"

#include "braid/errors.hpp"

using namespace braid;

namespace {

Ring Q = Ring::rational();

// Oracle: rewrite words to a fixpoint by swapping the first descent,
// x_j x_i -> x_i x_j + sum_k c^k_{ji} x_k. Independent of the memoized engine.
HopfElement brute_force_normalize(const LieAlgebra& lie, std::vector<int> word) {
  std::map<std::vector<int>, Rational> pending{{word, Rational(1)}}, done;
  while (!pending.empty()) {
    auto [w, c] = *pending.begin();
    pending.erase(pending.begin());
    std::size_t pos = 0;
    while (pos + 1 < w.size() && w[pos] <= w[pos + 1]) ++pos;
    if (pos + 1 >= w.size()) {
      done[w] += c;
      continue;
    }
    std::vector<int> swapped = w;
    std::swap(swapped[pos], swapped[pos + 1]);
    pending[swapped] += c;
    for (int k = 0; k < lie.dim(); ++k) {
      Rational ck = lie.c(w[pos], w[pos + 1], k).coeff(0);
      if (ck.is_zero()) continue;
      std::vector<int> shorter(w.begin(), w.begin() + pos);
      shorter.push_back(k);
      shorter.insert(shorter.end(), w.begin() + pos + 2, w.end());
      pending[shorter] += c * ck;
    }
  }
  HopfElement out(lie.ring());
  for (const auto& [w, c] : done) {
    Mono m = 0;
    for (int g : w) m += mono::unit(g);
    out += HopfElement::monomial(m, Scalar(lie.ring(), c));
  }
  return out;
}

Mono M(int a1, int a2 = 0, int a3 = 0) { return mono::unit(0, a1) + mono::unit(1, a2) + mono::unit(2, a3); }

}  // namespace

TEST_CASE("pbw_normalize examples") {
  auto ab = fx::abelian(2, Q);
  CHECK(ab->pbw_normalize({1, 0}, Scalar(Q, 1)) == HopfElement::monomial(M(1, 1), Scalar(Q, 1)));
  CHECK(ab->pbw_normalize({}, Scalar(Q, 1)) == ab->unit());
  auto hs = fx::heisenberg(Q);
  HopfElement expected = HopfElement::monomial(M(1, 1), Scalar(Q, 1)) - HopfElement::monomial(M(0, 0, 1), Scalar(Q, 1));
  CHECK(hs->pbw_normalize({1, 0}, Scalar(Q, 1)) == expected);
  CHECK_THROWS_AS(hs->pbw_normalize({5}, Scalar(Q, 1)), Error);
}

TEST_CASE("PBW product agrees with brute-force rewriting on random words") {
  auto hs = fx::heisenberg(Q);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> len(0, 6), gen(0, 2);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<int> w(len(rng));
    for (int& g : w) g = gen(rng);
    HopfElement engine = hs->pbw_normalize(w, Scalar(Q, 1));
    REQUIRE(engine == brute_force_normalize(hs->lie(), w));
    // Idempotence: renormalizing the PBW words of a normal form changes nothing.
    HopfElement again(Q);
    for (const auto& [m, c] : engine.terms().terms()) {
      std::vector<int> word;
      for (int g = 0; g < 3; ++g)
        for (int e = 0; e < mono::exp(m, g); ++e) word.push_back(g);
      again += hs->pbw_normalize(word, c);
    }
    REQUIRE(again == engine);
  }
}

TEST_CASE("Lie algebra validation rejects a Jacobi violation") {
  std::vector<std::vector<std::vector<Scalar>>> c(3, std::vector<std::vector<Scalar>>(3, std::vector<Scalar>(3, Scalar(Q))));
  // [a,b] = c, [b,c] = a, [a,c] = a: the Jacobi sum is [a,b] = c.
  auto set = [&](int i, int j, int k) {
    c[i][j][k] = Scalar(Q, 1);
    c[j][i][k] = Scalar(Q, -1);
  };
  set(0, 1, 2);
  set(1, 2, 0);
  set(0, 2, 0);
  try {
    LieAlgebra({"a", "b", "c"}, Q, c);
    FAIL("expected JacobiViolation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::JacobiViolation);
  }
  c[0][1][1] = Scalar(Q, 2);  // breaks antisymmetry
  CHECK_THROWS_AS(LieAlgebra({"a", "b", "c"}, Q, c), Error);
}

TEST_CASE("coproduct, counit and antipode examples") {
  auto U = fx::abelian(2, Q);
  Scalar one(Q, 1);
  CHECK(U->coproduct(U->unit()) == TensorElement::unit(2, Q));
  CHECK(U->coproduct(U->generator(0)) == fx::pure2(*U, M(1), 0, one) + fx::pure2(*U, 0, M(1), one));
  // (x (x) 1 + 1 (x) x)^2 expanded by hand.
  TensorElement sq = fx::pure2(*U, M(2), 0, one) + fx::pure2(*U, M(1), M(1), Scalar(Q, 2)) + fx::pure2(*U, 0, M(2), one);
  CHECK(U->coproduct(HopfElement::monomial(M(2), one)) == sq);
  CHECK(U->counit(U->unit().scaled(Scalar(Q, 3)) + U->generator(0)) == Scalar(Q, 3));
  CHECK(U->antipode(HopfElement::monomial(M(1, 1), one)) == HopfElement::monomial(M(1, 1), one));
  auto hs = fx::heisenberg(Q);
  CHECK(hs->antipode(hs->generator(0)) == -hs->generator(0));
}

TEST_CASE("tensor operations") {
  auto U = fx::abelian(2, Q);
  Scalar one(Q, 1);
  TensorElement R = fx::pure2(*U, M(1), M(0, 1), one) + TensorElement::unit(2, Q);
  CHECK(U->tensor_mul(TensorElement::unit(2, Q), R) == R);
  TensorElement R13 = R.leg_embed(3, {0, 2});
  CHECK(R13.terms().find(TensorKey{M(1), 0, M(0, 1)}) != nullptr);
  CHECK(U->tensor_mul(fx::pure2(*U, M(1), 0, one), fx::pure2(*U, 0, M(1), one)) == fx::pure2(*U, M(1), M(1), one));
  CHECK_THROWS_AS(R.leg_embed(3, {0, 0}), Error);
  CHECK_THROWS_AS(U->tensor_mul(R, R13), Error);
}

TEST_CASE("Hopf structure invariants up to depth 3") {
  for (auto U : {fx::abelian(2, Q), fx::heisenberg(Q)}) {
    HopfAlgebra H(U);
    for (Mono m : U->monomials_up_to(3)) {
      HopfElement x = HopfElement::monomial(m, Scalar(Q, 1));
      TensorElement d = U->coproduct(x);
      CHECK(d.flipped() == d);  // cocommutative
      CHECK(U->antipode(U->antipode(x)) == x);
      for (Mono n : U->monomials_up_to(2)) {
        HopfElement y = HopfElement::monomial(n, Scalar(Q, 1));
        CHECK(U->antipode(U->mul(x, y)) == U->mul(U->antipode(y), U->antipode(x)));
        CHECK(U->coproduct(U->mul(x, y)) == U->tensor_mul(U->coproduct(x), U->coproduct(y)));
      }
    }
  }
}

TEST_CASE("check_hopf") {
  CHECK(check_hopf(HopfAlgebra(fx::abelian(2, Q)), 3).all_pass());
  CHECK(check_hopf(HopfAlgebra(fx::heisenberg(Q)), 3).all_pass());
  auto bad = fx::abelian(2, Q);
  bad->override_antipode(0, bad->generator(0));
  Report r = check_hopf(HopfAlgebra(bad), 3);
  CHECK(r.find("coassociativity")->pass);
  CHECK(r.find("counit")->pass);
  CHECK_FALSE(r.find("antipode")->pass);
  CHECK(r.find("antipode")->counterexample == "P1");
}

TEST_CASE("check_triangular") {
  for (auto U : {fx::abelian(2, Q), fx::heisenberg(Q)}) {
    HopfAlgebra H(U);
    CHECK(check_triangular(H, H.triangular(), 3).all_pass());
  }
  Ring n3 = Ring::series(3);
  auto U = fx::abelian(1, n3);
  HopfAlgebra H(U);
  TensorElement R = TensorElement::unit(2, n3) + fx::pure2(*U, M(1), M(1), Scalar::h(n3));
  TriangularStructure tri{R, U->tensor_inverse(R)};
  Report r = check_triangular(H, tri, 3);
  CHECK(r.find("inverse-witness")->pass);
  CHECK_FALSE(r.find("unitarity")->pass);
}
