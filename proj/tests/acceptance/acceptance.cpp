// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.
// Every comparison is exact: rationals compare by value and truncated series
// compare all coefficients below h^N. There are no floating-point tolerances.

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "braid/errors.hpp"
#include "scenario.hpp"

using namespace braid;

namespace {

// Verification bounds shared by every criterion.
constexpr int kDepth = 3;
constexpr int kDegree = 2;
constexpr int kStarDegree = 3;
constexpr int kTwistOrder = 4;
constexpr int kSeriesOrder = 3;
constexpr int kPerturbations = 20;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
  // Every check passes, nothing is skipped, and each check saw an instance.
  void require_clean(const Report& r, const std::string& label) {
    for (const auto& c : r.checks()) {
      require(c.pass, label + ": " + c.suite + "/" + c.name + " failed: " + c.counterexample);
      require(c.instances > 0, label + ": " + c.suite + "/" + c.name + " checked no instances");
    }
    for (const auto& c : r.skipped()) require(false, label + ": " + c.suite + "/" + c.name + " skipped: " + c.counterexample);
    require(!r.checks().empty(), label + ": empty report");
  }
  void require_names(const Report& r, std::initializer_list<const char*> names, const std::string& label) {
    for (const char* n : names) require(r.find(n) != nullptr, label + ": no check named " + n);
  }
};

std::string read(const std::string& name) {
  std::ifstream in(std::string(BRAID_FIXTURES_DIR) + "/" + name);
  if (!in) fail(ErrorKind::SchemaError, "cannot open fixture " + name);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

scenario::Model load(const std::string& name, scenario::Params overrides = {}) {
  const scenario::Spec spec = scenario::parse_spec(read(name));
  return scenario::Model(spec, scenario::resolve(spec, overrides));
}

scenario::Params order(int n) {
  scenario::Params p;
  p.order = n;
  return p;
}

// ---- independent oracles

// d^k/dx_i^k p through the polynomial derivation, not the Hopf action.
Poly partial(const CoordinateAlgebra& C, int i, Poly p, int k = 1) {
  std::vector<Poly> images(C.n_coords(), C.zero());
  images[i] = C.one();
  const auto D = C.extend_derivation(images);
  for (int j = 0; j < k; ++j) p = C.apply_derivation(D, p);
  return p;
}

// Moyal product for F = exp(h P1 (x) P2) on Q[x, y] with P1 = d/dx, P2 = d/dy:
// f * g = sum_k (-h)^k / k! (d_x^k f)(d_y^k g).
Poly moyal_oracle(const CoordinateAlgebra& C, const Poly& f, const Poly& g) {
  const Ring ring = C.ring();
  Poly out = C.zero();
  Scalar c(ring, Rational(1));
  for (int k = 0; k < ring.order; ++k) {
    out += C.mul(partial(C, 0, f, k), partial(C, 1, g, k)).scaled(c);
    c = c * (-Scalar::h(ring)) * Scalar(ring, Rational(1, k + 1));
  }
  return out;
}

// Gamma^k_{ij} = 1/2 g^{kl}(d_i g_{lj} + d_j g_{li} - d_l g_{ij}) in a coordinate frame.
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

// ---- criteria

Outcome hopf_and_triangular() {
  Outcome o;
  for (const char* f : {"classical_plane.json", "heisenberg.json"}) {
    const auto m = load(f);
    o.require(m.hopf().R() == TensorElement::unit(2, m.ring()), std::string(f) + ": R is not 1 (x) 1");
    const Report h = check_hopf(m.hopf(), kDepth);
    o.require_clean(h, f);
    o.require_names(h, {"coassociativity", "counit", "antipode"}, f);
    const Report t = check_triangular(m.hopf(), m.hopf().triangular(), kDepth);
    o.require_clean(t, f);
    o.require_names(t, {"quasi-cocommutativity", "hexagon-left", "hexagon-right", "unitarity", "yang-baxter"}, f);
  }
  return o;
}

Outcome twist_suite() {
  Outcome o;
  const auto m = load("moyal.json", order(kTwistOrder));
  o.require(m.ring().order == kTwistOrder, "series order not applied");
  const Report cocycle = check_cocycle(m.hopf(), *m.twist());
  o.require_clean(cocycle, "cocycle");
  o.require_names(cocycle, {"cocycle", "normalization", "inverse-cocycle", "inverse-witness"}, "cocycle");
  const HopfAlgebra HF = twist_hopf(m.hopf(), *m.twist(), kDepth);
  const Report h = check_hopf(HF, kDepth);
  o.require_clean(h, "H_F");
  o.require_names(h, {"coassociativity", "antipode"}, "H_F");
  // R_F = F_21 F^{-1}, built independently of the stored structure.
  const Enveloping& U = *m.env();
  const TensorElement RF = U.tensor_mul(m.twist()->F.leg_embed(2, {1, 0}), m.twist()->Finv);
  o.require(HF.R() == RF, "R_F differs from F_21 F^{-1}");
  const Report t = check_triangular(HF, HF.triangular(), kDepth);
  o.require_clean(t, "R_F");
  o.require_names(t, {"quasi-cocommutativity", "hexagon-left", "hexagon-right", "unitarity", "yang-baxter"}, "R_F");
  return o;
}

Outcome star_product() {
  Outcome o;
  for (int n = 2; n <= 5; ++n) {
    const auto m = load("moyal.json", order(n));
    const Calculus CF = twisted_calculus(m.calculus(), *m.twist(), kDepth);
    const ModuleAlgebra& A = CF.algebra();
    const CoordinateAlgebra& X = A.coords();
    const Poly x = X.variable(0), y = X.variable(1);
    const Poly commutator = A.mul(x, y) - A.mul(y, x);
    const Poly expected = moyal_oracle(X, x, y) - moyal_oracle(X, y, x);
    o.require(expected == X.constant(-Scalar::h(X.ring())), "oracle: x*y - y*x != -h at N=" + std::to_string(n));
    o.require(commutator == expected, "x*y - y*x = " + X.str(commutator) + " at N=" + std::to_string(n));
    // The engine star product agrees with the oracle on all monomial pairs of degree <= 3.
    for (Mono a : X.monomials_up_to(kStarDegree))
      for (Mono b : X.monomials_up_to(kStarDegree)) {
        const Poly pa = X.monomial(a), pb = X.monomial(b);
        o.require(A.mul(pa, pb) == moyal_oracle(X, pa, pb), "star product differs from the oracle on " + X.str(pa) + ", " + X.str(pb));
      }
    if (n == kTwistOrder) {
      o.require_clean(check_star_associative(A, kStarDegree), "associativity");
      o.require_clean(check_braided_commutative(A, A.hopf().triangular(), kStarDegree), "braided commutativity");
    }
  }
  return o;
}

Outcome cartan() {
  Outcome o;
  const auto classical = load("classical_plane.json");
  const auto moyal = load("moyal.json", order(kSeriesOrder));
  const Calculus CF = twisted_calculus(moyal.calculus(), *moyal.twist(), kDepth);
  for (const auto& [label, C] : {std::pair<const char*, const Calculus*>{"classical", &classical.calculus()}, {"moyal", &CF}}) {
    const Report r = cartan_suite(*C, kDepth, kDegree);
    o.require_clean(r, label);
    o.require_names(r, {"lie-lie", "lie-insertion", "lie-d", "insertion-insertion", "insertion-d", "d-d", "d-squared", "lie-function", "lie-wedge"},
                    label);
  }
  return o;
}

Outcome gauge() {
  Outcome o;
  const auto m = load("moyal.json", order(kSeriesOrder));
  const Report r = gauge_suite(m.calculus(), *m.twist(), kDepth, kDegree);
  o.require_clean(r, "gauge");
  o.require_names(r, {"transport-module", "transport-wedge-vectors", "transport-wedge-forms", "transport-schouten", "transport-insertion",
                      "transport-lie", "transport-d", "classical-limit"},
                  "gauge");
  return o;
}

Outcome levi_civita_criterion() {
  Outcome o;
  const auto m = load("levi_civita.json", order(kSeriesOrder));
  const Metric& g = *m.metric();
  const Calculus& C = m.calculus();
  const CoordinateAlgebra& X = C.algebra().coords();
  o.require_clean(check_metric(g, kDepth, 1), "metric");
  const Connection lc = levi_civita(g, kDepth, 1);
  o.require_clean(check_levi_civita(lc, g, 1), "levi-civita");
  o.require(lc.christoffel() == classical_christoffel(X, g.matrix(), *g.inverse()), "Christoffel symbols differ from the coordinate formula");
  // Frozen: Gamma^y_{xy} = Gamma^y_{yx} = x/(1+x^2), Gamma^x_{yy} = -x, all others 0.
  const Poly xw = X.parse("x w"), mx = X.parse("-x");
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) {
        Poly want = X.zero();
        if (c == 1 && a + b == 1) want = xw;
        if (c == 0 && a == 1 && b == 1) want = mx;
        o.require(lc.christoffel()[a][b][c] == want, "frozen Christoffel entry differs");
      }
  const Report p = perturbation_suite(lc, g, kPerturbations, m.settings().seed, 1);
  o.require_clean(p, "perturbations");
  o.require(p.checks().size() == 1 && p.checks()[0].instances == static_cast<std::size_t>(kPerturbations), "expected 20 perturbations");
  const Calculus CF = twisted_calculus(C, *m.twist(), kDepth);
  const Connection twisted = twist_connection(lc, CF, *m.twist());
  const Connection direct = levi_civita(twist_metric(g, CF, *m.twist()), kDepth, 1);
  o.require(twisted.christoffel() == direct.christoffel(), "twist of LC(g) differs from LC(g_F)");
  return o;
}

Outcome submanifold() {
  Outcome o;
  const auto m = load("submanifold.json");
  const Calculus& C = m.calculus();
  const auto I = SubmanifoldIdeal::coordinates(C, {"z"});
  const Poly z = C.algebra().coords().parse("z");
  o.require(I.is_tangent(C.vector(0)), "d_x labelled normal");
  o.require(I.is_tangent(C.vector(1)), "d_y labelled normal");
  o.require(!I.is_tangent(C.vector(2)), "d_z labelled tangent");
  o.require(I.is_tangent(C.vector(2, z)), "z d_z labelled normal");
  o.require_clean(check_sequence(I, kDepth, 1), "sequence");
  o.require_clean(projection_suite(I, kDepth, 1), "projection");
  const Report mp = metric_projection_suite(levi_civita(*m.metric(), kDepth, 1), *m.metric(), I, kDepth, 1, true);
  o.require_clean(mp, "metric projection");
  o.require_names(mp, {"metric", "connection", "levi-civita"}, "metric projection");

  const auto t = load("submanifold_twist.json", order(kSeriesOrder));
  const Report tw = twist_projection_suite(t.calculus(), {"z"}, *t.twist(), kDepth, 1, *t.metric());
  o.require_clean(tw, "twist projection");
  o.require_names(tw, {"ideal-stable", "schouten", "d", "twisted-connection"}, "twist projection");
  return o;
}

Outcome falsification() {
  Outcome o;
  const std::vector<std::pair<const char*, const char*>> cases{
      {"corrupted/wrong_antipode.json", "hopf/antipode"},
      {"corrupted/broken_cocycle.json", "twist/cocycle"},
      {"corrupted/wrong_transport.json", "gauge/transport-module"},
      {"corrupted/asymmetric_gamma.json", "declared-levi-civita/torsion-free"},
      {"corrupted/non_tangent_leg.json", "twist-projection/ideal-stable"},
  };
  for (const auto& [file, intended] : cases) {
    Report r;
    try {
      r = scenario::run(load(file), "all");
    } catch (const Error& e) {
      o.require(false, std::string(file) + ": run aborted: " + e.what());
      continue;
    }
    std::vector<std::string> failed;
    for (const auto& c : r.checks())
      if (!c.pass) failed.push_back(c.suite + "/" + c.name);
    o.require(r.find("aborted") == nullptr, std::string(file) + ": a suite aborted");
    o.require(failed.size() == 1 && failed[0] == intended,
              std::string(file) + ": expected only " + intended + " to fail, got " + std::to_string(failed.size()) + " failures" +
                  (failed.empty() ? "" : ", first " + failed[0]));
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"Hopf and triangular suites, abelian and Heisenberg, D=3", hopf_and_triangular},
      {"twist exp(h P1 (x) P2), N=4: cocycle, Delta_F, S_F, R_F", twist_suite},
      {"star product: x*y - y*x = -h, associativity, braided commutativity", star_product},
      {"Cartan identities, classical and Moyal N=3, d^2 = 0", cartan},
      {"gauge identities and classical limit, N=3", gauge},
      {"Levi-Civita of diag(1, 1+x^2), perturbations, twist naturality", levi_civita_criterion},
      {"submanifold C=(z): tangency, projections, twisted projection", submanifold},
      {"corrupted fixtures fail exactly their intended check", falsification},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    all = all && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first;
    if (!o.pass) std::cout << " [" << o.detail << "]";
    std::cout << "\n";
  }
  return all ? 0 : 1;
}
