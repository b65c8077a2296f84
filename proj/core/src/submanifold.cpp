#include "braid/submanifold.hpp"

#include <algorithm>
#include <sstream>

#include "braid/errors.hpp"

namespace braid {

namespace {

int grade_of(const Graded& X) { return X.is_zero() ? 0 : X.grade(); }

bool is_constant(const Poly& p) {
  for (const auto& [m, c] : p.terms().terms())
    if (m != 0) return false;
  return true;
}

std::vector<std::pair<Mono, Scalar>> hopf_legs(const TensorElement& t, int slot) {
  std::vector<std::pair<Mono, Scalar>> out;
  for (const auto& [key, c] : t.terms().terms()) out.emplace_back(key[slot], c);
  return out;
}

std::vector<Poly> functions(const Calculus& C, int degree) {
  std::vector<Poly> out;
  for (Mono m : C.algebra().coords().monomials_up_to(degree)) out.push_back(C.algebra().coords().monomial(m));
  return out;
}

std::string show(const Calculus& C, std::initializer_list<std::pair<const char*, const Graded*>> items) {
  std::ostringstream os;
  for (const auto& [name, g] : items) os << name << " = " << C.str(*g) << "; ";
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------- ideal

struct SubmanifoldIdeal::State {
  explicit State(const Calculus& c) : C(c) {}
  Calculus C;
  std::vector<Poly> generators;
  NormalForm nf;                      // oracle ideals only
  std::vector<int> killed;            // coordinate indices set to zero
  std::vector<int> tangent, normal;   // frame partition
  std::vector<int> frame_index;       // ambient frame index -> quotient index or -1
  std::vector<Poly> to_quotient;      // image of each ambient variable in A/C
  std::vector<Poly> to_ambient;       // each quotient variable as an ambient variable
  CoordinatePtr qcoords;
  std::unique_ptr<Calculus> quotient;
  std::string quotient_error;
  std::vector<Graded> theta;          // pr(theta^b)
};

SubmanifoldIdeal SubmanifoldIdeal::coordinates(const Calculus& C, const std::vector<std::string>& killed) {
  auto s = std::make_shared<State>(C);
  const CoordinateAlgebra& A = C.algebra().coords();
  const int n = A.n_coords();
  std::vector<bool> dead(n, false);
  for (const auto& name : killed) {
    const int i = A.index(name);
    if (i >= n) fail(ErrorKind::UnknownName, name + " is not a coordinate");
    if (!dead[i]) s->killed.push_back(i);
    dead[i] = true;
    s->generators.push_back(A.variable(i));
  }

  // Quotient coordinates keep their names; an adjoined inverse survives as
  // the inverse of pr(u), or becomes a constant when pr(u) is constant.
  std::vector<std::string> names;
  std::vector<int> kept;
  for (int i = 0; i < n; ++i)
    if (!dead[i]) {
      names.push_back(A.coordinate_names()[i]);
      kept.push_back(i);
    }
  const int nq = static_cast<int>(kept.size());
  std::vector<Poly> on_coords(n);
  for (int i = 0, j = 0; i < n; ++i) on_coords[i] = dead[i] ? Poly(nq, A.ring()) : Poly::variable(nq, A.ring(), j++);
  std::vector<CoordinateAlgebra::Inverse> invs;
  std::vector<std::optional<Scalar>> fixed;
  for (const auto& inv : A.inverses()) {
    Poly u = inv.u.substitute(on_coords, nq);
    if (u.is_zero()) fail(ErrorKind::SchemaError, "the ideal contains 1: " + inv.name + " inverts an element of C");
    if (is_constant(u)) {
      fixed.push_back(u.constant_term().inverse());
    } else {
      fixed.push_back(std::nullopt);
      invs.push_back({inv.name, std::move(u)});
    }
  }
  auto coords = std::make_shared<const CoordinateAlgebra>(names, A.ring(), invs);
  s->qcoords = coords;
  const int arq = coords->arity();
  for (int i = 0, j = 0; i < n; ++i)
    s->to_quotient.push_back(dead[i] ? coords->zero() : coords->variable(j++));
  for (std::size_t k = 0, j = nq; k < fixed.size(); ++k)
    s->to_quotient.push_back(fixed[k] ? coords->constant(*fixed[k]) : coords->variable(static_cast<int>(j++)));
  for (int j : kept) s->to_ambient.push_back(A.variable(j));
  for (std::size_t k = 0; k < fixed.size(); ++k)
    if (!fixed[k]) s->to_ambient.push_back(A.variable(n + static_cast<int>(k)));

  auto pr = [&](const Poly& a) { return coords->reduce(a.substitute(s->to_quotient, arq)); };

  s->frame_index.assign(C.rank(), -1);
  for (int a = 0; a < C.rank(); ++a) {
    bool tangent = true;
    for (int i : s->killed) tangent = tangent && pr(C.apply(C.vector(a), A.variable(i))).is_zero();
    if (tangent) {
      s->frame_index[a] = static_cast<int>(s->tangent.size());
      s->tangent.push_back(a);
    } else {
      s->normal.push_back(a);
    }
  }

  try {
    const ModuleAlgebra& M = C.algebra();
    std::vector<std::vector<Poly>> images;
    for (const auto& img : M.generator_images()) {
      std::vector<Poly> row;
      for (int j : kept) row.push_back(pr(img[j]));
      images.push_back(std::move(row));
    }
    for (int g = 0; g < static_cast<int>(images.size()); ++g)
      for (int i : s->killed)
        if (!pr(M.generator_images()[g][i]).is_zero())
          fail(ErrorKind::NotTangent, "generator " + M.hopf().names()[g] + " does not keep C stable");
    ModuleAlgebra Aq(coords, M.hopf(), std::move(images));
    if (static_cast<int>(s->tangent.size()) != nq)
      fail(ErrorKind::NotInFrameSpan, std::to_string(s->tangent.size()) + " tangent frame elements for " + std::to_string(nq) +
                                          " quotient coordinates");
    std::vector<std::vector<Poly>> frame_images;
    std::vector<std::string> vnames, fnames;
    for (int t : s->tangent) {
      std::vector<Poly> row;
      for (int j : kept) row.push_back(pr(C.frame().images(t)[j]));
      frame_images.push_back(std::move(row));
      vnames.push_back(C.frame().vector_names()[t]);
      fnames.push_back(C.frame().form_names()[t]);
    }
    Frame frame(Aq, std::move(frame_images), vnames, fnames);
    s->quotient = std::make_unique<Calculus>(std::move(Aq), std::move(frame), C.options());
  } catch (const Error& e) {
    s->quotient_error = e.what();
  }

  if (s->quotient) {
    // i_{pr E_t} pr(theta^b) = pr(i_{E_t} theta^b) fixes pr(theta^b).
    const Calculus& Q = *s->quotient;
    for (int b = 0; b < C.rank(); ++b) {
      std::vector<Poly> values;
      for (int t : s->tangent) values.push_back(pr(C.insert(C.vector(t), C.dual(b)).coefficient(0)));
      s->theta.push_back(Q.solve_one_form(values));
    }
  }
  return SubmanifoldIdeal(std::move(s));
}

SubmanifoldIdeal SubmanifoldIdeal::oracle(const Calculus& C, std::vector<Poly> generators, NormalForm nf, int degree) {
  auto s = std::make_shared<State>(C);
  s->generators = std::move(generators);
  s->nf = std::move(nf);
  s->quotient_error = "oracle ideals carry no quotient calculus";
  const ModuleAlgebra& A = C.algebra();
  for (const auto& c : s->generators)
    if (!s->nf(c).is_zero()) fail(ErrorKind::OracleUnsound, "generator " + A.str(c) + " has nonzero normal form");
  const auto fs = functions(C, degree);
  for (const auto& a : fs) {
    const Poly na = s->nf(a);
    if (!(s->nf(na) == na)) fail(ErrorKind::OracleUnsound, "normal form is not idempotent on " + A.str(a));
    for (const auto& b : fs)
      if (!(s->nf(A.mul(na, s->nf(b))) == s->nf(A.mul(a, b))))
        fail(ErrorKind::OracleUnsound, "pr(ab) != pr(a) pr(b) for a = " + A.str(a) + ", b = " + A.str(b));
  }
  s->frame_index.assign(C.rank(), -1);
  SubmanifoldIdeal out(s);
  for (int a = 0; a < C.rank(); ++a) {
    if (out.is_tangent(C.vector(a))) {
      s->frame_index[a] = static_cast<int>(s->tangent.size());
      s->tangent.push_back(a);
    } else {
      s->normal.push_back(a);
    }
  }
  return out;
}

const Calculus& SubmanifoldIdeal::ambient() const { return state_->C; }
const std::vector<Poly>& SubmanifoldIdeal::generators() const { return state_->generators; }
bool SubmanifoldIdeal::is_coordinate_ideal() const { return !state_->nf; }
const std::vector<int>& SubmanifoldIdeal::tangent_frame() const { return state_->tangent; }
const std::vector<int>& SubmanifoldIdeal::normal_frame() const { return state_->normal; }
bool SubmanifoldIdeal::has_quotient() const { return state_->quotient != nullptr; }
const std::string& SubmanifoldIdeal::quotient_error() const { return state_->quotient_error; }

const Calculus& SubmanifoldIdeal::quotient() const {
  if (!state_->quotient) fail(ErrorKind::Unsupported, state_->quotient_error);
  return *state_->quotient;
}

Poly SubmanifoldIdeal::project(const Poly& a) const {
  if (state_->nf) return state_->nf(a);
  const CoordinateAlgebra& Q = *state_->qcoords;
  return Q.reduce(a.substitute(state_->to_quotient, Q.arity()));
}

bool SubmanifoldIdeal::contains(const Poly& a) const { return project(a).is_zero(); }

Poly SubmanifoldIdeal::lift(const Poly& a) const {
  if (state_->nf) return state_->nf(a);
  return embed(project(a));
}

Poly SubmanifoldIdeal::embed(const Poly& q) const {
  if (state_->nf) fail(ErrorKind::Unsupported, "oracle ideals have no quotient coordinates");
  return ambient().algebra().coords().reduce(q.substitute(state_->to_ambient, ambient().arity()));
}

bool SubmanifoldIdeal::is_tangent(const Graded& X) const {
  for (const auto& c : state_->generators)
    if (!contains(ambient().apply(X, c))) return false;
  return true;
}

Graded SubmanifoldIdeal::project(const Graded& U) const {
  const Calculus& Q = quotient();
  const State& s = *state_;
  // Group by frame word; each coefficient is an element of A.
  std::vector<Word> words;
  for (const auto& [key, c] : U.terms().terms())
    if (words.empty() || words.back() != key.first) words.push_back(key.first);
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());

  Graded out = Q.zero(U.kind());
  for (Word w : words) {
    const Poly coef = project(U.coefficient(w));
    if (coef.is_zero()) continue;
    if (U.kind() == Kind::Vector) {
      Word wq = 0;
      for (Word r = w; r; r &= r - 1) {
        const int q = s.frame_index[word_first(r)];
        if (q < 0) fail(ErrorKind::NotTangent, "normal frame word with coefficient outside C in " + ambient().str(U));
        wq |= Word{1} << q;
      }
      out += Q.make(Kind::Vector, wq, coef);
    } else {
      std::vector<Graded> factors;
      for (Word r = w; r; r &= r - 1) factors.push_back(s.theta[word_first(r)]);
      out += Q.left_mul(coef, factors.empty() ? Q.function(Q.algebra().coords().one(), Kind::Form) : Q.wedge(factors, Kind::Form));
    }
  }
  return out;
}

std::vector<std::pair<Poly, Graded>> SubmanifoldIdeal::kernel_witness(const Graded& X) const {
  const Calculus& C = ambient();
  if (X.kind() != Kind::Vector || grade_of(X) > 1) fail(ErrorKind::GradeMismatch, "kernel witness needs a vector field");
  std::vector<std::pair<Poly, Graded>> out;
  Graded sum = C.zero(Kind::Vector);
  for (int a = 0; a < C.rank(); ++a) {
    const Poly x = X.coefficient(Word{1} << a);
    if (x.is_zero()) continue;
    if (!contains(x)) fail(ErrorKind::AxiomOneUnwitnessed, "coefficient of " + C.frame().vector_names()[a] + " in " + C.str(X) + " is not in C");
    out.emplace_back(x, C.vector(a));
    sum += C.left_mul(x, C.vector(a));
  }
  if (!(sum == X)) fail(ErrorKind::AxiomOneUnwitnessed, "decomposition does not sum to " + C.str(X));
  return out;
}

// ---------------------------------------------------------------- metric

namespace {

void require_block_split(const PolyMatrix& g, const SubmanifoldIdeal& C, const char* what) {
  for (int t : C.tangent_frame())
    for (int n : C.normal_frame())
      if (!g[t][n].is_zero() || !g[n][t].is_zero())
        fail(ErrorKind::NoBlockSplit, std::string(what) + " couples tangent " + C.ambient().frame().vector_names()[t] +
                                          " with normal " + C.ambient().frame().vector_names()[n]);
}

void require_same_calculus(const Calculus& a, const SubmanifoldIdeal& C) {
  if (a.rank() != C.ambient().rank() || a.arity() != C.ambient().arity() || !(a.ring() == C.ambient().ring()))
    fail(ErrorKind::ArityMismatch, "metric and ideal live on different calculi");
}

// Kernel elements of the derivation projection: c m E_a for generators c.
std::vector<Graded> kernel_family(const SubmanifoldIdeal& I, int degree) {
  const Calculus& C = I.ambient();
  std::vector<Graded> out;
  for (const auto& c : I.generators())
    for (Mono m : C.algebra().coords().monomials_up_to(std::max(degree - 1, 0)))
      for (int a = 0; a < C.rank(); ++a)
        out.push_back(C.vector(a, C.algebra().mul(C.algebra().coords().monomial(m), c)));
  return out;
}

}  // namespace

std::pair<Graded, Graded> normal_decomposition(const Graded& X, const Metric& g, const SubmanifoldIdeal& C) {
  require_same_calculus(g.calculus(), C);
  require_block_split(g.matrix(), C, "metric");
  if (X.kind() != Kind::Vector || grade_of(X) > 1) fail(ErrorKind::GradeMismatch, "normal decomposition needs a vector field");
  const Calculus& A = C.ambient();
  Graded normal = A.zero(Kind::Vector);
  for (int n : C.normal_frame()) {
    const Poly x = C.lift(X.coefficient(Word{1} << n));
    if (!x.is_zero()) normal += A.vector(n, x);
  }
  return {X - normal, normal};
}

Graded project_g(const Graded& X, const Metric& g, const SubmanifoldIdeal& C) {
  return C.project(normal_decomposition(X, g, C).first);
}

Metric project_metric(const Metric& g, const SubmanifoldIdeal& C, int degree) {
  require_same_calculus(g.calculus(), C);
  require_block_split(g.matrix(), C, "metric");
  if (g.inverse()) require_block_split(*g.inverse(), C, "inverse witness");
  for (const auto& K : kernel_family(C, degree)) C.kernel_witness(K);
  const Calculus& Q = C.quotient();
  const auto& T = C.tangent_frame();
  const int k = static_cast<int>(T.size());
  auto block = [&](const PolyMatrix& M) {
    PolyMatrix out(k, std::vector<Poly>(k));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) out[i][j] = C.project(M[T[i]][T[j]]);
    return out;
  };
  std::optional<PolyMatrix> inv;
  if (g.inverse()) inv = block(*g.inverse());
  return Metric(Q, block(g.matrix()), std::move(inv));
}

Connection project_connection(const Connection& nabla, const Metric& g, const SubmanifoldIdeal& C, int degree) {
  require_same_calculus(nabla.calculus(), C);
  require_block_split(g.matrix(), C, "metric");
  for (const auto& K : kernel_family(C, degree)) C.kernel_witness(K);
  const Calculus& Q = C.quotient();
  const auto& T = C.tangent_frame();
  const int k = static_cast<int>(T.size());
  Christoffel gamma(k, std::vector<std::vector<Poly>>(k, std::vector<Poly>(k)));
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c) gamma[a][b][c] = C.project(nabla.christoffel(T[c], T[a], T[b]));
  return Connection(Q, std::move(gamma));
}

// ---------------------------------------------------------------- suites

std::vector<Graded> tangent_family(const SubmanifoldIdeal& I, int max_grade, int degree) {
  const Calculus& C = I.ambient();
  Word normal = 0;
  for (int n : I.normal_frame()) normal |= Word{1} << n;
  std::vector<Graded> out;
  for (auto& X : C.family(Kind::Vector, max_grade, degree)) {
    bool tangent = true;
    for (const auto& [key, c] : X.terms().terms()) tangent = tangent && !(key.first & normal);
    if (tangent) out.push_back(std::move(X));
  }
  if (max_grade >= 1)
    for (const auto& c : I.generators())
      for (int n : I.normal_frame()) out.push_back(C.vector(n, c));
  return out;
}

Report check_sequence(const SubmanifoldIdeal& I, int depth, int degree) {
  Report report;
  const std::string suite = "sequence";
  const Calculus& C = I.ambient();
  const ModuleAlgebra& A = C.algebra();
  const auto& H = C.hopf();
  const auto fs = functions(C, degree);
  auto qstr = [&](const Poly& p) { return I.has_quotient() ? I.quotient().algebra().str(p) : A.str(p); };

  {
    CheckScope c(report, suite, "ideal-stable", "xi |> c in C");
    for (Mono xi : H.env().monomials_up_to(depth)) {
      for (const auto& g : I.generators()) {
        const Poly moved = A.act(HopfElement::monomial(xi, Scalar(C.ring(), Rational(1))), g);
        if (!c.expect_lazy(I.contains(moved), [&] { return mono::str(xi, H.names()) + " |> " + A.str(g) + " = " + A.str(moved); })) break;
      }
      if (c.failed()) break;
    }
  }
  if (I.is_coordinate_ideal() && !I.has_quotient()) {
    report.skip(suite, "algebra-map", "no quotient algebra: " + I.quotient_error());
  } else {
    CheckScope c(report, suite, "algebra-map", "pr(a b) = pr(a) pr(b), pr(1) = 1");
    auto qmul = [&](const Poly& a, const Poly& b) {
      return I.is_coordinate_ideal() ? I.quotient().algebra().mul(a, b) : I.project(A.mul(a, b));
    };
    const Poly one = I.project(A.coords().one());
    c.expect(I.is_coordinate_ideal() ? one == I.quotient().algebra().coords().one() : one == A.coords().one(), "pr(1) != 1");
    for (const auto& a : fs) {
      for (const auto& b : fs) {
        const Poly lhs = I.project(A.mul(a, b)), rhs = qmul(I.project(a), I.project(b));
        if (!c.expect_lazy(lhs == rhs, [&] { return "a = " + A.str(a) + ", b = " + A.str(b) + ": " + qstr(lhs) + " vs " + qstr(rhs); })) break;
      }
      if (c.failed()) break;
    }
  }
  {
    CheckScope c(report, suite, "tangent-bracket", "[X, Y]_R tangent for tangent X, Y");
    std::vector<Graded> V;
    for (auto& X : tangent_family(I, 1, degree))
      if (grade_of(X) == 1) V.push_back(std::move(X));
    for (const auto& X : V) {
      for (const auto& Y : V) {
        const Graded B = C.bracket(X, Y);
        if (!c.expect_lazy(I.is_tangent(B), [&] { return show(C, {{"X", &X}, {"Y", &Y}, {"[X,Y]", &B}}); })) break;
      }
      if (c.failed()) break;
    }
  }
  if (!I.has_quotient()) {
    if (I.is_coordinate_ideal()) {
      CheckScope c(report, suite, "surjectivity", "pr maps tangent frame elements onto a frame of A/C");
      c.fail_with(I.quotient_error());
    } else {
      report.skip(suite, "surjectivity", I.quotient_error());
    }
    report.skip(suite, "kernel", "no quotient calculus");
    report.skip(suite, "form-kernel", "no quotient calculus");
    return report;
  }

  const Calculus& Q = I.quotient();
  const auto& T = I.tangent_frame();
  {
    CheckScope c(report, suite, "surjectivity", "pr maps tangent frame elements onto a frame of A/C");
    for (std::size_t t = 0; t < T.size(); ++t)
      for (int j = 0; j < Q.algebra().coords().n_coords(); ++j) {
        const Poly xj = I.embed(Q.algebra().coords().variable(j));
        const Poly lhs = I.project(C.apply(C.vector(T[t]), xj));
        const Poly rhs = Q.apply(Q.vector(static_cast<int>(t)), Q.algebra().coords().variable(j));
        c.expect_lazy(lhs == rhs, [&] { return "pr(E(x)) = " + qstr(lhs) + " but pr(E)(pr x) = " + qstr(rhs); });
      }
  }
  {
    CheckScope c(report, suite, "kernel", "pr(X) = 0 and X(x_j) in C for X in C Der(A), with a witness sum c_i X^i");
    for (const auto& K : kernel_family(I, degree)) {
      bool ok = I.is_tangent(K) && I.project(K).is_zero();
      for (int j = 0; ok && j < Q.algebra().coords().n_coords(); ++j)
        ok = I.contains(C.apply(K, I.embed(Q.algebra().coords().variable(j))));
      if (ok) {
        try {
          I.kernel_witness(K);
        } catch (const Error&) {
          ok = false;
        }
      }
      if (!c.expect_lazy(ok, [&] { return "X = " + C.str(K); })) break;
    }
  }
  {
    CheckScope c(report, suite, "form-kernel", "pr(w) = 0 iff pr(i_{E_t} w) = 0 for every tangent E_t (grade >= 1), iff w in C (grade 0)");
    std::vector<Graded> W = C.family(Kind::Form, 2, degree);
    for (const auto& g : I.generators()) {
      for (int b = 0; b < C.rank(); ++b) W.push_back(C.dual(b, g));
      for (const auto& w : C.family(Kind::Form, 2, 0)) W.push_back(C.left_mul(g, w));
    }
    for (const auto& a : fs) W.push_back(C.d(C.function(a, Kind::Form)));
    for (const auto& w : W) {
      const bool zero = I.project(w).is_zero();
      bool recursive = true;
      if (grade_of(w) == 0) {
        recursive = I.contains(w.coefficient(0));
      } else {
        for (int t : T) recursive = recursive && I.project(C.insert(C.vector(t), w)).is_zero();
      }
      if (!c.expect_lazy(zero == recursive, [&] { return "w = " + C.str(w); })) break;
    }
  }
  return report;
}

Report projection_suite(const SubmanifoldIdeal& I, int depth, int degree, const std::string& suite) {
  Report report;
  const Calculus& C = I.ambient();
  const Calculus& Q = I.quotient();
  const ModuleAlgebra& A = C.algebra();
  const auto fs = functions(C, degree);
  const auto V = tangent_family(I, 2, degree);
  std::vector<Graded> V1;
  for (const auto& X : V)
    if (grade_of(X) == 1) V1.push_back(X);
  const auto W = C.family(Kind::Form, 2, degree);
  auto pr = [&](const Graded& U) { return I.project(U); };
  auto mismatch = [&](const Graded& lhs, const Graded& rhs) { return "pr side = " + Q.str(lhs) + "; quotient side = " + Q.str(rhs); };

  {
    CheckScope c(report, suite, "vector-action", "pr(X(a)) = pr(X)(pr(a))");
    for (const auto& X : V1) {
      const Graded pX = pr(X);
      for (const auto& a : fs) {
        const Poly lhs = I.project(C.apply(X, a)), rhs = Q.apply(pX, I.project(a));
        if (!c.expect_lazy(lhs == rhs, [&] { return "X = " + C.str(X) + ", a = " + A.str(a) + ": " + Q.algebra().str(lhs) + " vs " + Q.algebra().str(rhs); }))
          break;
      }
      if (c.failed()) break;
    }
  }
  {
    CheckScope c(report, suite, "equivariance", "pr(xi |> U) = xi |> pr(U)");
    std::vector<Graded> U = V;
    U.insert(U.end(), W.begin(), W.end());
    for (Mono xi : C.hopf().env().monomials_up_to(depth)) {
      for (const auto& u : U) {
        const Graded lhs = pr(C.act_mono(xi, u)), rhs = Q.act_mono(xi, pr(u));
        if (!c.expect_lazy(lhs == rhs, [&] { return "xi = " + mono::str(xi, C.hopf().names()) + "; U = " + C.str(u) + "; " + mismatch(lhs, rhs); })) break;
      }
      if (c.failed()) break;
    }
  }
  {
    CheckScope c(report, suite, "wedge", "pr(U ^ V) = pr(U) ^ pr(V)");
    for (const auto* family : {&V, &W}) {
      for (const auto& u : *family) {
        for (const auto& v : *family) {
          if (grade_of(u) + grade_of(v) > C.rank()) continue;
          const Graded lhs = pr(C.wedge(u, v)), rhs = Q.wedge(pr(u), pr(v));
          if (!c.expect_lazy(lhs == rhs, [&] { return show(C, {{"U", &u}, {"V", &v}}) + mismatch(lhs, rhs); })) break;
        }
        if (c.failed()) break;
      }
      if (c.failed()) break;
    }
  }
  {
    CheckScope c(report, suite, "schouten", "pr([[U, V]]_R) = [[pr(U), pr(V)]]_R");
    for (const auto& u : V) {
      for (const auto& v : V) {
        if (grade_of(u) + grade_of(v) > C.rank() + 1) continue;
        const Graded lhs = pr(C.schouten(u, v)), rhs = Q.schouten(pr(u), pr(v));
        if (!c.expect_lazy(lhs == rhs, [&] { return show(C, {{"U", &u}, {"V", &v}}) + mismatch(lhs, rhs); })) break;
      }
      if (c.failed()) break;
    }
  }
  {
    CheckScope c(report, suite, "lie", "pr(L_X w) = L_{pr X} pr(w)");
    for (const auto& X : V1) {
      const Graded pX = pr(X);
      for (const auto& w : W) {
        const Graded lhs = pr(C.lie(X, w)), rhs = Q.lie(pX, pr(w));
        if (!c.expect_lazy(lhs == rhs, [&] { return show(C, {{"X", &X}, {"w", &w}}) + mismatch(lhs, rhs); })) break;
      }
      if (c.failed()) break;
    }
  }
  {
    CheckScope c(report, suite, "insertion", "pr(i_X w) = i_{pr X} pr(w)");
    for (const auto& X : V) {
      const Graded pX = pr(X);
      for (const auto& w : W) {
        const Graded lhs = pr(C.insert(X, w)), rhs = Q.insert(pX, pr(w));
        if (!c.expect_lazy(lhs == rhs, [&] { return show(C, {{"X", &X}, {"w", &w}}) + mismatch(lhs, rhs); })) break;
      }
      if (c.failed()) break;
    }
  }
  {
    CheckScope c(report, suite, "d", "pr(d w) = d pr(w)");
    for (const auto& w : W) {
      const Graded lhs = pr(C.d(w)), rhs = Q.d(pr(w));
      if (!c.expect_lazy(lhs == rhs, [&] { return "w = " + C.str(w) + "; " + mismatch(lhs, rhs); })) break;
    }
  }
  return report;
}

namespace {

// pr_g of ambient geometry against the quotient geometry on tangent frame inputs.
void compare_geometry(Report& report, const std::string& suite, const std::string& prefix, const Connection& nabla, const Metric& g,
                      const Connection& nq, const std::optional<Metric>& gq, const SubmanifoldIdeal& I) {
  const Calculus& C = I.ambient();
  const Calculus& Q = I.quotient();
  std::vector<Graded> E;
  for (int t : I.tangent_frame()) E.push_back(C.vector(t));
  auto pg = [&](const Graded& X) { return project_g(X, g, I); };
  auto mismatch = [&](const Graded& lhs, const Graded& rhs) { return "pr_g side = " + Q.str(lhs) + "; quotient side = " + Q.str(rhs); };
  if (gq) {
    CheckScope c(report, suite, prefix + "metric", "g_{A/C}(pr X, pr Y) = pr(g(X, Y))");
    for (const auto& X : E)
      for (const auto& Y : E) {
        const Poly lhs = I.project(g(X, Y)), rhs = (*gq)(I.project(X), I.project(Y));
        c.expect_lazy(lhs == rhs, [&] { return show(C, {{"X", &X}, {"Y", &Y}}) + Q.algebra().str(lhs) + " vs " + Q.algebra().str(rhs); });
      }
  }
  {
    CheckScope c(report, suite, prefix + "connection", "nabla^{A/C}_{pr X} pr Y = pr_g(nabla_X Y)");
    for (const auto& X : E)
      for (const auto& Y : E) {
        const Graded lhs = pg(nabla(X, Y)), rhs = nq(I.project(X), I.project(Y));
        c.expect_lazy(lhs == rhs, [&] { return show(C, {{"X", &X}, {"Y", &Y}}) + mismatch(lhs, rhs); });
      }
  }
  {
    CheckScope c(report, suite, prefix + "torsion", "Tor^{A/C}(pr X, pr Y) = pr_g(Tor(X, Y))");
    for (const auto& X : E)
      for (const auto& Y : E) {
        const Graded lhs = pg(torsion(nabla, X, Y)), rhs = torsion(nq, I.project(X), I.project(Y));
        c.expect_lazy(lhs == rhs, [&] { return show(C, {{"X", &X}, {"Y", &Y}}) + mismatch(lhs, rhs); });
      }
  }
  {
    CheckScope c(report, suite, prefix + "curvature", "R^{A/C}(pr X, pr Y) pr Z = pr_g(R(X, Y) Z)");
    for (const auto& X : E)
      for (const auto& Y : E)
        for (const auto& Z : E) {
          const Graded lhs = pg(curvature(nabla, X, Y, Z)), rhs = curvature(nq, I.project(X), I.project(Y), I.project(Z));
          c.expect_lazy(lhs == rhs, [&] { return show(C, {{"X", &X}, {"Y", &Y}, {"Z", &Z}}) + mismatch(lhs, rhs); });
        }
  }
}

}  // namespace

Report metric_projection_suite(const Connection& nabla, const Metric& g, const SubmanifoldIdeal& I, int depth, int degree,
                               bool expect_levi_civita) {
  Report report;
  const std::string suite = "submanifold-metric";
  {
    CheckScope c(report, suite, "block-split", "g(E_t, E_n) = 0 = g^{-1}(E_t, E_n) for tangent t, normal n");
    try {
      require_block_split(g.matrix(), I, "metric");
      if (g.inverse()) require_block_split(*g.inverse(), I, "inverse witness");
      const std::size_t pairs = I.tangent_frame().size() * I.normal_frame().size() * (g.inverse() ? 2 : 1);
      for (std::size_t k = 0; k < pairs; ++k) c.expect(true, "");
    } catch (const Error& e) {
      c.fail_with(e.what());
    }
  }
  {
    CheckScope c(report, suite, "kernel-witness", "every kernel derivation is a finite sum c_i X^i with c_i in C");
    for (const auto& K : kernel_family(I, degree)) {
      try {
        I.kernel_witness(K);
        c.expect(true, "");
      } catch (const Error& e) {
        c.fail_with(e.what());
        break;
      }
    }
  }
  if (report.checks()[0].pass == false || report.checks()[1].pass == false || !I.has_quotient()) {
    const std::string why = I.has_quotient() ? "block split or kernel witness failed" : I.quotient_error();
    for (const char* name : {"quotient-metric", "metric", "connection", "torsion", "curvature", "levi-civita"}) report.skip(suite, name, why);
    return report;
  }
  const Metric gq = project_metric(g, I, degree);
  {
    CheckScope c(report, suite, "quotient-metric", "the projected metric is an equivariant metric with a two-sided inverse");
    const Report r = check_metric(gq, depth, degree);
    for (const auto& chk : r.checks())
      if (!chk.pass) c.fail_with(chk.name + ": " + chk.counterexample);
    c.expect(true, "");
  }
  const Connection nq = project_connection(nabla, g, I, degree);
  compare_geometry(report, suite, "", nabla, g, nq, gq, I);
  if (expect_levi_civita) {
    CheckScope c(report, suite, "levi-civita", "projection of the Levi-Civita connection = Levi-Civita of the projected metric");
    try {
      const Connection lc = levi_civita(gq, depth, degree);
      c.expect_lazy(lc.christoffel() == nq.christoffel(), [&] { return "Christoffel data differ"; });
    } catch (const Error& e) {
      c.fail_with(e.what());
    }
  }
  return report;
}

Report twist_projection_suite(const Calculus& C0, const std::vector<std::string>& killed, const Twist& F, int depth, int degree,
                              const std::optional<Metric>& g) {
  Report report;
  const std::string suite = "twist-projection";
  const SubmanifoldIdeal I0 = SubmanifoldIdeal::coordinates(C0, killed);
  const ModuleAlgebra& A = C0.algebra();
  {
    CheckScope c(report, suite, "ideal-stable", "xi |> C in C for xi in H and every leg of F and F^{-1}");
    std::vector<Mono> xs = C0.hopf().env().monomials_up_to(depth);
    for (const TensorElement* t : {&F.F, &F.Finv})
      for (int slot : {0, 1})
        for (const auto& [m, s] : hopf_legs(*t, slot)) xs.push_back(m);
    for (Mono xi : xs) {
      for (const auto& gen : I0.generators()) {
        const Poly moved = A.act(HopfElement::monomial(xi, Scalar(C0.ring(), Rational(1))), gen);
        if (!c.expect_lazy(I0.contains(moved), [&] {
              return mono::str(xi, C0.hopf().names()) + " |> " + A.str(gen) + " = " + A.str(moved) + " is not in C";
            }))
          break;
      }
      if (c.failed()) break;
    }
  }
  const bool stable = report.checks().back().pass;
  if (!stable || !I0.has_quotient()) {
    const std::string why = stable ? I0.quotient_error() : "C is not stable under the twist legs";
    for (const char* name : {"vector-action", "equivariance", "wedge", "schouten", "lie", "insertion", "d"}) report.skip(suite, name, why);
    if (g)
      for (const char* name : {"twisted-metric", "twisted-connection", "twisted-torsion", "twisted-curvature"}) report.skip(suite, name, why);
    return report;
  }

  const Calculus CF = twisted_calculus(C0, F, depth);
  const SubmanifoldIdeal IF = SubmanifoldIdeal::coordinates(CF, killed);
  report.merge(projection_suite(IF, depth, degree, suite));
  if (!g) return report;

  // Twist after projecting against project after twisting.
  const Connection nabla = levi_civita(*g, depth, degree);
  const Metric gq = project_metric(*g, I0, degree);
  const Connection nq = project_connection(nabla, *g, I0, degree);
  const Calculus& QF = IF.quotient();
  const Metric gF = twist_metric(*g, CF, F), gqF = twist_metric(gq, QF, F);
  const Connection nF = twist_connection(nabla, CF, F), nqF = twist_connection(nq, QF, F);
  compare_geometry(report, suite, "twisted-", nF, gF, nqF, gqF, IF);
  return report;
}

}  // namespace braid
