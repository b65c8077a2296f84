#include "braid/geometry.hpp"

#include <random>
#include <sstream>

#include "braid/errors.hpp"

namespace braid {

namespace {

struct Leg2 {
  Mono a, b;
  Scalar c;
};

std::vector<Leg2> legs(const TensorElement& t) {
  std::vector<Leg2> out;
  for (const auto& [key, c] : t.terms().terms()) out.push_back(Leg2{key[0], key[1], c});
  return out;
}

template <class K, class V, class F>
const V& memoize(std::mutex& mutex, std::map<K, std::unique_ptr<V>>& map, const K& key, F&& compute) {
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = map.find(key);
    if (it != map.end()) return *it->second;
  }
  V value = compute();
  std::lock_guard<std::mutex> lock(mutex);
  return *map.try_emplace(key, std::make_unique<V>(std::move(value))).first->second;
}

int grade_of(const Graded& X) { return X.is_zero() ? 0 : X.grade(); }

void require_vector(const Graded& X, const char* what) {
  if (X.kind() != Kind::Vector || (!X.is_zero() && X.grade() != 1))
    fail(ErrorKind::GradeMismatch, std::string(what) + " must be a grade 1 multivector");
}

PolyMatrix matmul(const ModuleAlgebra& A, const PolyMatrix& L, const PolyMatrix& M) {
  const std::size_t n = L.size(), m = M.empty() ? 0 : M[0].size();
  PolyMatrix out(n, std::vector<Poly>(m, A.coords().zero()));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < M.size(); ++k)
      if (!L[i][k].is_zero())
        for (std::size_t j = 0; j < m; ++j) out[i][j] += A.mul(L[i][k], M[k][j]);
  return out;
}

bool is_identity(const ModuleAlgebra& A, const PolyMatrix& M) {
  for (std::size_t i = 0; i < M.size(); ++i)
    for (std::size_t j = 0; j < M[i].size(); ++j)
      if (!(M[i][j] == (i == j ? A.coords().one() : A.coords().zero()))) return false;
  return true;
}

// Two-sided inverse for the product in force, or nothing.
std::optional<PolyMatrix> two_sided(const ModuleAlgebra& A, const PolyMatrix& G, const PolyMatrix& L) {
  if (is_identity(A, matmul(A, G, L)) && is_identity(A, matmul(A, L, G))) return L;
  return std::nullopt;
}

// Newton steps L <- L (2 - G L); the defect I - G L squares each step, so a
// witness valid at h^0 becomes valid mod h^N after log2(N) + 1 steps.
std::optional<PolyMatrix> refine_inverse(const ModuleAlgebra& A, const PolyMatrix& G, PolyMatrix L) {
  const int n = static_cast<int>(G.size());
  const Ring r = A.ring();
  for (int step = 0; step <= r.width(); ++step) {
    if (auto ok = two_sided(A, G, L)) return ok;
    PolyMatrix E = matmul(A, G, L);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) E[i][j] = (i == j ? A.coords().one().scaled(Scalar(r, Rational(2))) : A.coords().zero()) - E[i][j];
    L = matmul(A, L, E);
  }
  return two_sided(A, G, L);
}

std::string show(const Calculus& C, std::initializer_list<std::pair<const char*, const Graded*>> items) {
  std::ostringstream os;
  for (const auto& [name, g] : items) os << name << " = " << C.str(*g) << "; ";
  return os.str();
}

std::vector<Graded> grade_one(const Calculus& C, int degree) {
  std::vector<Graded> out;
  for (auto& X : C.family(Kind::Vector, 1, degree))
    if (grade_of(X) == 1) out.push_back(std::move(X));
  return out;
}

std::vector<Graded> frame_vectors(const Calculus& C) {
  std::vector<Graded> out;
  for (int a = 0; a < C.rank(); ++a) out.push_back(C.vector(a));
  return out;
}

std::vector<Poly> functions(const Calculus& C, int degree) {
  std::vector<Poly> out;
  for (Mono m : C.algebra().coords().monomials_up_to(degree)) out.push_back(C.algebra().coords().monomial(m));
  return out;
}

}  // namespace

// ---------------------------------------------------------------- Connection

struct Connection::Memo {
  std::mutex mutex;
  std::map<std::tuple<int, int, Word>, std::unique_ptr<Graded>> words;
  std::map<std::pair<int, int>, std::unique_ptr<Graded>> dual;
  std::optional<PolyMatrix> pairing_inverse;
  std::once_flag pairing_once;
};

Connection::Connection(const Calculus& C, Christoffel gamma)
    : C_(C), gamma_(std::move(gamma)), memo_(std::make_shared<Memo>()) {
  const int k = C_.rank();
  if (static_cast<int>(gamma_.size()) != k) fail(ErrorKind::RankMismatch, "Christoffel data must have frame rank");
  for (const auto& row : gamma_) {
    if (static_cast<int>(row.size()) != k) fail(ErrorKind::RankMismatch, "Christoffel data must have frame rank");
    for (const auto& col : row)
      if (static_cast<int>(col.size()) != k) fail(ErrorKind::RankMismatch, "Christoffel data must have frame rank");
  }
}

Connection Connection::flat(const Calculus& C) {
  const int k = C.rank();
  const Poly z = C.algebra().coords().zero();
  return Connection(C, Christoffel(k, std::vector<std::vector<Poly>>(k, std::vector<Poly>(k, z))));
}

Graded Connection::operator()(const Graded& X, const Graded& s) const {
  require_vector(X, "direction");
  Graded out = C_.zero(s.kind());
  for (int a = 0; a < C_.rank(); ++a) {
    const Poly x = X.coefficient(Word{1} << a);
    if (!x.is_zero()) out += C_.left_mul(x, along(a, s));
  }
  return out;
}

// nabla_{E_a}(m s_w) = E_a(m) s_w + sum (R^{-1}_1 |> m) nabla_{R^{-1}_2 |> E_a} s_w.
Graded Connection::along(int a, const Graded& s) const {
  const auto& A = C_.algebra();
  const auto rinv = legs(C_.hopf().Rinv());
  Graded out = C_.zero(s.kind());
  for (const auto& [key, c] : s.terms().terms()) {
    const Poly m = A.coords().monomial(key.second).scaled(c);
    const Poly da = C_.apply(C_.vector(a), m);
    if (!da.is_zero()) out += C_.make(s.kind(), key.first, da);
    if (key.first == 0) continue;
    for (const auto& t : rinv) {
      const Poly moved = A.act(HopfElement::monomial(t.a, t.c), m);
      if (moved.is_zero()) continue;
      const Graded dir = C_.act_mono(t.b, C_.vector(a));
      out += C_.left_mul(moved, along_combo(dir, C_.make(s.kind(), key.first, A.coords().one())));
    }
  }
  return out;
}

Graded Connection::along_combo(const Graded& X, const Graded& s) const {
  Graded out = C_.zero(s.kind());
  for (const auto& [xk, xc] : X.terms().terms()) {
    if (xk.second != 0) fail(ErrorKind::NotInFrameSpan, "frame action produced a non-constant combination");
    const int a = word_first(xk.first);
    for (const auto& [sk, sc] : s.terms().terms()) {
      if (sk.second != 0) fail(ErrorKind::NotInFrameSpan, "frame action produced a non-constant combination");
      out += along_word(s.kind(), a, sk.first).scaled(xc * sc);
    }
  }
  return out;
}

// Braided derivation of the wedge on a basis word of coefficient one.
const Graded& Connection::along_word(Kind kind, int a, Word w) const {
  return memoize(memo_->mutex, memo_->words, std::make_tuple(static_cast<int>(kind), a, w), [&]() -> Graded {
    if (w == 0) return C_.zero(kind);
    const int first = word_first(w);
    const Word rest = w & ~(Word{1} << first);
    Graded head = C_.zero(kind);
    if (kind == Kind::Vector) {
      for (int c = 0; c < C_.rank(); ++c)
        if (!gamma_[a][first][c].is_zero()) head += C_.vector(c, gamma_[a][first][c]);
    } else {
      head = dual_frame(a, first);
    }
    if (rest == 0) return head;
    const auto& one = C_.algebra().coords().one();
    Graded out = C_.wedge(head, C_.make(kind, rest, one));
    for (const auto& t : legs(C_.hopf().Rinv())) {
      const Graded moved = C_.act_mono(t.a, C_.make(kind, Word{1} << first, one));
      if (moved.is_zero()) continue;
      const Graded inner = along_combo(C_.act_mono(t.b, C_.vector(a)), C_.make(kind, rest, one));
      if (!inner.is_zero()) out += C_.wedge(moved, inner).scaled(t.c);
    }
    return out;
  });
}

// <nabla~_{E_a} theta^b, E_c> = E_a <theta^b, E_c> - sum <R^{-1}_1 |> theta^b, nabla_{R^{-1}_2 |> E_a} E_c>,
// solved for the form through the inverse of K[b][c] = <theta^b, E_c>.
const Graded& Connection::dual_frame(int a, int b) const {
  return memoize(memo_->mutex, memo_->dual, std::make_pair(a, b), [&]() -> Graded {
    const int k = C_.rank();
    const auto& A = C_.algebra();
    std::call_once(memo_->pairing_once, [&] {
      PolyMatrix K(k, std::vector<Poly>(k));
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) K[i][j] = C_.eval(C_.dual(i), {C_.vector(j)});
      memo_->pairing_inverse = invert_matrix(K, A);
    });
    const PolyMatrix& Kinv = *memo_->pairing_inverse;
    const auto rinv = legs(C_.hopf().Rinv());
    std::vector<Poly> v(k, A.coords().zero());
    for (int c = 0; c < k; ++c) {
      v[c] = C_.apply(C_.vector(a), C_.eval(C_.dual(b), {C_.vector(c)}));
      for (const auto& t : rinv) {
        const Graded theta = C_.act_mono(t.a, C_.dual(b));
        if (theta.is_zero()) continue;
        const Graded dir = C_.act_mono(t.b, C_.vector(a));
        v[c] -= C_.eval(theta, {along_combo(dir, C_.vector(c))}).scaled(t.c);
      }
    }
    Graded out = C_.zero(Kind::Form);
    for (int bb = 0; bb < k; ++bb) {
      Poly coeff = A.coords().zero();
      for (int c = 0; c < k; ++c) coeff += A.mul(v[c], Kinv[c][bb]);
      if (!coeff.is_zero()) out += C_.dual(bb, coeff);
    }
    return out;
  });
}

// R(X,Y)Z = nabla_X nabla_Y Z - nabla_{R^{-1}_1 |> Y} nabla_{R^{-1}_2 |> X} Z - nabla_{[X,Y]_R} Z.
Graded curvature(const Connection& nabla, const Graded& X, const Graded& Y, const Graded& Z) {
  require_vector(X, "X");
  require_vector(Y, "Y");
  const Calculus& C = nabla.calculus();
  Graded out = nabla(X, nabla(Y, Z)) - nabla(C.bracket(X, Y), Z);
  for (const auto& t : legs(C.hopf().Rinv())) {
    const Graded y = C.act_mono(t.a, Y), x = C.act_mono(t.b, X);
    if (y.is_zero() || x.is_zero()) continue;
    out -= nabla(y, nabla(x, Z)).scaled(t.c);
  }
  return out;
}

// Tor(X,Y) = nabla_X Y - nabla_{R^{-1}_1 |> Y}(R^{-1}_2 |> X) - [X,Y]_R.
Graded torsion(const Connection& nabla, const Graded& X, const Graded& Y) {
  require_vector(X, "X");
  require_vector(Y, "Y");
  const Calculus& C = nabla.calculus();
  Graded out = nabla(X, Y) - C.bracket(X, Y);
  for (const auto& t : legs(C.hopf().Rinv())) {
    const Graded y = C.act_mono(t.a, Y), x = C.act_mono(t.b, X);
    if (y.is_zero() || x.is_zero()) continue;
    out -= nabla(y, x).scaled(t.c);
  }
  return out;
}

// ---------------------------------------------------------------- Metric

Metric::Metric(const Calculus& C, PolyMatrix g, std::optional<PolyMatrix> inverse)
    : C_(C), g_(std::move(g)), inverse_(std::move(inverse)) {
  const int k = C_.rank();
  if (static_cast<int>(g_.size()) != k) fail(ErrorKind::RankMismatch, "metric must have frame rank");
  for (const auto& row : g_)
    if (static_cast<int>(row.size()) != k) fail(ErrorKind::RankMismatch, "metric must have frame rank");
  if (!inverse_) {
    try {
      inverse_ = invert_matrix(g_, C_.algebra());
    } catch (const Error&) {
      inverse_ = std::nullopt;
    }
  }
}

// g(x^a E_a, y^b E_b) = sum x^a * (R^{-1}_1 |> y^b) * rho(R^{-1}_2)[d][a] g_db.
Poly Metric::operator()(const Graded& X, const Graded& Y) const {
  require_vector(X, "X");
  require_vector(Y, "Y");
  const auto& A = C_.algebra();
  const int k = C_.rank();
  const auto rinv = legs(C_.hopf().Rinv());
  Poly out = A.coords().zero();
  for (int b = 0; b < k; ++b) {
    const Poly y = Y.coefficient(Word{1} << b);
    if (y.is_zero()) continue;
    // column[a] = g(E_a, y E_b)
    std::vector<Poly> column(k, A.coords().zero());
    for (const auto& t : rinv) {
      const Poly moved = A.act(HopfElement::monomial(t.a, t.c), y);
      if (moved.is_zero()) continue;
      const Matrix& rho = C_.rho(t.b);
      for (int a = 0; a < k; ++a) {
        Poly entry = A.coords().zero();
        for (int d = 0; d < k; ++d)
          if (!rho[d][a].is_zero()) entry += g_[d][b].scaled(rho[d][a]);
        if (!entry.is_zero()) column[a] += A.mul(moved, entry);
      }
    }
    for (int a = 0; a < k; ++a) {
      const Poly x = X.coefficient(Word{1} << a);
      if (!x.is_zero() && !column[a].is_zero()) out += A.mul(x, column[a]);
    }
  }
  return out;
}

// ---------------------------------------------------------------- suites

Report check_connection_axioms(const Connection& nabla, int depth, int degree) {
  Report report;
  const Calculus& C = nabla.calculus();
  const auto& A = C.algebra();
  const auto& H = C.hopf();
  const std::string suite = "connection";
  const auto V = grade_one(C, degree);
  const auto E = frame_vectors(C);
  const auto fs = functions(C, degree);
  const auto rinv = legs(H.Rinv());

  {
    CheckScope c(report, suite, "equivariance", "xi |> nabla_X Y = nabla_{xi_(1) |> X}(xi_(2) |> Y)");
    for (Mono xi : H.env().monomials_up_to(depth)) {
      for (const auto& X : E) {
        for (const auto& Y : V) {
          const Graded lhs = C.act_mono(xi, nabla(X, Y));
          Graded rhs = C.zero(Kind::Vector);
          for (const auto& t : legs(H.coproduct_mono(xi)))
            rhs += nabla(C.act_mono(t.a, X), C.act_mono(t.b, Y)).scaled(t.c);
          if (!c.expect_lazy(lhs == rhs, [&] {
                return "xi = " + mono::str(xi, H.names()) + "; " + show(C, {{"X", &X}, {"Y", &Y}, {"lhs", &lhs}, {"rhs", &rhs}});
              }))
            break;
        }
        if (c.failed()) break;
      }
      if (c.failed()) break;
    }
  }
  {
    CheckScope c(report, suite, "left-linearity", "nabla_{a X} s = a nabla_X s");
    for (const auto& a : fs) {
      for (const auto& X : E)
        for (const auto& Y : V) {
          const Graded lhs = nabla(C.left_mul(a, X), Y), rhs = C.left_mul(a, nabla(X, Y));
          if (!c.expect_lazy(lhs == rhs, [&] { return "a = " + A.str(a) + "; " + show(C, {{"X", &X}, {"Y", &Y}, {"lhs", &lhs}, {"rhs", &rhs}}); }))
            break;
        }
      if (c.failed()) break;
    }
  }
  {
    CheckScope c(report, suite, "leibniz", "nabla_X(a s) = X(a) s + (R^{-1}_1 |> a) nabla_{R^{-1}_2 |> X} s");
    for (const auto& a : fs) {
      for (const auto& X : V)
        for (const auto& Y : V) {
          const Graded lhs = nabla(X, C.left_mul(a, Y));
          Graded rhs = C.left_mul(C.apply(X, a), Y);
          for (const auto& t : rinv) rhs += C.left_mul(A.act(HopfElement::monomial(t.a, t.c), a), nabla(C.act_mono(t.b, X), Y));
          if (!c.expect_lazy(lhs == rhs, [&] { return "a = " + A.str(a) + "; " + show(C, {{"X", &X}, {"Y", &Y}, {"lhs", &lhs}, {"rhs", &rhs}}); }))
            break;
        }
      if (c.failed()) break;
    }
  }
  {
    CheckScope c(report, suite, "right-linearity", "nabla_{X a} s = (nabla_X(R^{-1}_1 |> s)) (R^{-1}_2 |> a)");
    for (const auto& a : fs) {
      for (const auto& X : V)
        for (const auto& Y : E) {
          const Graded lhs = nabla(C.right_mul(X, a), Y);
          Graded rhs = C.zero(Kind::Vector);
          for (const auto& t : rinv)
            rhs += C.right_mul(nabla(X, C.act_mono(t.a, Y)), A.act(HopfElement::monomial(t.b, t.c), a));
          if (!c.expect_lazy(lhs == rhs, [&] { return "a = " + A.str(a) + "; " + show(C, {{"X", &X}, {"Y", &Y}, {"lhs", &lhs}, {"rhs", &rhs}}); }))
            break;
        }
      if (c.failed()) break;
    }
  }
  {
    CheckScope c(report, suite, "right-leibniz", "nabla_X(s a) = (nabla_X s) a + (R^{-1}_1 |> s) (R^{-1}_2 |> X)(a)");
    for (const auto& a : fs) {
      for (const auto& X : V)
        for (const auto& Y : V) {
          const Graded lhs = nabla(X, C.right_mul(Y, a));
          Graded rhs = C.right_mul(nabla(X, Y), a);
          for (const auto& t : rinv) {
            const Graded y = C.act_mono(t.a, Y);
            if (!y.is_zero()) rhs += C.right_mul(y, C.apply(C.act_mono(t.b, X), a)).scaled(t.c);
          }
          if (!c.expect_lazy(lhs == rhs, [&] { return "a = " + A.str(a) + "; " + show(C, {{"X", &X}, {"Y", &Y}, {"lhs", &lhs}, {"rhs", &rhs}}); }))
            break;
        }
      if (c.failed()) break;
    }
  }
  {
    CheckScope c(report, suite, "dual-pairing",
                 "<nabla~_X w, Y> = X(<w, Y>) - <R^{-1}_1 |> w, nabla_{R^{-1}_2 |> X} Y>");
    std::vector<Graded> W;
    for (auto& w : C.family(Kind::Form, 1, degree))
      if (grade_of(w) == 1) W.push_back(std::move(w));
    for (const auto& X : V) {
      for (const auto& w : W) {
        const Graded nw = nabla(X, w);
        for (const auto& Y : V) {
          const Poly lhs = C.eval(nw, {Y});
          Poly rhs = C.apply(X, C.eval(w, {Y}));
          for (const auto& t : rinv) {
            const Graded ww = C.act_mono(t.a, w);
            if (!ww.is_zero()) rhs -= C.eval(ww, {nabla(C.act_mono(t.b, X), Y)}).scaled(t.c);
          }
          if (!c.expect_lazy(lhs == rhs, [&] {
                return show(C, {{"X", &X}, {"w", &w}, {"Y", &Y}}) + "lhs = " + A.str(lhs) + "; rhs = " + A.str(rhs);
              }))
            break;
        }
        if (c.failed()) break;
      }
      if (c.failed()) break;
    }
  }
  {
    CheckScope c(report, suite, "wedge-derivation", "nabla_X(U ^ V) = nabla_X U ^ V + (R^{-1}_1 |> U) ^ nabla_{R^{-1}_2 |> X} V");
    for (Kind kind : {Kind::Vector, Kind::Form}) {
      std::vector<Graded> U;
      for (auto& u : C.family(kind, 1, degree))
        if (grade_of(u) == 1) U.push_back(std::move(u));
      for (const auto& X : E) {
        for (const auto& u : U) {
          for (const auto& v : U) {
            const Graded lhs = nabla(X, C.wedge(u, v));
            Graded rhs = C.wedge(nabla(X, u), v);
            for (const auto& t : rinv) {
              const Graded uu = C.act_mono(t.a, u);
              if (!uu.is_zero()) rhs += C.wedge(uu, nabla(C.act_mono(t.b, X), v)).scaled(t.c);
            }
            if (!c.expect_lazy(lhs == rhs, [&] { return show(C, {{"X", &X}, {"U", &u}, {"V", &v}, {"lhs", &lhs}, {"rhs", &rhs}}); }))
              break;
          }
          if (c.failed()) break;
        }
        if (c.failed()) break;
      }
    }
  }
  return report;
}

Report check_metric(const Metric& g, int depth, int degree) {
  Report report;
  const Calculus& C = g.calculus();
  const auto& A = C.algebra();
  const auto& H = C.hopf();
  const std::string suite = "metric";
  const auto V = grade_one(C, degree);
  const auto E = frame_vectors(C);
  const auto fs = functions(C, degree);
  const auto rinv = legs(H.Rinv());
  auto pair_str = [&](const Graded& X, const Graded& Y, const Poly& lhs, const Poly& rhs) {
    return show(C, {{"X", &X}, {"Y", &Y}}) + "lhs = " + A.str(lhs) + "; rhs = " + A.str(rhs);
  };

  {
    CheckScope c(report, suite, "braided-symmetry", "g(Y, X) = g(R^{-1}_1 |> X, R^{-1}_2 |> Y)");
    for (const auto& X : V) {
      for (const auto& Y : V) {
        const Poly lhs = g(Y, X);
        Poly rhs = A.coords().zero();
        for (const auto& t : rinv) rhs += g(C.act_mono(t.a, X), C.act_mono(t.b, Y)).scaled(t.c);
        if (!c.expect_lazy(lhs == rhs, [&] { return pair_str(X, Y, lhs, rhs); })) break;
      }
      if (c.failed()) break;
    }
  }
  {
    CheckScope c(report, suite, "equivariance", "xi |> g(X, Y) = g(xi_(1) |> X, xi_(2) |> Y)");
    for (Mono xi : H.env().monomials_up_to(depth)) {
      for (const auto& X : E) {
        for (const auto& Y : V) {
          const Poly lhs = A.act(HopfElement::monomial(xi, Scalar(C.ring(), Rational(1))), g(X, Y));
          Poly rhs = A.coords().zero();
          for (const auto& t : legs(H.coproduct_mono(xi))) rhs += g(C.act_mono(t.a, X), C.act_mono(t.b, Y)).scaled(t.c);
          if (!c.expect_lazy(lhs == rhs, [&] { return "xi = " + mono::str(xi, H.names()) + "; " + pair_str(X, Y, lhs, rhs); })) break;
        }
        if (c.failed()) break;
      }
      if (c.failed()) break;
    }
  }
  {
    CheckScope c(report, suite, "left-linearity", "g(a X, Y) = a g(X, Y)");
    for (const auto& a : fs) {
      for (const auto& X : E)
        for (const auto& Y : V) {
          const Poly lhs = g(C.left_mul(a, X), Y), rhs = A.mul(a, g(X, Y));
          if (!c.expect_lazy(lhs == rhs, [&] { return "a = " + A.str(a) + "; " + pair_str(X, Y, lhs, rhs); })) break;
        }
      if (c.failed()) break;
    }
  }
  {
    CheckScope c(report, suite, "right-linearity", "g(X, Y a) = g(X, Y) a");
    for (const auto& a : fs) {
      for (const auto& X : V)
        for (const auto& Y : V) {
          const Poly lhs = g(X, C.right_mul(Y, a)), rhs = A.mul(g(X, Y), a);
          if (!c.expect_lazy(lhs == rhs, [&] { return "a = " + A.str(a) + "; " + pair_str(X, Y, lhs, rhs); })) break;
        }
      if (c.failed()) break;
    }
  }
  {
    CheckScope c(report, suite, "inverse-witness", "g g^{-1} = g^{-1} g = 1");
    if (!g.inverse()) {
      c.fail_with("no inverse witness");
    } else {
      const PolyMatrix left = matmul(A, g.matrix(), *g.inverse()), right = matmul(A, *g.inverse(), g.matrix());
      c.expect(is_identity(A, left), "g g^{-1} is not the identity");
      c.expect(is_identity(A, right), "g^{-1} g is not the identity");
    }
  }
  return report;
}

Report check_levi_civita(const Connection& nabla, const Metric& g, int degree) {
  Report report;
  const Calculus& C = nabla.calculus();
  const auto& A = C.algebra();
  const std::string suite = "levi-civita";
  const auto V = grade_one(C, degree);
  const auto E = frame_vectors(C);
  const auto rinv = legs(C.hopf().Rinv());
  {
    CheckScope c(report, suite, "metric-compatibility",
                 "X(g(Y, Z)) = g(nabla_X Y, Z) + g(R^{-1}_1 |> Y, nabla_{R^{-1}_2 |> X} Z)");
    for (const auto& X : E) {
      for (const auto& Y : V) {
        for (const auto& Z : V) {
          const Poly lhs = C.apply(X, g(Y, Z));
          Poly rhs = g(nabla(X, Y), Z);
          for (const auto& t : rinv) {
            const Graded y = C.act_mono(t.a, Y);
            if (!y.is_zero()) rhs += g(y, nabla(C.act_mono(t.b, X), Z)).scaled(t.c);
          }
          if (!c.expect_lazy(lhs == rhs, [&] {
                return show(C, {{"X", &X}, {"Y", &Y}, {"Z", &Z}}) + "lhs = " + A.str(lhs) + "; rhs = " + A.str(rhs);
              }))
            break;
        }
        if (c.failed()) break;
      }
      if (c.failed()) break;
    }
  }
  {
    CheckScope c(report, suite, "torsion-free", "Tor(X, Y) = 0");
    for (const auto& X : V) {
      for (const auto& Y : V) {
        const Graded T = torsion(nabla, X, Y);
        if (!c.expect_lazy(T.is_zero(), [&] { return show(C, {{"X", &X}, {"Y", &Y}, {"Tor", &T}}); })) break;
      }
      if (c.failed()) break;
    }
  }
  return report;
}

// 2 g(nabla_X Y, Z) as the six-term braided Koszul expression.
static Poly koszul(const Metric& g, const Graded& X, const Graded& Y, const Graded& Z) {
  const Calculus& C = g.calculus();
  const auto& H = C.hopf();
  Poly out = C.apply(X, g(Y, Z)) - g(X, C.bracket(Y, Z));
  for (const auto& t : legs(H.Rinv())) {
    const Graded x2 = C.act_mono(t.b, X), z1 = C.act_mono(t.a, Z);
    for (const auto& u : legs(H.coproduct_mono(t.a))) {
      const Graded y = C.act_mono(u.a, Y), z = C.act_mono(u.b, Z);
      if (y.is_zero() || z.is_zero() || x2.is_zero()) continue;
      const Scalar s = t.c * u.c;
      out += C.apply(y, g(z, x2)).scaled(s);
      out += g(y, C.bracket(z, x2)).scaled(s);
    }
    for (const auto& u : legs(H.coproduct_mono(t.b))) {
      const Graded x = C.act_mono(u.a, X), y = C.act_mono(u.b, Y);
      if (x.is_zero() || y.is_zero() || z1.is_zero()) continue;
      const Scalar s = t.c * u.c;
      out -= C.apply(z1, g(x, y)).scaled(s);
      out += g(z1, C.bracket(x, y)).scaled(s);
    }
  }
  return out;
}

Connection levi_civita(const Metric& g, int depth, int degree) {
  const Report r = check_metric(g, depth, degree);
  for (const auto& c : r.checks()) {
    if (c.pass) continue;
    if (c.name == "inverse-witness") fail(ErrorKind::InverseWitnessInvalid, c.counterexample);
    fail(ErrorKind::MetricCheckFailed, c.name + ": " + c.counterexample);
  }
  const Calculus& C = g.calculus();
  const auto& A = C.algebra();
  const int k = C.rank();
  const PolyMatrix& inv = *g.inverse();
  const Scalar half(C.ring(), Rational(1, 2));
  Christoffel gamma(k, std::vector<std::vector<Poly>>(k, std::vector<Poly>(k, A.coords().zero())));
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c) {
        const Poly K = koszul(g, C.vector(a), C.vector(b), C.vector(c)).scaled(half);
        if (K.is_zero()) continue;
        // g(nabla_a E_b, E_c) = sum_d Gamma^d_ab g_dc, so Gamma^d_ab = sum_c K_abc ginv_cd.
        for (int d = 0; d < k; ++d)
          if (!inv[c][d].is_zero()) gamma[a][b][d] += A.mul(K, inv[c][d]);
      }
  return Connection(C, std::move(gamma));
}

Report perturbation_suite(const Connection& nabla, const Metric& g, int count, std::uint64_t seed, int degree) {
  Report report;
  const Calculus& C = nabla.calculus();
  const int k = C.rank();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> entry(-2, 2);
  CheckScope c(report, "levi-civita", "uniqueness", "nabla + delta is not metric and torsion-free for constant delta != 0");
  for (int i = 0; i < count; ++i) {
    Christoffel gamma = nabla.christoffel();
    bool nonzero = false;
    std::ostringstream desc;
    while (!nonzero) {
      desc.str("");
      gamma = nabla.christoffel();
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
          for (int cc = 0; cc < k; ++cc) {
            const int v = entry(rng);
            if (v == 0) continue;
            nonzero = true;
            gamma[a][b][cc] += C.algebra().coords().constant(Scalar(C.ring(), Rational(v)));
            desc << "delta^" << cc + 1 << "_" << a + 1 << b + 1 << " = " << v << "; ";
          }
    }
    const Report r = check_levi_civita(Connection(C, std::move(gamma)), g, degree);
    c.expect(!r.all_pass(), "perturbation kept both properties: " + desc.str());
  }
  return report;
}

// ---------------------------------------------------------------- twisting

Connection twist_connection(const Connection& nabla, const Calculus& twisted, const Twist& F) {
  const Calculus& C0 = nabla.calculus();
  const DrinfeldTransport T(C0, twisted, F);
  const int k = C0.rank();
  const auto finv = legs(F.Finv);
  Christoffel gamma(k, std::vector<std::vector<Poly>>(k, std::vector<Poly>(k, twisted.algebra().coords().zero())));
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      Graded classical = C0.zero(Kind::Vector);
      for (const auto& t : finv) {
        const Graded x = C0.act_mono(t.a, C0.vector(a)), y = C0.act_mono(t.b, C0.vector(b));
        if (!x.is_zero() && !y.is_zero()) classical += nabla(x, y).scaled(t.c);
      }
      const Graded image = T(classical);
      for (int c = 0; c < k; ++c) gamma[a][b][c] = image.coefficient(Word{1} << c);
    }
  return Connection(twisted, std::move(gamma));
}

Metric twist_metric(const Metric& g, const Calculus& twisted, const Twist& F) {
  const Calculus& C0 = g.calculus();
  const int k = C0.rank();
  const auto finv = legs(F.Finv);
  const auto& AF = twisted.algebra();
  PolyMatrix gf(k, std::vector<Poly>(k, AF.coords().zero()));
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (const auto& t : finv) {
        const Graded x = C0.act_mono(t.a, C0.vector(a)), y = C0.act_mono(t.b, C0.vector(b));
        if (!x.is_zero() && !y.is_zero()) gf[a][b] += g(x, y).scaled(t.c);
      }
  std::optional<PolyMatrix> witness;
  if (g.inverse()) witness = refine_inverse(AF, gf, *g.inverse());
  return Metric(twisted, std::move(gf), std::move(witness));
}

}  // namespace braid
