#include <sstream>

#include "braid/calculus.hpp"
#include "braid/errors.hpp"

namespace braid {

namespace {

Scalar unit_scalar(Ring r) { return Scalar(r, Rational(1)); }

int grade_of(const Graded& X) { return X.is_zero() ? 0 : X.grade(); }

}  // namespace

// ---------------------------------------------------------------- GradedOperator

GradedOperator GradedOperator::d() {
  return GradedOperator(std::make_shared<const Node>(Node{Type::D, 1, true, Graded(), {}}));
}

GradedOperator GradedOperator::insertion(Graded X) {
  const int k = grade_of(X);
  return GradedOperator(std::make_shared<const Node>(Node{Type::Insertion, -k, false, std::move(X), {}}));
}

GradedOperator GradedOperator::lie(Graded X) {
  const int k = grade_of(X);
  return GradedOperator(std::make_shared<const Node>(Node{Type::Lie, 1 - k, false, std::move(X), {}}));
}

GradedOperator GradedOperator::compose(const GradedOperator& a, const GradedOperator& b) {
  const Scalar one = unit_scalar(Ring::rational());
  return GradedOperator(std::make_shared<const Node>(
      Node{Type::Compose, a.degree() + b.degree(), a.equivariant() && b.equivariant(), Graded(), {{one, a}, {one, b}}}));
}

GradedOperator GradedOperator::zero(int degree) {
  return GradedOperator(std::make_shared<const Node>(Node{Type::Sum, degree, true, Graded(), {}}));
}

GradedOperator GradedOperator::scaled(const Scalar& s) const {
  return GradedOperator(std::make_shared<const Node>(Node{Type::Sum, degree(), equivariant(), Graded(), {{s, *this}}}));
}

GradedOperator operator+(const GradedOperator& a, const GradedOperator& b) {
  if (a.degree() != b.degree()) fail(ErrorKind::GradeMismatch, "sum of operators of different degree");
  const Scalar one = unit_scalar(Ring::rational());
  return GradedOperator(std::make_shared<const GradedOperator::Node>(GradedOperator::Node{
      GradedOperator::Type::Sum, a.degree(), a.equivariant() && b.equivariant(), Graded(), {{one, a}, {one, b}}}));
}

GradedOperator operator-(const GradedOperator& a, const GradedOperator& b) {
  return a + b.scaled(Scalar(Ring::rational(), Rational(-1)));
}

GradedOperator graded_braided_commutator(const GradedOperator& a, const GradedOperator& b) {
  const Scalar one = unit_scalar(Ring::rational());
  return GradedOperator(std::make_shared<const GradedOperator::Node>(
      GradedOperator::Node{GradedOperator::Type::Commutator, a.degree() + b.degree(),
                           a.equivariant() && b.equivariant(), Graded(), {{one, a}, {one, b}}}));
}

// Sum coefficients may live in Q while the calculus works mod h^N.
static Scalar lift(const Scalar& s, Ring r) { return s.ring() == r ? s : s.in_ring(r); }

Graded Calculus::commutator_apply(const GradedOperator& a, const GradedOperator& b, const Graded& w, bool force) const {
  const Graded first = apply(a, apply(b, w, force), force);
  const bool odd = ((a.degree() * b.degree()) % 2) != 0;
  Graded second = zero(Kind::Form);
  if (!force && (a.equivariant() || b.equivariant())) {
    second = apply(b, apply(a, w, force), force);
  } else {
    for (const auto& t : rinv_) {
      const GradedOperator bb = act_mono(t.a, b);
      const GradedOperator aa = act_mono(t.b, a);
      second += apply(bb, apply(aa, w, force), force).scaled(t.c);
    }
  }
  return odd ? first + second : first - second;
}

Graded Calculus::apply(const GradedOperator& op, const Graded& w, bool force) const {
  const auto& n = *op.node_;
  switch (n.type) {
    case GradedOperator::Type::D:
      return d(w);
    case GradedOperator::Type::Insertion:
      return insert(n.X, w);
    case GradedOperator::Type::Lie:
      return lie(n.X, w);
    case GradedOperator::Type::Compose:
      return apply(n.children[0].second, apply(n.children[1].second, w, force), force);
    case GradedOperator::Type::Commutator:
      return commutator_apply(n.children[0].second, n.children[1].second, w, force);
    case GradedOperator::Type::Sum: {
      Graded acc = zero(Kind::Form);
      for (const auto& [c, child] : n.children) acc += apply(child, w, force).scaled(lift(c, ring()));
      return acc;
    }
  }
  return zero(Kind::Form);
}

// xi |> op = xi_1 |> . o op o S(xi_2) |> . on the nodes.
GradedOperator Calculus::act_mono(Mono xi, const GradedOperator& op) const {
  if (xi == 0) return op;
  const auto& n = *op.node_;
  switch (n.type) {
    case GradedOperator::Type::D:
      return GradedOperator::zero(n.degree);
    case GradedOperator::Type::Insertion:
    case GradedOperator::Type::Lie: {
      Graded X = act_mono(xi, n.X);
      if (X.is_zero()) return GradedOperator::zero(n.degree);
      return n.type == GradedOperator::Type::Insertion ? GradedOperator::insertion(std::move(X))
                                                       : GradedOperator::lie(std::move(X));
    }
    case GradedOperator::Type::Compose:
    case GradedOperator::Type::Commutator: {
      GradedOperator acc = GradedOperator::zero(n.degree);
      for (const auto& [key, c] : hopf().coproduct_mono(xi).terms().terms()) {
        const GradedOperator a = act_mono(key[0], n.children[0].second);
        const GradedOperator b = act_mono(key[1], n.children[1].second);
        const GradedOperator combined = n.type == GradedOperator::Type::Compose ? GradedOperator::compose(a, b)
                                                                                : graded_braided_commutator(a, b);
        acc = acc + combined.scaled(c);
      }
      return acc;
    }
    case GradedOperator::Type::Sum: {
      GradedOperator acc = GradedOperator::zero(n.degree);
      for (const auto& [c, child] : n.children) acc = acc + act_mono(xi, child).scaled(c);
      return acc;
    }
  }
  return op;
}

// ---------------------------------------------------------------- suites

namespace {

std::string describe(const Calculus& C, std::initializer_list<std::pair<const char*, const Graded*>> items,
                     const Graded& lhs, const Graded& rhs) {
  std::ostringstream os;
  for (const auto& [name, g] : items) os << name << " = " << C.str(*g) << "; ";
  os << "lhs = " << C.str(lhs) << "; rhs = " << C.str(rhs);
  return os.str();
}

}  // namespace

Report cartan_suite(const Calculus& C, int depth, int degree) {
  Report report;
  const auto V = C.family(Kind::Vector, 2, degree);
  const auto W = C.family(Kind::Form, 2, degree);
  const auto D = GradedOperator::d();
  const std::string suite = "cartan";

  {
    CheckScope c(report, suite, "lie-lie", "[L_X, L_Y]_R = L_[[X,Y]]_R");
    for (const auto& X : V) {
      for (const auto& Y : V) {
        const auto op = graded_braided_commutator(GradedOperator::lie(X), GradedOperator::lie(Y));
        const Graded S = C.schouten(X, Y);
        for (const auto& w : W) {
          const Graded lhs = C.apply(op, w), rhs = C.lie(S, w);
          if (!c.expect_lazy(lhs == rhs, [&] { return describe(C, {{"X", &X}, {"Y", &Y}, {"w", &w}}, lhs, rhs); }))
            break;
        }
        if (c.failed()) break;
      }
      if (c.failed()) break;
    }
  }
  {
    CheckScope c(report, suite, "lie-insertion", "[L_X, i_Y]_R = i_[[X,Y]]_R");
    for (const auto& X : V) {
      for (const auto& Y : V) {
        const auto op = graded_braided_commutator(GradedOperator::lie(X), GradedOperator::insertion(Y));
        const Graded S = C.schouten(X, Y);
        for (const auto& w : W) {
          const Graded lhs = C.apply(op, w), rhs = C.insert(S, w);
          if (!c.expect_lazy(lhs == rhs, [&] { return describe(C, {{"X", &X}, {"Y", &Y}, {"w", &w}}, lhs, rhs); }))
            break;
        }
        if (c.failed()) break;
      }
      if (c.failed()) break;
    }
  }
  {
    CheckScope c(report, suite, "lie-d", "[L_X, d]_R = 0");
    for (const auto& X : V) {
      const auto op = graded_braided_commutator(GradedOperator::lie(X), D);
      for (const auto& w : W) {
        const Graded lhs = C.apply(op, w);
        if (!c.expect_lazy(lhs.is_zero(), [&] { return describe(C, {{"X", &X}, {"w", &w}}, lhs, C.zero(Kind::Form)); }))
          break;
      }
      if (c.failed()) break;
    }
  }
  {
    CheckScope c(report, suite, "insertion-insertion", "[i_X, i_Y]_R = 0");
    for (const auto& X : V) {
      for (const auto& Y : V) {
        const auto op = graded_braided_commutator(GradedOperator::insertion(X), GradedOperator::insertion(Y));
        for (const auto& w : W) {
          const Graded lhs = C.apply(op, w);
          if (!c.expect_lazy(lhs.is_zero(), [&] {
                return describe(C, {{"X", &X}, {"Y", &Y}, {"w", &w}}, lhs, C.zero(Kind::Form));
              }))
            break;
        }
        if (c.failed()) break;
      }
      if (c.failed()) break;
    }
  }
  {
    CheckScope c(report, suite, "insertion-d", "[i_X, d]_R = L_X");
    for (const auto& X : V) {
      const auto op = graded_braided_commutator(GradedOperator::insertion(X), D);
      for (const auto& w : W) {
        const Graded lhs = C.apply(op, w), rhs = C.lie_reference(X, w);
        if (!c.expect_lazy(lhs == rhs, [&] { return describe(C, {{"X", &X}, {"w", &w}}, lhs, rhs); })) break;
      }
      if (c.failed()) break;
    }
  }
  {
    CheckScope c(report, suite, "d-d", "[d, d]_R = 0");
    const auto op = graded_braided_commutator(D, D);
    for (const auto& w : W) {
      const Graded lhs = C.apply(op, w);
      if (!c.expect_lazy(lhs.is_zero(), [&] { return describe(C, {{"w", &w}}, lhs, C.zero(Kind::Form)); })) break;
    }
  }
  {
    CheckScope c(report, suite, "d-squared", "d o d = 0");
    for (const auto& w : W) {
      const Graded lhs = C.d(C.d(w));
      if (!c.expect_lazy(lhs.is_zero(), [&] { return describe(C, {{"w", &w}}, lhs, C.zero(Kind::Form)); })) break;
    }
  }
  {
    CheckScope c(report, suite, "lie-function", "L_a w = -da ^ w");
    for (const auto& X : V) {
      if (X.max_grade() != 0) continue;
      const Graded da = C.d(C.function(X.coefficient(0), Kind::Form));
      for (const auto& w : W) {
        const Graded lhs = C.lie(X, w), rhs = -C.wedge(da, w);
        if (!c.expect_lazy(lhs == rhs, [&] { return describe(C, {{"a", &X}, {"w", &w}}, lhs, rhs); })) break;
      }
      if (c.failed()) break;
    }
  }
  {
    CheckScope c(report, suite, "lie-wedge", "L_{X ^ Y} = i_X L_Y + (-1)^l L_X i_Y");
    for (const auto& X : V) {
      if (X.max_grade() != 1) continue;
      for (const auto& Y : V) {
        if (Y.max_grade() == 0) continue;
        const Graded XY = C.wedge(X, Y);
        const int l = Y.grade();
        for (const auto& w : W) {
          const Graded second = C.lie(X, C.insert(Y, w));
          const Graded lhs = C.lie(XY, w);
          const Graded rhs = C.insert(X, C.lie(Y, w)) + (l % 2 ? -second : second);
          if (!c.expect_lazy(lhs == rhs, [&] { return describe(C, {{"X", &X}, {"Y", &Y}, {"w", &w}}, lhs, rhs); }))
            break;
        }
        if (c.failed()) break;
      }
      if (c.failed()) break;
    }
  }
  {
    CheckScope c(report, suite, "d-equivariant", "xi |> dw = d(xi |> w)");
    const auto xis = C.hopf().env().monomials_up_to(depth);
    for (Mono xi : xis) {
      for (const auto& w : W) {
        const Graded lhs = C.act_mono(xi, C.d(w)), rhs = C.d(C.act_mono(xi, w));
        if (!c.expect_lazy(lhs == rhs, [&] { return describe(C, {{"w", &w}}, lhs, rhs); })) break;
      }
      if (c.failed()) break;
    }
  }
  return report;
}

// ---------------------------------------------------------------- transport

DrinfeldTransport::DrinfeldTransport(const Calculus& classical, const Calculus& twisted, Twist F, bool inverse_direction)
    : C0_(classical), CF_(twisted), F_(std::move(F)) {
  if (classical.rank() != twisted.rank() || classical.arity() != twisted.arity())
    fail(ErrorKind::ArityMismatch, "transport needs calculi over the same coordinates and frame");
  const TensorElement& split = inverse_direction ? F_.Finv : F_.F;
  const TensorElement& pair = inverse_direction ? F_.F : F_.Finv;
  for (const auto& [k, c] : split.terms().terms()) split_.push_back({{k[0], k[1]}, c});
  for (const auto& [k, c] : F_.Finv.terms().terms()) finv_.push_back({{k[0], k[1]}, c});

  // (theta^a)^F = sum_b M[a][b] Theta^b with M = K kappa_F^{-1}, K[a][b] = i^F_{e_b} theta^a.
  const int k = classical.rank();
  const Ring r = classical.ring();
  Matrix K(k, std::vector<Scalar>(k, Scalar(r)));
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (const auto& [key, c] : pair.terms().terms()) {
        const Graded x = C0_.act_mono(key[0], C0_.vector(b));
        const Graded th = C0_.act_mono(key[1], C0_.dual(a));
        if (x.is_zero() || th.is_zero()) continue;
        const Poly v = C0_.insert(x, th).coefficient(0);
        if (v.is_zero()) continue;
        if (v.degree() > 0) fail(ErrorKind::Unsupported, "frame pairing of the twisted insertion is not constant");
        K[a][b] += c * v.constant_term();
      }
  const Matrix kinv = invert_matrix(twisted.kappa());
  theta_image_.assign(k, std::vector<Scalar>(k, Scalar(r)));
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c)
        if (!K[a][c].is_zero() && !kinv[c][b].is_zero()) theta_image_[a][b] += K[a][c] * kinv[c][b];
}

const Graded& DrinfeldTransport::word_image(Kind kind, Word w) const {
  const auto key = std::make_pair(static_cast<int>(kind), w);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = words_.find(key);
    if (it != words_.end()) return *it->second;
  }
  const auto& one = C0_.algebra().coords().one();
  Graded out = CF_.zero(kind);
  if (w == 0) {
    out = CF_.function(one, kind);
  } else if (word_grade(w) == 1) {
    const int a = word_first(w);
    if (kind == Kind::Vector) {
      out = CF_.vector(a);
    } else {
      for (int b = 0; b < CF_.rank(); ++b)
        if (!theta_image_[a][b].is_zero()) out += CF_.dual(b).scaled(theta_image_[a][b]);
    }
  } else {
    // T(e_i ^ rest) = sum_F T(F1 |> e_i) ^_F T(F2 |> rest)
    const Word first = w & (~w + 1);
    const Graded head = C0_.make(kind, first, one), rest = C0_.make(kind, w ^ first, one);
    for (const auto& [legs, c] : split_) {
      const Graded h = C0_.act_mono(legs.first, head);
      if (h.is_zero()) continue;
      const Graded t = C0_.act_mono(legs.second, rest);
      if (t.is_zero()) continue;
      out += CF_.wedge((*this)(h), (*this)(t)).scaled(c);
    }
  }
  std::lock_guard<std::mutex> lock(mutex_);
  return *words_.try_emplace(key, std::make_unique<Graded>(std::move(out))).first->second;
}

Graded DrinfeldTransport::operator()(const Graded& X) const {
  const auto& A0 = C0_.algebra();
  Graded acc = CF_.zero(X.kind());
  for (const auto& [k, c] : X.terms().terms()) {
    const Graded word = C0_.make(X.kind(), k.first, A0.coords().one());
    for (const auto& [legs, cf] : split_) {
      const Poly& p = A0.act_mono(legs.first, k.second);
      if (p.is_zero()) continue;
      const Graded moved = C0_.act_mono(legs.second, word);
      Graded image = CF_.zero(X.kind());
      for (const auto& [kw, s] : moved.terms().terms()) {
        if (kw.second != 0) fail(ErrorKind::Unsupported, "frame words must act on frame words");
        image += word_image(X.kind(), kw.first).scaled(s);
      }
      acc += CF_.left_mul(p, image).scaled(c * cf);
    }
  }
  return acc;
}

template <class Op>
Graded DrinfeldTransport::twisted_op(const Graded& U, const Graded& V, Op&& op) const {
  Graded acc;
  bool first = true;
  for (const auto& [legs, c] : finv_) {
    const Graded u = C0_.act_mono(legs.first, U);
    const Graded v = C0_.act_mono(legs.second, V);
    Graded r = op(u, v).scaled(c);
    if (first) acc = std::move(r);
    else acc += r;
    first = false;
  }
  return acc;
}

Graded DrinfeldTransport::wedge(const Graded& U, const Graded& V) const {
  return twisted_op(U, V, [&](const Graded& u, const Graded& v) { return C0_.wedge(u, v); });
}
Graded DrinfeldTransport::schouten(const Graded& U, const Graded& V) const {
  return twisted_op(U, V, [&](const Graded& u, const Graded& v) { return C0_.schouten(u, v); });
}
Graded DrinfeldTransport::insert(const Graded& X, const Graded& w) const {
  return twisted_op(X, w, [&](const Graded& u, const Graded& v) { return C0_.insert(u, v); });
}
Graded DrinfeldTransport::lie(const Graded& X, const Graded& w) const {
  return twisted_op(X, w, [&](const Graded& u, const Graded& v) { return C0_.lie(u, v); });
}

Calculus twisted_calculus(const Calculus& C, const Twist& F, int depth) {
  return Calculus(C.algebra().with_hopf(twist_hopf(C.hopf(), F, depth)), C.frame(), C.options());
}

Report gauge_suite(const Calculus& C0, const Twist& F, int depth, int degree, bool inverse_direction) {
  Report report;
  const Calculus CF = twisted_calculus(C0, F, depth);
  const DrinfeldTransport T(C0, CF, F, inverse_direction);
  const auto V = C0.family(Kind::Vector, 2, degree);
  const auto W = C0.family(Kind::Form, 2, degree);
  std::vector<Graded> VT, WT;
  for (const auto& X : V) VT.push_back(T(X));
  for (const auto& w : W) WT.push_back(T(w));
  const std::string suite = "gauge";

  auto pairwise = [&](const std::string& name, const std::string& anchor, const std::vector<Graded>& L,
                      const std::vector<Graded>& LT, const std::vector<Graded>& Rg, const std::vector<Graded>& RT,
                      auto&& classical_op, auto&& twisted_op) {
    CheckScope c(report, suite, name, anchor);
    for (std::size_t i = 0; i < L.size(); ++i) {
      for (std::size_t j = 0; j < Rg.size(); ++j) {
        const Graded lhs = T(classical_op(L[i], Rg[j]));
        const Graded rhs = twisted_op(LT[i], RT[j]);
        if (!c.expect_lazy(lhs == rhs, [&] {
              return "U = " + C0.str(L[i]) + "; V = " + C0.str(Rg[j]) + "; lhs = " + CF.str(lhs) +
                     "; rhs = " + CF.str(rhs);
            }))
          break;
      }
      if (c.failed()) break;
    }
  };

  // The transport must be a module map before its intertwining laws mean anything.
  {
    CheckScope c(report, suite, "transport-module", "(a ._F U)^F = a^F * U^F");
    std::vector<std::pair<const Graded*, const Graded*>> targets;
    for (std::size_t i = 0; i < V.size(); ++i) targets.emplace_back(&V[i], &VT[i]);
    for (std::size_t i = 0; i < W.size(); ++i) targets.emplace_back(&W[i], &WT[i]);
    for (const auto& X : V) {
      if (X.max_grade() != 0 || c.failed()) continue;
      for (const auto& [U, UT] : targets) {
        const Graded a = X.kind() == U->kind() ? X : C0.function(X.coefficient(0), U->kind());
        const Graded lhs = T(T.wedge(a, *U)), rhs = CF.wedge(T(a), *UT);
        if (!c.expect_lazy(lhs == rhs, [&] {
              return "a = " + C0.str(a) + "; U = " + C0.str(*U) + "; lhs = " + CF.str(lhs) + "; rhs = " + CF.str(rhs);
            }))
          break;
      }
    }
  }
  const bool module_map = report.checks().back().pass;
  if (!module_map)
    for (const char* name : {"transport-wedge-vectors", "transport-wedge-forms", "transport-schouten", "transport-insertion",
                             "transport-lie", "transport-d"})
      report.skip(suite, name, "transport is not a module map");

  if (module_map) {
    pairwise("transport-wedge-vectors", "(X ^_F Y)^F = X^F ^ Y^F", V, VT, V, VT,
             [&](const Graded& a, const Graded& b) { return T.wedge(a, b); },
             [&](const Graded& a, const Graded& b) { return CF.wedge(a, b); });
    pairwise("transport-wedge-forms", "(w ^_F e)^F = w^F ^ e^F", W, WT, W, WT,
             [&](const Graded& a, const Graded& b) { return T.wedge(a, b); },
             [&](const Graded& a, const Graded& b) { return CF.wedge(a, b); });
    pairwise("transport-schouten", "([[X,Y]]_F)^F = [[X^F, Y^F]]", V, VT, V, VT,
             [&](const Graded& a, const Graded& b) { return T.schouten(a, b); },
             [&](const Graded& a, const Graded& b) { return CF.schouten(a, b); });
    pairwise("transport-insertion", "(i^F_X w)^F = i_{X^F} w^F", V, VT, W, WT,
             [&](const Graded& a, const Graded& b) { return T.insert(a, b); },
             [&](const Graded& a, const Graded& b) { return CF.insert(a, b); });
    pairwise("transport-lie", "(L^F_X w)^F = L_{X^F} w^F", V, VT, W, WT,
             [&](const Graded& a, const Graded& b) { return T.lie(a, b); },
             [&](const Graded& a, const Graded& b) { return CF.lie(a, b); });
    {
      CheckScope c(report, suite, "transport-d", "(dw)^F = d w^F");
      for (std::size_t i = 0; i < W.size(); ++i) {
        const Graded lhs = T(C0.d(W[i])), rhs = CF.d(WT[i]);
        if (!c.expect_lazy(lhs == rhs, [&] {
              return "w = " + C0.str(W[i]) + "; lhs = " + CF.str(lhs) + "; rhs = " + CF.str(rhs);
            }))
          break;
      }
    }
  }
  {
    CheckScope c(report, suite, "classical-limit", "h^0 part of each twisted operation is classical");
    auto check = [&](const Graded& twisted, const Graded& classical, const std::string& what) {
      return c.expect_lazy(twisted.truncated(1) == classical.truncated(1), [&] {
        return what + ": twisted = " + CF.str(twisted) + "; classical = " + C0.str(classical);
      });
    };
    for (std::size_t i = 0; i < V.size() && !c.failed(); ++i)
      for (std::size_t j = 0; j < V.size() && !c.failed(); ++j)
        check(CF.schouten(V[i], V[j]), C0.schouten(V[i], V[j]), "schouten " + C0.str(V[i]) + ", " + C0.str(V[j]));
    for (std::size_t i = 0; i < V.size() && !c.failed(); ++i)
      for (std::size_t j = 0; j < W.size() && !c.failed(); ++j) {
        check(CF.lie(V[i], W[j]), C0.lie(V[i], W[j]), "lie " + C0.str(V[i]) + ", " + C0.str(W[j]));
        check(CF.insert(V[i], W[j]), C0.insert(V[i], W[j]), "insert " + C0.str(V[i]) + ", " + C0.str(W[j]));
      }
    for (std::size_t j = 0; j < W.size() && !c.failed(); ++j)
      check(CF.d(W[j]), C0.d(W[j]), "d " + C0.str(W[j]));
  }
  return report;
}

}  // namespace braid
