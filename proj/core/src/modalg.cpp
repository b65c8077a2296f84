#include "braid/modalg.hpp"

#include "braid/errors.hpp"

namespace braid {

// ---------------------------------------------------------------------------
// CoordinateAlgebra

namespace {

// Graded lexicographic comparison with x_1 > x_2 > ...
bool grlex_less(Mono a, Mono b) {
  int da = mono::degree(a), db = mono::degree(b);
  if (da != db) return da < db;
  for (int i = 0; i < mono::kMaxVars; ++i) {
    int ea = mono::exp(a, i), eb = mono::exp(b, i);
    if (ea != eb) return ea < eb;
  }
  return false;
}

}  // namespace

CoordinateAlgebra::CoordinateAlgebra(std::vector<std::string> coordinates, Ring ring, std::vector<Inverse> inverses)
    : ring_(ring), n_(static_cast<int>(coordinates.size())), coord_names_(coordinates), names_(std::move(coordinates)),
      inverses_(std::move(inverses)) {
  for (const auto& inv : inverses_) names_.push_back(inv.name);
  if (arity() > mono::kMaxVars) fail(ErrorKind::IndexOutOfRange, "at most 8 coordinates plus inverses are supported");
  for (std::size_t i = 0; i < names_.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (names_[i] == names_[j]) fail(ErrorKind::SchemaError, "duplicate variable name '" + names_[i] + "'");
  Mono used = 0;
  for (std::size_t k = 0; k < inverses_.size(); ++k) {
    const Poly& u = inverses_[k].u;
    if (u.arity() != n_) fail(ErrorKind::ArityMismatch, "inverted polynomial must live in the coordinates");
    require_same_ring(u.ring(), ring_);
    if (u.degree() < 1) fail(ErrorKind::SchemaError, "inverted polynomial must be non-constant");
    Mono lead = 0;
    for (const auto& [m, c] : u.terms().terms())
      if (grlex_less(lead, m)) lead = m;
    for (int i = 0; i < n_; ++i)
      if (mono::exp(lead, i) && mono::exp(used, i))
        fail(ErrorKind::Unsupported, "leading monomials of inverted polynomials must be coprime");
    used += lead;
    Rule r;
    r.var = n_ + static_cast<int>(k);
    r.lead = lead;
    r.pattern = lead + mono::unit(r.var);
    r.lead_inv = u.coefficient(lead).inverse();
    Poly lifted(arity(), ring_);
    for (const auto& [m, c] : u.terms().terms())
      if (m != lead) lifted += Poly::monomial(arity(), m, c);
    r.tail = lifted;
    rules_.push_back(std::move(r));
    inverses_[k].u = u;
  }
}

int CoordinateAlgebra::index(const std::string& name) const {
  for (int i = 0; i < arity(); ++i)
    if (names_[i] == name) return i;
  fail(ErrorKind::UnknownName, "unknown coordinate '" + name + "'");
}

bool CoordinateAlgebra::is_reduced(Mono m) const {
  for (const auto& r : rules_)
    if (mono::divides(r.pattern, m)) return false;
  return true;
}

// w LM(u) = lc^{-1} (1 - w tail).
Poly CoordinateAlgebra::reduce(const Poly& p) const {
  if (p.arity() != arity()) fail(ErrorKind::ArityMismatch, "polynomial arity does not match the coordinate algebra");
  if (rules_.empty()) return p;
  std::vector<Poly::Terms::Term> work(p.terms().terms().begin(), p.terms().terms().end()), done;
  while (!work.empty()) {
    auto [m, c] = std::move(work.back());
    work.pop_back();
    const Rule* hit = nullptr;
    for (const auto& r : rules_)
      if (mono::divides(r.pattern, m)) {
        hit = &r;
        break;
      }
    if (!hit) {
      done.emplace_back(m, std::move(c));
      continue;
    }
    const Mono rest = mono::quotient(m, hit->pattern);
    const Scalar base = c * hit->lead_inv;
    work.emplace_back(rest, base);
    for (const auto& [t, tc] : hit->tail.terms().terms())
      work.emplace_back(mono::mul(mono::mul(rest, t), mono::unit(hit->var)), -(base * tc));
  }
  return Poly(arity(), ring_, Poly::Terms::from_terms(std::move(done)));
}

Poly CoordinateAlgebra::mul(const Poly& a, const Poly& b) const { return reduce(a * b); }

std::vector<Poly> CoordinateAlgebra::extend_derivation(const std::vector<Poly>& coordinate_images) const {
  if (static_cast<int>(coordinate_images.size()) != n_) fail(ErrorKind::ArityMismatch, "derivation needs one image per coordinate");
  std::vector<Poly> full;
  for (const auto& p : coordinate_images) full.push_back(reduce(p));
  for (std::size_t k = 0; k < inverses_.size(); ++k) {
    Poly u = Poly(arity(), ring_);
    for (const auto& [m, c] : inverses_[k].u.terms().terms()) u += Poly::monomial(arity(), m, c);
    Poly vu(arity(), ring_);
    for (int i = 0; i < n_; ++i) vu += u.derivative(i) * full[i];
    Poly w = variable(n_ + static_cast<int>(k));
    full.push_back(-mul(mul(w, w), vu));
  }
  return full;
}

Poly CoordinateAlgebra::apply_derivation(const std::vector<Poly>& images, const Poly& p) const {
  Poly out(arity(), ring_);
  for (int v = 0; v < arity(); ++v) {
    if (images[v].is_zero()) continue;
    Poly d = p.derivative(v);
    if (!d.is_zero()) out += d * images[v];
  }
  return reduce(out);
}

std::vector<Mono> CoordinateAlgebra::monomials_up_to(int d) const {
  std::vector<Mono> out{Mono{0}};
  for (int i = 0; i < n_; ++i) {
    std::vector<Mono> next;
    for (Mono m : out)
      for (int e = 0; mono::degree(m) + e <= d; ++e) next.push_back(m + mono::unit(i, e));
    out = std::move(next);
  }
  std::sort(out.begin(), out.end(), [](Mono a, Mono b) {
    int da = mono::degree(a), db = mono::degree(b);
    return da != db ? da < db : a < b;
  });
  for (std::size_t k = 0; k < inverses_.size(); ++k) out.push_back(mono::unit(n_ + static_cast<int>(k)));
  return out;
}

std::shared_ptr<const CoordinateAlgebra> CoordinateAlgebra::with_ring(Ring r) const {
  std::vector<Inverse> inv;
  for (const auto& i : inverses_) inv.push_back({i.name, i.u.in_ring(r)});
  return std::make_shared<CoordinateAlgebra>(coord_names_, r, inv);
}

// ---------------------------------------------------------------------------
// ModuleAlgebra

PolyTensor pure_tensor(const Poly& a, const Poly& b) {
  std::vector<PolyTensor::Term> out;
  for (const auto& [ma, ca] : a.terms().terms())
    for (const auto& [mb, cb] : b.terms().terms()) out.emplace_back(PolyPair{ma, mb}, ca * cb);
  return PolyTensor::from_terms(std::move(out));
}

ModuleAlgebra::ModuleAlgebra(CoordinatePtr coords, HopfAlgebra H, std::vector<std::vector<Poly>> images)
    : coords_(std::move(coords)), H_(std::move(H)) {
  require_same_ring(coords_->ring(), H_.ring());
  if (static_cast<int>(images.size()) != H_.dim())
    fail(ErrorKind::ArityMismatch, "action needs one derivation per Lie generator");
  for (const auto& img : images) images_.push_back(coords_->extend_derivation(img));
  // [V_i, V_j] = sum_k c^k_ij V_k on every variable.
  const LieAlgebra& lie = H_.env().lie();
  for (int i = 0; i < H_.dim(); ++i)
    for (int j = i + 1; j < H_.dim(); ++j)
      for (int v = 0; v < coords_->arity(); ++v) {
        Poly lhs = coords_->apply_derivation(images_[i], images_[j][v]) -
                   coords_->apply_derivation(images_[j], images_[i][v]);
        Poly rhs = coords_->zero();
        for (int k = 0; k < H_.dim(); ++k)
          if (!lie.c(i, j, k).is_zero()) rhs += images_[k][v].scaled(lie.c(i, j, k));
        if (!(lhs == rhs))
          fail(ErrorKind::SchemaError, "action does not respect [" + lie.names()[i] + "," + lie.names()[j] +
                                           "] on " + coords_->names()[v]);
      }
}

ModuleAlgebra ModuleAlgebra::with_hopf(HopfAlgebra H) const {
  if (H.env_ptr() != H_.env_ptr()) fail(ErrorKind::SchemaError, "twisted Hopf algebra must share U(g)");
  ModuleAlgebra out(*this);
  out.H_ = std::move(H);
  out.product_memo_ = std::make_shared<ProductMemo>();
  return out;
}

const Poly& ModuleAlgebra::derivation_mono(int g, Mono a) const {
  const auto key = std::make_pair(g, a);
  {
    std::lock_guard<std::mutex> lock(memo_->mutex);
    auto it = memo_->derivation.find(key);
    if (it != memo_->derivation.end()) return *it->second;
  }
  Poly r = coords_->apply_derivation(images_[g], coords_->monomial(a));
  std::lock_guard<std::mutex> lock(memo_->mutex);
  return *memo_->derivation.try_emplace(key, std::make_unique<Poly>(std::move(r))).first->second;
}

Poly ModuleAlgebra::act_generator(int g, const Poly& a) const {
  Poly out = coords_->zero();
  for (const auto& [m, c] : a.terms().terms()) out += derivation_mono(g, m).scaled(c);
  return out;
}

// x^a = x_1^{a_1} ... x_m^{a_m} acts as V_1^{a_1}( ... V_m^{a_m}(f)).
const Poly& ModuleAlgebra::act_mono(Mono xi, Mono a) const {
  const auto key = std::make_pair(xi, a);
  {
    std::lock_guard<std::mutex> lock(memo_->mutex);
    auto it = memo_->action.find(key);
    if (it != memo_->action.end()) return *it->second;
  }
  Poly r = coords_->zero();
  if (xi == 0) {
    r = coords_->monomial(a);
  } else {
    int g = 0;
    while (!mono::exp(xi, g)) ++g;
    const Poly& inner = act_mono(xi - mono::unit(g), a);
    r = act_generator(g, inner);
  }
  std::lock_guard<std::mutex> lock(memo_->mutex);
  return *memo_->action.try_emplace(key, std::make_unique<Poly>(std::move(r))).first->second;
}

Poly ModuleAlgebra::act(const HopfElement& xi, const Poly& a) const {
  if (a.arity() != coords_->arity()) fail(ErrorKind::ArityMismatch, "element does not belong to this algebra");
  Poly out = coords_->zero();
  for (const auto& [mx, cx] : xi.terms().terms())
    for (const auto& [ma, ca] : a.terms().terms()) {
      const Poly& r = act_mono(mx, ma);
      if (!r.is_zero()) out += r.scaled(cx * ca);
    }
  return out;
}

PolyTensor ModuleAlgebra::act_tensor(const TensorElement& t, const Poly& a, const Poly& b) const {
  if (t.rank() != 2) fail(ErrorKind::RankMismatch, "act_tensor expects rank 2");
  std::vector<PolyTensor::Term> out;
  for (const auto& [k, c] : t.terms().terms())
    for (const auto& [ma, ca] : a.terms().terms()) {
      const Poly& l = act_mono(k[0], ma);
      if (l.is_zero()) continue;
      for (const auto& [mb, cb] : b.terms().terms()) {
        const Poly& r = act_mono(k[1], mb);
        if (r.is_zero()) continue;
        const Scalar s = c * ca * cb;
        for (const auto& [ml, cl] : l.terms().terms())
          for (const auto& [mr, cr] : r.terms().terms()) out.emplace_back(PolyPair{ml, mr}, s * cl * cr);
      }
    }
  return PolyTensor::from_terms(std::move(out));
}

const Poly& ModuleAlgebra::mul_mono(Mono a, Mono b) const {
  const auto key = std::make_pair(a, b);
  {
    std::lock_guard<std::mutex> lock(product_memo_->mutex);
    auto it = product_memo_->product.find(key);
    if (it != product_memo_->product.end()) return *it->second;
  }
  Poly r = coords_->zero();
  if (!H_.is_twisted()) {
    r = coords_->monomial(mono::mul(a, b));
  } else {
    const Scalar one(ring(), Rational(1));
    PolyTensor t = act_tensor(H_.twist_inverse(), Poly::monomial(coords_->arity(), a, one),
                              Poly::monomial(coords_->arity(), b, one));
    std::vector<Poly::Terms::Term> acc;
    for (const auto& [pair, c] : t.terms()) acc.emplace_back(mono::mul(pair.first, pair.second), c);
    r = coords_->reduce(Poly(coords_->arity(), ring(), Poly::Terms::from_terms(std::move(acc))));
  }
  std::lock_guard<std::mutex> lock(product_memo_->mutex);
  return *product_memo_->product.try_emplace(key, std::make_unique<Poly>(std::move(r))).first->second;
}

Poly ModuleAlgebra::mul(const Poly& a, const Poly& b) const {
  if (a.arity() != coords_->arity() || b.arity() != coords_->arity())
    fail(ErrorKind::ArityMismatch, "element does not belong to this algebra");
  if (!H_.is_twisted()) return coords_->mul(a, b);
  Poly out = coords_->zero();
  for (const auto& [ma, ca] : a.terms().terms())
    for (const auto& [mb, cb] : b.terms().terms()) out += mul_mono(ma, mb).scaled(ca * cb);
  return out;
}

Poly ModuleAlgebra::multiply(const PolyTensor& t) const {
  Poly out = coords_->zero();
  for (const auto& [pair, c] : t.terms()) out += mul_mono(pair.first, pair.second).scaled(c);
  return out;
}

PolyTensor ModuleAlgebra::braid(const PolyTensor& t) const {
  const Scalar one(ring(), Rational(1));
  PolyTensor out;
  for (const auto& [pair, c] : t.terms()) {
    PolyTensor b = act_tensor(H_.Rinv(), Poly::monomial(coords_->arity(), pair.second, one),
                              Poly::monomial(coords_->arity(), pair.first, one));
    out += b.scaled(c);
  }
  return out;
}

PolyTensor ModuleAlgebra::braid(const Poly& a, const Poly& b) const { return braid(pure_tensor(a, b)); }

std::string ModuleAlgebra::str(const PolyTensor& t) const {
  if (t.is_zero()) return "0";
  std::string out;
  for (const auto& [pair, c] : t.terms()) {
    if (!out.empty()) out += " + ";
    out += "(" + c.str() + ") " + mono::str(pair.first, coords_->names()) + " (x) " +
           mono::str(pair.second, coords_->names());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Checks

Report check_module_algebra(const ModuleAlgebra& A, int depth, int degree) {
  Report report;
  const auto& H = A.hopf();
  const auto& C = A.coords();
  const auto xis = H.env().monomials_up_to(depth);
  const auto monos = C.monomials_up_to(degree);
  const Scalar one(A.ring(), Rational(1));
  auto P = [&](Mono m) { return C.monomial(m); };
  {
    CheckScope c(report, "modalg", "module-algebra", "xi |> (a b) = (xi_(1) |> a)(xi_(2) |> b)");
    for (Mono x : xis) {
      const TensorElement& d = H.coproduct_mono(x);
      for (Mono a : monos)
        for (Mono b : monos) {
          Poly lhs = A.act(HopfElement::monomial(x, one), A.mul(P(a), P(b)));
          Poly rhs = A.multiply(A.act_tensor(d, P(a), P(b)));
          if (!c.expect_lazy(lhs == rhs, [&] {
                return "xi = " + mono::str(x, H.names()) + ", a = " + C.str(P(a)) + ", b = " + C.str(P(b));
              }))
            goto done_leibniz;
        }
    }
  done_leibniz:;
  }
  {
    CheckScope c(report, "modalg", "unit", "xi |> 1 = eps(xi) 1");
    for (Mono x : xis) {
      HopfElement xi = HopfElement::monomial(x, one);
      if (!c.expect(A.act(xi, C.one()) == C.constant(H.counit(xi)), mono::str(x, H.names()))) break;
    }
  }
  {
    CheckScope c(report, "modalg", "bracket-compatibility", "[x_i, x_j] |> a = x_i |> x_j |> a - x_j |> x_i |> a");
    const auto& U = H.env();
    for (int i = 0; i < U.dim() && !c.failed(); ++i)
      for (int j = 0; j < U.dim() && !c.failed(); ++j)
        for (Mono a : monos) {
          HopfElement br = U.mul(U.generator(i), U.generator(j)) - U.mul(U.generator(j), U.generator(i));
          Poly lhs = A.act(br, P(a));
          Poly rhs = A.act_generator(i, A.act_generator(j, P(a))) - A.act_generator(j, A.act_generator(i, P(a)));
          if (!c.expect(lhs == rhs, U.names()[i] + "," + U.names()[j] + " on " + C.str(P(a)))) break;
        }
  }
  return report;
}

Report check_braided_commutative(const ModuleAlgebra& A, const TriangularStructure& tri, int degree) {
  Report report;
  const auto& C = A.coords();
  const auto monos = C.monomials_up_to(degree);
  CheckScope c(report, "modalg", "braided-commutativity", "b a = (R^{-1}_1 |> a)(R^{-1}_2 |> b)");
  for (Mono a : monos)
    for (Mono b : monos) {
      Poly pa = C.monomial(a), pb = C.monomial(b);
      Poly lhs = A.mul(pb, pa);
      Poly rhs = A.multiply(A.act_tensor(tri.Rinv, pa, pb));
      if (!c.expect_lazy(lhs == rhs, [&] { return "a = " + C.str(pa) + ", b = " + C.str(pb); })) return report;
    }
  return report;
}

Report check_star_associative(const ModuleAlgebra& A, int degree) {
  Report report;
  const auto& C = A.coords();
  const auto monos = C.monomials_up_to(degree);
  CheckScope c(report, "modalg", "associativity", "(a b) c = a (b c)");
  for (Mono a : monos)
    for (Mono b : monos) {
      Poly ab = A.mul(C.monomial(a), C.monomial(b));
      for (Mono d : monos) {
        Poly lhs = A.mul(ab, C.monomial(d));
        Poly rhs = A.mul(C.monomial(a), A.mul(C.monomial(b), C.monomial(d)));
        if (!c.expect_lazy(lhs == rhs, [&] {
              return C.str(C.monomial(a)) + ", " + C.str(C.monomial(b)) + ", " + C.str(C.monomial(d));
            }))
          return report;
      }
    }
  return report;
}

Report check_braiding_involutive(const ModuleAlgebra& A, int degree) {
  Report report;
  const auto& C = A.coords();
  const auto monos = C.monomials_up_to(degree);
  CheckScope c(report, "modalg", "braiding-involutive", "c o c = id");
  const Scalar one(A.ring(), Rational(1));
  for (Mono a : monos)
    for (Mono b : monos) {
      PolyTensor t(PolyPair{a, b}, one);
      if (!c.expect_lazy(A.braid(A.braid(t)) == t, [&] { return C.str(C.monomial(a)) + " (x) " + C.str(C.monomial(b)); }))
        return report;
    }
  return report;
}

}  // namespace braid
