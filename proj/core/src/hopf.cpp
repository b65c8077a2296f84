#include "braid/hopf.hpp"

#include <sstream>

#include "braid/errors.hpp"

namespace braid {

// ---------------------------------------------------------------------------
// LieAlgebra

LieAlgebra::LieAlgebra(std::vector<std::string> names, Ring ring, std::vector<std::vector<std::vector<Scalar>>> c)
    : names_(std::move(names)), ring_(ring), c_(std::move(c)) {
  const int m = dim();
  if (m > mono::kMaxVars) fail(ErrorKind::IndexOutOfRange, "at most 8 Lie generators are supported");
  if (static_cast<int>(c_.size()) != m) fail(ErrorKind::SchemaError, "structure constant table has wrong size");
  for (const auto& row : c_) {
    if (static_cast<int>(row.size()) != m) fail(ErrorKind::SchemaError, "structure constant table has wrong size");
    for (const auto& col : row)
      if (static_cast<int>(col.size()) != m) fail(ErrorKind::SchemaError, "structure constant table has wrong size");
  }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        require_same_ring(ring_, c_[i][j][k].ring());
        if (!(c_[i][j][k] == -c_[j][i][k]))
          fail(ErrorKind::JacobiViolation, "bracket not antisymmetric at [" + names_[i] + "," + names_[j] + "]");
      }
  // sum over cyclic (i,j,k) of [x_i,[x_j,x_k]] must vanish.
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int out = 0; out < m; ++out) {
          Scalar s(ring_);
          for (int l = 0; l < m; ++l) {
            s += c_[j][k][l] * c_[i][l][out];
            s += c_[k][i][l] * c_[j][l][out];
            s += c_[i][j][l] * c_[k][l][out];
          }
          if (!s.is_zero())
            fail(ErrorKind::JacobiViolation,
                 "Jacobi identity fails for (" + names_[i] + "," + names_[j] + "," + names_[k] + ")");
        }
}

LieAlgebra LieAlgebra::abelian(std::vector<std::string> names, Ring ring) {
  const std::size_t m = names.size();
  std::vector<std::vector<std::vector<Scalar>>> c(m, std::vector<std::vector<Scalar>>(m, std::vector<Scalar>(m, Scalar(ring))));
  return LieAlgebra(std::move(names), ring, std::move(c));
}

int LieAlgebra::index(const std::string& name) const {
  for (int i = 0; i < dim(); ++i)
    if (names_[i] == name) return i;
  fail(ErrorKind::UnknownName, "unknown Lie generator '" + name + "'");
}

bool LieAlgebra::bracket_zero(int i, int j) const {
  for (int k = 0; k < dim(); ++k)
    if (!c_[i][j][k].is_zero()) return false;
  return true;
}

bool LieAlgebra::is_abelian() const {
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j)
      if (!bracket_zero(i, j)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// HopfElement / TensorElement

Scalar HopfElement::coefficient(Mono m) const {
  const Scalar* c = terms_.find(m);
  return c ? *c : Scalar(ring_);
}

int HopfElement::degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_.terms()) d = std::max(d, mono::degree(m));
  return d;
}

HopfElement& HopfElement::operator+=(const HopfElement& o) {
  require_same_ring(ring_, o.ring_);
  terms_ += o.terms_;
  return *this;
}

HopfElement& HopfElement::operator-=(const HopfElement& o) {
  require_same_ring(ring_, o.ring_);
  terms_ -= o.terms_;
  return *this;
}

static std::string coef_prefix(const Scalar& c, bool first, bool is_unit_key) {
  std::string cs = c.str();
  bool compound = cs.find(' ') != std::string::npos;
  bool neg = !compound && cs[0] == '-';
  if (neg) cs = cs.substr(1);
  std::string out = first ? (neg ? "-" : "") : (neg ? " - " : " + ");
  if (compound) cs = "(" + cs + ")";
  if (is_unit_key) return out + cs;
  return cs == "1" ? out : out + cs + " ";
}

std::string HopfElement::str(const std::vector<std::string>& names) const {
  if (is_zero()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_.terms()) {
    out += coef_prefix(c, out.empty(), m == 0);
    if (m != 0) out += mono::str(m, names);
  }
  return out;
}

TensorElement TensorElement::unit(int rank, Ring ring) {
  return TensorElement(rank, ring, Terms(TensorKey{}, Scalar(ring, Rational(1))));
}

TensorElement TensorElement::pure(const std::vector<HopfElement>& legs) {
  const int r = static_cast<int>(legs.size());
  if (r < 1 || r > 3) fail(ErrorKind::RankMismatch, "tensor rank must be 1..3");
  Ring ring = legs[0].ring();
  std::vector<Terms::Term> acc{{TensorKey{}, Scalar(ring, Rational(1))}};
  for (int i = 0; i < r; ++i) {
    std::vector<Terms::Term> next;
    for (const auto& [k, c] : acc)
      for (const auto& [m, mc] : legs[i].terms().terms()) {
        TensorKey nk = k;
        nk[i] = m;
        next.emplace_back(nk, c * mc);
      }
    acc = std::move(next);
  }
  return TensorElement(r, ring, Terms::from_terms(std::move(acc)));
}

TensorElement& TensorElement::operator+=(const TensorElement& o) {
  if (rank_ != o.rank_) fail(ErrorKind::RankMismatch, "adding tensors of different rank");
  terms_ += o.terms_;
  return *this;
}

TensorElement& TensorElement::operator-=(const TensorElement& o) {
  if (rank_ != o.rank_) fail(ErrorKind::RankMismatch, "subtracting tensors of different rank");
  terms_ -= o.terms_;
  return *this;
}

TensorElement TensorElement::permuted(const std::vector<int>& perm) const {
  if (static_cast<int>(perm.size()) != rank_) fail(ErrorKind::BadPositions, "permutation size");
  std::vector<Terms::Term> out;
  out.reserve(terms_.size());
  for (const auto& [k, c] : terms_.terms()) {
    TensorKey nk{};
    for (int i = 0; i < rank_; ++i) nk[i] = k[perm[i]];
    out.emplace_back(nk, c);
  }
  return TensorElement(rank_, ring_, Terms::from_terms(std::move(out)));
}

TensorElement TensorElement::leg_embed(int r, const std::vector<int>& positions) const {
  if (static_cast<int>(positions.size()) != rank_ || r > 3 || r < rank_)
    fail(ErrorKind::BadPositions, "leg embedding needs one distinct position per leg");
  std::array<bool, 3> used{};
  for (int p : positions) {
    if (p < 0 || p >= r || used[p]) fail(ErrorKind::BadPositions, "leg positions must be distinct and in range");
    used[p] = true;
  }
  std::vector<Terms::Term> out;
  out.reserve(terms_.size());
  for (const auto& [k, c] : terms_.terms()) {
    TensorKey nk{};
    for (int i = 0; i < rank_; ++i) nk[positions[i]] = k[i];
    out.emplace_back(nk, c);
  }
  return TensorElement(r, ring_, Terms::from_terms(std::move(out)));
}

TensorElement TensorElement::truncated(int n) const {
  std::vector<Terms::Term> out;
  for (const auto& [k, c] : terms_.terms()) out.emplace_back(k, c.truncated(n));
  return TensorElement(rank_, ring_, Terms::from_terms(std::move(out)));
}

std::string TensorElement::str(const std::vector<std::string>& names) const {
  if (is_zero()) return "0";
  std::string out;
  for (const auto& [k, c] : terms_.terms()) {
    out += coef_prefix(c, out.empty(), false);
    for (int i = 0; i < rank_; ++i) {
      if (i) out += "(x)";
      out += mono::str(k[i], names, " ");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Enveloping

Enveloping::Enveloping(LieAlgebra lie) : lie_(std::move(lie)), antipode_override_(lie_.dim()) {}

HopfElement Enveloping::generator(int i) const {
  if (i < 0 || i >= dim()) fail(ErrorKind::IndexOutOfRange, "generator index " + std::to_string(i));
  return HopfElement::generator(ring(), i);
}

static int lowest_generator(Mono m) {
  for (int i = 0; i < mono::kMaxVars; ++i)
    if (mono::exp(m, i)) return i;
  return mono::kMaxVars;
}

// x_j * x^m in PBW form. With i the lowest generator of m and j > i:
// x_j x_i m' = x_i (x_j m') + [x_j, x_i] m'.
const HopfElement& Enveloping::mul_gen_left(int j, Mono m) const {
  const auto key = std::make_pair(j, m);
  {
    std::lock_guard<std::mutex> lock(memo_mutex_);
    auto it = gen_memo_.find(key);
    if (it != gen_memo_.end()) return *it->second;
  }
  HopfElement result(ring());
  const int i = lowest_generator(m);
  const Scalar one(ring(), Rational(1));
  if (j <= i) {
    result = HopfElement::monomial(mono::mul(m, mono::unit(j)), one);
  } else {
    const Mono rest = m - mono::unit(i);
    HopfElement inner = mul_gen_left(j, rest);
    result = mul_gen_left(i, inner);
    for (int k = 0; k < dim(); ++k) {
      const Scalar& c = lie_.c(j, i, k);
      if (c.is_zero()) continue;
      result += mul_gen_left(k, rest).scaled(c);
    }
  }
  std::lock_guard<std::mutex> lock(memo_mutex_);
  auto [it, inserted] = gen_memo_.try_emplace(key, std::make_unique<HopfElement>(std::move(result)));
  return *it->second;
}

HopfElement Enveloping::mul_gen_left(int j, const HopfElement& h) const {
  HopfElement out(ring());
  for (const auto& [m, c] : h.terms().terms()) out += mul_gen_left(j, m).scaled(c);
  return out;
}

const HopfElement& Enveloping::mul_mono(Mono a, Mono b) const {
  const auto key = std::make_pair(a, b);
  {
    std::lock_guard<std::mutex> lock(memo_mutex_);
    auto it = mono_memo_.find(key);
    if (it != mono_memo_.end()) return *it->second;
  }
  // x^a x^b: multiply x^b on the left by the generators of x^a, highest first.
  HopfElement acc = HopfElement::monomial(b, Scalar(ring(), Rational(1)));
  for (int i = dim() - 1; i >= 0; --i)
    for (int e = 0; e < mono::exp(a, i); ++e) acc = mul_gen_left(i, acc);
  std::lock_guard<std::mutex> lock(memo_mutex_);
  auto [it, inserted] = mono_memo_.try_emplace(key, std::make_unique<HopfElement>(std::move(acc)));
  return *it->second;
}

HopfElement Enveloping::mul(const HopfElement& a, const HopfElement& b) const {
  require_same_ring(a.ring(), b.ring());
  std::vector<HopfElement::Terms::Term> out;
  for (const auto& [ma, ca] : a.terms().terms())
    for (const auto& [mb, cb] : b.terms().terms()) {
      Scalar c = ca * cb;
      if (c.is_zero()) continue;
      for (const auto& [m, mc] : mul_mono(ma, mb).terms().terms()) out.emplace_back(m, c * mc);
    }
  return HopfElement(ring(), HopfElement::Terms::from_terms(std::move(out)));
}

HopfElement Enveloping::pbw_normalize(const std::vector<int>& word, const Scalar& coeff) const {
  for (int g : word)
    if (g < 0 || g >= dim()) fail(ErrorKind::IndexOutOfRange, "generator index " + std::to_string(g));
  HopfElement acc = HopfElement::unit(ring()).scaled(coeff);
  for (auto it = word.rbegin(); it != word.rend(); ++it) acc = mul_gen_left(*it, acc);
  return acc;
}

static std::int64_t binomial(int n, int k) {
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Delta(x^a) = sum_k prod_i binom(a_i, k_i) x^k (x) x^{a-k}; already PBW ordered.
TensorElement Enveloping::coproduct(const HopfElement& h) const {
  std::vector<TensorElement::Terms::Term> out;
  for (const auto& [m, c] : h.terms().terms()) {
    std::vector<std::pair<Mono, std::int64_t>> parts{{Mono{0}, 1}};
    for (int i = 0; i < dim(); ++i) {
      const int a = mono::exp(m, i);
      if (!a) continue;
      std::vector<std::pair<Mono, std::int64_t>> next;
      for (const auto& [k, w] : parts)
        for (int e = 0; e <= a; ++e) next.emplace_back(k + mono::unit(i, e), w * binomial(a, e));
      parts = std::move(next);
    }
    for (const auto& [k, w] : parts) out.emplace_back(TensorKey{k, m - k, 0}, c * Rational(w));
  }
  return TensorElement(2, ring(), TensorElement::Terms::from_terms(std::move(out)));
}

void Enveloping::override_antipode(int generator, HopfElement image) {
  if (generator < 0 || generator >= dim()) fail(ErrorKind::IndexOutOfRange, "antipode override index");
  antipode_override_[generator] = std::move(image);
}

// S(x_{i_1} ... x_{i_k}) = S(x_{i_k}) ... S(x_{i_1}).
HopfElement Enveloping::antipode(const HopfElement& h) const {
  HopfElement out(ring());
  for (const auto& [m, c] : h.terms().terms()) {
    HopfElement acc = HopfElement::unit(ring()).scaled(c);
    for (int i = 0; i < dim(); ++i)
      for (int e = 0; e < mono::exp(m, i); ++e) {
        HopfElement s = antipode_override_[i] ? *antipode_override_[i] : -generator(i);
        acc = mul(s, acc);
      }
    out += acc;
  }
  return out;
}

TensorElement Enveloping::tensor_mul(const TensorElement& t, const TensorElement& u) const {
  if (t.rank() != u.rank()) fail(ErrorKind::RankMismatch, "tensor product of different ranks");
  require_same_ring(t.ring(), u.ring());
  const int r = t.rank();
  std::vector<TensorElement::Terms::Term> out;
  for (const auto& [kt, ct] : t.terms().terms())
    for (const auto& [ku, cu] : u.terms().terms()) {
      Scalar c = ct * cu;
      if (c.is_zero()) continue;
      std::vector<TensorElement::Terms::Term> acc{{TensorKey{}, c}};
      for (int i = 0; i < r; ++i) {
        const HopfElement& leg = mul_mono(kt[i], ku[i]);
        std::vector<TensorElement::Terms::Term> next;
        next.reserve(acc.size() * leg.terms().size());
        for (const auto& [k, kc] : acc)
          for (const auto& [m, mc] : leg.terms().terms()) {
            TensorKey nk = k;
            nk[i] = m;
            next.emplace_back(nk, kc * mc);
          }
        acc = std::move(next);
      }
      for (auto& term : acc) out.push_back(std::move(term));
    }
  return TensorElement(r, ring(), TensorElement::Terms::from_terms(std::move(out)));
}

TensorElement Enveloping::tensor_mul(std::initializer_list<const TensorElement*> factors) const {
  auto it = factors.begin();
  TensorElement acc = **it;
  for (++it; it != factors.end(); ++it) acc = tensor_mul(acc, **it);
  return acc;
}

HopfElement Enveloping::multiply_legs(const TensorElement& t) const {
  if (t.rank() != 2) fail(ErrorKind::RankMismatch, "multiply_legs expects rank 2");
  HopfElement out(ring());
  for (const auto& [k, c] : t.terms().terms()) out += mul_mono(k[0], k[1]).scaled(c);
  return out;
}

TensorElement Enveloping::tensor_inverse(const TensorElement& t) const {
  const TensorElement one = TensorElement::unit(t.rank(), ring());
  const TensorElement u = one - t;
  for (const auto& [k, c] : u.terms().terms())
    if (!c.coeff(0).is_zero()) fail(ErrorKind::NotInvertible, "tensor is not 1 + O(h)");
  // t^{-1} = sum_k u^k, nilpotent since u = O(h).
  TensorElement sum = one, power = one;
  for (int k = 1; k < ring().width(); ++k) {
    power = tensor_mul(power, u);
    if (power.is_zero()) break;
    sum += power;
  }
  return sum;
}

HopfElement Enveloping::inverse(const HopfElement& h) const {
  const Scalar c0 = counit(h);
  // h = c0 - u with u of positive h-order in its non-unit part; normalize first.
  if (c0.coeff(0).is_zero()) fail(ErrorKind::NotInvertible, "element has no invertible constant term");
  const Scalar c0inv = c0.inverse();
  const HopfElement one = unit();
  const HopfElement u = one - h.scaled(c0inv);
  for (const auto& [m, c] : u.terms().terms())
    if (!c.coeff(0).is_zero()) fail(ErrorKind::NotInvertible, "element is not a unit plus O(h)");
  HopfElement sum = one, power = one;
  for (int k = 1; k < ring().width(); ++k) {
    power = mul(power, u);
    if (power.is_zero()) break;
    sum += power;
  }
  return sum.scaled(c0inv);
}

TensorElement Enveloping::antipode_leg(const TensorElement& t, int leg) const {
  return map_leg(t, leg, 1, [&](const HopfElement& x) { return TensorElement::pure({antipode(x)}); });
}

TensorElement Enveloping::counit_leg(const TensorElement& t, int leg) const {
  if (t.rank() < 2) fail(ErrorKind::RankMismatch, "counit on a rank-1 tensor");
  std::vector<TensorElement::Terms::Term> out;
  for (const auto& [k, c] : t.terms().terms()) {
    if (k[leg] != 0) continue;
    TensorKey nk{};
    int pos = 0;
    for (int i = 0; i < t.rank(); ++i)
      if (i != leg) nk[pos++] = k[i];
    out.emplace_back(nk, c);
  }
  return TensorElement(t.rank() - 1, ring(), TensorElement::Terms::from_terms(std::move(out)));
}

std::vector<Mono> Enveloping::monomials_up_to(int degree) const {
  std::vector<Mono> out{Mono{0}};
  for (int i = 0; i < dim(); ++i) {
    std::vector<Mono> next;
    for (Mono m : out)
      for (int e = 0; mono::degree(m) + e <= degree; ++e) next.push_back(m + mono::unit(i, e));
    out = std::move(next);
  }
  std::sort(out.begin(), out.end(), [](Mono a, Mono b) {
    int da = mono::degree(a), db = mono::degree(b);
    return da != db ? da < db : a < b;
  });
  return out;
}

// ---------------------------------------------------------------------------
// HopfAlgebra

HopfAlgebra::HopfAlgebra(std::shared_ptr<const Enveloping> u)
    : HopfAlgebra(u, TensorElement::unit(2, u->ring()), TensorElement::unit(2, u->ring())) {
  twisted_ = false;
}

HopfAlgebra::HopfAlgebra(std::shared_ptr<const Enveloping> u, TensorElement F, TensorElement Finv)
    : u_(std::move(u)), twisted_(true), F_(std::move(F)), Finv_(std::move(Finv)) {
  if (F_.rank() != 2 || Finv_.rank() != 2) fail(ErrorKind::RankMismatch, "twist must have rank 2");
  if (!(u_->tensor_mul(F_, Finv_) == TensorElement::unit(2, ring())))
    fail(ErrorKind::NotInvertible, "supplied twist inverse is not an inverse");
  // beta = F_1 S(F_2)
  beta_ = u_->multiply_legs(u_->antipode_leg(F_, 1));
  try {
    beta_inv_ = u_->inverse(beta_);
  } catch (const Error&) {
    fail(ErrorKind::BetaNotInvertible, "beta = " + beta_.str(names()));
  }
  if (!(u_->mul(beta_, beta_inv_) == u_->unit())) fail(ErrorKind::BetaNotInvertible, "beta series inverse failed");
  const TensorElement F21 = F_.flipped(), Finv21 = Finv_.flipped();
  tri_.R = u_->tensor_mul(F21, Finv_);
  tri_.Rinv = u_->tensor_mul(F_, Finv21);
}

const TensorElement& HopfAlgebra::coproduct_mono(Mono m) const {
  {
    std::lock_guard<std::mutex> lock(memo_->mutex);
    auto it = memo_->coproduct.find(m);
    if (it != memo_->coproduct.end()) return *it->second;
  }
  TensorElement d = u_->coproduct(HopfElement::monomial(m, Scalar(ring(), Rational(1))));
  if (twisted_) d = u_->tensor_mul({&F_, &d, &Finv_});
  std::lock_guard<std::mutex> lock(memo_->mutex);
  auto [it, inserted] = memo_->coproduct.try_emplace(m, std::make_unique<TensorElement>(std::move(d)));
  return *it->second;
}

TensorElement HopfAlgebra::coproduct(const HopfElement& h) const {
  TensorElement out(2, ring());
  for (const auto& [m, c] : h.terms().terms()) out += coproduct_mono(m).scaled(c);
  return out;
}

HopfElement HopfAlgebra::antipode(const HopfElement& h) const {
  HopfElement s = u_->antipode(h);
  if (!twisted_) return s;
  return u_->mul(u_->mul(beta_, s), beta_inv_);
}

TensorElement HopfAlgebra::coproduct_leg(const TensorElement& t, int leg) const {
  if (t.rank() >= 3) fail(ErrorKind::RankMismatch, "coproduct on a rank-3 tensor would exceed rank 3");
  return u_->map_leg(t, leg, 2, [&](const HopfElement& x) { return coproduct(x); });
}

TensorElement HopfAlgebra::antipode_leg(const TensorElement& t, int leg) const {
  return u_->map_leg(t, leg, 1, [&](const HopfElement& x) { return TensorElement::pure({antipode(x)}); });
}

// ---------------------------------------------------------------------------
// Checks

Report check_hopf(const HopfAlgebra& H, int depth) {
  Report report;
  const Enveloping& U = H.env();
  const auto monos = U.monomials_up_to(depth);
  const Scalar one(H.ring(), Rational(1));
  auto name_of = [&](Mono m) { return mono::str(m, H.names()); };
  {
    CheckScope c(report, "hopf", "coassociativity", "(Delta (x) id) Delta = (id (x) Delta) Delta");
    for (Mono m : monos) {
      TensorElement d = H.coproduct_mono(m);
      if (!c.expect(H.coproduct_leg(d, 0) == H.coproduct_leg(d, 1), name_of(m))) break;
    }
  }
  {
    CheckScope c(report, "hopf", "counit", "(eps (x) id) Delta = id = (id (x) eps) Delta");
    for (Mono m : monos) {
      TensorElement d = H.coproduct_mono(m);
      TensorElement x = TensorElement::pure({HopfElement::monomial(m, one)});
      if (!c.expect(U.counit_leg(d, 0) == x && U.counit_leg(d, 1) == x, name_of(m))) break;
    }
  }
  {
    CheckScope c(report, "hopf", "antipode", "mu (S (x) id) Delta = eta eps = mu (id (x) S) Delta");
    for (Mono m : monos) {
      TensorElement d = H.coproduct_mono(m);
      HopfElement expected = m == 0 ? U.unit() : HopfElement(H.ring());
      HopfElement left = U.multiply_legs(H.antipode_leg(d, 0));
      HopfElement right = U.multiply_legs(H.antipode_leg(d, 1));
      if (!c.expect(left == expected && right == expected, name_of(m))) break;
    }
  }
  return report;
}

Report check_triangular(const HopfAlgebra& H, const TriangularStructure& tri, int depth) {
  Report report;
  const Enveloping& U = H.env();
  const auto& R = tri.R;
  const auto one2 = TensorElement::unit(2, H.ring());
  auto names = H.names();
  {
    CheckScope c(report, "triangular", "quasi-cocommutativity", "Delta_21(xi) R = R Delta(xi)");
    for (Mono m : U.monomials_up_to(depth)) {
      const TensorElement& d = H.coproduct_mono(m);
      if (!c.expect(U.tensor_mul(d.flipped(), R) == U.tensor_mul(R, d), mono::str(m, names))) break;
    }
  }
  const TensorElement R12 = R.leg_embed(3, {0, 1}), R13 = R.leg_embed(3, {0, 2}), R23 = R.leg_embed(3, {1, 2});
  {
    CheckScope c(report, "triangular", "hexagon-left", "(Delta (x) id) R = R_13 R_23");
    c.expect_lazy(H.coproduct_leg(R, 0) == U.tensor_mul(R13, R23), [&] { return "R = " + R.str(names); });
  }
  {
    CheckScope c(report, "triangular", "hexagon-right", "(id (x) Delta) R = R_13 R_12");
    c.expect_lazy(H.coproduct_leg(R, 1) == U.tensor_mul(R13, R12), [&] { return "R = " + R.str(names); });
  }
  {
    CheckScope c(report, "triangular", "inverse-witness", "R R^{-1} = 1 (x) 1 = R^{-1} R");
    c.expect_lazy(U.tensor_mul(R, tri.Rinv) == one2 && U.tensor_mul(tri.Rinv, R) == one2,
                  [&] { return "R^{-1} = " + tri.Rinv.str(names); });
  }
  {
    CheckScope c(report, "triangular", "unitarity", "R_21 R = 1 (x) 1");
    TensorElement prod = U.tensor_mul(R.flipped(), R);
    c.expect_lazy(prod == one2, [&] { return "R_21 R = " + prod.str(names); });
  }
  {
    CheckScope c(report, "triangular", "yang-baxter", "R_12 R_13 R_23 = R_23 R_13 R_12");
    c.expect(U.tensor_mul({&R12, &R13, &R23}) == U.tensor_mul({&R23, &R13, &R12}), "R = " + R.str(names));
  }
  return report;
}

}  // namespace braid
