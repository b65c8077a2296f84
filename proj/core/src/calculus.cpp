#include "braid/calculus.hpp"

#include <functional>
#include <sstream>

#include "braid/errors.hpp"

namespace braid {

namespace {

Scalar unit_scalar(Ring r) { return Scalar(r, Rational(1)); }
Scalar sign_scalar(Ring r, int s) { return Scalar(r, Rational(s)); }

// Sign of e_a ^ e_b in the exterior algebra of the frame symbols; 0 on overlap.
int word_sign(Word a, Word b) {
  if (a & b) return 0;
  int inversions = 0;
  for (Word rest = b; rest; rest &= rest - 1) {
    const int j = word_first(rest);
    inversions += word_grade(a >> (j + 1));
  }
  return (inversions % 2) ? -1 : 1;
}

template <class Combo>
Combo combo_wedge(const Combo& x, const Combo& y) {
  std::vector<typename Combo::Term> out;
  for (const auto& [wa, ca] : x.terms())
    for (const auto& [wb, cb] : y.terms()) {
      const int s = word_sign(wa, wb);
      if (s) out.emplace_back(wa | wb, s > 0 ? ca * cb : -(ca * cb));
    }
  return Combo::from_terms(std::move(out));
}

std::vector<int> word_indices(Word w) {
  std::vector<int> out;
  for (; w; w &= w - 1) out.push_back(word_first(w));
  return out;
}

Matrix identity_matrix(int k, Ring r) {
  Matrix m(k, std::vector<Scalar>(k, Scalar(r)));
  for (int i = 0; i < k; ++i) m[i][i] = unit_scalar(r);
  return m;
}

Matrix matmul(const Matrix& a, const Matrix& b, Ring r) {
  const std::size_t n = a.size();
  Matrix out(n, std::vector<Scalar>(n, Scalar(r)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < n; ++l) {
      if (a[i][l].is_zero()) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (!b[l][j].is_zero()) out[i][j] += a[i][l] * b[l][j];
    }
  return out;
}

bool is_zero_matrix(const Matrix& m) {
  for (const auto& row : m)
    for (const auto& e : row)
      if (!e.is_zero()) return false;
  return true;
}

bool is_constant(const Poly& p) {
  for (const auto& [m, c] : p.terms().terms())
    if (m != 0) return false;
  return true;
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

// Rank-2 tensor terms as (leg1, leg2, coefficient).
template <class T>
std::vector<T> split_terms(const TensorElement& t) {
  std::vector<T> out;
  for (const auto& [key, c] : t.terms().terms()) out.push_back(T{key[0], key[1], c});
  return out;
}

}  // namespace

// ---------------------------------------------------------------- Graded

int Graded::grade() const {
  if (terms_.is_zero()) return 0;
  const int g = word_grade(terms_.terms().front().first.first);
  for (const auto& [k, c] : terms_.terms())
    if (word_grade(k.first) != g) fail(ErrorKind::GradeMismatch, "element is not homogeneous");
  return g;
}

int Graded::max_grade() const {
  int g = 0;
  for (const auto& [k, c] : terms_.terms()) g = std::max(g, word_grade(k.first));
  return g;
}

Graded Graded::component(int p) const {
  std::vector<Terms::Term> out;
  for (const auto& t : terms_.terms())
    if (word_grade(t.first.first) == p) out.push_back(t);
  return Graded(kind_, arity_, ring_, Terms::from_terms(std::move(out)));
}

Poly Graded::coefficient(Word w) const {
  std::vector<Poly::Terms::Term> out;
  for (const auto& [k, c] : terms_.terms())
    if (k.first == w) out.emplace_back(k.second, c);
  return Poly(arity_, ring_, Poly::Terms::from_terms(std::move(out)));
}

Graded Graded::truncated(int n) const {
  std::vector<Terms::Term> out;
  for (const auto& [k, c] : terms_.terms()) out.emplace_back(k, c.truncated(n));
  return Graded(kind_, arity_, ring_, Terms::from_terms(std::move(out)));
}

Graded& Graded::operator+=(const Graded& o) {
  if (terms_.is_zero()) kind_ = o.kind_;
  else if (!o.terms_.is_zero() && o.kind_ != kind_) fail(ErrorKind::GradeMismatch, "cannot add a form to a multivector");
  terms_ += o.terms_;
  return *this;
}

Graded& Graded::operator-=(const Graded& o) {
  if (terms_.is_zero()) kind_ = o.kind_;
  else if (!o.terms_.is_zero() && o.kind_ != kind_) fail(ErrorKind::GradeMismatch, "cannot add a form to a multivector");
  terms_ -= o.terms_;
  return *this;
}

// ---------------------------------------------------------------- matrices

PolyMatrix invert_matrix(const PolyMatrix& M, const ModuleAlgebra& A, bool plain) {
  const int n = static_cast<int>(M.size());
  const auto& C = A.coords();
  auto mul = [&](const Poly& a, const Poly& b) { return plain ? A.plain_mul(a, b) : A.mul(a, b); };
  PolyMatrix work = M, inv(n, std::vector<Poly>(n, C.zero()));
  for (int i = 0; i < n; ++i) inv[i][i] = C.one();
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n && pivot < 0; ++r)
      if (is_constant(work[r][col]) && work[r][col].constant_term().valuation() == 0) pivot = r;
    if (pivot < 0) fail(ErrorKind::FramePairingSingular, "no constant invertible pivot in column " + std::to_string(col));
    std::swap(work[pivot], work[col]);
    std::swap(inv[pivot], inv[col]);
    const Scalar p = work[col][col].constant_term().inverse();
    for (int j = 0; j < n; ++j) {
      work[col][j] = work[col][j].scaled(p);
      inv[col][j] = inv[col][j].scaled(p);
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || work[r][col].is_zero()) continue;
      const Poly f = work[r][col];
      for (int j = 0; j < n; ++j) {
        if (!work[col][j].is_zero()) work[r][j] -= mul(f, work[col][j]);
        if (!inv[col][j].is_zero()) inv[r][j] -= mul(f, inv[col][j]);
      }
    }
  }
  // The elimination gives inv * M = 1; a noncommutative product needs the other side too.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Poly s = C.zero();
      for (int l = 0; l < n; ++l) s += mul(M[i][l], inv[l][j]);
      if (!(s == (i == j ? C.one() : C.zero())))
        fail(ErrorKind::FramePairingSingular, "left inverse is not a right inverse");
    }
  return inv;
}

Matrix invert_matrix(const Matrix& M) {
  const int n = static_cast<int>(M.size());
  if (n == 0) return {};
  const Ring r = M[0][0].ring();
  Matrix work = M, inv = identity_matrix(n, r);
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int row = col; row < n && pivot < 0; ++row)
      if (work[row][col].valuation() == 0) pivot = row;
    if (pivot < 0) fail(ErrorKind::FramePairingSingular, "singular constant matrix");
    std::swap(work[pivot], work[col]);
    std::swap(inv[pivot], inv[col]);
    const Scalar p = work[col][col].inverse();
    for (int j = 0; j < n; ++j) {
      work[col][j] = work[col][j] * p;
      inv[col][j] = inv[col][j] * p;
    }
    for (int row = 0; row < n; ++row) {
      if (row == col || work[row][col].is_zero()) continue;
      const Scalar f = work[row][col];
      for (int j = 0; j < n; ++j) {
        work[row][j] -= f * work[col][j];
        inv[row][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

// ---------------------------------------------------------------- Frame

Frame::Frame(const ModuleAlgebra& A, std::vector<std::vector<Poly>> coordinate_images,
             std::vector<std::string> vector_names, std::vector<std::string> form_names)
    : vector_names_(std::move(vector_names)), form_names_(std::move(form_names)) {
  const auto& C = A.coords();
  const int k = static_cast<int>(coordinate_images.size());
  const int n = C.n_coords();
  if (k == 0 || k > 32) fail(ErrorKind::IndexOutOfRange, "frame size must be between 1 and 32");
  if (k != n) fail(ErrorKind::FramePairingSingular, "frame size must equal the number of coordinates");
  for (auto& img : coordinate_images) {
    if (static_cast<int>(img.size()) != n) fail(ErrorKind::ArityMismatch, "frame element needs one value per coordinate");
    images_.push_back(C.extend_derivation(img));
  }
  if (vector_names_.empty())
    for (int a = 0; a < k; ++a) vector_names_.push_back("e" + std::to_string(a + 1));
  if (form_names_.empty())
    for (int a = 0; a < k; ++a) form_names_.push_back("th" + std::to_string(a + 1));
  if (static_cast<int>(vector_names_.size()) != k || static_cast<int>(form_names_.size()) != k)
    fail(ErrorKind::ArityMismatch, "one name per frame element");

  PolyMatrix P0(k, std::vector<Poly>(n));
  for (int a = 0; a < k; ++a)
    for (int j = 0; j < n; ++j) P0[a][j] = images_[a][j];
  const PolyMatrix Q0 = invert_matrix(P0, A, true);

  const Ring ring = A.ring();
  const auto& V = A.generator_images();
  for (std::size_t g = 0; g < V.size(); ++g) {
    Matrix rho(k, std::vector<Scalar>(k, Scalar(ring)));
    for (int a = 0; a < k; ++a) {
      std::vector<Poly> comm(C.arity());
      for (int v = 0; v < C.arity(); ++v)
        comm[v] = C.apply_derivation(V[g], images_[a][v]) - C.apply_derivation(images_[a], V[g][v]);
      for (int b = 0; b < k; ++b) {
        Poly entry = C.zero();
        for (int j = 0; j < n; ++j) entry += C.mul(comm[j], Q0[j][b]);
        if (!is_constant(entry))
          fail(ErrorKind::NotInFrameSpan, "[" + A.hopf().names()[g] + ", " + vector_names_[a] +
                                              "] has non-constant frame coefficients");
        rho[b][a] = entry.constant_term();
      }
      for (int v = 0; v < C.arity(); ++v) {
        Poly s = C.zero();
        for (int b = 0; b < k; ++b) s += images_[b][v].scaled(rho[b][a]);
        if (!(s == comm[v]))
          fail(ErrorKind::NotInFrameSpan, "[" + A.hopf().names()[g] + ", " + vector_names_[a] + "] leaves the frame span");
      }
    }
    rho_.push_back(std::move(rho));
  }
}

Frame Frame::coordinate(const ModuleAlgebra& A) {
  const auto& C = A.coords();
  const int n = C.n_coords();
  std::vector<std::vector<Poly>> images(n, std::vector<Poly>(n, C.zero()));
  std::vector<std::string> vn, fn;
  for (int a = 0; a < n; ++a) {
    images[a][a] = C.one();
    vn.push_back("d_" + C.coordinate_names()[a]);
    fn.push_back("d" + C.coordinate_names()[a]);
  }
  return Frame(A, std::move(images), std::move(vn), std::move(fn));
}

void Frame::expect_rho(int g, const Matrix& declared) const {
  if (g < 0 || g >= static_cast<int>(rho_.size())) fail(ErrorKind::IndexOutOfRange, "generator index");
  if (!(declared == rho_[g])) fail(ErrorKind::NotInFrameSpan, "declared frame action differs from the computed one");
}

// ---------------------------------------------------------------- Calculus

struct Calculus::Memo {
  std::mutex mutex;
  std::map<Mono, std::unique_ptr<Matrix>> rho;
  std::map<std::tuple<int, Mono, Word>, std::unique_ptr<Combo>> word_act;
  std::map<std::tuple<int, Mono, Graded::Key>, std::unique_ptr<Graded>> act;
  std::map<std::pair<int, Mono>, std::unique_ptr<Poly>> frame_apply;
  std::map<std::tuple<int, Graded::Key, Graded::Key>, std::unique_ptr<Graded>> wedge;
  std::map<std::pair<Graded::Key, Graded::Key>, std::unique_ptr<Graded>> bracket, schouten, insert, lie, lie_ref;
  std::map<std::pair<int, Word>, std::unique_ptr<Combo>> insert_frame;
  std::map<std::pair<int, Graded::Key>, std::unique_ptr<Graded>> insert_one, lie_frame;
  std::map<Mono, std::unique_ptr<Graded>> d_function;
  std::map<Word, std::unique_ptr<Graded>> d_word;
  std::map<Graded::Key, std::unique_ptr<Graded>> d_key;
  std::map<std::pair<int, Word>, std::unique_ptr<Graded>> lie_frame_word;
  std::map<std::pair<int, int>, std::unique_ptr<Graded>> lie_theta;
};

Calculus::Calculus(ModuleAlgebra A, Frame frame, CalculusOptions options)
    : A_(std::move(A)), frame_(std::move(frame)), options_(options), memo_(std::make_shared<Memo>()) {
  k_ = frame_.size();
  const Ring ring = A_.ring();
  const auto& H = A_.hopf();
  rinv_ = split_terms<RTerm>(H.Rinv());
  r_ = split_terms<RTerm>(H.R());
  finv_ = split_terms<RTerm>(H.twist_inverse());
  for (int g = 0; g < H.dim(); ++g)
    if (!is_zero_matrix(frame_.rho(g))) rho_trivial_ = false;

  // The braiding must act on pairs of frame symbols as the flip.
  for (int a = 0; a < k_; ++a)
    for (int b = 0; b < k_; ++b) {
      Matrix acc(k_, std::vector<Scalar>(k_, Scalar(ring)));
      for (const auto& t : rinv_) {
        const Matrix& r1 = rho(t.a);
        const Matrix& r2 = rho(t.b);
        for (int p = 0; p < k_; ++p)
          for (int q = 0; q < k_; ++q)
            if (!r1[p][b].is_zero() && !r2[q][a].is_zero()) acc[p][q] += t.c * r1[p][b] * r2[q][a];
      }
      for (int p = 0; p < k_; ++p)
        for (int q = 0; q < k_; ++q) {
          const bool expected = (p == b && q == a);
          if (!(acc[p][q] == (expected ? unit_scalar(ring) : Scalar(ring))))
            fail(ErrorKind::UnsupportedFrameBraiding,
                 "R-matrix does not act as the flip on " + frame_.vector_names()[a] + " (x) " + frame_.vector_names()[b]);
        }
    }

  // kappa[b][a] = i_{e_a} theta^b = sum (rho(S r1) rho(r2))[b][a].
  kappa_.assign(k_, std::vector<Scalar>(k_, Scalar(ring)));
  for (const auto& t : rinv_) {
    Matrix rs(k_, std::vector<Scalar>(k_, Scalar(ring)));
    const HopfElement s = H.antipode(HopfElement::monomial(t.a, unit_scalar(ring)));
    for (const auto& [m, c] : s.terms().terms()) {
      const Matrix& r = rho(m);
      for (int i = 0; i < k_; ++i)
        for (int j = 0; j < k_; ++j)
          if (!r[i][j].is_zero()) rs[i][j] += c * r[i][j];
    }
    const Matrix prod = matmul(rs, rho(t.b), ring);
    for (int i = 0; i < k_; ++i)
      for (int j = 0; j < k_; ++j)
        if (!prod[i][j].is_zero()) kappa_[i][j] += t.c * prod[i][j];
  }

  const auto& C = A_.coords();
  const int n = C.n_coords();
  P_.assign(k_, std::vector<Poly>(n));
  for (int c = 0; c < k_; ++c)
    for (int j = 0; j < n; ++j) P_[c][j] = frame_apply(c, mono::unit(j));
  Q_ = invert_matrix(P_, A_);

  // Frame operators are braided derivations: E_a(mn) = E_a(m) n + (r1 |> m)(r2 |> E_a)(n).
  const auto monos = C.monomials_up_to(2);
  std::vector<Mono> small;
  for (Mono m : monos)
    if (mono::degree(m) <= 1) small.push_back(m);
  auto apply_poly = [&](int a, const Poly& p) {
    Poly out = C.zero();
    for (const auto& [m, c] : p.terms().terms()) out += frame_apply(a, m).scaled(c);
    return out;
  };
  for (int a = 0; a < k_; ++a)
    for (Mono m : small)
      for (Mono nn : small) {
        const Poly lhs = apply_poly(a, A_.mul_mono(m, nn));
        Poly rhs = A_.mul(frame_apply(a, m), C.monomial(nn));
        for (const auto& t : rinv_) {
          const Poly& left = A_.act_mono(t.a, m);
          if (left.is_zero()) continue;
          const Combo& xs = word_act(Kind::Vector, t.b, Word{1} << a);
          Poly right = C.zero();
          for (const auto& [w, s] : xs.terms()) right += frame_apply(word_first(w), nn).scaled(s);
          rhs += A_.mul(left, right).scaled(t.c);
        }
        if (!(lhs == rhs))
          fail(ErrorKind::SchemaError, "frame operator " + frame_.vector_names()[a] + " is not a braided derivation on " +
                                           C.str(C.monomial(m)) + " * " + C.str(C.monomial(nn)));
      }

  // In a twisted algebra the frame matrices must match the twisted adjoint action.
  if (A_.is_twisted()) {
    for (int g = 0; g < H.dim(); ++g) {
      const TensorElement& cop = H.coproduct_mono(mono::unit(g));
      for (int a = 0; a < k_; ++a)
        for (Mono b : monos) {
          Poly lhs = C.zero();
          for (const auto& [key, c] : cop.terms().terms()) {
            const HopfElement s = H.antipode(HopfElement::monomial(key[1], unit_scalar(ring)));
            const Poly inner = apply_poly(a, A_.act(s, C.monomial(b)));
            lhs += A_.act(HopfElement::monomial(key[0], c), inner);
          }
          Poly rhs = C.zero();
          for (int bb = 0; bb < k_; ++bb)
            if (!frame_.rho(g)[bb][a].is_zero()) rhs += frame_apply(bb, b).scaled(frame_.rho(g)[bb][a]);
          if (!(lhs == rhs))
            fail(ErrorKind::NotInFrameSpan, "twisted adjoint action of " + H.names()[g] + " on " +
                                                frame_.vector_names()[a] + " leaves the frame span");
        }
    }
  }

  // d Theta^b from Theta^b = sum_j Hm[b][j] * dx_j.
  PolyMatrix G(n, std::vector<Poly>(k_));
  std::vector<Graded> dx(n);
  for (int j = 0; j < n; ++j) {
    dx[j] = d_function(mono::unit(j));
    for (int c = 0; c < k_; ++c) G[j][c] = dx[j].coefficient(Word{1} << c);
  }
  const PolyMatrix Hm = invert_matrix(G, A_);
  for (int b = 0; b < k_; ++b) {
    Graded acc = zero(Kind::Form);
    for (int j = 0; j < n; ++j) acc += wedge(d(function(Hm[b][j], Kind::Form)), dx[j]);
    dtheta_.push_back(std::move(acc));
  }
}

Graded Calculus::make(Kind kind, Word w, const Poly& coeff) const {
  if (coeff.arity() != arity()) fail(ErrorKind::ArityMismatch, "coefficient does not belong to this algebra");
  if (w >> k_) fail(ErrorKind::IndexOutOfRange, "frame index out of range");
  std::vector<Graded::Terms::Term> out;
  for (const auto& [m, c] : coeff.terms().terms()) out.emplace_back(Graded::Key{w, m}, c);
  return Graded(kind, arity(), ring(), Graded::Terms::from_terms(std::move(out)));
}

Graded Calculus::basis(Kind kind, const Graded::Key& k) const {
  return Graded(kind, arity(), ring(), Graded::Terms(k, unit_scalar(ring())));
}

Poly Calculus::lmul(Mono m, const Poly& p) const {
  if (m == 0) return p;
  Poly out = A_.coords().zero();
  for (const auto& [pm, c] : p.terms().terms()) out += A_.mul_mono(m, pm).scaled(c);
  return out;
}

Graded Calculus::from_combo(Kind kind, const Combo& combo, const Poly& coeff) const {
  std::vector<Graded::Terms::Term> out;
  for (const auto& [w, s] : combo.terms())
    for (const auto& [m, c] : coeff.terms().terms()) out.emplace_back(Graded::Key{w, m}, s * c);
  return Graded(kind, arity(), ring(), Graded::Terms::from_terms(std::move(out)));
}

const Matrix& Calculus::rho(Mono xi) const {
  return memoize(memo_->mutex, memo_->rho, xi, [&] {
    if (xi == 0) return identity_matrix(k_, ring());
    int g = 0;
    while (!mono::exp(xi, g)) ++g;
    return matmul(frame_.rho(g), rho(xi - mono::unit(g)), ring());
  });
}

const Calculus::Combo& Calculus::word_act(Kind kind, Mono xi, Word w) const {
  return memoize(memo_->mutex, memo_->word_act, std::make_tuple(static_cast<int>(kind), xi, w), [&] {
    const Ring r = ring();
    if (xi == 0) return Combo(w, unit_scalar(r));
    if (w == 0 || rho_trivial_) return Combo();
    std::vector<Combo::Term> out;
    if (word_grade(w) == 1) {
      const int a = word_first(w);
      if (kind == Kind::Vector) {
        const Matrix& m = rho(xi);
        for (int b = 0; b < k_; ++b) out.emplace_back(Word{1} << b, m[b][a]);
      } else {
        // xi |> theta^a = sum_b rho(S xi)[a][b] theta^b
        const HopfElement s = hopf().antipode(HopfElement::monomial(xi, unit_scalar(r)));
        for (const auto& [m, c] : s.terms().terms()) {
          const Matrix& mat = rho(m);
          for (int b = 0; b < k_; ++b) out.emplace_back(Word{1} << b, c * mat[a][b]);
        }
      }
      return Combo::from_terms(std::move(out));
    }
    const Word first = w & (~w + 1);
    Combo acc;
    for (const auto& [key, c] : hopf().coproduct_mono(xi).terms().terms()) {
      const Combo& u = word_act(kind, key[0], first);
      if (u.is_zero()) continue;
      const Combo& v = word_act(kind, key[1], w ^ first);
      if (v.is_zero()) continue;
      acc += combo_wedge(u, v).scaled(c);
    }
    return acc;
  });
}

const Graded& Calculus::act_key(Kind kind, Mono xi, const Graded::Key& k) const {
  return memoize(memo_->mutex, memo_->act, std::make_tuple(static_cast<int>(kind), xi, k), [&] {
    if (xi == 0) return basis(kind, k);
    if (k.first == 0) return make(kind, 0, A_.act_mono(xi, k.second));
    Graded acc = zero(kind);
    for (const auto& [key, c] : hopf().coproduct_mono(xi).terms().terms()) {
      const Poly& p = A_.act_mono(key[0], k.second);
      if (p.is_zero()) continue;
      const Combo& combo = word_act(kind, key[1], k.first);
      if (combo.is_zero()) continue;
      acc += from_combo(kind, combo, p).scaled(c);
    }
    return acc;
  });
}

Graded Calculus::act_mono(Mono xi, const Graded& X) const {
  Graded acc = zero(X.kind());
  for (const auto& [k, c] : X.terms().terms()) acc += act_key(X.kind(), xi, k).scaled(c);
  return acc;
}

Graded Calculus::act(const HopfElement& xi, const Graded& X) const {
  Graded acc = zero(X.kind());
  for (const auto& [m, c] : xi.terms().terms()) acc += act_mono(m, X).scaled(c);
  return acc;
}

// E_a(b) = sum (rho(f1)[c][a] e_c)(f2 |> b) over F^{-1} = f1 (x) f2.
const Poly& Calculus::frame_apply(int a, Mono b) const {
  return memoize(memo_->mutex, memo_->frame_apply, std::make_pair(a, b), [&] {
    const auto& C = A_.coords();
    Poly out = C.zero();
    for (const auto& t : finv_) {
      const Matrix& r = rho(t.a);
      const Poly& moved = A_.act_mono(t.b, b);
      if (moved.is_zero()) continue;
      for (int c = 0; c < k_; ++c)
        if (!r[c][a].is_zero()) out += C.apply_derivation(frame_.images(c), moved).scaled(t.c * r[c][a]);
    }
    return out;
  });
}

Poly Calculus::apply(const Graded& X, const Poly& a) const {
  const auto& C = A_.coords();
  Poly out = C.zero();
  for (const auto& [k, c] : X.terms().terms()) {
    if (word_grade(k.first) != 1) fail(ErrorKind::GradeMismatch, "only grade 1 multivectors act on functions");
    Poly val = C.zero();
    for (const auto& [mb, cb] : a.terms().terms()) val += frame_apply(word_first(k.first), mb).scaled(cb);
    out += lmul(k.second, val).scaled(c);
  }
  return out;
}

Graded Calculus::left_mul(const Poly& a, const Graded& X) const {
  std::vector<Graded::Terms::Term> out;
  for (const auto& [am, ac] : a.terms().terms())
    for (const auto& [k, c] : X.terms().terms())
      for (const auto& [pm, pc] : A_.mul_mono(am, k.second).terms().terms())
        out.emplace_back(Graded::Key{k.first, pm}, ac * c * pc);
  return Graded(X.kind(), arity(), ring(), Graded::Terms::from_terms(std::move(out)));
}

Graded Calculus::right_mul(const Graded& X, const Poly& a) const {
  Graded acc = zero(X.kind());
  for (const auto& t : rinv_) {
    const Poly moved = A_.act(HopfElement::monomial(t.a, t.c), a);
    if (moved.is_zero()) continue;
    acc += left_mul(moved, act_mono(t.b, X));
  }
  return acc;
}

// (m e_I) ^ (n e_J) = sum m * (r1 |> n) ((r2 |> e_I) ^ e_J).
const Graded& Calculus::wedge_key(Kind kind, const Graded::Key& u, const Graded::Key& v) const {
  return memoize(memo_->mutex, memo_->wedge, std::make_tuple(static_cast<int>(kind), u, v), [&] {
    if (u.first == 0) return make(kind, v.first, A_.mul_mono(u.second, v.second));
    std::vector<Graded::Terms::Term> out;
    for (const auto& t : rinv_) {
      const Poly& p = A_.act_mono(t.a, v.second);
      if (p.is_zero()) continue;
      const Combo& combo = word_act(kind, t.b, u.first);
      if (combo.is_zero()) continue;
      const Poly q = lmul(u.second, p);
      for (const auto& [w, s] : combo.terms()) {
        const int sg = word_sign(w, v.first);
        if (!sg) continue;
        const Scalar f = t.c * s * sign_scalar(ring(), sg);
        for (const auto& [m, c] : q.terms().terms()) out.emplace_back(Graded::Key{w | v.first, m}, f * c);
      }
    }
    return Graded(kind, arity(), ring(), Graded::Terms::from_terms(std::move(out)));
  });
}

Graded Calculus::wedge(const Graded& U, const Graded& V) const {
  Kind kind = U.kind();
  if (U.max_grade() == 0) kind = V.kind();
  else if (V.max_grade() > 0 && V.kind() != U.kind()) fail(ErrorKind::GradeMismatch, "wedge of a form and a multivector");
  Graded acc = zero(kind);
  for (const auto& [ku, cu] : U.terms().terms())
    for (const auto& [kv, cv] : V.terms().terms()) acc += wedge_key(kind, ku, kv).scaled(cu * cv);
  return acc;
}

Graded Calculus::wedge(const std::vector<Graded>& factors, Kind kind) const {
  Graded acc = function(A_.coords().one(), kind);
  for (const auto& f : factors) acc = wedge(acc, f);
  return acc;
}

const Graded& Calculus::bracket_key(const Graded::Key& u, const Graded::Key& v) const {
  return memoize(memo_->mutex, memo_->bracket, std::make_pair(u, v), [&] {
    const auto& C = A_.coords();
    const Graded X = basis(Kind::Vector, u), Y = basis(Kind::Vector, v);
    auto value = [&](const Poly& x) {
      Poly z = apply(X, apply(Y, x));
      for (const auto& t : rinv_) {
        const Graded y1 = act_mono(t.a, Y);
        if (y1.is_zero()) continue;
        const Graded x2 = act_mono(t.b, X);
        if (x2.is_zero()) continue;
        z -= apply(y1, apply(x2, x)).scaled(t.c);
      }
      return z;
    };
    const int n = C.n_coords();
    std::vector<Poly> zs(n);
    for (int j = 0; j < n; ++j) zs[j] = value(C.variable(j));
    Graded out = zero(Kind::Vector);
    for (int c = 0; c < k_; ++c) {
      Poly coeff = C.zero();
      for (int j = 0; j < n; ++j)
        if (!zs[j].is_zero()) coeff += A_.mul(zs[j], Q_[j][c]);
      out += vector(c, coeff);
    }
    for (int v2 = n; v2 < C.arity(); ++v2)
      if (!(apply(out, C.variable(v2)) == value(C.variable(v2))))
        fail(ErrorKind::NotInFrameSpan, "bracket is not determined by its coordinate values");
    return out;
  });
}

Graded Calculus::bracket(const Graded& X, const Graded& Y) const {
  Graded acc = zero(Kind::Vector);
  for (const auto& [ku, cu] : X.terms().terms()) {
    if (word_grade(ku.first) != 1) fail(ErrorKind::GradeMismatch, "bracket of derivations needs grade 1");
    for (const auto& [kv, cv] : Y.terms().terms()) {
      if (word_grade(kv.first) != 1) fail(ErrorKind::GradeMismatch, "bracket of derivations needs grade 1");
      acc += bracket_key(ku, kv).scaled(cu * cv);
    }
  }
  return acc;
}

// m E_I as the factors (m E_{i1}, E_{i2}, ..., E_{ik}).
std::vector<Graded> Calculus::factors(const Graded::Key& k) const {
  std::vector<Graded> out;
  bool first = true;
  for (int i : word_indices(k.first)) {
    out.push_back(first ? basis(Kind::Vector, Graded::Key{Word{1} << i, k.second}) : vector(i));
    first = false;
  }
  return out;
}

Graded Calculus::wedge_range(const std::vector<Graded>& f, std::size_t from, std::size_t to) const {
  Graded acc = function(A_.coords().one(), Kind::Vector);
  for (std::size_t i = from; i < to; ++i) acc = wedge(acc, f[i]);
  return acc;
}

const Graded& Calculus::schouten_key(const Graded::Key& u, const Graded::Key& v) const {
  return memoize(memo_->mutex, memo_->schouten, std::make_pair(u, v), [&] {
    const int k = word_grade(u.first), l = word_grade(v.first);
    const Ring r = ring();
    Graded acc = zero(Kind::Vector);
    if (k == 0 && l == 0) return acc;
    if (l == 0) {
      const auto X = factors(u);
      for (int i = 0; i < k; ++i) {
        const Graded left = wedge_range(X, 0, i), right = wedge_range(X, i + 1, k);
        const int sg = ((k - 1 - i) % 2) ? -1 : 1;
        for (const auto& t : rinv_) {
          const Poly& moved = A_.act_mono(t.a, v.second);
          if (moved.is_zero()) continue;
          const Poly val = apply(X[i], moved);
          if (val.is_zero()) continue;
          acc += wedge(wedge(left, function(val)), act_mono(t.b, right)).scaled(t.c * sign_scalar(r, sg));
        }
      }
      return acc;
    }
    if (k == 0) {
      const auto Y = factors(v);
      for (int i = 0; i < l; ++i) {
        const Graded left = wedge_range(Y, 0, i), right = wedge_range(Y, i + 1, l);
        const int sg = ((i + 1) % 2) ? -1 : 1;
        for (const auto& t : rinv_) {
          const Poly& moved = A_.act_mono(t.b, u.second);
          if (moved.is_zero()) continue;
          for (const auto& [key, c2] : hopf().coproduct_mono(t.a).terms().terms()) {
            const Graded yv = act_mono(key[1], Y[i]);
            if (yv.is_zero()) continue;
            const Poly mid = apply(yv, moved);
            if (mid.is_zero()) continue;
            acc += wedge(wedge(act_mono(key[0], left), function(mid)), right).scaled(t.c * c2 * sign_scalar(r, sg));
          }
        }
      }
      return acc;
    }
    const auto X = factors(u);
    const auto Y = factors(v);
    for (int i = 0; i < k; ++i) {
      const Graded xl = wedge_range(X, 0, i), xr = wedge_range(X, i + 1, k);
      for (int j = 0; j < l; ++j) {
        const Graded yl = wedge_range(Y, 0, j), yr = wedge_range(Y, j + 1, l);
        const int sg = ((i + j) % 2) ? -1 : 1;
        for (const auto& t : rinv_) {
          const Graded xi = act_mono(t.a, X[i]);
          if (xi.is_zero()) continue;
          const Graded inner = wedge(wedge(act_mono(t.b, xl), xr), yl);
          for (const auto& t2 : rinv_) {
            const Graded yj = act_mono(t2.a, Y[j]);
            if (yj.is_zero()) continue;
            const Graded br = bracket(xi, yj);
            if (br.is_zero()) continue;
            const Graded mid = act_mono(t2.b, inner);
            if (mid.is_zero()) continue;
            acc += wedge(wedge(br, mid), yr).scaled(t.c * t2.c * sign_scalar(r, sg));
          }
        }
      }
    }
    return acc;
  });
}

Graded Calculus::schouten(const Graded& U, const Graded& V) const {
  if ((!U.is_zero() && U.kind() != Kind::Vector) || (!V.is_zero() && V.kind() != Kind::Vector))
    fail(ErrorKind::GradeMismatch, "Schouten bracket of multivectors only");
  Graded acc = zero(Kind::Vector);
  for (const auto& [ku, cu] : U.terms().terms())
    for (const auto& [kv, cv] : V.terms().terms()) acc += schouten_key(ku, kv).scaled(cu * cv);
  return acc;
}

// i_{E_a} Theta^I on frame symbols: kappa term plus the braided derivation term.
const Calculus::Combo& Calculus::insert_frame(int a, Word w) const {
  return memoize(memo_->mutex, memo_->insert_frame, std::make_pair(a, w), [&] {
    if (w == 0) return Combo();
    const int i = word_first(w);
    const Word rest = w & (w - 1);
    Combo acc(rest, kappa_[i][a]);
    if (rest == 0) return acc;
    const Scalar sg = sign_scalar(ring(), options_.corrupt_insertion_sign ? 1 : -1);
    for (const auto& t : rinv_) {
      const Combo& th = word_act(Kind::Form, t.a, Word{1} << i);
      if (th.is_zero()) continue;
      const Combo& xs = word_act(Kind::Vector, t.b, Word{1} << a);
      Combo inner;
      for (const auto& [wb, s] : xs.terms()) inner += insert_frame(word_first(wb), rest).scaled(s);
      acc += combo_wedge(th, inner).scaled(t.c * sg);
    }
    return acc;
  });
}

// i_{E_a}(m Theta^I) = sum (r1 |> m) i_{r2 |> E_a} Theta^I.
const Graded& Calculus::insert_one(int a, const Graded::Key& w) const {
  return memoize(memo_->mutex, memo_->insert_one, std::make_pair(a, w), [&] {
    Graded acc = zero(Kind::Form);
    if (w.first == 0) return acc;
    for (const auto& t : rinv_) {
      const Poly& m = A_.act_mono(t.a, w.second);
      if (m.is_zero()) continue;
      const Combo& xs = word_act(Kind::Vector, t.b, Word{1} << a);
      Combo inner;
      for (const auto& [wb, s] : xs.terms()) inner += insert_frame(word_first(wb), w.first).scaled(s);
      acc += from_combo(Kind::Form, inner, m).scaled(t.c);
    }
    return acc;
  });
}

// i_{n E_J} = n . (i_{E_j1} o ... o i_{E_jq}).
const Graded& Calculus::insert_key(const Graded::Key& x, const Graded::Key& w) const {
  return memoize(memo_->mutex, memo_->insert, std::make_pair(x, w), [&] {
    if (word_grade(x.first) > word_grade(w.first)) return zero(Kind::Form);
    Graded cur = basis(Kind::Form, w);
    const auto idx = word_indices(x.first);
    for (auto it = idx.rbegin(); it != idx.rend(); ++it) {
      Graded next = zero(Kind::Form);
      for (const auto& [k, c] : cur.terms().terms()) next += insert_one(*it, k).scaled(c);
      cur = std::move(next);
    }
    return left_mul(A_.coords().monomial(x.second), cur);
  });
}

Graded Calculus::insert(const Graded& X, const Graded& w) const {
  if ((!X.is_zero() && X.kind() != Kind::Vector) || (!w.is_zero() && w.kind() != Kind::Form))
    fail(ErrorKind::GradeMismatch, "insertion takes a multivector and a form");
  Graded acc = zero(Kind::Form);
  for (const auto& [kx, cx] : X.terms().terms())
    for (const auto& [kw, cw] : w.terms().terms()) acc += insert_key(kx, kw).scaled(cx * cw);
  return acc;
}

Graded Calculus::insert_combo(const Combo& X, const Graded& w) const {
  Graded acc = zero(Kind::Form);
  for (const auto& [wx, s] : X.terms())
    for (const auto& [kw, cw] : w.terms().terms()) acc += insert_one(word_first(wx), kw).scaled(s * cw);
  return acc;
}

namespace {

// Every way of distributing xi over the entries of `items` by the iterated coproduct.
void distribute(const Calculus& C, Mono xi, const std::vector<Graded>& items, std::size_t from, Scalar coeff,
                std::vector<Graded>& current, std::vector<std::pair<Scalar, std::vector<Graded>>>& out) {
  if (from + 1 == items.size()) {
    Graded last = C.act_mono(xi, items[from]);
    if (last.is_zero()) return;
    current.push_back(std::move(last));
    out.emplace_back(coeff, current);
    current.pop_back();
    return;
  }
  for (const auto& [key, c] : C.hopf().coproduct_mono(xi).terms().terms()) {
    Graded head = C.act_mono(key[0], items[from]);
    if (head.is_zero()) continue;
    current.push_back(std::move(head));
    distribute(C, key[1], items, from + 1, coeff * c, current, out);
    current.pop_back();
  }
}

}  // namespace

// theta(X) = sum_R i_{R2 |> X}(R1 |> theta) for a 1-form.
Poly Calculus::eval_one(const Graded& w, const Graded& X) const {
  Poly out = A_.coords().zero();
  for (const auto& t : r_) {
    const Graded xs = act_mono(t.b, X);
    if (xs.is_zero()) continue;
    const Graded ws = act_mono(t.a, w);
    if (ws.is_zero()) continue;
    out += insert(xs, ws).coefficient(0).scaled(t.c);
  }
  return out;
}

// On w = (m theta^a) ^ Omega:
// w(X_1..X_p) = sum_i (-1)^{i-1} (m theta^a)(R1' |> X_i)
//               ((R2'_(1) |> Omega)(R2'_(2) |> X_1, ..., R2'_(i) |> X_{i-1}, X_{i+1}, ..., X_p)).
Poly Calculus::eval(const Graded& w, const std::vector<Graded>& Xs) const {
  const int p = static_cast<int>(Xs.size());
  if (!w.is_zero() && w.grade() != p) fail(ErrorKind::ArityMismatch, "form grade differs from the number of arguments");
  for (const auto& X : Xs)
    if (!X.is_zero() && (X.kind() != Kind::Vector || X.grade() != 1))
      fail(ErrorKind::GradeMismatch, "forms are evaluated on derivations");
  if (p == 0) return w.coefficient(0);
  if (p == 1) return eval_one(w, Xs[0]);
  const auto& C = A_.coords();
  Poly out = C.zero();
  for (const auto& [k, c] : w.terms().terms()) {
    const Word first = k.first & (~k.first + 1);
    const Graded head = basis(Kind::Form, Graded::Key{first, k.second});
    const Graded tail = make(Kind::Form, k.first ^ first, C.one());
    for (int i = 0; i < p; ++i) {
      const Scalar sg = sign_scalar(ring(), i % 2 ? -1 : 1) * c;
      for (const auto& t : rinv_) {
        const Graded xi = act_mono(t.a, Xs[i]);
        if (xi.is_zero()) continue;
        const Poly v1 = eval_one(head, xi);
        if (v1.is_zero()) continue;
        std::vector<Graded> items{tail};
        items.insert(items.end(), Xs.begin(), Xs.begin() + i);
        std::vector<std::pair<Scalar, std::vector<Graded>>> moved;
        std::vector<Graded> current;
        distribute(*this, t.b, items, 0, t.c, current, moved);
        for (auto& [mc, list] : moved) {
          std::vector<Graded> args(list.begin() + 1, list.end());
          args.insert(args.end(), Xs.begin() + i + 1, Xs.end());
          const Poly v2 = eval(list[0], args);
          if (!v2.is_zero()) out += A_.mul(v1, v2).scaled(mc * sg);
        }
      }
    }
  }
  return out;
}

Graded Calculus::solve_one_form(const std::vector<Poly>& values) const {
  if (static_cast<int>(values.size()) != k_) fail(ErrorKind::ArityMismatch, "one value per frame element");
  const auto& C = A_.coords();
  const Ring r = ring();
  // i_{E_c}(sum g_b Theta^b) = sum_R (r1 |> g_b) lambda(r2)[b][c], lambda(x) = kappa rho(x).
  Scalar c0(r);
  std::vector<std::pair<const RTerm*, Matrix>> others;
  for (const auto& t : rinv_) {
    if (t.a == 0 && t.b == 0) {
      c0 = t.c;
      continue;
    }
    Matrix lam = matmul(kappa_, rho(t.b), r);
    if (!is_zero_matrix(lam)) others.emplace_back(&t, std::move(lam));
  }
  Matrix L = kappa_;
  for (auto& row : L)
    for (auto& e : row) e = c0 * e;
  const Matrix Linv = invert_matrix(L);
  std::vector<Poly> g(k_, C.zero());
  const int iterations = others.empty() ? 1 : r.width() + 1;
  for (int it = 0; it < iterations; ++it) {
    std::vector<Poly> t = values;
    for (const auto& [term, lam] : others)
      for (int b = 0; b < k_; ++b) {
        if (g[b].is_zero()) continue;
        const Poly moved = A_.act(HopfElement::monomial(term->a, term->c), g[b]);
        if (moved.is_zero()) continue;
        for (int c = 0; c < k_; ++c)
          if (!lam[b][c].is_zero()) t[c] -= moved.scaled(lam[b][c]);
      }
    for (int b = 0; b < k_; ++b) {
      Poly s = C.zero();
      for (int c = 0; c < k_; ++c)
        if (!Linv[c][b].is_zero()) s += t[c].scaled(Linv[c][b]);
      g[b] = std::move(s);
    }
  }
  Graded beta = zero(Kind::Form);
  for (int b = 0; b < k_; ++b) beta += dual(b, g[b]);
  for (int c = 0; c < k_; ++c)
    if (!(insert(vector(c), beta) == function(values[c], Kind::Form)))
      fail(ErrorKind::FramePairingSingular, "no 1-form with the prescribed frame values");
  return beta;
}

const Graded& Calculus::d_function(Mono m) const {
  return memoize(memo_->mutex, memo_->d_function, m, [&] {
    std::vector<Poly> values(k_);
    for (int c = 0; c < k_; ++c) values[c] = frame_apply(c, m);
    return solve_one_form(values);
  });
}

const Graded& Calculus::d_word(Word w) const {
  return memoize(memo_->mutex, memo_->d_word, w, [&] {
    const int i = word_first(w);
    const Word rest = w & (w - 1);
    if (rest == 0) return dtheta_[i];
    const Graded rest_form = make(Kind::Form, rest, A_.coords().one());
    return wedge(dtheta_[i], rest_form) - wedge(dual(i), d_word(rest));
  });
}

const Graded& Calculus::d_key(const Graded::Key& w) const {
  return memoize(memo_->mutex, memo_->d_key, w, [&] {
    if (w.first == 0) return d_function(w.second);
    const auto& C = A_.coords();
    return wedge(d_function(w.second), make(Kind::Form, w.first, C.one())) + left_mul(C.monomial(w.second), d_word(w.first));
  });
}

Graded Calculus::d(const Graded& w) const {
  if (!w.is_zero() && w.kind() != Kind::Form) fail(ErrorKind::GradeMismatch, "d acts on forms");
  Graded acc = zero(Kind::Form);
  for (const auto& [k, c] : w.terms().terms()) acc += d_key(k).scaled(c);
  return acc;
}

// L_X = [i_X, d]_R = i_X d - (-1)^k d i_X; d is equivariant, so no braiding.
const Graded& Calculus::lie_key(const Graded::Key& x, const Graded::Key& w) const {
  return memoize(memo_->mutex, memo_->lie, std::make_pair(x, w), [&] {
    const Graded X = basis(Kind::Vector, x), W = basis(Kind::Form, w);
    const Graded second = d(insert(X, W));
    return insert(X, d(W)) - (word_grade(x.first) % 2 ? -second : second);
  });
}

Graded Calculus::lie(const Graded& X, const Graded& w) const {
  if ((!X.is_zero() && X.kind() != Kind::Vector) || (!w.is_zero() && w.kind() != Kind::Form))
    fail(ErrorKind::GradeMismatch, "Lie derivative takes a multivector and a form");
  Graded acc = zero(Kind::Form);
  for (const auto& [kx, cx] : X.terms().terms())
    for (const auto& [kw, cw] : w.terms().terms()) acc += lie_key(kx, kw).scaled(cx * cw);
  return acc;
}

// L_{E_a} Theta^b is the 1-form with values
// i_{E_c} = sum_R (R2 |> E_a)(i_{R1 |> E_c} Theta^b) - i_{[R2 |> E_a, R1 |> E_c]_R} Theta^b.
const Graded& Calculus::lie_theta(int a, int b) const {
  return memoize(memo_->mutex, memo_->lie_theta, std::make_pair(a, b), [&] {
    const Graded th = dual(b);
    std::vector<Poly> values(k_, A_.coords().zero());
    for (int c = 0; c < k_; ++c)
      for (const auto& t : r_) {
        const Graded xa = act_mono(t.b, vector(a));
        const Graded xc = act_mono(t.a, vector(c));
        if (xa.is_zero() || xc.is_zero()) continue;
        const Poly inner = insert(xc, th).coefficient(0);
        Poly v = apply(xa, inner) - insert(bracket(xa, xc), th).coefficient(0);
        values[c] += v.scaled(t.c);
      }
    return solve_one_form(values);
  });
}

Graded Calculus::lie_combo(const Combo& X, const Graded& w) const {
  Graded acc = zero(Kind::Form);
  for (const auto& [wx, s] : X.terms())
    for (const auto& [kw, cw] : w.terms().terms()) acc += lie_frame_key(word_first(wx), kw).scaled(s * cw);
  return acc;
}

// L_{E_a} as a braided derivation of degree 0 on frame words.
const Graded& Calculus::lie_frame_word(int a, Word w) const {
  return memoize(memo_->mutex, memo_->lie_frame_word, std::make_pair(a, w), [&] {
    const int i = word_first(w);
    const Word rest = w & (w - 1);
    if (rest == 0) return lie_theta(a, i);
    const Graded rest_form = make(Kind::Form, rest, A_.coords().one());
    Graded acc = wedge(lie_theta(a, i), rest_form);
    for (const auto& t : rinv_) {
      const Combo& th = word_act(Kind::Form, t.a, Word{1} << i);
      if (th.is_zero()) continue;
      const Combo& xs = word_act(Kind::Vector, t.b, Word{1} << a);
      acc += wedge(from_combo(Kind::Form, th, A_.coords().one()), lie_combo(xs, rest_form)).scaled(t.c);
    }
    return acc;
  });
}

// L_{E_a}(m Theta^I) = E_a(m) Theta^I + sum (r1 |> m) L_{r2 |> E_a} Theta^I.
const Graded& Calculus::lie_frame_key(int a, const Graded::Key& w) const {
  return memoize(memo_->mutex, memo_->lie_frame, std::make_pair(a, w), [&] {
    const Poly& em = frame_apply(a, w.second);
    if (w.first == 0) return function(em, Kind::Form);
    Graded acc = make(Kind::Form, w.first, em);
    for (const auto& t : rinv_) {
      const Poly& m = A_.act_mono(t.a, w.second);
      if (m.is_zero()) continue;
      const Combo& xs = word_act(Kind::Vector, t.b, Word{1} << a);
      if (xs.is_zero()) continue;
      Graded inner = zero(Kind::Form);
      for (const auto& [wb, s] : xs.terms()) inner += lie_frame_word(word_first(wb), w.first).scaled(s);
      acc += left_mul(m, inner).scaled(t.c);
    }
    return acc;
  });
}

const Graded& Calculus::lie_ref_key(const Graded::Key& x, const Graded::Key& w) const {
  return memoize(memo_->mutex, memo_->lie_ref, std::make_pair(x, w), [&] {
    const Graded W = basis(Kind::Form, w);
    const auto& C = A_.coords();
    const int k = word_grade(x.first);
    if (k == 0) return -wedge(d_function(x.second), W);
    if (k == 1) {
      const int a = word_first(x.first);
      return left_mul(C.monomial(x.second), lie_frame_key(a, w)) + wedge(d_function(x.second), insert(vector(a), W));
    }
    // L_{X ^ Y} = i_X L_Y + (-1)^l L_X i_Y with X = n E_{j1}.
    const Word first = x.first & (~x.first + 1);
    const Graded X = basis(Kind::Vector, Graded::Key{first, x.second});
    const Graded Y = make(Kind::Vector, x.first ^ first, C.one());
    const Graded second = lie_reference(X, insert(Y, W));
    return insert(X, lie_reference(Y, W)) + ((k - 1) % 2 ? -second : second);
  });
}

Graded Calculus::lie_reference(const Graded& X, const Graded& w) const {
  Graded acc = zero(Kind::Form);
  for (const auto& [kx, cx] : X.terms().terms())
    for (const auto& [kw, cw] : w.terms().terms()) acc += lie_ref_key(kx, kw).scaled(cx * cw);
  return acc;
}

GradedPair Calculus::braid(const Graded& U, const Graded& V) const {
  GradedPair out;
  out.left = V.kind();
  out.right = U.kind();
  std::vector<GradedPair::Terms::Term> terms;
  for (const auto& t : rinv_) {
    const Graded v = act_mono(t.a, V);
    if (v.is_zero()) continue;
    const Graded u = act_mono(t.b, U);
    for (const auto& [kv, cv] : v.terms().terms())
      for (const auto& [ku, cu] : u.terms().terms()) terms.emplace_back(std::make_pair(kv, ku), t.c * cv * cu);
  }
  out.terms = GradedPair::Terms::from_terms(std::move(terms));
  return out;
}

GradedPair Calculus::braid(const GradedPair& t) const {
  GradedPair out;
  out.left = t.right;
  out.right = t.left;
  for (const auto& [keys, c] : t.terms.terms()) {
    const GradedPair b = braid(basis(t.left, keys.first), basis(t.right, keys.second));
    out.terms += b.terms.scaled(c);
  }
  return out;
}

std::vector<Graded> Calculus::family(Kind kind, int max_grade, int degree) const {
  const auto monos = A_.coords().monomials_up_to(degree);
  std::vector<Graded> out;
  for (int p = 0; p <= std::min(max_grade, k_); ++p)
    for (Word w = 0; w < (Word{1} << k_); ++w) {
      if (word_grade(w) != p) continue;
      for (Mono m : monos) out.push_back(basis(kind, Graded::Key{w, m}));
    }
  return out;
}

std::string Calculus::str(const Graded& X) const {
  if (X.is_zero()) return "0";
  const auto& names = X.kind() == Kind::Vector ? frame_.vector_names() : frame_.form_names();
  std::ostringstream os;
  bool first = true;
  Word last = ~Word{0};
  for (const auto& [k, c] : X.terms().terms()) {
    if (k.first == last) continue;
    last = k.first;
    if (!first) os << " + ";
    first = false;
    os << "(" << A_.str(X.coefficient(k.first)) << ")";
    bool head = true;
    for (int i : word_indices(k.first)) {
      os << (head ? " " : "/\\") << names[i];
      head = false;
    }
  }
  return os.str();
}

}  // namespace braid
