#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "braid/modalg.hpp"
#include "braid/twist.hpp"

namespace braid {

// Dense matrix with entries m[row][col].
using Matrix = std::vector<std::vector<Scalar>>;
using PolyMatrix = std::vector<std::vector<Poly>>;

enum class Kind { Vector, Form };

// Strictly increasing index word a_1 < ... < a_p stored as a bit set.
using Word = std::uint32_t;
inline int word_grade(Word w) { return __builtin_popcount(w); }
inline int word_first(Word w) { return __builtin_ctz(w); }

// Homogeneous or mixed element of the multivector or form algebra. A term
// (word, m) with coefficient c denotes c m * e_word: the coefficient sits on
// the left and multiplies with the product in force.
class Graded {
 public:
  using Key = std::pair<Word, Mono>;
  using Terms = Linear<Key, Scalar>;

  Graded() = default;
  Graded(Kind kind, int arity, Ring ring, Terms t = {}) : kind_(kind), arity_(arity), ring_(ring), terms_(std::move(t)) {}

  Kind kind() const { return kind_; }
  int arity() const { return arity_; }
  Ring ring() const { return ring_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.is_zero(); }
  // Grade of a nonzero homogeneous element; 0 for zero. Throws GradeMismatch if mixed.
  int grade() const;
  int max_grade() const;
  Graded component(int p) const;
  // Coefficient of e_word as an element of A.
  Poly coefficient(Word w) const;
  // Drops every h^k with k >= n.
  Graded truncated(int n) const;

  Graded operator-() const { return Graded(kind_, arity_, ring_, -terms_); }
  Graded& operator+=(const Graded& o);
  Graded& operator-=(const Graded& o);
  friend Graded operator+(Graded a, const Graded& b) { return a += b; }
  friend Graded operator-(Graded a, const Graded& b) { return a -= b; }
  Graded scaled(const Scalar& s) const { return Graded(kind_, arity_, ring_, terms_.scaled(s)); }
  // Zero compares equal across kinds.
  friend bool operator==(const Graded& a, const Graded& b) {
    return a.terms_ == b.terms_ && (a.kind_ == b.kind_ || a.terms_.is_zero());
  }

 private:
  Kind kind_ = Kind::Vector;
  int arity_ = 0;
  Ring ring_;
  Terms terms_;
};

using MultiVector = Graded;
using DifferentialForm = Graded;

// sum U_i (x) V_i for calculus objects, as produced by the braiding.
struct GradedPair {
  using Terms = Linear<std::pair<Graded::Key, Graded::Key>, Scalar>;
  Kind left = Kind::Vector, right = Kind::Vector;
  Terms terms;
  friend bool operator==(const GradedPair& a, const GradedPair& b) { return a.terms == b.terms; }
};

// k classical derivations e_1..e_k of the coordinate algebra, given by their
// values on the coordinates, with the matrices of the adjoint action of the
// Lie generators: x_g |> e_a = sum_b rho_g[b][a] e_b. The matrices are
// computed from the commutators [x_g, e_a] and must have constant entries.
class Frame {
 public:
  Frame(const ModuleAlgebra& A, std::vector<std::vector<Poly>> coordinate_images,
        std::vector<std::string> vector_names = {}, std::vector<std::string> form_names = {});
  // d/dx_j for every coordinate, named d_<x> and d<x>.
  static Frame coordinate(const ModuleAlgebra& A);

  int size() const { return static_cast<int>(images_.size()); }
  const std::vector<Poly>& images(int a) const { return images_[a]; }
  const Matrix& rho(int g) const { return rho_[g]; }
  const std::vector<std::string>& vector_names() const { return vector_names_; }
  const std::vector<std::string>& form_names() const { return form_names_; }
  // Throws NotInFrameSpan unless the declared matrix equals the computed one.
  void expect_rho(int g, const Matrix& declared) const;

 private:
  std::vector<std::vector<Poly>> images_;  // on every variable
  std::vector<Matrix> rho_;
  std::vector<std::string> vector_names_, form_names_;
};

class GradedOperator;

struct CalculusOptions {
  // Flips the sign of the derivation term of i_X on wedges. Forced failure
  // for harness validation only.
  bool corrupt_insertion_sign = false;
};

// The braided Cartan calculus of a module algebra A (product, H-action and
// R-matrix of the Hopf algebra in force) over a frame. In a twisted algebra
// the frame operators are the transports E_a(b) = (F_1^{-1} |> e_a)(F_2^{-1} |> b)
// for the total twist F of H, so the same frame data serves every twist.
// Kernels on basis pairs are memoized; copies share the memo.
class Calculus {
 public:
  Calculus(ModuleAlgebra A, Frame frame, CalculusOptions options = {});

  const ModuleAlgebra& algebra() const { return A_; }
  const Frame& frame() const { return frame_; }
  const HopfAlgebra& hopf() const { return A_.hopf(); }
  int rank() const { return k_; }
  Ring ring() const { return A_.ring(); }
  int arity() const { return A_.coords().arity(); }
  const CalculusOptions& options() const { return options_; }

  Graded zero(Kind kind) const { return Graded(kind, arity(), ring()); }
  Graded make(Kind kind, Word w, const Poly& coeff) const;
  Graded function(const Poly& a, Kind kind = Kind::Vector) const { return make(kind, 0, a); }
  Graded vector(int a) const { return make(Kind::Vector, Word{1} << a, A_.coords().one()); }
  Graded vector(int a, const Poly& coeff) const { return make(Kind::Vector, Word{1} << a, coeff); }
  Graded dual(int a) const { return make(Kind::Form, Word{1} << a, A_.coords().one()); }
  Graded dual(int a, const Poly& coeff) const { return make(Kind::Form, Word{1} << a, coeff); }

  // rho(xi) for a PBW monomial: the frame-span action matrix.
  const Matrix& rho(Mono xi) const;
  // c^R on frame symbols is the flip; kappa[b][a] = i_{e_a} theta^b.
  const Matrix& kappa() const { return kappa_; }
  // E_c(x_j) and a two-sided inverse for the product in force.
  const PolyMatrix& pairing() const { return P_; }

  Poly apply(const Graded& X, const Poly& a) const;                 // grade 1
  Graded act(const HopfElement& xi, const Graded& X) const;
  Graded act_mono(Mono xi, const Graded& X) const;
  Graded left_mul(const Poly& a, const Graded& X) const;
  Graded right_mul(const Graded& X, const Poly& a) const;
  Graded wedge(const Graded& U, const Graded& V) const;
  Graded wedge(const std::vector<Graded>& factors, Kind kind) const;
  Graded bracket(const Graded& X, const Graded& Y) const;           // grade 1
  Graded schouten(const Graded& U, const Graded& V) const;
  Poly eval(const Graded& w, const std::vector<Graded>& Xs) const;
  Graded insert(const Graded& X, const Graded& w) const;
  Graded d(const Graded& w) const;
  Graded lie(const Graded& X, const Graded& w) const;               // [i_X, d]_R
  // Independent route: braided derivation on dual symbols for grade 1 and
  // the wedge and function rules for other grades.
  Graded lie_reference(const Graded& X, const Graded& w) const;
  GradedPair braid(const Graded& U, const Graded& V) const;          // R^{-1} |> (V (x) U)
  GradedPair braid(const GradedPair& t) const;
  // 1-form beta with i_{e_c} beta = values[c] for every frame index c.
  Graded solve_one_form(const std::vector<Poly>& values) const;

  Graded apply(const GradedOperator& op, const Graded& w, bool force_braided = false) const;
  GradedOperator act_mono(Mono xi, const GradedOperator& op) const;

  // All frame wedges of grade <= max_grade with monomial coefficients of degree <= degree.
  std::vector<Graded> family(Kind kind, int max_grade, int degree) const;
  std::string str(const Graded& X) const;

 private:
  using Combo = Linear<Word, Scalar>;
  struct RTerm {
    Mono a, b;
    Scalar c;
  };
  struct Memo;

  const Combo& word_act(Kind kind, Mono xi, Word w) const;
  const Graded& act_key(Kind kind, Mono xi, const Graded::Key& k) const;
  const Poly& frame_apply(int a, Mono b) const;
  const Graded& wedge_key(Kind kind, const Graded::Key& u, const Graded::Key& v) const;
  const Graded& bracket_key(const Graded::Key& u, const Graded::Key& v) const;
  const Graded& schouten_key(const Graded::Key& u, const Graded::Key& v) const;
  const Combo& insert_frame(int a, Word w) const;
  const Graded& insert_one(int a, const Graded::Key& w) const;
  const Graded& insert_key(const Graded::Key& x, const Graded::Key& w) const;
  const Graded& d_function(Mono m) const;
  const Graded& d_word(Word w) const;
  const Graded& d_key(const Graded::Key& w) const;
  const Graded& lie_key(const Graded::Key& x, const Graded::Key& w) const;
  const Graded& lie_ref_key(const Graded::Key& x, const Graded::Key& w) const;
  const Graded& lie_frame_key(int a, const Graded::Key& w) const;
  const Graded& lie_frame_word(int a, Word w) const;
  const Graded& lie_theta(int a, int b) const;
  Graded from_combo(Kind kind, const Combo& c, const Poly& coeff) const;
  Graded insert_combo(const Combo& X, const Graded& w) const;  // X a scalar combination of e_a
  Graded lie_combo(const Combo& X, const Graded& w) const;
  std::vector<Graded> factors(const Graded::Key& k) const;
  Graded wedge_range(const std::vector<Graded>& f, std::size_t from, std::size_t to) const;
  Graded basis(Kind kind, const Graded::Key& k) const;
  Poly eval_one(const Graded& w, const Graded& X) const;
  Poly lmul(Mono m, const Poly& p) const;
  Graded commutator_apply(const GradedOperator& a, const GradedOperator& b, const Graded& w, bool force) const;

  ModuleAlgebra A_;
  Frame frame_;
  CalculusOptions options_;
  int k_ = 0;
  bool rho_trivial_ = true;
  std::vector<RTerm> rinv_, r_, finv_;
  Matrix kappa_;
  PolyMatrix P_, Q_;          // P[c][j] = E_c(x_j); P * Q = 1
  std::vector<Graded> dtheta_;
  std::shared_ptr<Memo> memo_;
};

// Symbolic operator built from d, i_X, L_X by composition, sums and graded
// braided commutators. Degree: d +1, i_X -k, L_X 1-k for X of grade k.
class GradedOperator {
 public:
  enum class Type { D, Insertion, Lie, Compose, Commutator, Sum };

  static GradedOperator d();
  static GradedOperator insertion(Graded X);
  static GradedOperator lie(Graded X);
  static GradedOperator compose(const GradedOperator& a, const GradedOperator& b);
  static GradedOperator zero(int degree);
  GradedOperator scaled(const Scalar& s) const;
  friend GradedOperator operator+(const GradedOperator& a, const GradedOperator& b);
  friend GradedOperator operator-(const GradedOperator& a, const GradedOperator& b);

  Type type() const { return node_->type; }
  int degree() const { return node_->degree; }
  // H-equivariant as an operator (only d and expressions built from d alone).
  bool equivariant() const { return node_->equivariant; }

 private:
  friend GradedOperator graded_braided_commutator(const GradedOperator& a, const GradedOperator& b);
  friend class Calculus;
  struct Node {
    Type type;
    int degree = 0;
    bool equivariant = false;
    Graded X;
    std::vector<std::pair<Scalar, GradedOperator>> children;
  };
  explicit GradedOperator(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// [a, b]_R = a b - (-1)^{|a||b|} (R^{-1}_1 |> b)(R^{-1}_2 |> a).
GradedOperator graded_braided_commutator(const GradedOperator& a, const GradedOperator& b);

// The six relations of the braided Cartan calculus, d^2 = 0 and the two
// Lie-derivative rules for functions and wedges, on the generated family.
Report cartan_suite(const Calculus& C, int depth, int degree);

// Transport from the calculus over (H, R, A) to the calculus over
// (H_F, R_F, A_F): coefficients and frame words are split with F so that
// (a . X)^F = a * X^F and (X ^_F Y)^F = X^F ^ Y^F.
class DrinfeldTransport {
 public:
  // twisted must be built on A.with_hopf(twist_hopf(A.hopf(), F)) with the same frame.
  // With inverse_direction the roles of F and F^{-1} are exchanged (forced failure).
  DrinfeldTransport(const Calculus& classical, const Calculus& twisted, Twist F, bool inverse_direction = false);

  Graded operator()(const Graded& X) const;

  // Twisted operations on the untransported side: op(F^{-1}_1 |> ., F^{-1}_2 |> .).
  Graded wedge(const Graded& U, const Graded& V) const;
  Graded schouten(const Graded& U, const Graded& V) const;
  Graded insert(const Graded& X, const Graded& w) const;
  Graded lie(const Graded& X, const Graded& w) const;

 private:
  using Combo = Linear<Word, Scalar>;
  template <class Op>
  Graded twisted_op(const Graded& U, const Graded& V, Op&& op) const;
  const Graded& word_image(Kind kind, Word w) const;

  const Calculus& C0_;
  const Calculus& CF_;
  Twist F_;
  std::vector<std::pair<std::pair<Mono, Mono>, Scalar>> split_, finv_;
  Matrix theta_image_;  // (theta^a)^F = sum_b M[a][b] Theta^b
  mutable std::mutex mutex_;
  mutable std::map<std::pair<int, Word>, std::unique_ptr<Graded>> words_;
};

// Builds the calculus of A_F for a twist of the Hopf algebra of C.
Calculus twisted_calculus(const Calculus& C, const Twist& F, int depth);

// Transport is a module map and intertwines Schouten bracket, Lie derivative,
// insertion, d and the wedge; the h^0 part of each twisted computation is
// classical. When the module law fails the intertwining checks are skipped.
Report gauge_suite(const Calculus& classical, const Twist& F, int depth, int degree, bool inverse_direction = false);

// Gauss-Jordan with constant pivots for the product `mul`; returns L with
// L * M = 1 and checks M * L = 1. Throws FramePairingSingular otherwise.
PolyMatrix invert_matrix(const PolyMatrix& M, const ModuleAlgebra& A, bool plain = false);
Matrix invert_matrix(const Matrix& M);

}  // namespace braid
