#include "braid/poly.hpp"

#include <cctype>

#include "braid/errors.hpp"

namespace braid {

namespace mono {

Mono mul(Mono a, Mono b) {
  constexpr Mono high = 0x8080808080808080ULL;
  if (((a | b) & high) == 0) return a + b;
  for (int i = 0; i < kMaxVars; ++i)
    if (exp(a, i) + exp(b, i) > kMaxExp) fail(ErrorKind::IndexOutOfRange, "exponent overflow");
  return a + b;
}

int degree(Mono m) {
  int d = 0;
  for (int i = 0; i < kMaxVars; ++i) d += exp(m, i);
  return d;
}

std::string str(Mono m, const std::vector<std::string>& names, const char* sep) {
  std::string out;
  for (int i = 0; i < kMaxVars; ++i) {
    int e = exp(m, i);
    if (e == 0) continue;
    if (!out.empty()) out += sep;
    out += i < static_cast<int>(names.size()) ? names[i] : "v" + std::to_string(i);
    if (e > 1) out += "^" + std::to_string(e);
  }
  return out.empty() ? "1" : out;
}

}  // namespace mono

Poly Poly::variable(int arity, Ring ring, int i) {
  if (i < 0 || i >= arity) fail(ErrorKind::IndexOutOfRange, "variable index " + std::to_string(i));
  return monomial(arity, mono::unit(i), Scalar(ring, Rational(1)));
}

Scalar Poly::coefficient(Mono m) const {
  const Scalar* c = terms_.find(m);
  return c ? *c : Scalar(ring_);
}

int Poly::degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_.terms()) d = std::max(d, mono::degree(m));
  return d;
}

static void require_compatible(const Poly& a, const Poly& b) {
  if (a.arity() != b.arity())
    fail(ErrorKind::ArityMismatch, std::to_string(a.arity()) + " vs " + std::to_string(b.arity()));
  require_same_ring(a.ring(), b.ring());
}

Poly& Poly::operator+=(const Poly& o) {
  require_compatible(*this, o);
  terms_ += o.terms_;
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  require_compatible(*this, o);
  terms_ -= o.terms_;
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  require_compatible(a, b);
  std::vector<Poly::Terms::Term> out;
  out.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& [ma, ca] : a.terms_.terms())
    for (const auto& [mb, cb] : b.terms_.terms()) {
      Scalar c = ca * cb;
      if (!c.is_zero()) out.emplace_back(mono::mul(ma, mb), std::move(c));
    }
  return Poly(a.arity_, a.ring_, Poly::Terms::from_terms(std::move(out)));
}

Poly Poly::scaled(const Scalar& s) const {
  require_same_ring(ring_, s.ring());
  return Poly(arity_, ring_, terms_.scaled(s));
}

Poly Poly::derivative(int var) const {
  if (var < 0 || var >= arity_) fail(ErrorKind::IndexOutOfRange, "variable index " + std::to_string(var));
  std::vector<Terms::Term> out;
  for (const auto& [m, c] : terms_.terms()) {
    int e = mono::exp(m, var);
    if (e == 0) continue;
    out.emplace_back(m - mono::unit(var), c * Rational(e));
  }
  return Poly(arity_, ring_, Terms::from_terms(std::move(out)));
}

Poly Poly::truncated(int n) const {
  std::vector<Terms::Term> out;
  for (const auto& [m, c] : terms_.terms()) out.emplace_back(m, c.truncated(n));
  return Poly(arity_, ring_, Terms::from_terms(std::move(out)));
}

Poly Poly::in_ring(Ring r) const {
  std::vector<Terms::Term> out;
  for (const auto& [m, c] : terms_.terms()) out.emplace_back(m, c.in_ring(r));
  return Poly(arity_, r, Terms::from_terms(std::move(out)));
}

Poly pow(const Poly& p, int k) {
  Poly r = Poly::constant(p.arity(), Scalar(p.ring(), Rational(1)));
  for (int i = 0; i < k; ++i) r = r * p;
  return r;
}

Poly Poly::substitute(const std::vector<Poly>& values, int target_arity) const {
  if (static_cast<int>(values.size()) != arity_) fail(ErrorKind::ArityMismatch, "substitution size");
  Poly out(target_arity, ring_);
  for (const auto& [m, c] : terms_.terms()) {
    Poly t = Poly::constant(target_arity, c);
    for (int i = 0; i < arity_; ++i)
      if (int e = mono::exp(m, i)) t = t * pow(values[i], e);
    out += t;
  }
  return out;
}

std::string Poly::str(const std::vector<std::string>& names) const {
  if (terms_.is_zero()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_.terms()) {
    std::string cs = c.str();
    bool compound = cs.find_first_of(" ") != std::string::npos;
    bool neg = !compound && cs[0] == '-';
    if (neg) cs = cs.substr(1);
    if (!out.empty()) out += neg ? " - " : " + ";
    else if (neg) out += "-";
    if (compound) cs = "(" + cs + ")";
    if (m == 0) {
      out += cs;
    } else {
      if (cs != "1") out += cs + " ";
      out += mono::str(m, names);
    }
  }
  return out;
}

namespace {

class Parser {
 public:
  Parser(const std::string& s, const std::vector<std::string>& names, Ring ring)
      : s_(s), names_(names), ring_(ring), arity_(static_cast<int>(names.size())) {}

  Poly run() {
    Poly p = expr();
    skip();
    if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void error(const std::string& what) {
    fail(ErrorKind::SchemaError, "cannot parse '" + s_ + "' at " + std::to_string(pos_) + ": " + what);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool at_factor() {
    skip();
    if (pos_ >= s_.size()) return false;
    char c = s_[pos_];
    return std::isalnum(static_cast<unsigned char>(c)) || c == '(' || c == '_';
  }
  Poly one() { return Poly::constant(arity_, Scalar(ring_, Rational(1))); }

  Poly expr() {
    Poly acc(arity_, ring_);
    bool neg = false;
    if (peek('+')) ++pos_;
    else if (peek('-')) { ++pos_; neg = true; }
    for (;;) {
      Poly t = term();
      acc = neg ? acc - t : acc + t;
      if (peek('+')) { ++pos_; neg = false; }
      else if (peek('-')) { ++pos_; neg = true; }
      else break;
    }
    return acc;
  }
  Poly term() {
    Poly acc = factor();
    for (;;) {
      if (peek('*')) { ++pos_; acc = acc * factor(); continue; }
      if (peek('/')) {
        ++pos_;
        skip();
        Rational d = integer();
        acc = acc.scaled(Scalar(ring_, d.inverse()));
        continue;
      }
      if (at_factor()) { acc = acc * factor(); continue; }
      return acc;
    }
  }
  Rational integer() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) error("expected integer");
    return Rational::parse(s_.substr(start, pos_ - start));
  }
  int exponent() {
    if (!peek('^')) return 1;
    ++pos_;
    skip();
    Rational e = integer();
    if (!(e < Rational(mono::kMaxExp + 1))) error("exponent too large");
    return static_cast<int>(std::stoi(e.str()));
  }
  Poly factor() {
    skip();
    if (pos_ >= s_.size()) error("unexpected end");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Poly inner = expr();
      if (!peek(')')) error("expected ')'");
      ++pos_;
      return pow(inner, exponent());
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      return Poly::constant(arity_, Scalar(ring_, integer()));
    }
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    std::string name = s_.substr(start, pos_ - start);
    if (name.empty()) error("expected factor");
    int e = exponent();
    for (int i = 0; i < arity_; ++i)
      if (names_[i] == name) return Poly::monomial(arity_, mono::unit(i, e), Scalar(ring_, Rational(1)));
    if (name == "h") {
      Scalar hs = Scalar::h(ring_);
      Scalar p(ring_, Rational(1));
      for (int k = 0; k < e; ++k) p *= hs;
      return Poly::constant(arity_, p);
    }
    fail(ErrorKind::UnknownName, "unknown symbol '" + name + "' in '" + s_ + "'");
  }

  const std::string& s_;
  const std::vector<std::string>& names_;
  Ring ring_;
  int arity_;
  std::size_t pos_ = 0;
};

}  // namespace

Poly Poly::parse(const std::string& text, const std::vector<std::string>& names, Ring ring) {
  if (static_cast<int>(names.size()) > mono::kMaxVars) fail(ErrorKind::IndexOutOfRange, "more than 8 variables");
  return Parser(text, names, ring).run();
}

Scalar parse_scalar(const std::string& text, Ring ring) {
  static const std::vector<std::string> none;
  Poly p = Poly::parse(text, none, ring);
  return p.constant_term();
}

}  // namespace braid
