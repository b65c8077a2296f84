#include "braid/rational.hpp"

#include <limits>
#include <numeric>

#include "braid/errors.hpp"

namespace braid {

namespace {

using i128 = __int128;

constexpr i128 kMax = std::numeric_limits<std::int64_t>::max();

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

BigRational to_big(i128 n, i128 d) {
  using boost::multiprecision::cpp_int;
  auto conv = [](i128 v) {
    bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
    cpp_int r = static_cast<std::uint64_t>(u >> 64);
    r <<= 64;
    r += static_cast<std::uint64_t>(u);
    return neg ? cpp_int(-r) : r;
  };
  return BigRational(conv(n), conv(d));
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) fail(ErrorKind::NotInvertible, "rational with zero denominator");
  *this = from_parts(n, d);
}

Rational::Rational(const BigRational& b) { assign_big(b); }

void Rational::assign_big(const BigRational& b) {
  using boost::multiprecision::cpp_int;
  const cpp_int n = boost::multiprecision::numerator(b);
  const cpp_int d = boost::multiprecision::denominator(b);
  static const cpp_int lo = -cpp_int(kMax), hi = cpp_int(kMax);
  if (n >= lo && n <= hi && d <= hi) {
    num_ = static_cast<std::int64_t>(n);
    den_ = static_cast<std::int64_t>(d);
    big_.reset();
  } else {
    num_ = 0;
    den_ = 1;
    big_ = std::make_shared<const BigRational>(b);
  }
}

Rational Rational::parse(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      boost::multiprecision::cpp_int n(s);
      return Rational(BigRational(n));
    }
    boost::multiprecision::cpp_int n(s.substr(0, slash)), d(s.substr(slash + 1));
    if (d == 0) fail(ErrorKind::NotInvertible, "rational with zero denominator: " + s);
    return Rational(BigRational(n, d));
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(ErrorKind::SchemaError, "malformed rational '" + s + "'");
  }
}

bool Rational::is_integer() const { return big_ ? boost::multiprecision::denominator(*big_) == 1 : den_ == 1; }

int Rational::sign() const {
  if (big_) return big_->sign();
  return (num_ > 0) - (num_ < 0);
}

BigRational Rational::big() const { return big_ ? *big_ : BigRational(num_, den_); }

Rational Rational::operator-() const {
  Rational r;
  if (big_) {
    r.assign_big(-*big_);
  } else {
    r.num_ = -num_;
    r.den_ = den_;
  }
  return r;
}

Rational& Rational::operator+=(const Rational& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (!big_ && !o.big_) {
    if (den_ == o.den_) {
      i128 n = static_cast<i128>(num_) + o.num_;
      return *this = Rational::from_parts(n, den_);
    }
    i128 n = static_cast<i128>(num_) * o.den_ + static_cast<i128>(o.num_) * den_;
    i128 d = static_cast<i128>(den_) * o.den_;
    return *this = Rational::from_parts(n, d);
  }
  assign_big(big() + o.big());
  return *this;
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
  if (is_zero() || o.is_zero()) return *this = Rational();
  if (!big_ && !o.big_) {
    // Cross-cancel first so the 128-bit products stay small.
    i128 g1 = gcd128(num_, o.den_), g2 = gcd128(o.num_, den_);
    i128 n = (static_cast<i128>(num_) / g1) * (o.num_ / g2);
    i128 d = (static_cast<i128>(den_) / g2) * (o.den_ / g1);
    return *this = Rational::from_parts(n, d);
  }
  assign_big(big() * o.big());
  return *this;
}

Rational& Rational::operator/=(const Rational& o) { return *this *= o.inverse(); }

Rational Rational::inverse() const {
  if (is_zero()) fail(ErrorKind::NotInvertible, "inverse of rational zero");
  if (big_) return Rational(BigRational(1) / *big_);
  return Rational(den_, num_);
}

bool operator==(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
  if (static_cast<bool>(a.big_) != static_cast<bool>(b.big_)) return false;  // canonical: big only when it must be
  return *a.big_ == *b.big_;
}

bool operator<(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) return static_cast<i128>(a.num_) * b.den_ < static_cast<i128>(b.num_) * a.den_;
  return a.big() < b.big();
}

std::string Rational::str() const {
  if (big_) return big_->str();
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::size_t Rational::hash() const {
  if (big_) return std::hash<std::string>()(big_->str());
  std::size_t h = std::hash<std::int64_t>()(num_);
  return h ^ (std::hash<std::int64_t>()(den_) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

Rational Rational::from_parts(__int128 n, __int128 d) {
  Rational r;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  i128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  if (n > kMax || n < -kMax || d > kMax) {
    r.assign_big(to_big(n, d));
  } else {
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
  }
  return r;
}

}  // namespace braid
