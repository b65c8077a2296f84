#pragma once

#include <algorithm>
#include <utility>
#include <vector>

namespace braid {

// Finite linear combination sum_k c_k * k over an ordered key type.
// Invariant: keys strictly increasing, no zero coefficients stored.
template <class Key, class Coef>
class Linear {
 public:
  using Term = std::pair<Key, Coef>;

  Linear() = default;
  Linear(const Key& k, const Coef& c) {
    if (!c.is_zero()) terms_.emplace_back(k, c);
  }

  // Sorts, merges duplicate keys and drops zeros.
  static Linear from_terms(std::vector<Term> ts) {
    std::sort(ts.begin(), ts.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
    Linear out;
    for (auto& t : ts) {
      if (!out.terms_.empty() && out.terms_.back().first == t.first) {
        out.terms_.back().second += t.second;
      } else {
        if (!out.terms_.empty() && out.terms_.back().second.is_zero()) out.terms_.pop_back();
        out.terms_.push_back(std::move(t));
      }
    }
    if (!out.terms_.empty() && out.terms_.back().second.is_zero()) out.terms_.pop_back();
    return out;
  }

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  const Coef* find(const Key& k) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), k,
                               [](const Term& t, const Key& key) { return t.first < key; });
    return (it != terms_.end() && it->first == k) ? &it->second : nullptr;
  }

  Linear& operator+=(const Linear& o) { return *this = combine(*this, o, false); }
  Linear& operator-=(const Linear& o) { return *this = combine(*this, o, true); }
  friend Linear operator+(const Linear& a, const Linear& b) { return combine(a, b, false); }
  friend Linear operator-(const Linear& a, const Linear& b) { return combine(a, b, true); }
  Linear operator-() const {
    Linear r(*this);
    for (auto& t : r.terms_) t.second = -t.second;
    return r;
  }
  template <class S>
  Linear scaled(const S& s) const {
    Linear r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) {
      Coef c = t.second * s;
      if (!c.is_zero()) r.terms_.emplace_back(t.first, std::move(c));
    }
    return r;
  }
  friend bool operator==(const Linear& a, const Linear& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (!(a.terms_[i].first == b.terms_[i].first) || !(a.terms_[i].second == b.terms_[i].second)) return false;
    return true;
  }

 private:
  static Linear combine(const Linear& a, const Linear& b, bool negate) {
    Linear r;
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
      if (j == b.terms_.size() || (i < a.terms_.size() && a.terms_[i].first < b.terms_[j].first)) {
        r.terms_.push_back(a.terms_[i++]);
      } else if (i == a.terms_.size() || b.terms_[j].first < a.terms_[i].first) {
        r.terms_.emplace_back(b.terms_[j].first, negate ? -b.terms_[j].second : b.terms_[j].second);
        ++j;
      } else {
        Coef c = negate ? a.terms_[i].second - b.terms_[j].second : a.terms_[i].second + b.terms_[j].second;
        if (!c.is_zero()) r.terms_.emplace_back(a.terms_[i].first, std::move(c));
        ++i;
        ++j;
      }
    }
    return r;
  }

  std::vector<Term> terms_;
};

}  // namespace braid
