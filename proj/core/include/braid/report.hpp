#pragma once

#include <chrono>
#include <string>
#include <vector>

namespace braid {

struct CheckResult {
  std::string suite;
  std::string name;
  std::string anchor;  // the identity being checked, as a formula
  bool pass = true;
  std::string counterexample;
  double millis = 0.0;
  std::size_t instances = 0;
};

class Report {
 public:
  void add(CheckResult r) { checks_.push_back(std::move(r)); }
  void merge(const Report& o) {
    checks_.insert(checks_.end(), o.checks_.begin(), o.checks_.end());
    skipped_.insert(skipped_.end(), o.skipped_.begin(), o.skipped_.end());
  }
  // A check that was not run because a precondition failed; never counts as passed.
  void skip(std::string suite, std::string name, std::string reason) {
    skipped_.push_back(CheckResult{std::move(suite), std::move(name), {}, false, std::move(reason), 0.0, 0});
  }
  const std::vector<CheckResult>& skipped() const { return skipped_; }
  const std::vector<CheckResult>& checks() const { return checks_; }
  bool all_pass() const {
    for (const auto& c : checks_)
      if (!c.pass) return false;
    return true;
  }
  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks_)
      if (c.name == name) return &c;
    return nullptr;
  }

 private:
  std::vector<CheckResult> checks_;
  std::vector<CheckResult> skipped_;
};

// Accumulates one check: records the first counterexample and elapsed time.
class CheckScope {
 public:
  CheckScope(Report& report, std::string suite, std::string name, std::string anchor)
      : report_(report), start_(std::chrono::steady_clock::now()) {
    result_.suite = std::move(suite);
    result_.name = std::move(name);
    result_.anchor = std::move(anchor);
  }
  CheckScope(const CheckScope&) = delete;
  CheckScope& operator=(const CheckScope&) = delete;
  ~CheckScope() {
    result_.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    report_.add(std::move(result_));
  }

  // Returns ok; the first failing instance is kept as the counterexample.
  bool expect(bool ok, const std::string& what) {
    ++result_.instances;
    if (!ok && result_.pass) {
      result_.pass = false;
      result_.counterexample = what;
    }
    return ok;
  }
  template <class F>
  bool expect_lazy(bool ok, F&& describe) {
    ++result_.instances;
    if (!ok && result_.pass) {
      result_.pass = false;
      result_.counterexample = describe();
    }
    return ok;
  }
  void fail_with(const std::string& what) { expect(false, what); }
  bool failed() const { return !result_.pass; }

 private:
  Report& report_;
  CheckResult result_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace braid
