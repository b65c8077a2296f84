#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "braid/submanifold.hpp"

namespace braid::scenario {

// Polynomial as {monomial text: rational}; monomial text may contain h.
using PolyText = std::vector<std::pair<std::string, Rational>>;
// Element of U(g) as {PBW monomial text such as "P1 P2^2" or "1": rational}.
using HopfText = std::vector<std::pair<std::string, Rational>>;

struct Bracket {
  std::string left, right;
  std::vector<std::pair<std::string, Rational>> result;
};

struct TwistTerm {
  std::string left, right;  // PBW monomials
  Rational coefficient;
  int h = 0;  // power of the deformation parameter
};

struct TwistSpec {
  std::vector<TwistTerm> bivector;  // F = exp(sum c h^k l (x) r)
  std::vector<TwistTerm> tensor;    // F given term by term
  bool inverse_transport = false;   // forced failure: swap F and F^{-1} in the transport
};

struct FrameVector {
  std::string name;
  std::map<std::string, PolyText> images;  // coordinate -> polynomial
};

struct ChristoffelEntry {
  std::string upper, left, right;  // Gamma^upper_{left right}
  PolyText value;
};

struct Params {
  std::optional<int> depth, degree, order, perturbations;
  std::optional<std::uint64_t> seed;
};

// The declarative document, validated but not yet built.
struct Spec {
  std::string ring = "rational";
  std::vector<std::string> generators;
  std::vector<Bracket> brackets;
  std::map<std::string, HopfText> antipode_override;
  bool has_action = false;
  std::vector<std::string> coordinates;
  std::vector<std::pair<std::string, PolyText>> inverses;
  std::map<std::string, std::map<std::string, PolyText>> action;  // generator -> coordinate -> image
  std::optional<TwistSpec> twist;
  std::vector<FrameVector> frame;  // empty: coordinate frame
  std::vector<std::string> form_names;
  std::optional<std::vector<std::vector<PolyText>>> metric, metric_inverse;
  std::vector<ChristoffelEntry> connection;
  bool has_connection = false;
  std::optional<std::vector<std::string>> ideal;
  std::vector<std::string> suites;
  Params params;
};

// Throws Error(SchemaError) listing every problem found, with line and column
// for syntax errors and JSON pointers for structural ones.
Spec parse_spec(const std::string& text);
nlohmann::ordered_json to_json(const Spec& spec);

struct Settings {
  int depth = 3, degree = 2, order = 3, perturbations = 20;
  std::uint64_t seed = 7;
};

// Defaults, then scenario params, then the overrides.
Settings resolve(const Spec& spec, const Params& overrides);

// Engine objects for a spec. Throws UnknownName, JacobiViolation or SchemaError.
class Model {
 public:
  Model(const Spec& spec, const Settings& settings);

  const Spec& spec() const { return spec_; }
  const Settings& settings() const { return settings_; }
  Ring ring() const { return ring_; }
  const std::shared_ptr<Enveloping>& env() const { return U_; }
  const HopfAlgebra& hopf() const { return *H_; }
  bool has_action() const { return A_ != nullptr; }
  const ModuleAlgebra& algebra() const;  // MissingSection without an action
  const Calculus& calculus() const;
  const Twist* twist() const { return F_ ? &*F_ : nullptr; }
  const Metric* metric() const { return g_ ? &*g_ : nullptr; }
  const Christoffel* connection() const { return gamma_ ? &*gamma_ : nullptr; }
  const std::vector<std::string>* ideal() const { return spec_.ideal ? &*spec_.ideal : nullptr; }

 private:
  Spec spec_;
  Settings settings_;
  Ring ring_;
  std::shared_ptr<Enveloping> U_;
  std::unique_ptr<HopfAlgebra> H_;
  std::unique_ptr<ModuleAlgebra> A_;
  std::unique_ptr<Calculus> C_;
  std::optional<Twist> F_;
  std::optional<Metric> g_;
  std::optional<Christoffel> gamma_;
};

// One subcommand: check-hopf, check-twist, star, cartan, gauge,
// levi-civita, project or all. Engine failures inside a suite are recorded
// as a failed "aborted" check; missing data raises MissingSection.
Report run(const Model& model, const std::string& subcommand);
const std::vector<std::string>& subcommands();

std::string render_text(const Report& report, bool timing);
nlohmann::ordered_json render_structured(const Report& report, const std::string& subcommand, const Settings& s, bool timing);

}  // namespace braid::scenario
