#include <fstream>
#include <sstream>

#include "doctest.h"

#include "braid/errors.hpp"
#include "scenario.hpp"

using namespace braid;
using namespace braid::scenario;

namespace {

std::string read(const std::string& name) {
  std::ifstream in(std::string(BRAID_FIXTURES_DIR) + "/" + name);
  REQUIRE(in.good());
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

ErrorKind kind_of(const std::function<void()>& body) {
  try {
    body();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::SchemaError;
}

Report run_text(const std::string& text, const std::string& cmd) {
  const Spec spec = parse_spec(text);
  const Model m(spec, resolve(spec, {}));
  return run(m, cmd);
}

const char* minimal = R"({
  "ring": "rational",
  "lie_algebra": {"generators": ["P"]},
  "action": {"coordinates": ["x"], "generators": {"P": {"x": {"1": "1"}}}},
  "frame": "coordinate"
})";

}  // namespace

TEST_CASE("minimal scenario: defaults and a passing run") {
  const Spec spec = parse_spec(minimal);
  const Settings s = resolve(spec, {});
  CHECK(s.depth == 3);
  CHECK(s.degree == 2);
  CHECK(s.order == 3);
  CHECK(spec.frame.empty());
  CHECK_FALSE(spec.twist.has_value());
  const Report r = run(Model(spec, s), "all");
  CHECK(r.all_pass());
  CHECK(r.skipped().empty());
  CHECK(r.find("d-squared") != nullptr);
}

TEST_CASE("overrides take precedence over scenario params") {
  const Spec spec = parse_spec(read("moyal.json"));
  Params o;
  o.depth = 2;
  o.seed = 11;
  const Settings s = resolve(spec, o);
  CHECK(s.depth == 2);
  CHECK(s.degree == 2);
  CHECK(s.seed == 11);
  CHECK(s.order == 3);
}

TEST_CASE("inconsistent brackets are rejected") {
  // c^3_{12} = c^3_{21} = 1 is not antisymmetric.
  const std::string text = R"({
    "lie_algebra": {"generators": ["A", "B", "C"],
      "brackets": [{"left": "A", "right": "B", "result": {"C": "1"}},
                   {"left": "B", "right": "A", "result": {"C": "1"}}]}
  })";
  const Spec spec = parse_spec(text);
  CHECK(kind_of([&] { Model(spec, resolve(spec, {})); }) == ErrorKind::JacobiViolation);
}

TEST_CASE("a bracket given once is completed antisymmetrically") {
  const Spec spec = parse_spec(read("heisenberg.json"));
  const Model m(spec, resolve(spec, {}));
  const Report r = run(m, "check-hopf");
  CHECK(r.all_pass());
}

TEST_CASE("schema errors name their location") {
  try {
    parse_spec("{\n  \"lie_algebra\": {\"generators\": [\"P\"]},\n  \"ring\": \n}");
    FAIL("syntax error accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SchemaError);
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
  try {
    parse_spec(R"({"lie_algebra": {"generators": ["P"], "colour": 1}, "params": {"depth": -1}})");
    FAIL("bad document accepted");
  } catch (const Error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("/lie_algebra/colour: unknown key") != std::string::npos);
    CHECK(msg.find("/params/depth") != std::string::npos);
  }
  CHECK(kind_of([] { parse_spec(R"({"ring": "rational"})"); }) == ErrorKind::SchemaError);
  CHECK(kind_of([] { parse_spec(R"({"lie_algebra": {"generators": ["P"]}, "suites": ["nope"]})"); }) == ErrorKind::SchemaError);
}

TEST_CASE("cross references must resolve") {
  const std::string text = R"({
    "lie_algebra": {"generators": ["P"]},
    "action": {"coordinates": ["x"], "generators": {"Q": {"x": {"1": "1"}}}}
  })";
  const Spec spec = parse_spec(text);
  CHECK(kind_of([&] { Model(spec, resolve(spec, {})); }) == ErrorKind::UnknownName);
}

TEST_CASE("missing sections") {
  CHECK(kind_of([] { run_text(minimal, "levi-civita"); }) == ErrorKind::MissingSection);
  CHECK(kind_of([] { run_text(minimal, "gauge"); }) == ErrorKind::MissingSection);
  CHECK(kind_of([] { run_text(minimal, "project"); }) == ErrorKind::MissingSection);
  const std::string no_action = R"({"lie_algebra": {"generators": ["P"]}})";
  CHECK(kind_of([&] { run_text(no_action, "cartan"); }) == ErrorKind::MissingSection);
}

TEST_CASE("the Moyal fixture round-trips through serialization") {
  const Spec a = parse_spec(read("moyal.json"));
  const auto ja = to_json(a);
  const Spec b = parse_spec(ja.dump());
  CHECK(to_json(b) == ja);
  for (const char* f : {"levi_civita.json", "submanifold_twist.json", "corrupted/asymmetric_gamma.json",
                        "corrupted/broken_cocycle.json", "corrupted/wrong_antipode.json", "corrupted/wrong_transport.json"}) {
    CAPTURE(f);
    const auto j = to_json(parse_spec(read(f)));
    CHECK(to_json(parse_spec(j.dump())) == j);
  }
}

TEST_CASE("gauge on the Moyal fixture passes") {
  const Report r = run_text(read("moyal.json"), "gauge");
  CHECK(r.all_pass());
  CHECK(r.skipped().empty());
  CHECK(r.checks().size() == 8);
}

TEST_CASE("structured reports are deterministic and record the seed") {
  const Spec spec = parse_spec(read("levi_civita.json"));
  const Settings s = resolve(spec, {});
  const std::string first = render_structured(run(Model(spec, s), "all"), "all", s, false).dump();
  const std::string second = render_structured(run(Model(spec, s), "all"), "all", s, false).dump();
  CHECK(first == second);
  const auto doc = nlohmann::json::parse(first);
  CHECK(doc["params"]["seed"] == 7);
  CHECK(doc["pass"] == true);
  CHECK(doc["checks"].size() > 20);
  CHECK_FALSE(doc["checks"][0].contains("millis"));
}

TEST_CASE("engine errors inside a suite are reported, not thrown") {
  // The metric inverse witness is wrong, so the metric suite fails and the
  // Levi-Civita construction is skipped rather than aborting the run.
  const std::string text = R"({
    "lie_algebra": {"generators": ["P"]},
    "action": {"coordinates": ["x"], "generators": {"P": {"x": {"1": "1"}}}},
    "metric": {"matrix": [[{"1": "2"}]], "inverse": [[{"1": "1"}]]}
  })";
  const Report r = run_text(text, "levi-civita");
  CHECK_FALSE(r.find("inverse-witness")->pass);
  REQUIRE(r.skipped().size() == 1);
  CHECK(r.find("aborted") == nullptr);
}
