#include "scenario.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "braid/errors.hpp"

namespace braid::scenario {

using nlohmann::json;
using nlohmann::ordered_json;

// ---------------------------------------------------------------- parsing

namespace {

// Collects structural problems instead of stopping at the first one.
class Reader {
 public:
  std::vector<std::string> errors;

  void error(const std::string& path, const std::string& what) { errors.push_back((path.empty() ? "/" : path) + ": " + what); }

  bool object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) {
      error(path, "expected an object");
      return false;
    }
    for (const auto& [k, v] : j.items())
      if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }) == allowed.end())
        error(path + "/" + k, "unknown key");
    return true;
  }

  std::optional<std::string> string(const json& j, const std::string& path) {
    if (!j.is_string()) {
      error(path, "expected a string");
      return std::nullopt;
    }
    return j.get<std::string>();
  }

  std::vector<std::string> strings(const json& j, const std::string& path) {
    std::vector<std::string> out;
    if (!j.is_array()) {
      error(path, "expected an array of strings");
      return out;
    }
    for (std::size_t i = 0; i < j.size(); ++i)
      if (auto s = string(j[i], path + "/" + std::to_string(i))) out.push_back(*s);
    return out;
  }

  std::optional<Rational> rational(const json& j, const std::string& path) {
    try {
      if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
      if (j.is_string()) return Rational::parse(j.get<std::string>());
    } catch (const std::exception& e) {
      error(path, std::string("bad rational: ") + e.what());
      return std::nullopt;
    }
    error(path, "expected a rational as \"p/q\" or an integer");
    return std::nullopt;
  }

  std::optional<int> integer(const json& j, const std::string& path, int lo) {
    if (!j.is_number_integer() || j.get<std::int64_t>() < lo) {
      error(path, "expected an integer >= " + std::to_string(lo));
      return std::nullopt;
    }
    return static_cast<int>(j.get<std::int64_t>());
  }

  // {"x^2 y": "3/2", "1": "-1"}
  PolyText coefficients(const json& j, const std::string& path) {
    PolyText out;
    if (!j.is_object()) {
      error(path, "expected a coefficient map {monomial: rational}");
      return out;
    }
    for (const auto& [k, v] : j.items())
      if (auto r = rational(v, path + "/" + k)) out.emplace_back(k, *r);
    return out;
  }

  std::vector<TwistTerm> terms(const json& j, const std::string& path) {
    std::vector<TwistTerm> out;
    if (!j.is_array()) {
      error(path, "expected an array of terms");
      return out;
    }
    for (std::size_t i = 0; i < j.size(); ++i) {
      const std::string p = path + "/" + std::to_string(i);
      if (!object(j[i], p, {"left", "right", "coefficient", "h"})) continue;
      TwistTerm t;
      if (j[i].contains("left")) t.left = string(j[i]["left"], p + "/left").value_or("1");
      else error(p, "missing left");
      if (j[i].contains("right")) t.right = string(j[i]["right"], p + "/right").value_or("1");
      else error(p, "missing right");
      t.coefficient = j[i].contains("coefficient") ? rational(j[i]["coefficient"], p + "/coefficient").value_or(Rational(1)) : Rational(1);
      t.h = j[i].contains("h") ? integer(j[i]["h"], p + "/h", 0).value_or(0) : 0;
      out.push_back(std::move(t));
    }
    return out;
  }

  std::vector<std::vector<PolyText>> matrix(const json& j, const std::string& path) {
    std::vector<std::vector<PolyText>> out;
    if (!j.is_array()) {
      error(path, "expected an array of rows");
      return out;
    }
    for (std::size_t r = 0; r < j.size(); ++r) {
      const std::string p = path + "/" + std::to_string(r);
      std::vector<PolyText> row;
      if (!j[r].is_array()) {
        error(p, "expected a row");
      } else {
        for (std::size_t c = 0; c < j[r].size(); ++c) row.push_back(coefficients(j[r][c], p + "/" + std::to_string(c)));
      }
      out.push_back(std::move(row));
    }
    return out;
  }
};

std::string position(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

Spec parse_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::SchemaError, position(text, e.byte) + ": " + e.what());
  }
  Reader rd;
  Spec s;
  if (!rd.object(doc, "", {"ring", "lie_algebra", "action", "twist", "frame", "metric", "connection", "ideal", "suites", "params"}))
    fail(ErrorKind::SchemaError, rd.errors.front());

  if (doc.contains("ring")) {
    const json& r = doc["ring"];
    if (r.is_string()) {
      s.ring = r.get<std::string>();
    } else if (rd.object(r, "/ring", {"kind", "order"})) {
      s.ring = r.contains("kind") ? rd.string(r["kind"], "/ring/kind").value_or("rational") : "rational";
      if (r.contains("order")) s.params.order = rd.integer(r["order"], "/ring/order", 1);
    }
    if (s.ring != "rational" && s.ring != "series") rd.error("/ring", "kind must be rational or series");
  }

  if (!doc.contains("lie_algebra")) {
    rd.error("/lie_algebra", "missing section");
  } else if (const json& l = doc["lie_algebra"]; rd.object(l, "/lie_algebra", {"generators", "brackets", "antipode_override"})) {
    if (l.contains("generators")) s.generators = rd.strings(l["generators"], "/lie_algebra/generators");
    else rd.error("/lie_algebra", "missing generators");
    if (l.contains("brackets")) {
      const json& b = l["brackets"];
      if (!b.is_array()) rd.error("/lie_algebra/brackets", "expected an array");
      for (std::size_t i = 0; b.is_array() && i < b.size(); ++i) {
        const std::string p = "/lie_algebra/brackets/" + std::to_string(i);
        if (!rd.object(b[i], p, {"left", "right", "result"})) continue;
        Bracket br;
        br.left = b[i].contains("left") ? rd.string(b[i]["left"], p + "/left").value_or("") : "";
        br.right = b[i].contains("right") ? rd.string(b[i]["right"], p + "/right").value_or("") : "";
        if (b[i].contains("result")) br.result = rd.coefficients(b[i]["result"], p + "/result");
        s.brackets.push_back(std::move(br));
      }
    }
    if (l.contains("antipode_override") && rd.object(l["antipode_override"], "/lie_algebra/antipode_override", {}) == false) {
    }
    if (l.contains("antipode_override") && l["antipode_override"].is_object()) {
      s.antipode_override.clear();
      for (const auto& [g, v] : l["antipode_override"].items())
        s.antipode_override[g] = rd.coefficients(v, "/lie_algebra/antipode_override/" + g);
      // The unknown-key errors raised above for generator names do not apply here.
      rd.errors.erase(std::remove_if(rd.errors.begin(), rd.errors.end(),
                                     [](const std::string& e) { return e.rfind("/lie_algebra/antipode_override/", 0) == 0 && e.find(": unknown key") != std::string::npos; }),
                      rd.errors.end());
    }
  }

  if (doc.contains("action")) {
    const json& a = doc["action"];
    if (rd.object(a, "/action", {"coordinates", "inverses", "generators"})) {
      s.has_action = true;
      if (a.contains("coordinates")) s.coordinates = rd.strings(a["coordinates"], "/action/coordinates");
      else rd.error("/action", "missing coordinates");
      if (a.contains("inverses")) {
        if (!a["inverses"].is_object()) rd.error("/action/inverses", "expected {name: polynomial}");
        else
          for (const auto& [w, u] : a["inverses"].items()) s.inverses.emplace_back(w, rd.coefficients(u, "/action/inverses/" + w));
      }
      if (a.contains("generators")) {
        if (!a["generators"].is_object()) rd.error("/action/generators", "expected {generator: {coordinate: polynomial}}");
        else
          for (const auto& [g, m] : a["generators"].items()) {
            auto& row = s.action[g];
            if (!m.is_object()) {
              rd.error("/action/generators/" + g, "expected {coordinate: polynomial}");
              continue;
            }
            for (const auto& [x, p] : m.items()) row[x] = rd.coefficients(p, "/action/generators/" + g + "/" + x);
          }
      } else {
        rd.error("/action", "missing generators");
      }
    }
  }

  if (doc.contains("twist") && !doc["twist"].is_null()) {
    const json& t = doc["twist"];
    if (rd.object(t, "/twist", {"bivector", "tensor", "transport"})) {
      TwistSpec ts;
      if (t.contains("bivector")) ts.bivector = rd.terms(t["bivector"], "/twist/bivector");
      if (t.contains("tensor")) ts.tensor = rd.terms(t["tensor"], "/twist/tensor");
      if (t.contains("bivector") == t.contains("tensor")) rd.error("/twist", "give exactly one of bivector and tensor");
      if (t.contains("transport")) {
        const auto dir = rd.string(t["transport"], "/twist/transport").value_or("forward");
        if (dir != "forward" && dir != "inverse") rd.error("/twist/transport", "expected forward or inverse");
        ts.inverse_transport = dir == "inverse";
      }
      s.twist = std::move(ts);
    }
  }

  if (doc.contains("frame")) {
    const json& f = doc["frame"];
    if (f.is_string()) {
      if (f.get<std::string>() != "coordinate") rd.error("/frame", "the only named frame is \"coordinate\"");
    } else if (rd.object(f, "/frame", {"vectors", "forms"})) {
      if (!f.contains("vectors") || !f["vectors"].is_array()) {
        rd.error("/frame/vectors", "expected an array");
      } else {
        for (std::size_t i = 0; i < f["vectors"].size(); ++i) {
          const json& v = f["vectors"][i];
          const std::string p = "/frame/vectors/" + std::to_string(i);
          if (!rd.object(v, p, {"name", "images"})) continue;
          FrameVector fv;
          fv.name = v.contains("name") ? rd.string(v["name"], p + "/name").value_or("") : "";
          if (fv.name.empty()) rd.error(p, "missing name");
          if (v.contains("images") && v["images"].is_object())
            for (const auto& [x, poly] : v["images"].items()) fv.images[x] = rd.coefficients(poly, p + "/images/" + x);
          else
            rd.error(p + "/images", "expected {coordinate: polynomial}");
          s.frame.push_back(std::move(fv));
        }
      }
      if (f.contains("forms")) s.form_names = rd.strings(f["forms"], "/frame/forms");
    }
  }

  if (doc.contains("metric")) {
    const json& m = doc["metric"];
    if (rd.object(m, "/metric", {"matrix", "inverse"})) {
      if (m.contains("matrix")) s.metric = rd.matrix(m["matrix"], "/metric/matrix");
      else rd.error("/metric", "missing matrix");
      if (m.contains("inverse")) s.metric_inverse = rd.matrix(m["inverse"], "/metric/inverse");
    }
  }

  if (doc.contains("connection")) {
    const json& c = doc["connection"];
    s.has_connection = true;
    if (rd.object(c, "/connection", {"christoffel"}) && c.contains("christoffel") && c["christoffel"].is_array()) {
      for (std::size_t i = 0; i < c["christoffel"].size(); ++i) {
        const json& e = c["christoffel"][i];
        const std::string p = "/connection/christoffel/" + std::to_string(i);
        if (!rd.object(e, p, {"upper", "lower", "value"})) continue;
        ChristoffelEntry ce;
        ce.upper = e.contains("upper") ? rd.string(e["upper"], p + "/upper").value_or("") : "";
        const auto lower = e.contains("lower") ? rd.strings(e["lower"], p + "/lower") : std::vector<std::string>{};
        if (lower.size() != 2) rd.error(p + "/lower", "expected two frame names");
        else {
          ce.left = lower[0];
          ce.right = lower[1];
        }
        if (e.contains("value")) ce.value = rd.coefficients(e["value"], p + "/value");
        else rd.error(p, "missing value");
        s.connection.push_back(std::move(ce));
      }
    } else {
      rd.error("/connection/christoffel", "expected an array");
    }
  }

  if (doc.contains("ideal")) {
    const json& i = doc["ideal"];
    if (rd.object(i, "/ideal", {"coordinates"})) {
      if (i.contains("coordinates")) s.ideal = rd.strings(i["coordinates"], "/ideal/coordinates");
      else rd.error("/ideal", "missing coordinates");
    }
  }

  if (doc.contains("suites")) {
    s.suites = rd.strings(doc["suites"], "/suites");
    for (const auto& name : s.suites)
      if (name == "all" || std::find(subcommands().begin(), subcommands().end(), name) == subcommands().end())
        rd.error("/suites", "unknown suite " + name);
  }

  if (doc.contains("params")) {
    const json& p = doc["params"];
    if (rd.object(p, "/params", {"depth", "degree", "order", "seed", "perturbations"})) {
      if (p.contains("depth")) s.params.depth = rd.integer(p["depth"], "/params/depth", 0);
      if (p.contains("degree")) s.params.degree = rd.integer(p["degree"], "/params/degree", 0);
      if (p.contains("order")) s.params.order = rd.integer(p["order"], "/params/order", 1);
      if (p.contains("perturbations")) s.params.perturbations = rd.integer(p["perturbations"], "/params/perturbations", 0);
      if (p.contains("seed")) {
        if (p["seed"].is_number_unsigned() || (p["seed"].is_number_integer() && p["seed"].get<std::int64_t>() >= 0))
          s.params.seed = p["seed"].get<std::uint64_t>();
        else
          rd.error("/params/seed", "expected a non-negative integer");
      }
    }
  }

  if (!rd.errors.empty()) {
    std::string all;
    for (const auto& e : rd.errors) all += (all.empty() ? "" : "; ") + e;
    fail(ErrorKind::SchemaError, all);
  }
  return s;
}

namespace {

ordered_json coefficients_json(const PolyText& p) {
  ordered_json out = ordered_json::object();
  for (const auto& [k, r] : p) out[k] = r.str();
  return out;
}

ordered_json terms_json(const std::vector<TwistTerm>& ts) {
  ordered_json out = ordered_json::array();
  for (const auto& t : ts) out.push_back({{"left", t.left}, {"right", t.right}, {"coefficient", t.coefficient.str()}, {"h", t.h}});
  return out;
}

ordered_json matrix_json(const std::vector<std::vector<PolyText>>& m) {
  ordered_json out = ordered_json::array();
  for (const auto& row : m) {
    ordered_json r = ordered_json::array();
    for (const auto& e : row) r.push_back(coefficients_json(e));
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

ordered_json to_json(const Spec& s) {
  ordered_json doc;
  ordered_json ring = {{"kind", s.ring}};
  if (s.params.order) ring["order"] = *s.params.order;
  doc["ring"] = ring;
  ordered_json lie = {{"generators", s.generators}};
  if (!s.brackets.empty()) {
    ordered_json bs = ordered_json::array();
    for (const auto& b : s.brackets) bs.push_back({{"left", b.left}, {"right", b.right}, {"result", coefficients_json(b.result)}});
    lie["brackets"] = bs;
  }
  if (!s.antipode_override.empty()) {
    ordered_json ao = ordered_json::object();
    for (const auto& [g, v] : s.antipode_override) ao[g] = coefficients_json(v);
    lie["antipode_override"] = ao;
  }
  doc["lie_algebra"] = lie;
  if (s.has_action) {
    ordered_json a = {{"coordinates", s.coordinates}};
    if (!s.inverses.empty()) {
      ordered_json inv = ordered_json::object();
      for (const auto& [w, u] : s.inverses) inv[w] = coefficients_json(u);
      a["inverses"] = inv;
    }
    ordered_json gens = ordered_json::object();
    for (const auto& [g, row] : s.action) {
      ordered_json r = ordered_json::object();
      for (const auto& [x, p] : row) r[x] = coefficients_json(p);
      gens[g] = r;
    }
    a["generators"] = gens;
    doc["action"] = a;
  }
  if (s.twist) {
    ordered_json t;
    if (!s.twist->tensor.empty()) t["tensor"] = terms_json(s.twist->tensor);
    else t["bivector"] = terms_json(s.twist->bivector);
    t["transport"] = s.twist->inverse_transport ? "inverse" : "forward";
    doc["twist"] = t;
  }
  if (s.frame.empty()) {
    doc["frame"] = "coordinate";
  } else {
    ordered_json vs = ordered_json::array();
    for (const auto& v : s.frame) {
      ordered_json im = ordered_json::object();
      for (const auto& [x, p] : v.images) im[x] = coefficients_json(p);
      vs.push_back({{"name", v.name}, {"images", im}});
    }
    ordered_json f = {{"vectors", vs}};
    if (!s.form_names.empty()) f["forms"] = s.form_names;
    doc["frame"] = f;
  }
  if (s.metric) {
    ordered_json m = {{"matrix", matrix_json(*s.metric)}};
    if (s.metric_inverse) m["inverse"] = matrix_json(*s.metric_inverse);
    doc["metric"] = m;
  }
  if (s.has_connection) {
    ordered_json cs = ordered_json::array();
    for (const auto& c : s.connection)
      cs.push_back({{"upper", c.upper}, {"lower", {c.left, c.right}}, {"value", coefficients_json(c.value)}});
    doc["connection"] = {{"christoffel", cs}};
  }
  if (s.ideal) doc["ideal"] = {{"coordinates", *s.ideal}};
  if (!s.suites.empty()) doc["suites"] = s.suites;
  ordered_json p = ordered_json::object();
  if (s.params.depth) p["depth"] = *s.params.depth;
  if (s.params.degree) p["degree"] = *s.params.degree;
  if (s.params.seed) p["seed"] = *s.params.seed;
  if (s.params.perturbations) p["perturbations"] = *s.params.perturbations;
  if (!p.empty()) doc["params"] = p;
  return doc;
}

Settings resolve(const Spec& spec, const Params& o) {
  Settings s;
  auto pick = [](auto& dst, const auto& a, const auto& b) {
    if (b) dst = *b;
    else if (a) dst = *a;
  };
  pick(s.depth, spec.params.depth, o.depth);
  pick(s.degree, spec.params.degree, o.degree);
  pick(s.order, spec.params.order, o.order);
  pick(s.perturbations, spec.params.perturbations, o.perturbations);
  pick(s.seed, spec.params.seed, o.seed);
  return s;
}

// ---------------------------------------------------------------- model

namespace {

int find_name(const std::vector<std::string>& names, const std::string& name, const std::string& what) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) fail(ErrorKind::UnknownName, what + " " + name);
  return static_cast<int>(it - names.begin());
}

Mono pbw(const std::string& text, const std::vector<std::string>& names) {
  std::istringstream in(text);
  std::string tok;
  Mono m = 0;
  while (in >> tok) {
    if (tok == "1") continue;
    int e = 1;
    if (auto hat = tok.find('^'); hat != std::string::npos) {
      try {
        e = std::stoi(tok.substr(hat + 1));
      } catch (const std::exception&) {
        fail(ErrorKind::SchemaError, "bad exponent in " + text);
      }
      tok = tok.substr(0, hat);
    }
    m = mono::mul(m, mono::unit(find_name(names, tok, "generator"), e));
  }
  return m;
}

Poly poly(const CoordinateAlgebra& A, const PolyText& p) {
  Poly out = A.zero();
  for (const auto& [k, r] : p) out += A.parse(k).scaled(Scalar(A.ring(), r));
  return out;
}

TensorElement tensor(Ring ring, const std::vector<TwistTerm>& ts, const std::vector<std::string>& names) {
  TensorElement out(2, ring);
  for (const auto& t : ts) {
    Scalar c(ring, t.coefficient);
    for (int k = 0; k < t.h; ++k) c = c * Scalar::h(ring);
    out += TensorElement(2, ring, TensorElement::Terms(TensorKey{pbw(t.left, names), pbw(t.right, names), 0}, c));
  }
  return out;
}

}  // namespace

Model::Model(const Spec& spec, const Settings& settings) : spec_(spec), settings_(settings) {
  ring_ = spec.ring == "series" ? Ring::series(settings.order) : Ring::rational();
  const auto& names = spec.generators;
  const int n = static_cast<int>(names.size());
  if (std::set<std::string>(names.begin(), names.end()).size() != names.size())
    fail(ErrorKind::SchemaError, "duplicate generator names");

  // Brackets given once are completed antisymmetrically; both orders are taken literally.
  std::vector<std::vector<std::vector<Scalar>>> c(n, std::vector<std::vector<Scalar>>(n, std::vector<Scalar>(n, Scalar(ring_))));
  std::set<std::pair<int, int>> given;
  for (const auto& b : spec.brackets) {
    const int i = find_name(names, b.left, "generator"), j = find_name(names, b.right, "generator");
    given.insert({i, j});
    for (const auto& [k, r] : b.result) c[i][j][find_name(names, k, "generator")] = Scalar(ring_, r);
  }
  for (const auto& [i, j] : given)
    if (!given.count({j, i}))
      for (int k = 0; k < n; ++k) c[j][i][k] = -c[i][j][k];
  U_ = std::make_shared<Enveloping>(LieAlgebra(names, ring_, c));
  for (const auto& [g, img] : spec.antipode_override) {
    HopfElement h(ring_);
    for (const auto& [m, r] : img) h += HopfElement::monomial(pbw(m, names), Scalar(ring_, r));
    U_->override_antipode(find_name(names, g, "generator"), h);
  }
  H_ = std::make_unique<HopfAlgebra>(U_);

  if (spec.twist) {
    if (!ring_.is_series()) fail(ErrorKind::SchemaError, "a twist needs the series ring");
    if (!spec.twist->tensor.empty()) F_ = twist_from_tensor(*U_, tensor(ring_, spec.twist->tensor, names));
    else F_ = exp_twist(*U_, tensor(ring_, spec.twist->bivector, names));
  }

  if (!spec.has_action) {
    for (const char* sec : {"metric", "connection", "ideal", "frame"}) {
      const bool present = (std::string(sec) == "metric" && spec.metric) || (std::string(sec) == "connection" && spec.has_connection) ||
                           (std::string(sec) == "ideal" && spec.ideal) || (std::string(sec) == "frame" && !spec.frame.empty());
      if (present) fail(ErrorKind::MissingSection, std::string(sec) + " needs an action section");
    }
    return;
  }
  auto base = std::make_shared<CoordinateAlgebra>(spec.coordinates, ring_);
  std::vector<CoordinateAlgebra::Inverse> inv;
  for (const auto& [w, u] : spec.inverses) inv.push_back({w, poly(*base, u)});
  auto coords = std::make_shared<CoordinateAlgebra>(spec.coordinates, ring_, inv);
  std::vector<std::vector<Poly>> images(n, std::vector<Poly>(spec.coordinates.size(), coords->zero()));
  for (const auto& [g, row] : spec.action) {
    const int gi = find_name(names, g, "generator");
    for (const auto& [x, p] : row) images[gi][find_name(spec.coordinates, x, "coordinate")] = poly(*coords, p);
  }
  A_ = std::make_unique<ModuleAlgebra>(coords, *H_, std::move(images));

  std::unique_ptr<Frame> frame;
  if (spec.frame.empty()) {
    frame = std::make_unique<Frame>(Frame::coordinate(*A_));
  } else {
    std::vector<std::vector<Poly>> fi;
    std::vector<std::string> vn;
    for (const auto& v : spec.frame) {
      std::vector<Poly> row(spec.coordinates.size(), coords->zero());
      for (const auto& [x, p] : v.images) row[find_name(spec.coordinates, x, "coordinate")] = poly(*coords, p);
      fi.push_back(std::move(row));
      vn.push_back(v.name);
    }
    frame = std::make_unique<Frame>(*A_, std::move(fi), vn, spec.form_names);
  }
  C_ = std::make_unique<Calculus>(*A_, *frame);
  const auto& fnames = C_->frame().vector_names();
  const int k = C_->rank();

  auto read_matrix = [&](const std::vector<std::vector<PolyText>>& m, const char* what) {
    if (static_cast<int>(m.size()) != k) fail(ErrorKind::SchemaError, std::string(what) + " must be " + std::to_string(k) + " x " + std::to_string(k));
    PolyMatrix out;
    for (const auto& row : m) {
      if (static_cast<int>(row.size()) != k) fail(ErrorKind::SchemaError, std::string(what) + " rows must have " + std::to_string(k) + " entries");
      std::vector<Poly> r;
      for (const auto& e : row) r.push_back(poly(*coords, e));
      out.push_back(std::move(r));
    }
    return out;
  };
  if (spec.metric) {
    std::optional<PolyMatrix> inverse;
    if (spec.metric_inverse) inverse = read_matrix(*spec.metric_inverse, "metric inverse");
    g_.emplace(*C_, read_matrix(*spec.metric, "metric"), std::move(inverse));
  }
  if (spec.has_connection) {
    Christoffel gamma = Connection::flat(*C_).christoffel();
    for (const auto& e : spec.connection)
      gamma[find_name(fnames, e.left, "frame vector")][find_name(fnames, e.right, "frame vector")][find_name(fnames, e.upper, "frame vector")] =
          poly(*coords, e.value);
    gamma_ = std::move(gamma);
  }
  if (spec.ideal)
    for (const auto& x : *spec.ideal) find_name(spec.coordinates, x, "coordinate");
}

const ModuleAlgebra& Model::algebra() const {
  if (!A_) fail(ErrorKind::MissingSection, "action");
  return *A_;
}

const Calculus& Model::calculus() const {
  if (!C_) fail(ErrorKind::MissingSection, "action");
  return *C_;
}

// ---------------------------------------------------------------- runner

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"check-hopf", "check-twist", "star", "cartan", "gauge", "levi-civita", "project", "all"};
  return names;
}

namespace {

Report relabel(const Report& r, const std::string& suite) {
  Report out;
  for (auto c : r.checks()) {
    c.suite = suite;
    out.add(std::move(c));
  }
  for (const auto& c : r.skipped()) out.skip(suite, c.name, c.counterexample);
  return out;
}

// Runs one suite; an engine error becomes a failed check instead of an abort.
template <class F>
void guarded(Report& report, const std::string& suite, F&& body) {
  try {
    report.merge(body());
  } catch (const Error& e) {
    CheckResult r;
    r.suite = suite;
    r.name = "aborted";
    r.anchor = "suite runs to completion";
    r.pass = false;
    r.counterexample = e.what();
    report.add(std::move(r));
  }
}

// The Hopf algebra and calculus in force: twisted when a valid twist is given.
struct InForce {
  std::optional<HopfAlgebra> H;
  std::optional<Calculus> C;
  std::string unavailable;  // why the twisted structures could not be built
};

InForce in_force(const Model& m) {
  InForce out;
  const int D = m.settings().depth;
  if (!m.twist()) {
    out.H = m.hopf();
    if (m.has_action()) out.C = m.calculus();
    return out;
  }
  if (!check_cocycle(m.hopf(), *m.twist()).all_pass()) {
    out.unavailable = "the twist fails the cocycle checks";
    return out;
  }
  out.H = twist_hopf(m.hopf(), *m.twist(), D);
  if (m.has_action()) out.C = twisted_calculus(m.calculus(), *m.twist(), D);
  return out;
}

void run_one(const Model& m, const std::string& cmd, Report& report) {
  const Settings& s = m.settings();
  const int D = s.depth, deg = s.degree;
  if (cmd == "check-hopf") {
    guarded(report, "hopf", [&] { return check_hopf(m.hopf(), D); });
    guarded(report, "triangular", [&] { return check_triangular(m.hopf(), m.hopf().triangular(), D); });
    return;
  }
  if (cmd == "check-twist") {
    if (!m.twist()) fail(ErrorKind::MissingSection, "check-twist needs a twist section");
    Report cocycle;
    guarded(cocycle, "twist", [&] { return check_cocycle(m.hopf(), *m.twist()); });
    report.merge(cocycle);
    if (!cocycle.all_pass()) {
      report.skip("twisted-hopf", "suite", "the twist fails the cocycle checks");
      report.skip("twisted-triangular", "suite", "the twist fails the cocycle checks");
      return;
    }
    const HopfAlgebra HF = twist_hopf(m.hopf(), *m.twist(), D);
    guarded(report, "twisted-hopf", [&] { return relabel(check_hopf(HF, D), "twisted-hopf"); });
    guarded(report, "twisted-triangular", [&] { return relabel(check_triangular(HF, HF.triangular(), D), "twisted-triangular"); });
    return;
  }
  if (cmd == "star" || cmd == "cartan") {
    if (!m.has_action()) fail(ErrorKind::MissingSection, cmd + " needs an action section");
    const InForce f = in_force(m);
    if (!f.C) {
      report.skip(cmd, "suite", f.unavailable);
      return;
    }
    if (cmd == "cartan") {
      guarded(report, "cartan", [&] { return cartan_suite(*f.C, D, deg); });
      return;
    }
    const ModuleAlgebra& A = f.C->algebra();
    guarded(report, "module-algebra", [&] { return check_module_algebra(A, D, deg); });
    guarded(report, "star", [&] {
      Report r = check_star_associative(A, deg);
      r.merge(check_braided_commutative(A, A.hopf().triangular(), deg));
      r.merge(check_braiding_involutive(A, deg));
      return r;
    });
    return;
  }
  if (cmd == "gauge") {
    if (!m.twist()) fail(ErrorKind::MissingSection, "gauge needs a twist section");
    if (!m.has_action()) fail(ErrorKind::MissingSection, "gauge needs an action section");
    if (!check_cocycle(m.hopf(), *m.twist()).all_pass()) {
      report.skip("gauge", "suite", "the twist fails the cocycle checks");
      return;
    }
    guarded(report, "gauge", [&] { return gauge_suite(m.calculus(), *m.twist(), D, deg, m.spec().twist->inverse_transport); });
    return;
  }
  if (cmd == "levi-civita") {
    if (!m.metric()) fail(ErrorKind::MissingSection, "levi-civita needs a metric section");
    const Metric& g = *m.metric();
    Report metric;
    guarded(metric, "metric", [&] { return check_metric(g, D, deg); });
    report.merge(metric);
    if (m.connection()) {
      const Connection declared(m.calculus(), *m.connection());
      guarded(report, "declared-connection", [&] { return relabel(check_connection_axioms(declared, D, deg), "declared-connection"); });
      guarded(report, "declared-levi-civita", [&] { return relabel(check_levi_civita(declared, g, deg), "declared-levi-civita"); });
    }
    if (!metric.all_pass()) {
      report.skip("levi-civita", "suite", "the metric fails its checks");
      return;
    }
    const Connection lc = levi_civita(g, D, deg);
    guarded(report, "levi-civita", [&] { return check_levi_civita(lc, g, deg); });
    guarded(report, "levi-civita/uniqueness", [&] { return perturbation_suite(lc, g, s.perturbations, s.seed, deg); });
    if (m.twist()) {
      if (!check_cocycle(m.hopf(), *m.twist()).all_pass()) {
        report.skip("levi-civita-twist", "suite", "the twist fails the cocycle checks");
        return;
      }
      guarded(report, "levi-civita-twist", [&] {
        Report r;
        const Calculus CF = twisted_calculus(m.calculus(), *m.twist(), D);
        const Metric gF = twist_metric(g, CF, *m.twist());
        const Connection nF = twist_connection(lc, CF, *m.twist());
        {
          CheckScope c(r, "levi-civita-twist", "naturality", "twist of the Levi-Civita connection = Levi-Civita of the twisted metric");
          const Connection lcF = levi_civita(gF, D, deg);
          c.expect(lcF.christoffel() == nF.christoffel(), "Christoffel data differ");
        }
        r.merge(relabel(check_levi_civita(nF, gF, deg), "levi-civita-twist"));
        return r;
      });
    }
    return;
  }
  if (cmd == "project") {
    if (!m.ideal()) fail(ErrorKind::MissingSection, "project needs an ideal section");
    const auto& killed = *m.ideal();
    if (m.twist()) {
      if (!check_cocycle(m.hopf(), *m.twist()).all_pass()) {
        report.skip("twist-projection", "suite", "the twist fails the cocycle checks");
        return;
      }
      Report tw;
      guarded(tw, "twist-projection", [&] {
        std::optional<Metric> g;
        if (m.metric()) g = *m.metric();
        return twist_projection_suite(m.calculus(), killed, *m.twist(), D, deg, g);
      });
      report.merge(tw);
      const CheckResult* stable = tw.find("ideal-stable");
      if (!stable || !stable->pass) {
        report.skip("sequence", "suite", "C is not stable under the twist legs");
        return;
      }
      guarded(report, "sequence", [&] {
        const Calculus CF = twisted_calculus(m.calculus(), *m.twist(), D);
        return check_sequence(SubmanifoldIdeal::coordinates(CF, killed), D, deg);
      });
      return;
    }
    const SubmanifoldIdeal I = SubmanifoldIdeal::coordinates(m.calculus(), killed);
    Report seq;
    guarded(seq, "sequence", [&] { return check_sequence(I, D, deg); });
    report.merge(seq);
    if (!I.has_quotient()) {
      report.skip("projection", "suite", I.quotient_error());
      return;
    }
    guarded(report, "projection", [&] { return projection_suite(I, D, deg); });
    if (m.metric()) {
      guarded(report, "submanifold-metric", [&] {
        return metric_projection_suite(levi_civita(*m.metric(), D, deg), *m.metric(), I, D, deg, true);
      });
    }
    return;
  }
  fail(ErrorKind::SchemaError, "unknown subcommand " + cmd);
}

}  // namespace

Report run(const Model& m, const std::string& subcommand) {
  Report report;
  if (subcommand != "all") {
    run_one(m, subcommand, report);
    return report;
  }
  std::vector<std::string> chosen = m.spec().suites;
  if (chosen.empty()) {
    chosen.push_back("check-hopf");
    if (m.twist()) chosen.push_back("check-twist");
    if (m.has_action()) {
      chosen.push_back("star");
      chosen.push_back("cartan");
      if (m.twist()) chosen.push_back("gauge");
    }
    if (m.metric()) chosen.push_back("levi-civita");
    if (m.ideal()) chosen.push_back("project");
  }
  for (const auto& cmd : chosen) run_one(m, cmd, report);
  return report;
}

std::string render_text(const Report& report, bool timing) {
  std::ostringstream os;
  std::size_t failed = 0;
  for (const auto& c : report.checks()) {
    os << (c.pass ? "[PASS] " : "[FAIL] ") << c.suite << "/" << c.name << "  " << c.anchor << "  (" << c.instances << " instances";
    if (timing) os << ", " << c.millis << " ms";
    os << ")\n";
    if (!c.pass) {
      ++failed;
      os << "       counterexample: " << c.counterexample << "\n";
    }
  }
  for (const auto& c : report.skipped()) os << "[SKIP] " << c.suite << "/" << c.name << ": " << c.counterexample << "\n";
  os << report.checks().size() << " checks, " << failed << " failed, " << report.skipped().size() << " skipped\n";
  return os.str();
}

ordered_json render_structured(const Report& report, const std::string& subcommand, const Settings& s, bool timing) {
  ordered_json doc;
  doc["subcommand"] = subcommand;
  doc["params"] = {{"depth", s.depth}, {"degree", s.degree}, {"order", s.order}, {"seed", s.seed}, {"perturbations", s.perturbations}};
  ordered_json checks = ordered_json::array();
  for (const auto& c : report.checks()) {
    ordered_json j = {{"suite", c.suite}, {"name", c.name}, {"anchor", c.anchor}, {"pass", c.pass}, {"instances", c.instances}};
    if (!c.pass) j["counterexample"] = c.counterexample;
    if (timing) j["millis"] = c.millis;
    checks.push_back(std::move(j));
  }
  ordered_json skipped = ordered_json::array();
  for (const auto& c : report.skipped()) skipped.push_back({{"suite", c.suite}, {"name", c.name}, {"reason", c.counterexample}});
  doc["checks"] = checks;
  doc["skipped"] = skipped;
  doc["pass"] = report.all_pass();
  return doc;
}

}  // namespace braid::scenario
