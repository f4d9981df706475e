#include "navgeo/scenario.hpp"

#include <fstream>
#include <sstream>
#include <string_view>
#include <utility>

#include "json.hpp"

namespace navgeo {

namespace detail {
// Generated at configure time from core/scenarios/*.json.
const std::vector<std::pair<std::string_view, std::string_view>>& builtin_scenario_sources();
}  // namespace detail

bool Experiments::operator==(const Experiments& other) const {
  if (curves != other.curves || loops != other.loops || grid != other.grid) return false;
  if (samples.size() != other.samples.size()) return false;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& a = samples[i];
    const auto& b = other.samples[i];
    if (a.x.size() != b.x.size() || a.y.size() != b.y.size() || a.x != b.x || a.y != b.y) return false;
  }
  return true;
}

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::ParseError, (where.empty() ? std::string("/") : where) + ": " + what);
}

const json& member(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(where, "missing \"" + key + "\"");
  return *it;
}

std::string get_string(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

double get_number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

std::vector<double> get_numbers(const json& j, const std::string& where, std::size_t expected) {
  if (!j.is_array()) fail(where, "expected an array of numbers");
  if (expected != 0 && j.size() != expected) {
    fail(where, "expected " + std::to_string(expected) + " entries, got " + std::to_string(j.size()));
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_number(j[i], where + "/" + std::to_string(i)));
  return out;
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Expression get_expression(const json& j, const std::string& where, int dim, bool parameter) {
  const std::string text = get_string(j, where);
  try {
    return parameter ? Expression::parse_parameter(text) : Expression::parse(text, dim);
  } catch (const Error& e) {
    std::string msg = std::string(e.what());
    if (e.offset()) msg += " (offset " + std::to_string(*e.offset()) + " in \"" + text + "\")";
    fail(where, msg);
  }
}

NamedCurve read_curve(const json& j, const std::string& where, int dim) {
  NamedCurve nc;
  if (!j.is_object()) fail(where, "expected a curve object");
  if (j.contains("name")) nc.name = get_string(j["name"], where + "/name");
  const bool has_components = j.contains("components");
  const bool has_points = j.contains("points");
  if (has_components == has_points) fail(where, "a curve needs exactly one of \"components\" or \"points\"");
  if (has_components) {
    const json& c = j["components"];
    if (!c.is_array() || c.size() != static_cast<std::size_t>(dim)) {
      fail(where + "/components", "expected " + std::to_string(dim) + " expressions in t");
    }
    std::vector<Expression> comps;
    for (std::size_t i = 0; i < c.size(); ++i) {
      comps.push_back(get_expression(c[i], where + "/components/" + std::to_string(i), dim, true));
    }
    nc.curve = Curve::analytic(std::move(comps));
  } else {
    const json& p = j["points"];
    if (!p.is_array() || p.size() < 2) fail(where + "/points", "expected at least two points");
    std::vector<Vector> pts;
    for (std::size_t i = 0; i < p.size(); ++i) {
      pts.push_back(to_vector(get_numbers(p[i], where + "/points/" + std::to_string(i),
                                          static_cast<std::size_t>(dim))));
    }
    nc.curve = Curve::polyline(std::move(pts));
  }
  return nc;
}

std::string point_string(const Vector& x) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x(i);
  os << ")";
  return os.str();
}

[[noreturn]] void invalid(const std::string& name, const std::string& what) {
  throw Error(ErrorKind::ValidationError, "scenario '" + name + "': " + what);
}

Scenario from_json(const json& root) {
  if (!root.is_object()) fail("", "expected a JSON object");
  if (root.contains("schema")) {
    const double schema = get_number(root["schema"], "/schema");
    if (schema != kScenarioSchema) fail("/schema", "unsupported schema version");
  }
  const std::string name = get_string(member(root, "name", ""), "/name");
  const std::string description =
      root.contains("description") ? get_string(root["description"], "/description") : std::string();

  const json& jdim = member(root, "dim", "");
  if (!jdim.is_number_integer()) fail("/dim", "expected an integer");
  const int dim = jdim.get<int>();
  if (dim < kMinDim || dim > kMaxDim) fail("/dim", "dimension must be between 1 and 4");
  const auto n = static_cast<std::size_t>(dim);

  const json& jdom = member(root, "domain", "");
  const std::string kind = get_string(member(jdom, "kind", "/domain"), "/domain/kind");
  std::optional<Chart> chart;
  if (kind == "ball") {
    BallDomain b;
    b.center = get_numbers(member(jdom, "center", "/domain"), "/domain/center", n);
    b.radius = get_number(member(jdom, "radius", "/domain"), "/domain/radius");
    if (!(b.radius > 0.0)) fail("/domain/radius", "radius must be positive");
    chart.emplace(std::move(b));
  } else if (kind == "box") {
    BoxDomain b;
    b.lo = get_numbers(member(jdom, "lo", "/domain"), "/domain/lo", n);
    b.hi = get_numbers(member(jdom, "hi", "/domain"), "/domain/hi", n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!(b.lo[i] < b.hi[i])) fail("/domain", "box needs lo < hi in every coordinate");
    }
    chart.emplace(std::move(b));
  } else {
    fail("/domain/kind", "expected \"ball\" or \"box\"");
  }

  const json& jmetric = member(root, "metric", "");
  if (!jmetric.is_array() || jmetric.size() != n) fail("/metric", "expected " + std::to_string(dim) + " rows");
  std::vector<Expression> upper;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string where = "/metric/" + std::to_string(i);
    const json& row = jmetric[i];
    if (!row.is_array() || row.size() != n - i) {
      fail(where, "upper-triangle row needs " + std::to_string(n - i) + " entries");
    }
    for (std::size_t j = 0; j < row.size(); ++j) {
      upper.push_back(get_expression(row[j], where + "/" + std::to_string(j), dim, false));
    }
  }

  const json& jwind = member(root, "wind", "");
  if (!jwind.is_array() || jwind.size() != n) fail("/wind", "expected " + std::to_string(dim) + " expressions");
  std::vector<Expression> wind;
  for (std::size_t i = 0; i < n; ++i) {
    wind.push_back(get_expression(jwind[i], "/wind/" + std::to_string(i), dim, false));
  }

  Scenario sc{name, description,
              NavigationData(std::move(*chart), MetricField(dim, std::move(upper)), WindField(std::move(wind))),
              {}};

  if (root.contains("experiments")) {
    const json& ex = root["experiments"];
    if (!ex.is_object()) fail("/experiments", "expected an object");
    for (const char* key : {"curves", "loops"}) {
      if (!ex.contains(key)) continue;
      const std::string where = std::string("/experiments/") + key;
      const json& list = ex[key];
      if (!list.is_array()) fail(where, "expected an array");
      auto& target = std::string_view(key) == "curves" ? sc.experiments.curves : sc.experiments.loops;
      for (std::size_t i = 0; i < list.size(); ++i) target.push_back(read_curve(list[i], where + "/" + std::to_string(i), dim));
    }
    if (ex.contains("samples")) {
      const json& list = ex["samples"];
      if (!list.is_array()) fail("/experiments/samples", "expected an array");
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string where = "/experiments/samples/" + std::to_string(i);
        TangentSample s;
        s.x = to_vector(get_numbers(member(list[i], "x", where), where + "/x", n));
        s.y = to_vector(get_numbers(member(list[i], "y", where), where + "/y", n));
        sc.experiments.samples.push_back(std::move(s));
      }
    }
    if (ex.contains("grid")) {
      const json& g = ex["grid"];
      GridSpec spec;
      if (g.contains("points")) {
        if (!g["points"].is_number_unsigned()) fail("/experiments/grid/points", "expected a positive integer");
        spec.points = g["points"].get<std::size_t>();
      }
      if (g.contains("directions")) {
        if (!g["directions"].is_number_integer() || g["directions"].get<int>() < 1) {
          fail("/experiments/grid/directions", "expected a positive integer");
        }
        spec.directions = g["directions"].get<int>();
      }
      sc.experiments.grid = spec;
    }
  }
  return sc;
}

void check(const Scenario& sc) {
  ValidationReport rep;
  try {
    rep = validate(sc.nav);
  } catch (const Error& e) {
    invalid(sc.name, std::string("evaluation failed during validation: ") + e.what());
  }
  if (!rep.passed) {
    std::string msg = rep.failure;
    if (rep.witness) msg += " at x = " + point_string(*rep.witness);
    invalid(sc.name, msg);
  }
  const Chart& chart = sc.nav.chart();
  const auto check_curve = [&](const NamedCurve& c, const std::string& what) {
    for (int i = 0; i <= 200; ++i) {
      const Vector x = c.curve.position(i / 200.0);
      if (!chart.contains(x)) {
        invalid(sc.name, what + " '" + c.name + "' leaves the chart at x = " + point_string(x));
      }
    }
  };
  for (const auto& c : sc.experiments.curves) check_curve(c, "curve");
  for (const auto& c : sc.experiments.loops) {
    check_curve(c, "loop");
    if (!c.curve.is_closed(1e-12)) invalid(sc.name, "loop '" + c.name + "' is not closed");
  }
  for (const auto& s : sc.experiments.samples) {
    if (!chart.contains(s.x)) invalid(sc.name, "sample outside the chart at x = " + point_string(s.x));
  }
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json curve_json(const NamedCurve& c) {
  json out;
  out["name"] = c.name;
  if (c.curve.is_reversed()) throw Error(ErrorKind::InvalidArgument, "reversed curves cannot be serialized");
  if (c.curve.is_analytic()) {
    json comps = json::array();
    for (const auto& e : c.curve.components()) comps.push_back(e.render());
    out["components"] = comps;
  } else {
    json pts = json::array();
    for (const auto& p : c.curve.points()) pts.push_back(vector_json(p));
    out["points"] = pts;
  }
  return out;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(column) +
                                           ": malformed JSON");
  }
  Scenario sc = from_json(root);
  check(sc);
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.detail(), e.offset());
  }
}

std::string serialize(const Scenario& sc) {
  const NavigationData& nav = sc.nav;
  const int n = nav.dim();
  json root;
  root["schema"] = kScenarioSchema;
  root["name"] = sc.name;
  root["description"] = sc.description;
  root["dim"] = n;
  json dom;
  if (const auto* b = std::get_if<BallDomain>(&nav.chart().domain())) {
    dom["kind"] = "ball";
    dom["center"] = b->center;
    dom["radius"] = b->radius;
  } else {
    const auto& box = std::get<BoxDomain>(nav.chart().domain());
    dom["kind"] = "box";
    dom["lo"] = box.lo;
    dom["hi"] = box.hi;
  }
  root["domain"] = dom;
  json metric = json::array();
  for (int i = 0; i < n; ++i) {
    json row = json::array();
    for (int j = i; j < n; ++j) row.push_back(nav.metric().entry(i, j).render());
    metric.push_back(row);
  }
  root["metric"] = metric;
  json wind = json::array();
  for (const auto& e : nav.wind().components()) wind.push_back(e.render());
  root["wind"] = wind;

  const Experiments& ex = sc.experiments;
  json jex = json::object();
  if (!ex.curves.empty()) {
    for (const auto& c : ex.curves) jex["curves"].push_back(curve_json(c));
  }
  if (!ex.loops.empty()) {
    for (const auto& c : ex.loops) jex["loops"].push_back(curve_json(c));
  }
  for (const auto& s : ex.samples) jex["samples"].push_back({{"x", vector_json(s.x)}, {"y", vector_json(s.y)}});
  if (ex.grid) jex["grid"] = {{"points", ex.grid->points}, {"directions", ex.grid->directions}};
  root["experiments"] = jex;
  return root.dump(2) + "\n";
}

Scenario builtin(const std::string& name) {
  for (const auto& [key, text] : detail::builtin_scenario_sources()) {
    if (key == name) return parse_scenario(std::string(text));
  }
  throw Error(ErrorKind::UnknownScenario, "unknown built-in scenario '" + name + "'");
}

std::vector<std::string> builtin_names() {
  std::vector<std::string> out;
  for (const auto& [key, text] : detail::builtin_scenario_sources()) out.emplace_back(key);
  return out;
}

}  // namespace navgeo
