#include "cli.hpp"

#include <fstream>
#include <optional>
#include <random>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "navgeo/report.hpp"

namespace navgeo::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string scenario_file;
  std::string builtin_name;
  std::string out_path;
  unsigned seed = 42;
};

Scenario load(const Common& c) {
  if (!c.scenario_file.empty()) return load_scenario(c.scenario_file);
  if (!c.builtin_name.empty()) {
    try {
      return builtin(c.builtin_name);
    } catch (const Error& e) {
      throw UsageError(e.detail());
    }
  }
  throw UsageError("one of --scenario or --builtin is required");
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

Vector parse_vector(const std::string& s, int dim, const char* flag) {
  const auto parts = split_commas(s);
  if (static_cast<int>(parts.size()) != dim) {
    throw UsageError(std::string(flag) + " needs " + std::to_string(dim) + " comma-separated reals, got \"" + s + "\"");
  }
  Vector v(dim);
  for (int i = 0; i < dim; ++i) {
    std::size_t used = 0;
    try {
      v(i) = std::stod(parts[static_cast<std::size_t>(i)], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != parts[static_cast<std::size_t>(i)].size()) {
      throw UsageError(std::string(flag) + ": not a number: \"" + parts[static_cast<std::size_t>(i)] + "\"");
    }
  }
  return v;
}

// An experiment name or an inline list of expressions in t. With `time`,
// inline expressions are read on [0, time] and rescaled to [0, 1].
Curve resolve_curve(const Scenario& sc, const std::string& spec, const std::vector<NamedCurve>& named,
                    std::optional<double> time, const char* flag) {
  for (const auto& nc : named) {
    if (nc.name == spec) return nc.curve;
  }
  if (spec.find(',') == std::string::npos && sc.nav.dim() > 1) {
    std::string known;
    for (const auto& nc : named) known += (known.empty() ? "" : ", ") + nc.name;
    throw UsageError(std::string(flag) + ": no experiment named \"" + spec + "\" (known: " +
                     (known.empty() ? "none" : known) + ")");
  }
  std::vector<std::string> comps = split_commas(spec);
  if (static_cast<int>(comps.size()) != sc.nav.dim()) {
    throw UsageError(std::string(flag) + " needs " + std::to_string(sc.nav.dim()) + " expressions in t");
  }
  if (time) {
    static const std::regex t_token(R"(\bt\b)");
    const std::string scaled = "(" + format_double(*time) + "*t)";
    for (auto& c : comps) c = std::regex_replace(c, t_token, scaled);
  }
  try {
    return Curve::analytic(comps);
  } catch (const Error& e) {
    throw UsageError(std::string(flag) + ": " + e.detail());
  }
}

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw UsageError("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : fallback_; }

 private:
  std::ofstream file_;
  std::ostream& fallback_;
};

void require_curve_inside(const NavigationData& nav, const Curve& c) {
  if (!c.inside(nav.chart())) throw Error(ErrorKind::CurveLeftDomain, "curve leaves the chart");
}

TransportMode transport_mode_from(const std::string& s) {
  if (s == "riemann") return TransportMode::Riemann;
  if (s == "natural") return TransportMode::NaturalOde;
  if (s == "natural-definitional") return TransportMode::NaturalDefinitional;
  if (s == "corrected") return TransportMode::Corrected;
  throw UsageError("unknown transport mode " + s);
}

const char* const kScenarioHelp = "scenario JSON file (schema 1)";
const char* const kBuiltinHelp = "built-in scenario name (see list-scenarios)";

void add_source(CLI::App* cmd, Common& c) {
  auto* file = cmd->add_option("--scenario", c.scenario_file, kScenarioHelp);
  auto* name = cmd->add_option("--builtin", c.builtin_name, kBuiltinHelp);
  file->excludes(name);
  cmd->add_option("--out", c.out_path, "write the report to this path instead of standard output");
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::string& context) {
  CLI::App app{"navgeo: parallel transport, sprays and holonomy for Zermelo navigation data"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_help_all_flag("--help-all", "help for every subcommand");
  Common common;
  app.add_option("--seed", common.seed, "seed for randomly drawn sample points")->default_val(42);

  // validate
  std::size_t validate_samples = kDefaultValidationSamples;
  auto* validate_cmd = app.add_subcommand("validate", "check h > 0 and |W|_h < 1 on sampled chart points; JSON");
  add_source(validate_cmd, common);
  validate_cmd->add_option("--samples", validate_samples, "number of quasi-random chart points")
      ->default_val(kDefaultValidationSamples);

  // transport
  std::string curve_spec, v0_spec, mode_name = "natural", format = "csv";
  double dt = kDefaultDt;
  std::optional<double> time;
  auto* transport_cmd = app.add_subcommand(
      "transport", "transport a vector along a curve; CSV columns t,x1..xn,v1..vn,F (or a JSON summary)");
  add_source(transport_cmd, common);
  transport_cmd
      ->add_option("--curve", curve_spec,
                   "scenario curve name, or comma-separated expressions in t; t runs over [0,1] unless --time is "
                   "given")
      ->required();
  transport_cmd->add_option("--v0", v0_spec, "initial vector at c(0), comma-separated")->required();
  transport_cmd->add_option("--mode", mode_name, "riemann | natural | natural-definitional | corrected")
      ->default_val("natural");
  transport_cmd->add_option("--dt", dt, "RK4 step in curve-parameter units")->default_val(kDefaultDt);
  transport_cmd->add_option("--time", time, "inline curve expressions are read on t in [0,TIME]");
  transport_cmd->add_option("--format", format, "csv | json")->default_val("csv");

  // geodesic
  std::string spray_name = "natural", from_spec, dir_spec;
  double duration = 1.0;
  auto* geodesic_cmd = app.add_subcommand(
      "geodesic", "integrate x'' + 2G(x,x') = 0; CSV columns t,x1..xn,y1..yn,F; stops at the chart boundary");
  add_source(geodesic_cmd, common);
  geodesic_cmd->add_option("--spray", spray_name, "natural | randers | riemann")->default_val("natural");
  geodesic_cmd->add_option("--from", from_spec, "initial point, comma-separated")->required();
  geodesic_cmd->add_option("--dir", dir_spec, "initial velocity, comma-separated")->required();
  geodesic_cmd->add_option("--time", duration, "integration time")->default_val(1.0);
  geodesic_cmd->add_option("--dt", dt, "RK4 time step")->default_val(kDefaultDt);

  // holonomy
  std::string loop_spec, hol_mode = "natural";
  int probes = kDefaultProbeCount;
  auto* holonomy_cmd = app.add_subcommand(
      "holonomy", "transport F-unit probes around a closed loop and report their images; JSON");
  add_source(holonomy_cmd, common);
  holonomy_cmd
      ->add_option("--loop", loop_spec,
                   "scenario loop name, or comma-separated expressions in t with c(0) = c(1), t in [0,1]")
      ->required();
  holonomy_cmd->add_option("--probes", probes, "number of probe vectors")->default_val(kDefaultProbeCount);
  holonomy_cmd->add_option("--mode", hol_mode, "natural | riemann")->default_val("natural");
  holonomy_cmd->add_option("--dt", dt, "RK4 step in loop-parameter units")->default_val(kDefaultDt);

  // rank
  std::string at_spec, connection_name = "spray";
  int depth = 3;
  std::size_t random_samples = 0;
  double tol = kDefaultRankTolerance;
  auto* rank_cmd = app.add_subcommand(
      "rank", "rank of horizontal fields and their iterated brackets on TM (bracket step 1e-4); JSON");
  add_source(rank_cmd, common);
  rank_cmd->add_option("--at", at_spec, "base point x, comma-separated");
  rank_cmd->add_option("--dir", dir_spec, "fibre point y != 0, comma-separated");
  rank_cmd->add_option("--samples", random_samples, "instead of --at/--dir: this many random (x, y) drawn with --seed");
  rank_cmd->add_option("--depth", depth, "bracket depth; beyond 3 nested differences exceed the tolerance")
      ->default_val(3);
  rank_cmd->add_option("--connection", connection_name, "spray (dG/dy) | natural (Gamma)")->default_val("spray");
  rank_cmd->add_option("--tol", tol, "relative singular-value threshold")->default_val(kDefaultRankTolerance);

  // torsion
  auto* torsion_cmd = app.add_subcommand("torsion", "torsion t^k_ij of the natural connection at (x, y); JSON");
  add_source(torsion_cmd, common);
  torsion_cmd->add_option("--at", at_spec, "base point x, comma-separated")->required();
  torsion_cmd->add_option("--dir", dir_spec, "fibre point y, comma-separated")->required();

  // classify
  ClassifyOptions copt;
  bool summary_only = false;
  auto* classify_cmd = app.add_subcommand(
      "classify", "sampled verdicts: wind parallel, torsion-free, Berwald, Wagner, concircular, isotropic S; JSON");
  add_source(classify_cmd, common);
  classify_cmd->add_option("--points", copt.points, "quasi-random grid points (defaults to the scenario grid or 400)");
  classify_cmd->add_option("--directions", copt.directions, "F-unit directions per point (default 16)");
  classify_cmd->add_option("--tol", copt.tolerance, "residual threshold")->default_val(1e-8);
  classify_cmd->add_flag("--summary", summary_only, "plain-text summary instead of JSON");

  // compare-sprays
  CompareOptions sopt;
  auto* compare_cmd = app.add_subcommand(
      "compare-sprays", "sup |G_natural - G_randers| and the projective factor phi(x) over a grid; JSON");
  add_source(compare_cmd, common);
  compare_cmd->add_option("--points", sopt.points, "quasi-random grid points")->default_val(100);
  compare_cmd->add_option("--directions", sopt.directions, "F-unit directions per point")->default_val(16);
  compare_cmd->add_option("--tol", sopt.tolerance, "coincidence threshold")->default_val(1e-8);

  auto* list_cmd = app.add_subcommand("list-scenarios", "names and descriptions of the built-in scenarios");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  if (list_cmd->parsed()) {
    Output o(common.out_path, out);
    for (const auto& name : builtin_names()) o.stream() << name << "\t" << builtin(name).description << "\n";
    return kExitOk;
  }

  const Scenario sc = load(common);
  context = "scenario '" + sc.name + "'";
  const NavigationData& nav = sc.nav;
  const int n = nav.dim();
  Output o(common.out_path, out);
  std::ostream& os = o.stream();

  if (validate_cmd->parsed()) {
    const ValidationReport r = validate(nav, validate_samples);
    os << to_json(r);
    return r.passed ? kExitOk : kExitComputation;
  }

  if (transport_cmd->parsed()) {
    if (format != "csv" && format != "json") throw UsageError("--format must be csv or json");
    const TransportMode mode = transport_mode_from(mode_name);
    const Curve c = resolve_curve(sc, curve_spec, sc.experiments.curves, time, "--curve");
    require_curve_inside(nav, c);
    const Vector v0 = parse_vector(v0_spec, n, "--v0");
    TransportOptions topt;
    topt.dt = dt;
    topt.record_trajectory = format == "csv";
    TransportResult r;
    switch (mode) {
      case TransportMode::Riemann: r = riemann_transport(nav, c, v0, topt); break;
      case TransportMode::NaturalOde: r = natural_transport(nav, c, v0, NaturalMethod::Ode, topt); break;
      case TransportMode::NaturalDefinitional:
        r = natural_transport(nav, c, v0, NaturalMethod::Definitional, topt);
        break;
      case TransportMode::Corrected: {
        TransportOptions base = topt;
        base.record_trajectory = false;
        r = corrected_transport(randers_norm_evaluator(nav), riemann_transporter(nav, base), c, v0);
        r.dt = dt;
        r.trajectory = {{0.0, c.position(0.0), v0}, {1.0, c.position(1.0), r.v_end}};
        break;
      }
    }
    if (time) {
      for (auto& s : r.trajectory) s.t *= *time;
    }
    if (format == "csv") {
      write_trajectory_csv(os, nav, r);
    } else {
      if (r.trajectory.empty()) r.trajectory = {{0.0, c.position(0.0), v0}, {1.0, c.position(1.0), r.v_end}};
      os << to_json(r, nav);
    }
    return kExitOk;
  }

  if (geodesic_cmd->parsed()) {
    const SprayKind kind = [&] {
      try {
        return spray_kind_from_string(spray_name);
      } catch (const Error& e) {
        throw UsageError(e.detail());
      }
    }();
    const Vector x0 = parse_vector(from_spec, n, "--from");
    const Vector y0 = parse_vector(dir_spec, n, "--dir");
    const GeodesicPath path = integrate_geodesic(make_spray(nav, kind), kind, nav.chart(), x0, y0, duration, dt);
    write_geodesic_csv(os, nav, path);
    if (path.left_domain) {
      err << "note: stopped at the chart boundary at t = " << format_double(path.samples.back().t) << "\n";
    }
    return kExitOk;
  }

  if (holonomy_cmd->parsed()) {
    HolonomyMode mode;
    if (hol_mode == "natural") {
      mode = HolonomyMode::Natural;
    } else if (hol_mode == "riemann") {
      mode = HolonomyMode::Riemann;
    } else {
      throw UsageError("--mode must be natural or riemann");
    }
    if (probes < 1) throw UsageError("--probes must be positive");
    const Curve loop = resolve_curve(sc, loop_spec, sc.experiments.loops, std::nullopt, "--loop");
    require_curve_inside(nav, loop);
    HolonomyOptions hopt;
    hopt.transport.dt = dt;
    const auto vs = default_probes(nav.frame(loop.position(0.0)), probes);
    os << to_json(loop_holonomy(nav, loop, vs, mode, hopt));
    return kExitOk;
  }

  if (rank_cmd->parsed()) {
    RankOptions ropt;
    ropt.tolerance = tol;
    try {
      ropt.connection = rank_connection_from_string(connection_name);
    } catch (const Error& e) {
      throw UsageError(e.detail());
    }
    if (random_samples == 0) {
      if (at_spec.empty() || dir_spec.empty()) throw UsageError("rank needs --at and --dir, or --samples");
      const TangentSample s{parse_vector(at_spec, n, "--at"), parse_vector(dir_spec, n, "--dir")};
      os << to_json(holonomy_distribution_rank(nav, s, depth, ropt));
      return kExitOk;
    }
    std::mt19937_64 rng(common.seed);
    const auto points = nav.chart().sample(random_samples * 4);
    std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
    std::normal_distribution<double> gauss;
    os << "[\n";
    for (std::size_t i = 0; i < random_samples; ++i) {
      Vector y(n);
      for (int k = 0; k < n; ++k) y(k) = gauss(rng);
      const TangentSample s{points[pick(rng)], y};
      std::string item = to_json(holonomy_distribution_rank(nav, s, depth, ropt));
      item.pop_back();
      os << item << (i + 1 < random_samples ? ",\n" : "\n");
    }
    os << "]\n";
    return kExitOk;
  }

  if (torsion_cmd->parsed()) {
    const TangentSample s{parse_vector(at_spec, n, "--at"), parse_vector(dir_spec, n, "--dir")};
    if (!nav.chart().contains(s.x)) throw Error(ErrorKind::CurveLeftDomain, "--at is outside the chart");
    os << to_json(torsion(nav, s));
    return kExitOk;
  }

  if (classify_cmd->parsed()) {
    const auto* points_opt = classify_cmd->get_option("--points");
    const auto* dirs_opt = classify_cmd->get_option("--directions");
    if (sc.experiments.grid) {
      if (points_opt->count() == 0) copt.points = sc.experiments.grid->points;
      if (dirs_opt->count() == 0) copt.directions = sc.experiments.grid->directions;
    }
    const ClassificationReport r = classification_report(nav, copt);
    os << (summary_only ? summary(r) : to_json(r));
    return kExitOk;
  }

  if (compare_cmd->parsed()) {
    os << to_json(compare_sprays(nav, sopt));
    return kExitOk;
  }
  return kExitUsage;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::string context;
  try {
    return dispatch(args, out, err, context);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << (context.empty() ? "" : context + ": ") << e.what() << "\n";
    return kExitComputation;
  }
}

}  // namespace navgeo::cli
