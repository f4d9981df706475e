#include "navgeo/report.hpp"

#include <cstdio>

#include "json.hpp"

namespace navgeo {

namespace {

using json = nlohmann::json;

json vec(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json verdict(const Verdict& v) {
  return {{"value", v.value}, {"residual", v.residual}, {"tolerance", v.tolerance}};
}

json curve(const Curve& c) {
  json out;
  out["reversed"] = c.is_reversed();
  if (c.is_analytic()) {
    for (const auto& e : c.components()) out["components"].push_back(e.render());
  } else {
    for (const auto& p : c.points()) out["points"].push_back(vec(p));
  }
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_row(std::ostream& out, double t, const Vector& a, const Vector& b, double F) {
  out << format_double(t);
  for (Eigen::Index i = 0; i < a.size(); ++i) out << ',' << format_double(a(i));
  for (Eigen::Index i = 0; i < b.size(); ++i) out << ',' << format_double(b(i));
  out << ',' << format_double(F) << '\n';
}

void write_header(std::ostream& out, int n, char second) {
  out << 't';
  for (int i = 1; i <= n; ++i) out << ",x" << i;
  for (int i = 1; i <= n; ++i) out << ',' << second << i;
  out << ",F\n";
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trajectory_csv(std::ostream& out, const NavigationData& nav, const TransportResult& r) {
  write_header(out, nav.dim(), 'v');
  for (const auto& s : r.trajectory) write_row(out, s.t, s.x, s.v, randers_norm(nav, {s.x, s.v}));
}

void write_geodesic_csv(std::ostream& out, const NavigationData& nav, const GeodesicPath& path) {
  write_header(out, nav.dim(), 'y');
  for (const auto& s : path.samples) write_row(out, s.t, s.x, s.y, randers_norm(nav, {s.x, s.y}));
}

std::string to_json(const ValidationReport& r) {
  json j{{"passed", r.passed},
         {"samples", r.samples},
         {"min_metric_eigenvalue", r.min_metric_eigenvalue},
         {"max_wind_norm", r.max_wind_norm},
         {"min_lambda", r.min_lambda}};
  if (!r.passed) j["failure"] = r.failure;
  if (r.witness) j["witness"] = vec(*r.witness);
  return dump(j);
}

std::string to_json(const TransportResult& r, const NavigationData& nav) {
  json j{{"mode", to_string(r.mode)}, {"dt", r.dt}, {"steps", r.steps}, {"v_end", vec(r.v_end)}};
  if (!r.trajectory.empty()) {
    const auto& first = r.trajectory.front();
    const auto& last = r.trajectory.back();
    j["x_start"] = vec(first.x);
    j["x_end"] = vec(last.x);
    j["F_start"] = randers_norm(nav, {first.x, first.v});
    j["F_end"] = randers_norm(nav, {last.x, last.v});
  }
  return dump(j);
}

std::string to_json(const HolonomyElement& h) {
  json probes = json::array();
  for (const auto& p : h.probes) {
    probes.push_back({{"in", vec(p.in)}, {"out", vec(p.out)}, {"norm_in", p.norm_in}, {"norm_out", p.norm_out}});
  }
  const char* norm = h.mode == HolonomyMode::Natural ? "F" : "h";
  return dump({{"mode", to_string(h.mode)},
               {"base", vec(h.base)},
               {"loop", curve(h.loop)},
               {"norm", norm},
               {"probes", probes}});
}

std::string to_json(const RankReport& r) {
  json gen = json::array();
  for (const auto& g : r.generated) gen.push_back(vec(g));
  return dump({{"x", vec(r.at.x)},
               {"y", vec(r.at.y)},
               {"connection", to_string(r.connection)},
               {"depth", r.depth},
               {"rank", r.rank},
               {"rank_by_depth", r.rank_by_depth},
               {"tolerance", r.tolerance},
               {"generated_vectors", gen}});
}

std::string to_json(const TorsionEval& t) {
  const int n = t.t.dim();
  json comps = json::array();
  for (int k = 0; k < n; ++k) {
    json slab = json::array();
    for (int i = 0; i < n; ++i) {
      json row = json::array();
      for (int j = 0; j < n; ++j) row.push_back(t.t(k, i, j));
      slab.push_back(row);
    }
    comps.push_back(slab);
  }
  return dump({{"x", vec(t.at.x)}, {"y", vec(t.at.y)}, {"max_abs", t.t.max_abs()}, {"t", comps}});
}

namespace {

json comparison(const ComparisonReport& r) {
  json pts = json::array();
  for (std::size_t i = 0; i < r.sample_points.size(); ++i) {
    pts.push_back({{"x", vec(r.sample_points[i])}, {"phi_hat", r.phi_hat[i]}});
  }
  return {{"points", r.points},
          {"directions", r.directions},
          {"sup_natural_minus_randers", r.sup_natural_minus_randers},
          {"tolerance", r.tolerance},
          {"sprays_coincide", r.sprays_coincide},
          {"phi_fit_residual", r.phi_fit_residual},
          {"phi_spread", r.phi_spread},
          {"spread_tolerance", r.spread_tolerance},
          {"projectively_riemannian", r.projectively_riemannian},
          {"samples", pts}};
}

}  // namespace

std::string to_json(const ComparisonReport& r) { return dump(comparison(r)); }

std::string to_json(const ClassificationReport& r) {
  json conc = verdict(r.concircular.verdict);
  conc["phi_min"] = r.concircular.phi_min;
  conc["phi_max"] = r.concircular.phi_max;
  json sprays = comparison(r.sprays);
  sprays.erase("samples");
  return dump({{"points", r.points},
               {"directions", r.directions},
               {"wind_parallel", verdict(r.wind_parallel)},
               {"torsion_vanishes", verdict(r.torsion_vanishes)},
               {"berwald", verdict(r.berwald)},
               {"wagner", verdict(r.wagner)},
               {"concircular", conc},
               {"isotropic_S", verdict(r.isotropic_s)},
               {"sprays", sprays}});
}

std::string summary(const ClassificationReport& r) {
  std::string out = "classification over " + std::to_string(r.points) + " points, " +
                    std::to_string(r.directions) + " directions (sampled, not certified)\n";
  const auto line = [&](const char* name, const Verdict& v) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "  %-17s %-5s  residual %.3e  (tol %.1e)\n", name, v.value ? "yes" : "no",
                  v.residual, v.tolerance);
    out += buf;
  };
  line("wind parallel", r.wind_parallel);
  line("torsion-free", r.torsion_vanishes);
  line("berwald", r.berwald);
  line("wagner", r.wagner);
  line("concircular", r.concircular.verdict);
  line("isotropic S", r.isotropic_s);
  char buf[160];
  std::snprintf(buf, sizeof buf, "  phi_hat range     [%.10g, %.10g]\n", r.concircular.phi_min,
                r.concircular.phi_max);
  out += buf;
  std::snprintf(buf, sizeof buf, "  sprays coincide   %-5s  sup |G_nat - G_randers| %.3e\n",
                r.sprays.sprays_coincide ? "yes" : "no", r.sprays.sup_natural_minus_randers);
  out += buf;
  return out;
}

}  // namespace navgeo
