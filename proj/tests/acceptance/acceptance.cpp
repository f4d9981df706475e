// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "navgeo/classify.hpp"
#include "navgeo/holonomy.hpp"
#include "navgeo/scenario.hpp"
#include "testing.hpp"

using namespace navgeo;
using testing::num;
using testing::vec;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

Vector random_vector(std::mt19937_64& rng, int n) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = testing::uniform(rng, -1.0, 1.0);
  return v;
}

double torsion_gap(const Tensor3& a, const Tensor3& b) {
  double m = 0.0;
  const int n = a.dim();
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m = std::max(m, std::abs(a(k, i, j) - b(k, i, j)));
  return m;
}

// 20 radii x 20 angles on the funk chart.
std::vector<Vector> polar_grid(double radius) {
  std::vector<Vector> out;
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      const double r = radius * (i + 0.5) / 20.0;
      const double a = 2 * std::numbers::pi * j / 20.0;
      out.push_back(vec({r * std::cos(a), r * std::sin(a)}));
    }
  }
  return out;
}

Outcome funk_reduction() {
  const NavigationData nav = builtin("funk_ball").nav;
  double sup = 0.0;
  for (const Vector& x : polar_grid(0.9)) {
    const PointFrame f = nav.frame(x);
    for (const Vector& y : unit_directions(f, 16)) {
      sup = std::max(sup, (natural_spray(f, y) - 0.5 * randers_norm(f, y) * y).norm());
    }
  }
  return {sup < 1e-10, "sup |G_natural - F y/2| = " + sci(sup) + " (< 1e-10, 20x20x16 grid)"};
}

Outcome spray_coincidence() {
  const NavigationData funk = builtin("funk_ball").nav;
  const NavigationData rot = builtin("rotation_disk").nav;
  const auto sup_diff = [](const NavigationData& nav) {
    double sup = 0.0;
    for (const Vector& x : polar_grid(0.9)) {
      const PointFrame f = nav.frame(x);
      for (const Vector& y : unit_directions(f, 16)) sup = std::max(sup, (natural_spray(f, y) - randers_spray(f, y)).norm());
    }
    return sup;
  };
  const auto grid = funk.chart().sample(400);
  const ConcircularResult cf = concircular_test(funk, grid);
  const ConcircularResult cr = concircular_test(rot, grid);
  const double df = sup_diff(funk);
  const double dr = sup_diff(rot);
  const double phi_err = std::max(std::abs(cf.phi_min + 1.0), std::abs(cf.phi_max + 1.0));
  const bool pass = df < 1e-8 && cf.verdict.value && phi_err < 1e-8 && dr > 1e-3 && !cr.verdict.value;
  return {pass, "funk: sup diff " + sci(df) + ", concircular " + (cf.verdict.value ? "true" : "false") +
                    ", |phi+1| " + sci(phi_err) + "; rotation: sup diff " + sci(dr) + ", concircular " +
                    (cr.verdict.value ? "true" : "false")};
}

Outcome norm_preservation() {
  double worst_drift = 0.0;
  std::string orders;
  bool orders_ok = true;
  std::mt19937_64 rng(3);
  for (const auto& name : builtin_names()) {
    const NavigationData nav = builtin(name).nav;
    std::vector<Curve> curves;
    std::vector<Vector> v0s;
    for (int i = 0; i < 50; ++i) {
      // Oscillatory enough that the dt = 1e-3 error stays above rounding.
      curves.push_back(testing::random_curve(rng, nav.chart(), 6.0, 20.0));
      v0s.push_back(random_vector(rng, nav.dim()));
    }
    std::vector<double> drift(50), e1(50), e2(50);
    parallel_for(50, [&](std::size_t i) {
      const auto run = [&](double dt) {
        TransportOptions opt;
        opt.dt = dt;
        return natural_transport(nav, curves[i], v0s[i], NaturalMethod::Ode, opt).v_end;
      };
      const Vector coarse = run(1e-2), fine = run(1e-3), ref = run(2.5e-4);
      const double F0 = randers_norm(nav, {curves[i].position(0), v0s[i]});
      drift[i] = std::abs(randers_norm(nav, {curves[i].position(1), fine}) - F0);
      e1[i] = (coarse - ref).squaredNorm();
      e2[i] = (fine - ref).squaredNorm();
    });
    worst_drift = std::max(worst_drift, *std::max_element(drift.begin(), drift.end()));
    // RMS error over the 50 curves at each step size.
    const double r1 = std::sqrt(std::accumulate(e1.begin(), e1.end(), 0.0) / 50);
    const double r2 = std::sqrt(std::accumulate(e2.begin(), e2.end(), 0.0) / 50);
    if (r1 <= 1e-13) {
      orders += " " + name + " exact";
      continue;
    }
    const double order = std::log10(r1 / r2);
    orders_ok = orders_ok && order >= 3.5 && order <= 4.5;
    char buf[64];
    std::snprintf(buf, sizeof buf, " %s %.2f", name.c_str(), order);
    orders += buf;
  }
  return {worst_drift < 1e-6 && orders_ok,
          "max |F(P v) - F(v)| = " + sci(worst_drift) + " (< 1e-6); observed order in [3.5, 4.5]:" + orders};
}

Outcome two_routes() {
  double worst = 0.0;
  std::mt19937_64 rng(4);
  for (const auto& name : builtin_names()) {
    const Scenario sc = builtin(name);
    std::vector<Curve> curves;
    for (const auto& c : sc.experiments.curves) curves.push_back(c.curve);
    for (const auto& c : sc.experiments.loops) curves.push_back(c.curve);
    for (int i = 0; i < 20; ++i) curves.push_back(testing::random_curve(rng, sc.nav.chart()));
    for (const Curve& c : curves) {
      const Vector v0 = random_vector(rng, sc.nav.dim());
      const Vector a = natural_transport(sc.nav, c, v0, NaturalMethod::Definitional).v_end;
      const Vector b = natural_transport(sc.nav, c, v0, NaturalMethod::Ode).v_end;
      worst = std::max(worst, (a - b).norm());
    }
  }
  return {worst < 1e-6, "max |definitional - ODE| = " + sci(worst) + " (< 1e-6, dt = 1e-3, all scenarios)"};
}

Outcome torsion_characterization() {
  double gap = 0.0;
  double sup_flat = 0.0;
  double sup_rot = 0.0;
  for (const auto& name : builtin_names()) {
    const NavigationData nav = builtin(name).nav;
    for (const Vector& x : nav.chart().sample(400)) {
      const PointFrame f = nav.frame(x);
      for (const Vector& y : unit_directions(f, 16)) {
        const TorsionEval a = torsion(f, y);
        gap = std::max(gap, torsion_gap(a.t, torsion_by_differentiation(f, y).t));
        if (name == "zero_wind" || name == "constant_wind") sup_flat = std::max(sup_flat, a.t.max_abs());
        if (name == "rotation_disk") sup_rot = std::max(sup_rot, a.t.max_abs());
      }
    }
  }
  const bool pass = gap < 1e-8 && sup_flat < 1e-10 && sup_rot > 1e-3;
  return {pass, "analytic vs dual " + sci(gap) + " (< 1e-8); zero/constant sup " + sci(sup_flat) +
                    " (< 1e-10); rotation sup " + sci(sup_rot) + " (> 1e-3)"};
}

Outcome holonomy_correspondence() {
  const NavigationData nav = builtin("sphere_cap").nav;
  const Vector p = vec({0.15, 0.1});
  const PointFrame f = nav.frame(p);
  std::mt19937_64 rng(6);
  std::vector<Curve> loops;
  for (int i = 0; i < 10; ++i) loops.push_back(testing::random_loop_at(rng, p, testing::uniform(rng, 0.1, 0.25)));
  const auto probes = default_probes(f, 20);
  std::vector<Matrix> phiR;
  std::vector<std::vector<Vector>> direct;
  double worst = 0.0;
  for (const Curve& loop : loops) {
    phiR.push_back(riemann_holonomy_matrix(nav, loop));
    const HolonomyElement h = loop_holonomy(nav, loop, probes, HolonomyMode::Natural);
    std::vector<Vector> outs;
    for (std::size_t k = 0; k < probes.size(); ++k) {
      outs.push_back(h.probes[k].out);
      worst = std::max(worst, (correspondence(phiR.back(), f, probes[k]) - h.probes[k].out).norm());
    }
    direct.push_back(outs);
  }
  // Transporting around loop a and then loop b is the correspondence image of
  // phi_R(b) phi_R(a).
  double composition = 0.0;
  for (std::size_t a = 0; a < loops.size(); ++a) {
    const std::size_t b = (a + 1) % loops.size();
    const HolonomyElement hb = loop_holonomy(nav, loops[b], direct[a], HolonomyMode::Natural);
    const Matrix M = phiR[b] * phiR[a];
    for (std::size_t k = 0; k < probes.size(); ++k) {
      composition = std::max(composition, (correspondence(M, f, probes[k]) - hb.probes[k].out).norm());
    }
  }
  const bool pass = worst < 1e-5 && composition < 1e-5;
  return {pass, "max |phi(V) - direct| = " + sci(worst) + ", composition " + sci(composition) +
                    " (< 1e-5, 20 probes x 10 loops)"};
}

Outcome distribution_rank() {
  std::mt19937_64 rng(7);
  const auto ranks = [&](const char* name) {
    const NavigationData nav = builtin(name).nav;
    std::vector<int> out;
    for (int i = 0; i < 20; ++i) {
      const Vector x = testing::random_point(rng, nav.chart(), 0.05);
      const double a = testing::uniform(rng, 0.0, 2 * std::numbers::pi);
      out.push_back(holonomy_distribution_rank(nav, {x, vec({std::cos(a), std::sin(a)})}, 3).rank);
    }
    return out;
  };
  const auto count = [](const std::vector<int>& v, int k) { return std::count(v.begin(), v.end(), k); };
  const auto rot = ranks("rotation_disk");
  const auto zero = ranks("zero_wind");
  const auto constant = ranks("constant_wind");
  const bool pass = count(rot, 4) == 20 && count(zero, 2) == 20 && count(constant, 2) == 20;
  return {pass, "rotation rank 4 at " + std::to_string(count(rot, 4)) + "/20, zero_wind rank 2 at " +
                    std::to_string(count(zero, 2)) + "/20, constant_wind rank 2 at " +
                    std::to_string(count(constant, 2)) + "/20 (depth 3)"};
}

Outcome euler_lagrange() {
  std::mt19937_64 rng(8);
  double worst_randers = 0.0;
  double least_riemann = 1e300;
  for (const char* name : {"funk_ball", "rotation_disk"}) {
    const NavigationData nav = builtin(name).nav;
    for (int i = 0; i < 10; ++i) {
      const Vector x0 = testing::random_point(rng, nav.chart(), 0.4);
      const Vector y0 = 0.4 * random_vector(rng, 2);
      const auto randers = integrate_geodesic(make_spray(nav, SprayKind::Randers), SprayKind::Randers, nav.chart(),
                                              x0, y0, 0.5, 1e-3);
      worst_randers = std::max(worst_randers, el_residual(nav, randers));
      if (std::string(name) == "funk_ball") {
        const auto riem = integrate_geodesic(make_spray(nav, SprayKind::Riemann), SprayKind::Riemann, nav.chart(),
                                             x0, y0, 0.5, 1e-3);
        least_riemann = std::min(least_riemann, el_residual(nav, riem));
      }
    }
  }
  const bool pass = worst_randers < 1e-5 && least_riemann > 1e-2;
  return {pass, "Randers paths max residual " + sci(worst_randers) + " (< 1e-5); Riemann paths on funk min residual " +
                    sci(least_riemann) + " (> 1e-2)"};
}

Outcome pregeodesic() {
  const NavigationData nav = builtin("funk_ball").nav;
  double relation = 0.0, fw = 0.0;
  for (const Vector& x0 : {vec({0.8, 0.0}), vec({0.3, -0.6}), vec({-0.5, 0.5}), vec({0.05, 0.02})}) {
    const PregeodesicReport r = pregeodesic_check(nav, x0, 2.0);
    relation = std::max(relation, r.max_relation_residual);
    fw = std::max(fw, r.max_fw_residual);
  }
  return {relation < 1e-6 && fw < 1e-10,
          "relation residual " + sci(relation) + " (< 1e-6); |F(W) - |W|/(1+|W|)| " + sci(fw) + " (< 1e-10)"};
}

// Chord from p to q with a sideways bulge, endpoints at least 0.4 apart.
Curve random_chord(std::mt19937_64& rng, const Chart& chart) {
  for (;;) {
    const Vector p = testing::random_point(rng, chart, 0.1);
    const Vector q = testing::random_point(rng, chart, 0.1);
    if ((p - q).norm() < 0.4) continue;
    const double bulge = testing::uniform(rng, -0.1, 0.1);
    const Curve c = Curve::analytic(std::vector<std::string>{
        num(p(0)) + " + " + num(q(0) - p(0)) + "*t + " + num(bulge * (p(1) - q(1))) + "*sin(pi*t)",
        num(p(1)) + " + " + num(q(1) - p(1)) + "*t + " + num(bulge * (q(0) - p(0))) + "*sin(pi*t)"});
    if (c.inside(chart)) return c;
  }
}

Outcome endpoint_dependence() {
  std::mt19937_64 rng(10);
  double def_gap = 0.0, ode_gap = 0.0, bump = 0.0;
  int cases = 0;
  for (const auto& name : builtin_names()) {
    const NavigationData nav = builtin(name).nav;
    int accepted = 0;
    for (int attempt = 0; attempt < 40 && accepted < 5; ++attempt) {
      const Curve c = random_chord(rng, nav.chart());
      const Vector p = c.position(0.0), q = c.position(1.0), m = c.position(0.5);
      const Vector u = random_vector(rng, 2).normalized();
      // Vanishes to second order at p and q, localized around the midpoint.
      const std::string shape = "((x1 - " + num(p(0)) + ")^2 + (x2 - " + num(p(1)) + ")^2) * ((x1 - " + num(q(0)) +
                                ")^2 + (x2 - " + num(q(1)) + ")^2) * exp(-((x1 - " + num(m(0)) + ")^2 + (x2 - " +
                                num(m(1)) + ")^2) / " + num((p - q).squaredNorm() / 4) + ")";
      const double at_mid = Expression::parse(shape, 2).eval(std::span<const double>(m.data(), 2));
      const double amplitude = 0.05 / at_mid;
      std::vector<Expression> wind;
      for (int k = 0; k < 2; ++k) {
        wind.push_back(Expression::parse("(" + nav.wind().components()[static_cast<std::size_t>(k)].render() + ") + " +
                                             num(amplitude * u(k)) + "*" + shape,
                                         2));
      }
      const NavigationData bumped(nav.chart(), nav.metric(), WindField(std::move(wind)));
      if (!validate(bumped, 4000).passed) continue;
      ++accepted;
      for (int s = 1; s < 20; ++s) {
        const Vector x = c.position(s / 20.0);
        bump = std::max(bump, (bumped.wind().value(x) - nav.wind().value(x)).norm());
      }
      const Vector v0 = random_vector(rng, 2);
      def_gap = std::max(def_gap, (natural_transport(nav, c, v0, NaturalMethod::Definitional).v_end -
                                   natural_transport(bumped, c, v0, NaturalMethod::Definitional).v_end)
                                      .cwiseAbs()
                                      .maxCoeff());
      ode_gap = std::max(ode_gap, (natural_transport(nav, c, v0, NaturalMethod::Ode).v_end -
                                   natural_transport(bumped, c, v0, NaturalMethod::Ode).v_end)
                                      .norm());
    }
    cases += accepted;
  }
  const bool pass = cases >= 30 && def_gap == 0.0 && ode_gap < 1e-6 && bump > 1e-2;
  return {pass, std::to_string(cases) + " wind pairs differing by up to " + sci(bump) +
                    " along the curve: definitional gap " + sci(def_gap) + " (identical), ODE gap " + sci(ode_gap) +
                    " (< 1e-6)"};
}

Outcome metric_correction() {
  std::mt19937_64 rng(11);
  double drift = 0.0;
  double parallel_gap = 0.0;
  for (const auto& name : builtin_names()) {
    const NavigationData nav = builtin(name).nav;
    const NormEvaluator F = randers_norm_evaluator(nav);
    const LinearTransporter riemann = riemann_transporter(nav);
    // Riemannian transport of v - W_p with W_q added back; linear when W is
    // parallel.
    const LinearTransporter shifted = [&nav](const Curve& c, const Vector& v) {
      const Vector wp = nav.wind().value(c.position(0.0));
      return Vector(riemann_transport(nav, c, Vector(v - wp)).v_end + nav.wind().value(c.position(1.0)));
    };
    const bool parallel = name == "zero_wind" || name == "constant_wind";
    for (int i = 0; i < 10; ++i) {
      const Curve c = testing::random_curve(rng, nav.chart());
      const Vector v0 = random_vector(rng, 2);
      const Vector out = corrected_transport(F, riemann, c, v0).v_end;
      const double F0 = F(c.position(0.0), v0);
      drift = std::max(drift, std::abs(F(c.position(1.0), out) - F0) / F0);
      if (parallel) {
        const Vector corr = corrected_transport(F, shifted, c, v0).v_end;
        const Vector natural = natural_transport(nav, c, v0, NaturalMethod::Definitional).v_end;
        parallel_gap = std::max(parallel_gap, (corr - natural).norm());
      }
    }
  }
  return {drift < 1e-12 && parallel_gap < 1e-10, "relative F drift " + sci(drift) +
                                                     " (< 1e-12); shifted-base vs natural on parallel winds " +
                                                     sci(parallel_gap) + " (< 1e-10)"};
}

Outcome classification() {
  std::string failures;
  ClassificationReport funk, constant;
  for (const auto& name : builtin_names()) {
    try {
      const ClassificationReport r = classification_report(builtin(name).nav);
      if (name == "funk_ball") funk = r;
      if (name == "constant_wind") constant = r;
    } catch (const Error& e) {
      failures += " " + name + ": " + e.what();
    }
  }
  const bool funk_ok = !funk.wind_parallel.value && funk.concircular.verdict.value && !funk.berwald.value &&
                       !funk.wagner.value && funk.isotropic_s.value;
  const bool constant_ok = constant.wind_parallel.value && constant.concircular.verdict.value &&
                           constant.berwald.value && constant.wagner.value && constant.isotropic_s.value &&
                           constant.torsion_vanishes.value;
  const bool pass = failures.empty() && funk_ok && constant_ok;
  std::string detail = "7 scenarios without InconsistentVerdicts; funk verdicts " +
                       std::string(funk_ok ? "as expected" : "WRONG") + ", constant_wind " +
                       (constant_ok ? "all true" : "NOT all true");
  if (!failures.empty()) detail = "inconsistent:" + failures;
  return {pass, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"Funk reduction", funk_reduction},
      {"spray coincidence iff concircular", spray_coincidence},
      {"natural transport preserves F", norm_preservation},
      {"definitional and ODE transport agree", two_routes},
      {"torsion characterization", torsion_characterization},
      {"holonomy correspondence", holonomy_correspondence},
      {"holonomy distribution rank", distribution_rank},
      {"Euler-Lagrange oracle", euler_lagrange},
      {"integral curves of W are pregeodesics", pregeodesic},
      {"transport sees the wind only at endpoints", endpoint_dependence},
      {"metric correction", metric_correction},
      {"classification consistency", classification},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::printf("%s %2zu  %-42s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed == 0 ? 0 : 1;
}
