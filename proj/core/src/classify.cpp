#include "navgeo/classify.hpp"

#include <algorithm>
#include <cmath>

namespace navgeo {

namespace {

// Per-point scalar residuals reduced by max, evaluated in parallel.
template <class Fn>
double sup_over(const std::vector<Vector>& grid, Fn fn) {
  std::vector<double> r(grid.size(), 0.0);
  parallel_for(grid.size(), [&](std::size_t p) { r[p] = fn(grid[p]); });
  return r.empty() ? 0.0 : *std::max_element(r.begin(), r.end());
}

Verdict make_verdict(double residual, double tol) { return {residual < tol, residual, tol}; }

}  // namespace

Verdict wind_parallel_test(const NavigationData& nav, const std::vector<Vector>& grid, double tol) {
  const double r = sup_over(grid, [&](const Vector& x) { return nav.frame(x).nabla_wind.cwiseAbs().maxCoeff(); });
  return make_verdict(r, tol);
}

ConcircularResult concircular_test(const NavigationData& nav, const std::vector<Vector>& grid,
                                   double tol) {
  ConcircularResult out;
  out.phi_hat.assign(grid.size(), 0.0);
  std::vector<double> resid(grid.size(), 0.0);
  parallel_for(grid.size(), [&](std::size_t p) {
    const Matrix nw = nav.frame(grid[p]).nabla_wind;
    const double phi = nw.trace() / static_cast<double>(nw.rows());
    out.phi_hat[p] = phi;
    resid[p] = (nw - phi * Matrix::Identity(nw.rows(), nw.cols())).norm();
  });
  const double r = resid.empty() ? 0.0 : *std::max_element(resid.begin(), resid.end());
  out.verdict = make_verdict(r, tol);
  if (!grid.empty()) {
    const auto [lo, hi] = std::minmax_element(out.phi_hat.begin(), out.phi_hat.end());
    out.phi_min = *lo;
    out.phi_max = *hi;
  }
  return out;
}

Verdict wagner_test(const NavigationData& nav, const std::vector<Vector>& grid, double tol) {
  if (grid.empty()) return make_verdict(0.0, tol);
  std::vector<double> norms(grid.size());
  parallel_for(grid.size(), [&](std::size_t p) { norms[p] = nav.wind_norm(grid[p]); });
  const auto [lo, hi] = std::minmax_element(norms.begin(), norms.end());
  return make_verdict(*hi - *lo, tol);
}

Verdict torsion_test(const NavigationData& nav, const std::vector<Vector>& grid, int directions,
                     double tol) {
  const double r = sup_over(grid, [&](const Vector& x) {
    const PointFrame f = nav.frame(x);
    double m = 0.0;
    for (const Vector& y : unit_directions(f, directions)) m = std::max(m, torsion(f, y).t.max_abs());
    return m;
  });
  return make_verdict(r, tol);
}

Verdict isotropic_s_test(const NavigationData& nav, const std::vector<Vector>& grid, double tol) {
  const double r = sup_over(grid, [&](const Vector& x) {
    const RSTensors rs = rs_tensors(nav, x);
    const double phi = (rs.h_inv * rs.R).trace() / static_cast<double>(rs.R.rows());
    return (rs.R - phi * rs.h).cwiseAbs().maxCoeff();
  });
  return make_verdict(r, tol);
}

ClassificationReport classification_report(const NavigationData& nav, const ClassifyOptions& opt) {
  ClassificationReport rep;
  rep.points = opt.points;
  rep.directions = opt.directions;
  const std::vector<Vector> grid = nav.chart().sample(opt.points);
  rep.wind_parallel = wind_parallel_test(nav, grid, opt.tolerance);
  rep.torsion_vanishes = torsion_test(nav, grid, opt.directions, opt.tolerance);
  rep.berwald = rep.wind_parallel;
  rep.wagner = wagner_test(nav, grid, opt.tolerance);
  rep.concircular = concircular_test(nav, grid, opt.tolerance);
  rep.isotropic_s = isotropic_s_test(nav, grid, opt.tolerance);
  CompareOptions copt;
  copt.points = opt.points;
  copt.directions = opt.directions;
  copt.tolerance = opt.tolerance;
  rep.sprays = compare_sprays(nav, copt);

  const auto contradicts = [&](const Verdict& a, double b_residual, bool b_value) {
    if (a.value == b_value) return false;
    // One side says "in the class"; it only contradicts the other when that
    // other residual is clearly outside.
    const double out_res = a.value ? b_residual : a.residual;
    return out_res > opt.tolerance * opt.slack;
  };
  if (contradicts(rep.wind_parallel, rep.torsion_vanishes.residual, rep.torsion_vanishes.value)) {
    throw Error(ErrorKind::InconsistentVerdicts,
                "torsion_vanishes and wind_parallel disagree (residuals " +
                    std::to_string(rep.torsion_vanishes.residual) + ", " +
                    std::to_string(rep.wind_parallel.residual) + ")");
  }
  if (contradicts(rep.concircular.verdict, rep.sprays.sup_natural_minus_randers,
                  rep.sprays.sprays_coincide)) {
    throw Error(ErrorKind::InconsistentVerdicts,
                "concircular and sprays_coincide disagree (residuals " +
                    std::to_string(rep.concircular.verdict.residual) + ", " +
                    std::to_string(rep.sprays.sup_natural_minus_randers) + ")");
  }
  return rep;
}

PregeodesicReport pregeodesic_check(const NavigationData& nav, const Vector& x0, double duration,
                                    double dt) {
  if (!(dt > 0.0) || !(duration > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt and duration must be positive");
  const VectorField& W = nav.wind();
  PregeodesicReport rep;
  const StateMap flow = [&](double, const Vector& x) { return W.value(x); };
  const auto steps = static_cast<long>(std::llround(duration / dt));
  Vector x = x0;
  for (long s = 0; s <= steps; ++s) {
    if (!nav.chart().contains(x)) throw Error(ErrorKind::CurveLeftDomain, "integral curve left the chart");
    rep.points.push_back(x);
    const Vector via_gamma = covariant_derivative_via_gamma(nav, W, W, x);
    const Vector riem = riemann_covariant_derivative(nav, W, W, x);
    const PointFrame f = nav.frame(x);
    const double fw = randers_norm(f, f.wind);
    const double w = nav.wind_norm(x);
    rep.max_relation_residual = std::max(rep.max_relation_residual, (via_gamma - (1.0 - fw) * riem).norm());
    rep.max_fw_residual = std::max(rep.max_fw_residual, std::abs(fw - w / (1.0 + w)));
    rep.max_riemann_acceleration = std::max(rep.max_riemann_acceleration, riem.norm());
    if (s < steps) x = rk4_step(flow, x, s * dt, dt);
  }
  return rep;
}

}  // namespace navgeo
