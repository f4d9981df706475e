#pragma once

#include <vector>

#include "navgeo/sprays.hpp"

namespace navgeo {

// Sampling verdict: `value` is residual < tolerance. The classes are exact
// statements; a true verdict only means numerically indistinguishable on the
// grid.
struct Verdict {
  bool value = false;
  double residual = 0.0;
  double tolerance = 0.0;
};

struct ClassifyOptions {
  std::size_t points = 400;
  int directions = 16;
  double tolerance = 1e-8;
  // Verdict pairs the theory ties together only count as contradictory when
  // the residuals sit this factor away from the shared threshold.
  double slack = 1e3;
};

// sup over grid of max |(nabla^R_{d_i} W)^k|.
Verdict wind_parallel_test(const NavigationData& nav, const std::vector<Vector>& grid,
                           double tol = 1e-8);

struct ConcircularResult {
  Verdict verdict;
  std::vector<double> phi_hat;  // trace(nabla^R W) / n per grid point
  double phi_min = 0.0;
  double phi_max = 0.0;
};
// Residual: sup over grid of the Frobenius norm of nabla^R W - phi_hat Id.
ConcircularResult concircular_test(const NavigationData& nav, const std::vector<Vector>& grid,
                                   double tol = 1e-8);

// max - min of |W|_h over the grid.
Verdict wagner_test(const NavigationData& nav, const std::vector<Vector>& grid, double tol = 1e-8);

// sup of max |t^k_ij| over grid points and F-unit directions.
Verdict torsion_test(const NavigationData& nav, const std::vector<Vector>& grid, int directions,
                     double tol = 1e-8);

// sup over grid of max |R_ij - phi_hat h_ij| with phi_hat = trace(h^-1 R) / n.
Verdict isotropic_s_test(const NavigationData& nav, const std::vector<Vector>& grid,
                         double tol = 1e-8);

struct ClassificationReport {
  std::size_t points = 0;
  int directions = 0;
  Verdict wind_parallel;
  Verdict torsion_vanishes;
  Verdict berwald;
  Verdict wagner;
  ConcircularResult concircular;
  Verdict isotropic_s;
  ComparisonReport sprays;
};

// Runs every test plus compare_sprays on the same grid. Throws
// InconsistentVerdicts when torsion_vanishes and wind_parallel disagree, or
// concircular and sprays_coincide disagree, beyond the slack.
ClassificationReport classification_report(const NavigationData& nav,
                                           const ClassifyOptions& opt = {});

struct PregeodesicReport {
  std::vector<Vector> points;  // samples along the integral curve
  double max_relation_residual = 0.0;  // |nabla_W W - (1 - F(W)) nabla^R_W W|
  double max_fw_residual = 0.0;        // |F(W) - |W| / (1 + |W|)|
  double max_riemann_acceleration = 0.0;  // |nabla^R_W W|, zero iff geodesic
};

// Integrates x' = W(x) from x0 with RK4 and compares the nonlinear covariant
// derivative computed from Gamma with the Riemannian one at every step.
PregeodesicReport pregeodesic_check(const NavigationData& nav, const Vector& x0, double duration,
                                    double dt = 1e-3);

}  // namespace navgeo
