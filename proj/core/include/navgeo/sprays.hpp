#pragma once

#include <functional>
#include <string>
#include <vector>

#include "navgeo/connection.hpp"

namespace navgeo {

enum class SprayKind { Riemann, Natural, Randers };
std::string to_string(SprayKind kind);
SprayKind spray_kind_from_string(const std::string& name);

struct SprayEval {
  SprayKind kind = SprayKind::Natural;
  TangentSample at;
  Vector G;
};

// G^k = 1/2 A^k_ij y^i y^j.
Vector riemann_spray(const PointFrame& frame, const Vector& y);
// G^k = 1/2 (A^k_ij y^i y^j - F y^i A^k_ij W^j - F y^i dW^k/dx^i).
Vector natural_spray(const PointFrame& frame, const Vector& y);
// Geodesic spray of the Randers metric F from the R/S decomposition of
// nabla^R W (see RSTensors).
Vector randers_spray(const PointFrame& frame, const Vector& y);

// Canonical connection of the natural spray, dG^k/dy^i as (k, i). It differs
// from the natural connection Gamma by half its torsion.
Matrix natural_spray_connection(const PointFrame& frame, const Vector& y);

SprayEval riemann_spray(const MetricField& metric, const TangentSample& s);
// The next two throw ZeroVector for y = 0.
SprayEval natural_spray(const NavigationData& nav, const TangentSample& s);
SprayEval randers_spray(const NavigationData& nav, const TangentSample& s);

// Symmetric and antisymmetric parts of D_ij = h(nabla^R_{d_i} W, d_j):
//   R_ij = (D_ij + D_ji) / 2,  S_ij = (D_ij - D_ji) / 2,  R + S = D.
//
// Contraction convention. For a (0,2) tensor T:
//   T_j = W^i T_ij, T = W^j T_j, T^i = h^ij T_j, T^i_j = h^il T_lj,
//   T_0 = y^i T_i, T^i_0 = y^j T^i_j, T_00 = y^i y^j T_ij.
// The spray formulas need S with its slots transposed (s_ij = -S_ij,
// i.e. s_ij = (W_{i;j} - W_{j;i}) / 2): only then does
//   G^i = 1/2 A^i_kj y^j y^k - F/2 (R^i_0 + s^i_0)
// reproduce the natural spray, and the Randers spray formula reproduce the
// Euler-Lagrange geodesics of F. The `spray_s` accessor returns s.
struct RSTensors {
  Vector x;
  Matrix R;
  Matrix S;
  Matrix h;
  Matrix h_inv;
  Vector wind;

  Matrix spray_s() const { return S.transpose(); }
};

RSTensors rs_tensors(const PointFrame& frame);
RSTensors rs_tensors(const NavigationData& nav, const Vector& x);

// Contractions of one (0,2) tensor against W, h^-1 and y.
struct Contracted {
  Vector lower;      // T_j
  double scalar;     // T
  Vector upper;      // T^i
  Matrix mixed;      // T^i_j
  double zero;       // T_0
  Vector mixed_zero; // T^i_0
  double zero_zero;  // T_00
};
Contracted contract(const Matrix& T, const RSTensors& rs, const Vector& y);

namespace detail {
// Natural spray assembled from R/S contractions; cross-check only.
Vector natural_spray_from_rs(const PointFrame& frame, const Vector& y);
}  // namespace detail

using SprayFunction = std::function<Vector(const Vector& x, const Vector& y)>;
SprayFunction make_spray(const NavigationData& nav, SprayKind kind);

struct GeodesicSample {
  double t = 0.0;
  Vector x;
  Vector y;
};

struct GeodesicPath {
  SprayKind kind = SprayKind::Natural;
  double dt = 0.0;
  std::vector<GeodesicSample> samples;
  bool left_domain = false;  // integration halted at the chart boundary
};

// RK4 on (x, y) -> (y, -2 G(x, y)); stops before the first step that would
// leave `chart` and flags the path. Throws ZeroVector (y0 = 0) and
// NonFiniteState.
GeodesicPath integrate_geodesic(const SprayFunction& spray, SprayKind kind, const Chart& chart,
                                const Vector& x0, const Vector& y0, double duration, double dt);

// max over interior samples of |d/dt dE/dy - dE/dx| with E = F^2 / 2, using a
// five-point central difference in t. Throws ZeroVelocity.
double el_residual(const NavigationData& nav, const GeodesicPath& path);

struct ComparisonReport {
  std::size_t points = 0;
  int directions = 0;
  double sup_natural_minus_randers = 0.0;
  std::vector<Vector> sample_points;
  std::vector<double> phi_hat;  // per point
  double phi_fit_residual = 0.0;  // max |G_nat - G_riem + phi F y / 2|
  double phi_spread = 0.0;        // max deviation of per-direction fits from phi_hat(x)
  double tolerance = 0.0;
  double spread_tolerance = 0.0;
  bool sprays_coincide = false;
  bool projectively_riemannian = false;
};

struct CompareOptions {
  std::size_t points = 100;
  int directions = 16;
  double tolerance = 1e-8;
  double spread_tolerance = 1e-6;
};

ComparisonReport compare_sprays(const NavigationData& nav, const CompareOptions& opt = {});

// F-unit directions at a point: `count` evenly spread directions rescaled to
// F = 1.
std::vector<Vector> unit_directions(const PointFrame& frame, int count);

}  // namespace navgeo
