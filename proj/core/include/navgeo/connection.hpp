#pragma once

#include <span>
#include <vector>

#include "navgeo/geometry.hpp"

namespace navgeo {

// Expression-defined vector fields share the wind representation.
using VectorField = WindField;

struct ConnectionEval {
  TangentSample at;
  Matrix gamma;  // (k, i) = Gamma^k_i(x, y)
};

struct TorsionEval {
  TangentSample at;
  Tensor3 t;  // (k, i, j) = t^k_ij, antisymmetric in (i, j)
};

// Natural connection coefficients
//   Gamma^k_i = A^k_is y^s - A^k_is F(y) W^s - F(y) dW^k/dx^i
// as a row-major (k, i) array. At y = 0 this is the zero matrix (the
// continuous extension); the checked entry points below reject y = 0.
template <class T>
std::vector<T> gamma_coefficients(const PointFrame& f, std::span<const T> y) {
  const int n = f.dim();
  const T F = randers_norm<T>(f, y);
  std::vector<T> g(static_cast<std::size_t>(n * n), T(0.0));
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      T s(0.0);
      for (int j = 0; j < n; ++j) {
        const double a = f.christoffel(k, i, j);
        s += a * y[static_cast<std::size_t>(j)] - a * F * f.wind(j);
      }
      s -= F * f.wind_jacobian(k, i);
      g[static_cast<std::size_t>(k * n + i)] = s;
    }
  }
  return g;
}

Matrix gamma_matrix(const PointFrame& frame, const Vector& y);

// Throws ZeroVector for y = 0.
ConnectionEval gamma(const NavigationData& nav, const TangentSample& s);

// Horizontal lift of X at (x, y) as a 2n-vector (X, -Gamma X).
Vector horizontal_lift(const NavigationData& nav, const TangentSample& s, const Vector& X);
// Same lift assembled as the Riemannian lift (X, -A(X, y)) plus F(y) times the
// vertical lift of nabla^R_X W.
Vector horizontal_lift_via_riemann(const NavigationData& nav, const TangentSample& s,
                                   const Vector& X);
Vector riemann_horizontal_lift(const PointFrame& frame, const Vector& y, const Vector& X);

// nabla^R_X Y at x, with field derivatives by dual evaluation.
Vector riemann_covariant_derivative(const NavigationData& nav, const VectorField& X,
                                    const VectorField& Y, const Vector& x);
// Nonlinear covariant derivative nabla_X Y = nabla^R_X Y - F(Y) nabla^R_X W.
Vector covariant_derivative(const NavigationData& nav, const VectorField& X,
                            const VectorField& Y, const Vector& x);
// The same derivative from the connection coefficients:
// X^i (dY^k/dx^i + Gamma^k_i(x, Y)).
Vector covariant_derivative_via_gamma(const NavigationData& nav, const VectorField& X,
                                      const VectorField& Y, const Vector& x);

// Closed form of dGamma^k_j/dy^i - dGamma^k_i/dy^j:
//   t^k_ij = F_{y^j} (nabla^R_{d_i} W)^k - F_{y^i} (nabla^R_{d_j} W)^k.
// It vanishes iff dF/dy wedge nabla^R W does.
// Throws ZeroVector for y = 0.
TorsionEval torsion(const NavigationData& nav, const TangentSample& s);
TorsionEval torsion(const PointFrame& frame, const Vector& y);
// t^k_ij = dGamma^k_j/dy^i - dGamma^k_i/dy^j with the fiber derivatives taken
// by dual evaluation of the coefficients.
TorsionEval torsion_by_differentiation(const PointFrame& frame, const Vector& y);

// dGamma^k_i/dy^j as (k, i, j), by dual evaluation.
Tensor3 gamma_fiber_derivative(const PointFrame& frame, const Vector& y);

}  // namespace navgeo
