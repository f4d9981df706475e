#include "navgeo/connection.hpp"

namespace navgeo {

namespace {

void require_nonzero(const Vector& y, const char* what) {
  if (y.isZero(0.0)) throw Error(ErrorKind::ZeroVector, std::string(what) + " needs y != 0");
}

std::span<const double> as_span(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

}  // namespace

Matrix gamma_matrix(const PointFrame& frame, const Vector& y) {
  const int n = frame.dim();
  const auto g = gamma_coefficients<double>(frame, as_span(y));
  Matrix m(n, n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) m(k, i) = g[static_cast<std::size_t>(k * n + i)];
  }
  return m;
}

ConnectionEval gamma(const NavigationData& nav, const TangentSample& s) {
  require_nonzero(s.y, "gamma");
  return {s, gamma_matrix(nav.frame(s.x), s.y)};
}

Vector horizontal_lift(const NavigationData& nav, const TangentSample& s, const Vector& X) {
  require_nonzero(s.y, "horizontal_lift");
  const int n = nav.dim();
  Vector lift(2 * n);
  lift.head(n) = X;
  lift.tail(n) = -gamma_matrix(nav.frame(s.x), s.y) * X;
  return lift;
}

Vector riemann_horizontal_lift(const PointFrame& frame, const Vector& y, const Vector& X) {
  const int n = frame.dim();
  Vector lift(2 * n);
  lift.head(n) = X;
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) s += frame.christoffel(k, i, j) * X(i) * y(j);
    }
    lift(n + k) = -s;
  }
  return lift;
}

Vector horizontal_lift_via_riemann(const NavigationData& nav, const TangentSample& s,
                                   const Vector& X) {
  require_nonzero(s.y, "horizontal_lift");
  const PointFrame f = nav.frame(s.x);
  const int n = f.dim();
  Vector lift = riemann_horizontal_lift(f, s.y, X);
  lift.tail(n) += randers_norm(f, s.y) * (f.nabla_wind * X);
  return lift;
}

Vector riemann_covariant_derivative(const NavigationData& nav, const VectorField& X,
                                    const VectorField& Y, const Vector& x) {
  const Tensor3 a = christoffel(nav.metric(), x);
  const Vector xv = X.value(x);
  const Vector yv = Y.value(x);
  Vector out = Y.jacobian(x) * xv;
  const int n = nav.dim();
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int s = 0; s < n; ++s) out(k) += a(k, i, s) * xv(i) * yv(s);
    }
  }
  return out;
}

Vector covariant_derivative(const NavigationData& nav, const VectorField& X,
                            const VectorField& Y, const Vector& x) {
  const PointFrame f = nav.frame(x);
  const Vector yv = Y.value(x);
  const double F = randers_norm(f, yv);
  return riemann_covariant_derivative(nav, X, Y, x) - F * (f.nabla_wind * X.value(x));
}

Vector covariant_derivative_via_gamma(const NavigationData& nav, const VectorField& X,
                                      const VectorField& Y, const Vector& x) {
  const PointFrame f = nav.frame(x);
  const Vector xv = X.value(x);
  const Vector yv = Y.value(x);
  return Y.jacobian(x) * xv + gamma_matrix(f, yv) * xv;
}

TorsionEval torsion(const PointFrame& f, const Vector& y) {
  require_nonzero(y, "torsion");
  const int n = f.dim();
  const Vector Fy = randers_gradient(f, y);
  TorsionEval out{{f.x, y}, Tensor3(n)};
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        out.t(k, i, j) = Fy(j) * f.nabla_wind(k, i) - Fy(i) * f.nabla_wind(k, j);
      }
    }
  }
  return out;
}

TorsionEval torsion(const NavigationData& nav, const TangentSample& s) {
  require_nonzero(s.y, "torsion");
  return torsion(nav.frame(s.x), s.y);
}

Tensor3 gamma_fiber_derivative(const PointFrame& f, const Vector& y) {
  const int n = f.dim();
  Tensor3 d(n);
  std::vector<Dual> yd(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    for (int m = 0; m < n; ++m) yd[static_cast<std::size_t>(m)] = Dual(y(m), m == j ? 1.0 : 0.0);
    const auto g = gamma_coefficients<Dual>(f, yd);
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) d(k, i, j) = g[static_cast<std::size_t>(k * n + i)].deriv;
    }
  }
  return d;
}

TorsionEval torsion_by_differentiation(const PointFrame& f, const Vector& y) {
  require_nonzero(y, "torsion");
  const int n = f.dim();
  const Tensor3 d = gamma_fiber_derivative(f, y);
  TorsionEval out{{f.x, y}, Tensor3(n)};
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) out.t(k, i, j) = d(k, j, i) - d(k, i, j);
    }
  }
  return out;
}

}  // namespace navgeo
