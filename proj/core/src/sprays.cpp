#include "navgeo/sprays.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace navgeo {

std::string to_string(SprayKind kind) {
  switch (kind) {
    case SprayKind::Riemann: return "riemann";
    case SprayKind::Natural: return "natural";
    case SprayKind::Randers: return "randers";
  }
  return "unknown";
}

SprayKind spray_kind_from_string(const std::string& name) {
  if (name == "riemann") return SprayKind::Riemann;
  if (name == "natural") return SprayKind::Natural;
  if (name == "randers") return SprayKind::Randers;
  throw Error(ErrorKind::InvalidArgument, "unknown spray '" + name + "'");
}

namespace {

void require_nonzero(const Vector& y, const char* what) {
  if (y.isZero(0.0)) throw Error(ErrorKind::ZeroVector, std::string(what) + " needs y != 0");
}

Vector quadratic_part(const Tensor3& a, const Vector& y) {
  const int n = static_cast<int>(y.size());
  Vector g = Vector::Zero(n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) g(k) += a(k, i, j) * y(i) * y(j);
    }
  }
  return g;
}

}  // namespace

Vector riemann_spray(const PointFrame& f, const Vector& y) { return 0.5 * quadratic_part(f.christoffel, y); }

Vector natural_spray(const PointFrame& f, const Vector& y) {
  const int n = f.dim();
  const double F = randers_norm(f, y);
  Vector g = Vector::Zero(n);
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        s += f.christoffel(k, i, j) * y(i) * y(j) - F * y(i) * f.christoffel(k, i, j) * f.wind(j);
      }
      s -= F * y(i) * f.wind_jacobian(k, i);
    }
    g(k) = 0.5 * s;
  }
  return g;
}

RSTensors rs_tensors(const PointFrame& f) {
  const int n = f.dim();
  // D(i, j) = h_jl (nabla_i W)^l
  Matrix D(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) D(i, j) = f.h.matrix().row(j).dot(f.nabla_wind.col(i));
  }
  RSTensors rs;
  rs.x = f.x;
  rs.R = 0.5 * (D + D.transpose());
  rs.S = 0.5 * (D - D.transpose());
  rs.h = f.h.matrix();
  rs.h_inv = f.h_inv;
  rs.wind = f.wind;
  return rs;
}

RSTensors rs_tensors(const NavigationData& nav, const Vector& x) { return rs_tensors(nav.frame(x)); }

Contracted contract(const Matrix& T, const RSTensors& rs, const Vector& y) {
  Contracted c;
  c.lower = T.transpose() * rs.wind;  // W^i T_ij
  c.scalar = rs.wind.dot(c.lower);
  c.upper = rs.h_inv * c.lower;
  c.mixed = rs.h_inv * T;             // h^il T_lj
  c.zero = y.dot(c.lower);
  c.mixed_zero = c.mixed * y;
  c.zero_zero = y.dot(T * y);
  return c;
}

Vector randers_spray(const PointFrame& f, const Vector& y) {
  const RSTensors rs = rs_tensors(f);
  const Contracted R = contract(rs.R, rs, y);
  const Contracted s = contract(rs.spray_s(), rs, y);
  const double F = randers_norm(f, y);
  const Vector& W = f.wind;
  return 0.5 * quadratic_part(f.christoffel, y) + R.zero * y + (0.5 * R.zero_zero) * W -
         (0.5 * F * F) * (s.upper + R.upper - R.scalar * W) -
         F * (s.mixed_zero + (0.5 * R.scalar) * y + R.zero * W) - (R.zero_zero / (2.0 * F)) * y;
}

namespace detail {

Vector natural_spray_from_rs(const PointFrame& f, const Vector& y) {
  const RSTensors rs = rs_tensors(f);
  const Contracted R = contract(rs.R, rs, y);
  const Contracted s = contract(rs.spray_s(), rs, y);
  return 0.5 * quadratic_part(f.christoffel, y) -
         (0.5 * randers_norm(f, y)) * (R.mixed_zero + s.mixed_zero);
}

}  // namespace detail

Matrix natural_spray_connection(const PointFrame& f, const Vector& y) {
  const int n = f.dim();
  if (y.isZero(0.0)) return Matrix::Zero(n, n);
  const double F = randers_norm(f, y);
  const Vector Fy = randers_gradient(f, y);
  // q^k = y^i (A^k_ij W^j + dW^k/dx^i), so G = 1/2 (A y y - F q).
  Vector q = Vector::Zero(n);
  Matrix g = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        q(k) += y(i) * f.christoffel(k, i, j) * f.wind(j);
        g(k, i) += f.christoffel(k, i, j) * (y(j) - 0.5 * F * f.wind(j));
      }
      q(k) += y(i) * f.wind_jacobian(k, i);
      g(k, i) -= 0.5 * F * f.wind_jacobian(k, i);
    }
  }
  g -= 0.5 * q * Fy.transpose();
  return g;
}

SprayEval riemann_spray(const MetricField& metric, const TangentSample& s) {
  const Tensor3 a = christoffel(metric, s.x);
  return {SprayKind::Riemann, s, 0.5 * quadratic_part(a, s.y)};
}

SprayEval natural_spray(const NavigationData& nav, const TangentSample& s) {
  require_nonzero(s.y, "natural_spray");
  return {SprayKind::Natural, s, natural_spray(nav.frame(s.x), s.y)};
}

SprayEval randers_spray(const NavigationData& nav, const TangentSample& s) {
  require_nonzero(s.y, "randers_spray");
  return {SprayKind::Randers, s, randers_spray(nav.frame(s.x), s.y)};
}

SprayFunction make_spray(const NavigationData& nav, SprayKind kind) {
  switch (kind) {
    case SprayKind::Riemann:
      return [&nav](const Vector& x, const Vector& y) { return riemann_spray(nav.frame(x), y); };
    case SprayKind::Natural:
      return [&nav](const Vector& x, const Vector& y) { return natural_spray(nav.frame(x), y); };
    case SprayKind::Randers:
      return [&nav](const Vector& x, const Vector& y) { return randers_spray(nav.frame(x), y); };
  }
  throw Error(ErrorKind::InvalidArgument, "unknown spray kind");
}

GeodesicPath integrate_geodesic(const SprayFunction& spray, SprayKind kind, const Chart& chart,
                                const Vector& x0, const Vector& y0, double duration, double dt) {
  if (y0.isZero(0.0)) throw Error(ErrorKind::ZeroVector, "geodesic needs y0 != 0");
  if (!(dt > 0.0) || !(duration >= 0.0)) throw Error(ErrorKind::InvalidArgument, "need dt > 0, T >= 0");
  if (!chart.contains(x0)) throw Error(ErrorKind::CurveLeftDomain, "start point outside the chart");
  const int n = static_cast<int>(x0.size());
  GeodesicPath path;
  path.kind = kind;
  path.dt = dt;
  const StateMap f = [&](double, const Vector& z) {
    Vector d(2 * n);
    d.head(n) = z.tail(n);
    d.tail(n) = -2.0 * spray(z.head(n), z.tail(n));
    return d;
  };
  Vector z(2 * n);
  z << x0, y0;
  path.samples.push_back({0.0, x0, y0});
  const auto steps = static_cast<long>(std::llround(duration / dt));
  for (long s = 0; s < steps; ++s) {
    Vector next;
    try {
      next = rk4_step(f, z, s * dt, dt);
    } catch (const Error& e) {
      // Stages that step outside the metric's domain count as leaving the chart.
      if (e.kind() == ErrorKind::NonFiniteState) throw;
      path.left_domain = true;
      break;
    }
    if (!chart.contains(Vector(next.head(n)))) {
      path.left_domain = true;
      break;
    }
    z = std::move(next);
    path.samples.push_back({(s + 1) * dt, z.head(n), z.tail(n)});
  }
  return path;
}

namespace {

// (E, dE/dx, dE/dy) with E = F^2 / 2 at (x, y).
struct EnergyDerivatives {
  Vector dx;
  Vector dy;
};

EnergyDerivatives energy_derivatives(const NavigationData& nav, const Vector& x, const Vector& y) {
  const int n = nav.dim();
  EnergyDerivatives out{Vector(n), Vector(n)};
  std::vector<Dual> xd(static_cast<std::size_t>(n)), yd(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      xd[static_cast<std::size_t>(i)] = Dual(x(i), i == k ? 1.0 : 0.0);
      yd[static_cast<std::size_t>(i)] = Dual(y(i));
    }
    const auto h = nav.metric().eval_dual(xd);
    const auto w = nav.wind().eval_dual(xd);
    const Dual F = randers_value<Dual>(h, w, yd);
    out.dx(k) = F.value * F.deriv;
  }
  const PointFrame f = nav.frame(x);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) yd[static_cast<std::size_t>(i)] = Dual(y(i), i == k ? 1.0 : 0.0);
    const Dual F = randers_norm<Dual>(f, yd);
    out.dy(k) = F.value * F.deriv;
  }
  return out;
}

}  // namespace

double el_residual(const NavigationData& nav, const GeodesicPath& path) {
  const auto& s = path.samples;
  for (const auto& p : s) {
    if (p.y.isZero(0.0)) throw Error(ErrorKind::ZeroVelocity, "path has zero velocity");
  }
  if (s.size() < 5) throw Error(ErrorKind::InvalidArgument, "EL residual needs >= 5 samples");
  std::vector<EnergyDerivatives> d;
  d.reserve(s.size());
  for (const auto& p : s) d.push_back(energy_derivatives(nav, p.x, p.y));
  double worst = 0.0;
  const double h = path.dt;
  for (std::size_t i = 2; i + 2 < s.size(); ++i) {
    const Vector dp = (-d[i + 2].dy + 8.0 * d[i + 1].dy - 8.0 * d[i - 1].dy + d[i - 2].dy) / (12.0 * h);
    worst = std::max(worst, (dp - d[i].dx).norm());
  }
  return worst;
}

std::vector<Vector> unit_directions(const PointFrame& frame, int count) {
  const int n = frame.dim();
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) {
    Vector y(n);
    if (n == 1) {
      y(0) = (j % 2 == 0) ? 1.0 : -1.0;
    } else if (n == 2) {
      const double a = 2.0 * std::numbers::pi * (j + 0.5) / count;
      y << std::cos(a), std::sin(a);
    } else {
      // Spread on the sphere via the golden-angle spiral in the first three
      // coordinates, remaining coordinates alternate small offsets.
      const double z = 1.0 - 2.0 * (j + 0.5) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = j * std::numbers::pi * (3.0 - std::sqrt(5.0));
      y.setZero();
      y(0) = r * std::cos(phi);
      y(1) = r * std::sin(phi);
      y(2) = z;
      for (int k = 3; k < n; ++k) y(k) = 0.5 * std::sin((k + 1.0) * (j + 1.0));
    }
    out.push_back(y / randers_norm(frame, y));
  }
  return out;
}

ComparisonReport compare_sprays(const NavigationData& nav, const CompareOptions& opt) {
  ComparisonReport r;
  r.points = opt.points;
  r.directions = opt.directions;
  r.tolerance = opt.tolerance;
  r.spread_tolerance = opt.spread_tolerance;
  r.sample_points = nav.chart().sample(opt.points);
  r.phi_hat.assign(r.sample_points.size(), 0.0);
  std::vector<double> sup(r.sample_points.size(), 0.0), resid(r.sample_points.size(), 0.0),
      spread(r.sample_points.size(), 0.0);

  parallel_for(r.sample_points.size(), [&](std::size_t p) {
    const PointFrame f = nav.frame(r.sample_points[p]);
    const auto dirs = unit_directions(f, opt.directions);
    std::vector<Vector> diff, scaled;
    double num = 0.0, den = 0.0;
    for (const Vector& y : dirs) {
      const Vector gn = natural_spray(f, y);
      sup[p] = std::max(sup[p], (gn - randers_spray(f, y)).norm());
      const Vector d = gn - riemann_spray(f, y);
      const Vector v = 0.5 * randers_norm(f, y) * y;
      num += d.dot(v);
      den += v.dot(v);
      diff.push_back(d);
      scaled.push_back(v);
    }
    const double phi = -num / den;
    r.phi_hat[p] = phi;
    for (std::size_t j = 0; j < dirs.size(); ++j) {
      resid[p] = std::max(resid[p], (diff[j] + phi * scaled[j]).norm());
      const double local = -diff[j].dot(scaled[j]) / scaled[j].dot(scaled[j]);
      spread[p] = std::max(spread[p], std::abs(local - phi));
    }
  });

  for (std::size_t p = 0; p < r.sample_points.size(); ++p) {
    r.sup_natural_minus_randers = std::max(r.sup_natural_minus_randers, sup[p]);
    r.phi_fit_residual = std::max(r.phi_fit_residual, resid[p]);
    r.phi_spread = std::max(r.phi_spread, spread[p]);
  }
  r.sprays_coincide = r.sup_natural_minus_randers < opt.tolerance;
  r.projectively_riemannian = r.phi_fit_residual < opt.tolerance && r.phi_spread < opt.spread_tolerance;
  return r;
}

}  // namespace navgeo
