#include "navgeo/transport.hpp"

#include <algorithm>
#include <cmath>

namespace navgeo {

Curve Curve::analytic(std::vector<Expression> components) {
  if (components.empty() || components.size() > static_cast<std::size_t>(kMaxDim)) {
    throw Error(ErrorKind::InvalidArgument, "curve needs 1..4 components");
  }
  for (const auto& e : components) {
    if (e.variables() != Expression::Variables::Parameter) {
      throw Error(ErrorKind::InvalidArgument, "curve components must be expressions in t");
    }
  }
  Curve c;
  c.components_ = std::move(components);
  return c;
}

Curve Curve::analytic(const std::vector<std::string>& components) {
  std::vector<Expression> parsed;
  parsed.reserve(components.size());
  for (const auto& s : components) parsed.push_back(Expression::parse_parameter(s));
  return analytic(std::move(parsed));
}

Curve Curve::polyline(std::vector<Vector> points) {
  if (points.size() < 2) throw Error(ErrorKind::InvalidArgument, "polyline needs >= 2 points");
  const auto n = points.front().size();
  if (n < kMinDim || n > kMaxDim) throw Error(ErrorKind::InvalidArgument, "polyline dimension must be 1..4");
  for (const auto& p : points) {
    if (p.size() != n) throw Error(ErrorKind::InvalidArgument, "polyline points differ in dimension");
  }
  Curve c;
  c.polyline_ = std::move(points);
  return c;
}

int Curve::dim() const {
  return is_analytic() ? static_cast<int>(components_.size())
                       : static_cast<int>(polyline_.front().size());
}

Vector Curve::raw_position(double s) const {
  if (is_analytic()) {
    Vector x(dim());
    const double ts[1] = {s};
    for (int i = 0; i < dim(); ++i) x(i) = components_[static_cast<std::size_t>(i)].eval(ts);
    return x;
  }
  const auto segments = polyline_.size() - 1;
  const double u = std::clamp(s, 0.0, 1.0) * static_cast<double>(segments);
  const auto k = std::min(static_cast<std::size_t>(u), segments - 1);
  const double local = u - static_cast<double>(k);
  return (1.0 - local) * polyline_[k] + local * polyline_[k + 1];
}

Vector Curve::raw_velocity(double s, std::size_t segment) const {
  if (is_analytic()) {
    Vector v(dim());
    for (int i = 0; i < dim(); ++i) {
      const double ts[1] = {s};
      const double dir[1] = {1.0};
      v(i) = components_[static_cast<std::size_t>(i)].eval_dual(ts, dir).second;
    }
    return v;
  }
  const auto segments = polyline_.size() - 1;
  return static_cast<double>(segments) * (polyline_[segment + 1] - polyline_[segment]);
}

Vector Curve::position(double t) const { return raw_position(reversed_ ? 1.0 - t : t); }

Vector Curve::velocity(double t) const {
  if (is_analytic()) return reversed_ ? Vector(-raw_velocity(1.0 - t, 0)) : raw_velocity(t, 0);
  const auto segments = polyline_.size() - 1;
  const double s = reversed_ ? 1.0 - t : t;
  const auto k = std::min(static_cast<std::size_t>(std::clamp(s, 0.0, 1.0) * static_cast<double>(segments)),
                          segments - 1);
  return reversed_ ? Vector(-raw_velocity(s, k)) : raw_velocity(s, k);
}

std::vector<std::pair<double, double>> Curve::pieces() const {
  if (is_analytic()) return {{0.0, 1.0}};
  const auto segments = polyline_.size() - 1;
  std::vector<std::pair<double, double>> out;
  for (std::size_t k = 0; k < segments; ++k) {
    out.emplace_back(static_cast<double>(k) / static_cast<double>(segments),
                     static_cast<double>(k + 1) / static_cast<double>(segments));
  }
  return out;
}

Vector Curve::velocity_on_piece(double t, std::size_t piece) const {
  if (is_analytic()) return velocity(t);
  const auto segments = polyline_.size() - 1;
  // Piece k of the reversed curve is raw segment (segments - 1 - k).
  const std::size_t raw = reversed_ ? segments - 1 - piece : piece;
  return reversed_ ? Vector(-raw_velocity(1.0 - t, raw)) : raw_velocity(t, raw);
}

Curve Curve::reversed() const {
  Curve c = *this;
  c.reversed_ = !reversed_;
  return c;
}

bool operator==(const Curve& a, const Curve& b) {
  if (a.reversed_ != b.reversed_ || a.components_ != b.components_) return false;
  if (a.polyline_.size() != b.polyline_.size()) return false;
  for (std::size_t i = 0; i < a.polyline_.size(); ++i) {
    if (a.polyline_[i].size() != b.polyline_[i].size() || a.polyline_[i] != b.polyline_[i]) return false;
  }
  return true;
}

bool Curve::is_closed(double tol) const { return (position(0.0) - position(1.0)).norm() < tol; }

bool Curve::inside(const Chart& chart, int samples) const {
  for (int i = 0; i <= samples; ++i) {
    if (!chart.contains(position(static_cast<double>(i) / samples))) return false;
  }
  return true;
}

std::string to_string(TransportMode mode) {
  switch (mode) {
    case TransportMode::Riemann: return "riemann";
    case TransportMode::NaturalDefinitional: return "natural_definitional";
    case TransportMode::NaturalOde: return "natural_ode";
    case TransportMode::Corrected: return "corrected";
  }
  return "unknown";
}

namespace {

// dv/dt as a function of (curve point, curve velocity, v).
using FiberRhs = std::function<Vector(const Vector& x, const Vector& xdot, const Vector& v)>;

TransportResult integrate_along(const Curve& c, const Vector& v0, const FiberRhs& rhs,
                                const TransportOptions& opt, const Chart* chart,
                                TransportMode mode) {
  if (!(opt.dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be positive");
  if (v0.size() != c.dim()) throw Error(ErrorKind::InvalidArgument, "vector/curve dimension mismatch");
  TransportResult out;
  out.mode = mode;
  out.dt = opt.dt;
  Vector v = v0;
  const auto check_inside = [&](double t, const Vector& x) {
    if (chart != nullptr && !chart->contains(x)) {
      throw Error(ErrorKind::CurveLeftDomain, "curve leaves the chart at t = " + std::to_string(t));
    }
  };
  if (opt.record_trajectory) out.trajectory.push_back({0.0, c.position(0.0), v});
  check_inside(0.0, c.position(0.0));

  const auto pieces = c.pieces();
  for (std::size_t p = 0; p < pieces.size(); ++p) {
    const auto [t0, t1] = pieces[p];
    const int steps = std::max(1, static_cast<int>(std::ceil((t1 - t0) / opt.dt - 1e-9)));
    const double h = (t1 - t0) / steps;
    const StateMap f = [&](double t, const Vector& state) {
      return rhs(c.position(t), c.velocity_on_piece(t, p), state);
    };
    for (int s = 0; s < steps; ++s) {
      const double t = t0 + s * h;
      v = rk4_step(f, v, t, h);
      const double tn = (s + 1 == steps) ? t1 : t + h;
      const Vector x = c.position(tn);
      check_inside(tn, x);
      if (opt.record_trajectory) out.trajectory.push_back({tn, x, v});
    }
    out.steps += steps;
  }
  out.v_end = v;
  return out;
}

Vector riemann_rhs(const MetricField& metric, const Vector& x, const Vector& xdot, const Vector& v) {
  const Tensor3 a = christoffel(metric, x);
  const int n = static_cast<int>(x.size());
  Vector d = Vector::Zero(n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int s = 0; s < n; ++s) d(k) -= a(k, i, s) * xdot(i) * v(s);
    }
  }
  return d;
}

}  // namespace

TransportResult riemann_transport(const MetricField& metric, const Curve& c, const Vector& v0,
                                  const TransportOptions& opt, const Chart* chart) {
  return integrate_along(
      c, v0,
      [&metric](const Vector& x, const Vector& xdot, const Vector& v) {
        return riemann_rhs(metric, x, xdot, v);
      },
      opt, chart, TransportMode::Riemann);
}

TransportResult riemann_transport(const NavigationData& nav, const Curve& c, const Vector& v0,
                                  const TransportOptions& opt) {
  return riemann_transport(nav.metric(), c, v0, opt, &nav.chart());
}

TransportResult natural_transport(const NavigationData& nav, const Curve& c, const Vector& v0,
                                  NaturalMethod method, const TransportOptions& opt) {
  if (method == NaturalMethod::Ode) {
    return integrate_along(
        c, v0,
        [&nav](const Vector& x, const Vector& xdot, const Vector& v) -> Vector {
          return -gamma_matrix(nav.frame(x), v) * xdot;
        },
        opt, &nav.chart(), TransportMode::NaturalOde);
  }

  const Vector p = c.position(0.0);
  const PointFrame fp = nav.frame(p);
  const double F0 = randers_norm(fp, v0);
  if (F0 == 0.0) {
    // Zero vector: transport the zero vector along the curve.
    TransportResult zero = riemann_transport(nav, c, Vector::Zero(v0.size()), opt);
    zero.mode = TransportMode::NaturalDefinitional;
    return zero;
  }
  const Vector shifted = v0 / F0 - fp.wind;
  TransportResult r = riemann_transport(nav, c, shifted, opt);
  r.mode = TransportMode::NaturalDefinitional;
  const Vector wq = nav.wind().value(c.position(1.0));
  r.v_end = F0 * (r.v_end + wq);
  for (auto& s : r.trajectory) s.v = F0 * (s.v + nav.wind().value(s.x));
  return r;
}

TransportResult corrected_transport(const NormEvaluator& norm, const LinearTransporter& base,
                                    const Curve& c, const Vector& v0) {
  if (v0.isZero(0.0)) throw Error(ErrorKind::ZeroVector, "corrected transport needs v0 != 0");
  const Vector moved = base(c, v0);
  const double after = norm(c.position(1.0), moved);
  if (!(after > 0.0)) throw Error(ErrorKind::DegenerateNorm, "F(P0(v0)) <= 0");
  TransportResult r;
  r.mode = TransportMode::Corrected;
  r.v_end = (norm(c.position(0.0), v0) / after) * moved;
  return r;
}

NormEvaluator randers_norm_evaluator(const NavigationData& nav) {
  return [&nav](const Vector& x, const Vector& v) { return randers_norm(nav, {x, v}); };
}

LinearTransporter riemann_transporter(const NavigationData& nav, const TransportOptions& opt) {
  return [&nav, opt](const Curve& c, const Vector& v0) {
    return riemann_transport(nav, c, v0, opt).v_end;
  };
}

}  // namespace navgeo
