#include "navgeo/holonomy.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Cholesky>

namespace navgeo {

std::string to_string(HolonomyMode mode) {
  return mode == HolonomyMode::Riemann ? "riemann" : "natural";
}

HolonomyElement loop_holonomy(const NavigationData& nav, const Curve& loop,
                              std::span<const Vector> probes, HolonomyMode mode,
                              const HolonomyOptions& opt) {
  if (!loop.is_closed(1e-12)) throw Error(ErrorKind::NotClosed, "loop does not return to its base point");
  HolonomyElement h;
  h.base = loop.position(0.0);
  h.mode = mode;
  h.loop = loop;
  const PointFrame f = nav.frame(h.base);
  const auto norm = [&](const Vector& v) {
    return mode == HolonomyMode::Natural ? randers_norm(f, v) : std::sqrt(f.h.quadratic(v, v));
  };
  h.probes.resize(probes.size());
  parallel_for(probes.size(), [&](std::size_t i) {
    ProbePair& p = h.probes[i];
    p.in = probes[i];
    p.out = mode == HolonomyMode::Natural
                ? natural_transport(nav, loop, p.in, opt.method, opt.transport).v_end
                : riemann_transport(nav, loop, p.in, opt.transport).v_end;
    p.norm_in = norm(p.in);
    p.norm_out = norm(p.out);
  });
  return h;
}

std::vector<Vector> default_probes(const PointFrame& frame, int count) {
  const int n = frame.dim();
  // h-orthonormal frame from the Cholesky factor of h^-1.
  const Eigen::LLT<Matrix> llt(frame.h_inv);
  const Matrix basis = llt.matrixL();
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) {
    Vector e(n);
    if (n == 1) {
      e(0) = j % 2 == 0 ? 1.0 : -1.0;
    } else {
      const double a = 2.0 * std::numbers::pi * j / count;
      e.setZero();
      e(0) = std::cos(a);
      e(1) = std::sin(a);
      for (int k = 2; k < n; ++k) e(k) = 0.3 * std::sin((k + 1.0) * a + k);
      e.normalize();
    }
    out.push_back(basis * e + frame.wind);
  }
  return out;
}

Matrix riemann_holonomy_matrix(const NavigationData& nav, const Curve& loop, const TransportOptions& opt) {
  if (!loop.is_closed(1e-12)) throw Error(ErrorKind::NotClosed, "loop does not return to its base point");
  const int n = nav.dim();
  Matrix m(n, n);
  for (int j = 0; j < n; ++j) m.col(j) = riemann_transport(nav, loop, Vector::Unit(n, j), opt).v_end;
  return m;
}

Vector correspondence(const Matrix& phi_riemann, const PointFrame& base, const Vector& V) {
  const Vector& W = base.wind;
  if (!(randers_norm(base, W) < 1.0)) throw Error(ErrorKind::DegenerateWind, "F(W_p) >= 1");
  return phi_riemann * V - randers_norm(base, V) * (phi_riemann * W - W);
}

Vector correspondence_inverse(const Vector& phi_V, const Vector& phi_W, const PointFrame& base,
                              const Vector& V) {
  const Vector& W = base.wind;
  const double fw = randers_norm(base, W);
  if (!(fw < 1.0)) throw Error(ErrorKind::DegenerateWind, "F(W_p) >= 1");
  return phi_V + randers_norm(base, V) * (phi_W - W) / (1.0 - fw);
}

std::string to_string(RankConnection c) { return c == RankConnection::Spray ? "spray" : "natural"; }

RankConnection rank_connection_from_string(const std::string& name) {
  if (name == "spray") return RankConnection::Spray;
  if (name == "natural") return RankConnection::Natural;
  throw Error(ErrorKind::InvalidArgument, "unknown connection '" + name + "' (expected spray or natural)");
}

TmField horizontal_field(const NavigationData& nav, int i, RankConnection connection) {
  return [&nav, i, connection](const Vector& z) {
    const int n = nav.dim();
    const Vector x = z.head(n);
    const Vector y = z.tail(n);
    Vector out = Vector::Zero(2 * n);
    out(i) = 1.0;
    const PointFrame f = nav.frame(x);
    const Matrix N = connection == RankConnection::Spray ? natural_spray_connection(f, y) : gamma_matrix(f, y);
    out.tail(n) = -N.col(i);
    return out;
  };
}

TmField lie_bracket(TmField X, TmField Y, double step) {
  return [X = std::move(X), Y = std::move(Y), step](const Vector& z) {
    const Vector xz = X(z);
    const Vector yz = Y(z);
    const Vector dy_x = (Y(z + step * xz) - Y(z - step * xz)) / (2.0 * step);
    const Vector dx_y = (X(z + step * yz) - X(z - step * yz)) / (2.0 * step);
    return Vector(dy_x - dx_y);
  };
}

RankReport holonomy_distribution_rank(const NavigationData& nav, const TangentSample& s, int depth,
                                      const RankOptions& opt) {
  if (s.y.isZero(0.0)) throw Error(ErrorKind::ZeroVector, "rank needs y != 0");
  if (depth < 1) throw Error(ErrorKind::InvalidArgument, "depth must be >= 1");
  const int n = nav.dim();
  RankReport r;
  r.at = s;
  r.depth = depth;
  r.tolerance = opt.tolerance;
  r.connection = opt.connection;
  Vector z(2 * n);
  z << s.x, s.y;

  std::vector<TmField> base;
  for (int i = 0; i < n; ++i) base.push_back(horizontal_field(nav, i, opt.connection));
  std::vector<TmField> level = base;
  for (int d = 1; d <= depth; ++d) {
    if (d > 1) {
      std::vector<TmField> next;
      for (const auto& b : base) {
        for (const auto& l : level) next.push_back(lie_bracket(b, l, opt.step));
      }
      level = std::move(next);
    }
    for (const auto& field : level) r.generated.push_back(field(z));
    r.rank_by_depth.push_back(numeric_rank(r.generated, opt.tolerance));
  }
  r.rank = r.rank_by_depth.back();
  return r;
}

}  // namespace navgeo
