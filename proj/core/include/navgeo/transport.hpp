#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "navgeo/connection.hpp"

namespace navgeo {

// Parametrized path c: [0, 1] -> chart. Analytic curves are expression lists
// in `t` with velocity by dual evaluation; polylines are piecewise linear with
// uniform parameter spacing between vertices.
class Curve {
 public:
  static Curve analytic(std::vector<Expression> components);
  static Curve analytic(const std::vector<std::string>& components);
  static Curve polyline(std::vector<Vector> points);

  int dim() const;
  bool is_analytic() const { return polyline_.empty(); }
  bool is_reversed() const { return reversed_; }
  const std::vector<Expression>& components() const { return components_; }
  const std::vector<Vector>& points() const { return polyline_; }

  Vector position(double t) const;
  Vector velocity(double t) const;

  // Smooth pieces [t0, t1] covering [0, 1]; velocity is evaluated per piece
  // so RK4 stages never straddle a polyline vertex.
  std::vector<std::pair<double, double>> pieces() const;
  Vector velocity_on_piece(double t, std::size_t piece) const;

  // c(1 - t).
  Curve reversed() const;
  bool is_closed(double tol = 1e-12) const;

  // Checks that `samples` + 1 evenly spaced points lie strictly inside.
  bool inside(const Chart& chart, int samples = 200) const;

  friend bool operator==(const Curve& a, const Curve& b);

 private:
  Vector raw_position(double s) const;
  Vector raw_velocity(double s, std::size_t segment) const;

  std::vector<Expression> components_;
  std::vector<Vector> polyline_;
  bool reversed_ = false;
};

enum class TransportMode { Riemann, NaturalDefinitional, NaturalOde, Corrected };
std::string to_string(TransportMode mode);

struct TrajectorySample {
  double t = 0.0;
  Vector x;
  Vector v;
};

struct TransportResult {
  TransportMode mode = TransportMode::Riemann;
  Vector v_end;
  std::vector<TrajectorySample> trajectory;  // filled when requested
  int steps = 0;
  double dt = 0.0;
};

inline constexpr double kDefaultDt = 1e-3;

struct TransportOptions {
  double dt = kDefaultDt;
  bool record_trajectory = false;
};

// dv^k/dt + A^k_is c'^i v^s = 0. `chart`, when given, is checked at every
// step (CurveLeftDomain).
TransportResult riemann_transport(const MetricField& metric, const Curve& c, const Vector& v0,
                                  const TransportOptions& opt = {}, const Chart* chart = nullptr);
TransportResult riemann_transport(const NavigationData& nav, const Curve& c, const Vector& v0,
                                  const TransportOptions& opt = {});

enum class NaturalMethod { Definitional, Ode };

// Definitional: P(V) = F(V) * (P_R(V/F(V) - W_p) + W_q).
// Ode: dv^k/dt + Gamma^k_i(c, v) c'^i = 0.
// The zero vector maps to the zero vector.
TransportResult natural_transport(const NavigationData& nav, const Curve& c, const Vector& v0,
                                  NaturalMethod method, const TransportOptions& opt = {});

using NormEvaluator = std::function<double(const Vector& x, const Vector& v)>;
using LinearTransporter = std::function<Vector(const Curve& c, const Vector& v0)>;

// P^c(V) = F(V) / F(P0(V)) * P0(V). Throws ZeroVector for v0 = 0 and
// DegenerateNorm when F(P0(v0)) <= 0.
TransportResult corrected_transport(const NormEvaluator& norm, const LinearTransporter& base,
                                    const Curve& c, const Vector& v0);

NormEvaluator randers_norm_evaluator(const NavigationData& nav);
LinearTransporter riemann_transporter(const NavigationData& nav, const TransportOptions& opt = {});

}  // namespace navgeo
