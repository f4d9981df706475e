#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "navgeo/sprays.hpp"
#include "navgeo/transport.hpp"

namespace navgeo {

enum class HolonomyMode { Riemann, Natural };
std::string to_string(HolonomyMode mode);

struct ProbePair {
  Vector in;
  Vector out;
  double norm_in = 0.0;   // F for natural mode, |.|_h for Riemann mode
  double norm_out = 0.0;
};

// Holonomy of one loop, stored extensionally as probe images.
struct HolonomyElement {
  Vector base;
  HolonomyMode mode = HolonomyMode::Natural;
  Curve loop;
  std::vector<ProbePair> probes;
};

inline constexpr int kDefaultProbeCount = 24;

struct HolonomyOptions {
  TransportOptions transport;
  // Natural mode only: the Gamma ODE keeps the holonomy independent of the
  // correspondence formula it is compared against.
  NaturalMethod method = NaturalMethod::Ode;
};

// Throws NotClosed when |c(0) - c(1)| >= 1e-12.
HolonomyElement loop_holonomy(const NavigationData& nav, const Curve& loop,
                              std::span<const Vector> probes, HolonomyMode mode,
                              const HolonomyOptions& opt = {});

// F-unit probes u + W_p over `count` h-unit directions u.
std::vector<Vector> default_probes(const PointFrame& frame, int count = kDefaultProbeCount);

// Riemannian holonomy as a matrix: columns are the transported basis vectors.
Matrix riemann_holonomy_matrix(const NavigationData& nav, const Curve& loop,
                               const TransportOptions& opt = {});

// phi(V) = phi_R(V) - F(V) (phi_R(W_p) - W_p). Throws DegenerateWind when
// F(W_p) >= 1.
Vector correspondence(const Matrix& phi_riemann, const PointFrame& base, const Vector& V);
// phi_R(V) = phi(V) + F(V) (phi(W_p) - W_p) / (1 - F(W_p)), given phi(V) and phi(W_p).
Vector correspondence_inverse(const Vector& phi_V, const Vector& phi_W, const PointFrame& base,
                              const Vector& V);

// Which horizontal fields generate the distribution. The natural connection
// preserves F, so its distribution never contains the direction that changes
// F and for flat h it is integrable. The rank that decides metrizability of
// the natural spray is the one of the spray's own connection dG/dy.
enum class RankConnection { Spray, Natural };
std::string to_string(RankConnection c);
RankConnection rank_connection_from_string(const std::string& name);

struct RankReport {
  TangentSample at;
  std::vector<Vector> generated;  // 2n-vectors: horizontal fields, then brackets by depth
  int rank = 0;
  int depth = 0;
  double tolerance = 0.0;
  RankConnection connection = RankConnection::Spray;
  std::vector<int> rank_by_depth;
};

inline constexpr double kBracketStep = 1e-4;

struct RankOptions {
  double step = kBracketStep;
  double tolerance = kDefaultRankTolerance;
  RankConnection connection = RankConnection::Spray;
};

// Fields on TM as maps from (x, y) in R^{2n} to R^{2n}.
using TmField = std::function<Vector(const Vector& z)>;

// delta_i = d/dx^i - N^j_i d/dy^j with N the chosen connection.
TmField horizontal_field(const NavigationData& nav, int i,
                         RankConnection connection = RankConnection::Spray);
// [X, Y](z) = DY(z) X(z) - DX(z) Y(z), directional derivatives by central
// differences of the given step.
TmField lie_bracket(TmField X, TmField Y, double step = kBracketStep);

// Span of delta_i and their iterated brackets [delta_i, B] up to `depth`
// fields per bracket, evaluated at (x, y). Throws ZeroVector.
RankReport holonomy_distribution_rank(const NavigationData& nav, const TangentSample& s, int depth,
                                      const RankOptions& opt = {});

}  // namespace navgeo
