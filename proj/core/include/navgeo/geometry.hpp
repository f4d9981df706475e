#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "navgeo/expr.hpp"
#include "navgeo/numkernel.hpp"

namespace navgeo {

struct BoxDomain {
  std::vector<double> lo;
  std::vector<double> hi;

  bool operator==(const BoxDomain&) const = default;
};

struct BallDomain {
  std::vector<double> center;
  double radius = 1.0;

  bool operator==(const BallDomain&) const = default;
};

// A single coordinate chart. Evaluations are only meaningful strictly inside.
class Chart {
 public:
  explicit Chart(BoxDomain box);
  explicit Chart(BallDomain ball);

  int dim() const { return dim_; }
  const std::variant<BoxDomain, BallDomain>& domain() const { return domain_; }
  bool is_ball() const { return std::holds_alternative<BallDomain>(domain_); }

  bool contains(std::span<const double> x) const;
  bool contains(const Vector& x) const { return contains(std::span(x.data(), x.size())); }

  // Deterministic quasi-random interior points (Halton sequence; rejection
  // sampling for balls).
  std::vector<Vector> sample(std::size_t count) const;

  bool operator==(const Chart&) const = default;

 private:
  int dim_;
  std::variant<BoxDomain, BallDomain> domain_;
};

// Riemannian metric h_ij(x); only the upper triangle is stored, so symmetry
// holds by construction.
class MetricField {
 public:
  // `upper` lists row i's entries h_ii, h_i(i+1), ..., h_in, rows in order.
  MetricField(int dim, std::vector<Expression> upper);
  static MetricField euclidean(int dim);

  int dim() const { return dim_; }
  const Expression& entry(int i, int j) const;

  SymMatrix value(const Vector& x) const;
  // d h / d x^k for k = 0..n-1.
  std::vector<Matrix> gradient(const Vector& x) const;
  // Row-major n*n values at a point of arbitrary scalar type.
  std::vector<Dual> eval_dual(std::span<const Dual> x) const;

  const std::vector<Expression>& upper() const { return upper_; }

  bool operator==(const MetricField&) const = default;

 private:
  int index(int i, int j) const;
  int dim_;
  std::vector<Expression> upper_;
};

class WindField {
 public:
  explicit WindField(std::vector<Expression> components);
  static WindField zero(int dim);

  int dim() const { return static_cast<int>(components_.size()); }
  const std::vector<Expression>& components() const { return components_; }

  Vector value(const Vector& x) const;
  // J(k, i) = dW^k / dx^i.
  Matrix jacobian(const Vector& x) const;
  std::vector<Dual> eval_dual(std::span<const Dual> x) const;

  bool operator==(const WindField&) const = default;

 private:
  std::vector<Expression> components_;
};

// Levi-Civita connection coefficients A(k, i, j) = A^k_ij of h at x.
Tensor3 christoffel(const MetricField& metric, const Vector& x);

// Everything pointwise that the connection/spray formulas consume, evaluated
// once per base point.
struct PointFrame {
  Vector x;
  SymMatrix h;
  Matrix h_inv;
  Tensor3 christoffel;
  Vector wind;
  Matrix wind_jacobian;  // (k, i) = dW^k/dx^i
  Matrix nabla_wind;     // (k, i) = (nabla^R_{d_i} W)^k = dW^k/dx^i + A^k_is W^s
  double lambda = 1.0;   // 1 - |W|_h^2

  int dim() const { return static_cast<int>(x.size()); }
};

class NavigationData {
 public:
  NavigationData(Chart chart, MetricField metric, WindField wind);

  int dim() const { return chart_.dim(); }
  const Chart& chart() const { return chart_; }
  const MetricField& metric() const { return metric_; }
  const WindField& wind() const { return wind_; }

  double wind_norm(const Vector& x) const;
  double lambda(const Vector& x) const;
  PointFrame frame(const Vector& x) const;

  bool operator==(const NavigationData&) const = default;

 private:
  Chart chart_;
  MetricField metric_;
  WindField wind_;
};

struct TangentSample {
  Vector x;
  Vector y;
};

// Randers norm from navigation data, written for any scalar type so the same
// code yields derivatives in x or y through Dual.
//   F = (sqrt(<y,W>^2 + lambda |y|^2) - <y,W>) / lambda,  lambda = 1 - |W|^2
// h is row-major n*n. F(x, 0) = 0.
template <class T>
T randers_value(std::span<const T> h, std::span<const T> wind, std::span<const T> y) {
  using std::sqrt;
  const std::size_t n = y.size();
  bool zero = true;
  for (const T& v : y) zero = zero && value_of(v) == 0.0;
  if (zero) return T(0.0);
  T yw(0.0), yy(0.0), ww(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const T hij = h[i * n + j];
      yw += y[i] * hij * wind[j];
      yy += y[i] * hij * y[j];
      ww += wind[i] * hij * wind[j];
    }
  }
  const T lambda = T(1.0) - ww;
  const T root = sqrt(yw * yw + lambda * yy);
  // Same quantity; the second form avoids cancellation when <y,W> > 0.
  if (value_of(yw) <= 0.0) return (root - yw) / lambda;
  return yy / (root + yw);
}

double randers_norm(const PointFrame& frame, const Vector& y);
template <class T>
T randers_norm(const PointFrame& frame, std::span<const T> y) {
  const int n = frame.dim();
  std::vector<T> h(static_cast<std::size_t>(n * n)), w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    w[static_cast<std::size_t>(i)] = T(frame.wind(i));
    for (int j = 0; j < n; ++j) h[static_cast<std::size_t>(i * n + j)] = T(frame.h(i, j));
  }
  return randers_value<T>(h, w, y);
}
// F_{y^i}. Throws GradientAtZero for y = 0.
Vector randers_gradient(const PointFrame& frame, const Vector& y);

double randers_norm(const NavigationData& nav, const TangentSample& s);
Vector randers_gradient(const NavigationData& nav, const TangentSample& s);

struct AlphaBeta {
  SymMatrix alpha;
  Vector beta;
};

// F = sqrt(alpha_ij y^i y^j) + beta_i y^i with beta_i = -h_ik W^k / lambda and
// alpha_ij = h_ij / lambda + beta_i beta_j.
AlphaBeta randers_alpha_beta(const NavigationData& nav, const Vector& x);
double alpha_beta_norm(const AlphaBeta& ab, const Vector& y);

struct ValidationReport {
  bool passed = false;
  std::size_t samples = 0;
  double min_metric_eigenvalue = 0.0;
  double max_wind_norm = 0.0;
  double min_lambda = 1.0;
  std::string failure;            // empty when passed
  std::optional<Vector> witness;  // sample point of the first failure
};

inline constexpr std::size_t kDefaultValidationSamples = 10000;
inline constexpr double kWindNormMargin = 1e-6;

ValidationReport validate(const NavigationData& nav,
                          std::size_t samples = kDefaultValidationSamples,
                          double margin = kWindNormMargin);

}  // namespace navgeo
