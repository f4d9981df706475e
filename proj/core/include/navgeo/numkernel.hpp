#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "navgeo/error.hpp"

namespace navgeo {

inline constexpr int kMinDim = 1;
inline constexpr int kMaxDim = 4;

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// First-order dual number a + eps*a' with eps^2 = 0. Carries one directional
// derivative through arithmetic and the elementary functions.
struct Dual {
  double value = 0.0;
  double deriv = 0.0;

  constexpr Dual() = default;
  constexpr Dual(double v) : value(v) {}  // NOLINT(google-explicit-constructor)
  constexpr Dual(double v, double d) : value(v), deriv(d) {}

  static constexpr Dual variable(double v) { return {v, 1.0}; }

  Dual& operator+=(const Dual& o) { value += o.value; deriv += o.deriv; return *this; }
  Dual& operator-=(const Dual& o) { value -= o.value; deriv -= o.deriv; return *this; }
  Dual& operator*=(const Dual& o) {
    deriv = deriv * o.value + value * o.deriv;
    value *= o.value;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    deriv = (deriv * o.value - value * o.deriv) / (o.value * o.value);
    value /= o.value;
    return *this;
  }
};

inline Dual operator+(Dual a, const Dual& b) { return a += b; }
inline Dual operator-(Dual a, const Dual& b) { return a -= b; }
inline Dual operator*(Dual a, const Dual& b) { return a *= b; }
inline Dual operator/(Dual a, const Dual& b) { return a /= b; }
inline Dual operator-(const Dual& a) { return {-a.value, -a.deriv}; }
inline bool operator<(const Dual& a, const Dual& b) { return a.value < b.value; }
inline bool operator>(const Dual& a, const Dual& b) { return a.value > b.value; }

inline Dual sin(const Dual& a) { return {std::sin(a.value), std::cos(a.value) * a.deriv}; }
inline Dual cos(const Dual& a) { return {std::cos(a.value), -std::sin(a.value) * a.deriv}; }
inline Dual exp(const Dual& a) {
  const double e = std::exp(a.value);
  return {e, e * a.deriv};
}
inline Dual log(const Dual& a) { return {std::log(a.value), a.deriv / a.value}; }
inline Dual sqrt(const Dual& a) {
  const double s = std::sqrt(a.value);
  return {s, a.deriv / (2.0 * s)};
}
inline Dual tanh(const Dual& a) {
  const double t = std::tanh(a.value);
  return {t, (1.0 - t * t) * a.deriv};
}
// Constant real exponent.
inline Dual pow(const Dual& a, double p) {
  if (p == 0.0) return {1.0, 0.0};
  return {std::pow(a.value, p), p * std::pow(a.value, p - 1.0) * a.deriv};
}
// Variable exponent; requires a > 0.
inline Dual pow(const Dual& a, const Dual& b) {
  const double v = std::pow(a.value, b.value);
  return {v, v * (b.deriv * std::log(a.value) + b.value * a.deriv / a.value)};
}

inline double value_of(double x) { return x; }
inline double value_of(const Dual& x) { return x.value; }

// Dense symmetric matrix, 1 <= n <= kMaxDim.
class SymMatrix {
 public:
  SymMatrix() = default;
  // Throws InvalidArgument if `m` is not square, out of the supported size
  // range, or asymmetric beyond 1e-12 relative.
  explicit SymMatrix(Matrix m);
  static SymMatrix identity(int n) { return SymMatrix(Matrix::Identity(n, n)); }

  int dim() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }
  const Matrix& matrix() const { return m_; }

  double quadratic(const Vector& u, const Vector& v) const { return u.dot(m_ * v); }
  Vector operator*(const Vector& v) const { return m_ * v; }
  double min_eigenvalue() const;

 private:
  Matrix m_;
};

// Cholesky factorization m = L L^T. Throws NotPositiveDefinite on a
// nonpositive pivot.
class Cholesky {
 public:
  explicit Cholesky(const SymMatrix& m);
  Vector solve(const Vector& rhs) const;
  Matrix inverse() const;

 private:
  Matrix lower_;
};

Vector solve_spd(const SymMatrix& m, const Vector& rhs);

using StateMap = std::function<Vector(double t, const Vector& state)>;

// One classical fourth-order Runge-Kutta step. Throws NonFiniteState if the
// result (or any stage) is not finite.
Vector rk4_step(const StateMap& f, const Vector& state, double t, double dt);

inline constexpr double kDefaultRankTolerance = 1e-7;

// Number of singular values strictly greater than tol * sigma_max of the
// matrix whose columns are `vectors`.
int numeric_rank(std::span<const Vector> vectors, double tol = kDefaultRankTolerance);

// Rank-3 array indexed (k, i, j), used for Christoffel symbols and torsion.
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int n) : n_(n), data_(static_cast<std::size_t>(n * n * n), 0.0) {}

  int dim() const { return n_; }
  double& operator()(int k, int i, int j) { return data_[index(k, i, j)]; }
  double operator()(int k, int i, int j) const { return data_[index(k, i, j)]; }
  double max_abs() const;

 private:
  std::size_t index(int k, int i, int j) const {
    return static_cast<std::size_t>((k * n_ + i) * n_ + j);
  }
  int n_ = 0;
  std::vector<double> data_;
};

bool all_finite(const Vector& v);

// Worker count for grid evaluations: NAVGEO_THREADS if set (>= 1), otherwise
// the hardware concurrency.
int worker_count();

// Runs fn(i) for i in [0, count). Results must be written to per-index slots.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace navgeo
