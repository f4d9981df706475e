#include "navgeo/numkernel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace navgeo {

SymMatrix::SymMatrix(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() < kMinDim || m_.rows() > kMaxDim) {
    throw Error(ErrorKind::InvalidArgument, "symmetric matrix must be square with 1 <= n <= 4");
  }
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  if ((m_ - m_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error(ErrorKind::InvalidArgument, "matrix is not symmetric");
  }
}

double SymMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m_, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

Cholesky::Cholesky(const SymMatrix& m) : lower_(Matrix::Zero(m.dim(), m.dim())) {
  const int n = m.dim();
  for (int j = 0; j < n; ++j) {
    double pivot = m(j, j);
    for (int k = 0; k < j; ++k) pivot -= lower_(j, k) * lower_(j, k);
    if (!(pivot > 0.0)) {
      throw Error(ErrorKind::NotPositiveDefinite,
                  "nonpositive pivot at column " + std::to_string(j));
    }
    lower_(j, j) = std::sqrt(pivot);
    for (int i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (int k = 0; k < j; ++k) s -= lower_(i, k) * lower_(j, k);
      lower_(i, j) = s / lower_(j, j);
    }
  }
}

Vector Cholesky::solve(const Vector& rhs) const {
  const int n = static_cast<int>(lower_.rows());
  if (rhs.size() != n) throw Error(ErrorKind::InvalidArgument, "rhs dimension mismatch");
  Vector z(n);
  for (int i = 0; i < n; ++i) {
    double s = rhs(i);
    for (int k = 0; k < i; ++k) s -= lower_(i, k) * z(k);
    z(i) = s / lower_(i, i);
  }
  Vector v(n);
  for (int i = n - 1; i >= 0; --i) {
    double s = z(i);
    for (int k = i + 1; k < n; ++k) s -= lower_(k, i) * v(k);
    v(i) = s / lower_(i, i);
  }
  return v;
}

Matrix Cholesky::inverse() const {
  const int n = static_cast<int>(lower_.rows());
  Matrix inv(n, n);
  for (int j = 0; j < n; ++j) inv.col(j) = solve(Vector::Unit(n, j));
  // Symmetrize away rounding.
  return 0.5 * (inv + inv.transpose());
}

Vector solve_spd(const SymMatrix& m, const Vector& rhs) { return Cholesky(m).solve(rhs); }

bool all_finite(const Vector& v) {
  return std::all_of(v.data(), v.data() + v.size(), [](double x) { return std::isfinite(x); });
}

Vector rk4_step(const StateMap& f, const Vector& state, double t, double dt) {
  const auto check = [](const Vector& v) {
    if (!all_finite(v)) throw Error(ErrorKind::NonFiniteState, "non-finite value in RK4 stage");
    return v;
  };
  const Vector k1 = check(f(t, state));
  const Vector k2 = check(f(t + 0.5 * dt, state + 0.5 * dt * k1));
  const Vector k3 = check(f(t + 0.5 * dt, state + 0.5 * dt * k2));
  const Vector k4 = check(f(t + dt, state + dt * k3));
  return check(state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

int numeric_rank(std::span<const Vector> vectors, double tol) {
  if (vectors.empty()) return 0;
  const auto rows = vectors.front().size();
  Matrix m(rows, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (vectors[j].size() != rows) {
      throw Error(ErrorKind::InvalidArgument, "numeric_rank: vectors differ in dimension");
    }
    m.col(static_cast<Eigen::Index>(j)) = vectors[j];
  }
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cut = tol * sv(0);
  return static_cast<int>(std::count_if(sv.data(), sv.data() + sv.size(),
                                        [cut](double s) { return s > cut; }));
}

double Tensor3::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

int worker_count() {
  if (const char* env = std::getenv("NAVGEO_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(worker_count()), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace navgeo
