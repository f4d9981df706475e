#include "navgeo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace navgeo {

namespace {

double halton(std::uint64_t index, std::uint64_t base) {
  double f = 1.0;
  double r = 0.0;
  while (index > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

constexpr std::uint64_t kPrimes[kMaxDim] = {2, 3, 5, 7};

}  // namespace

Chart::Chart(BoxDomain box) : dim_(static_cast<int>(box.lo.size())), domain_(std::move(box)) {
  const auto& b = std::get<BoxDomain>(domain_);
  if (dim_ < kMinDim || dim_ > kMaxDim || b.hi.size() != b.lo.size()) {
    throw Error(ErrorKind::InvalidArgument, "box domain needs matching lo/hi with 1 <= n <= 4");
  }
  for (int i = 0; i < dim_; ++i) {
    if (!(b.lo[static_cast<std::size_t>(i)] < b.hi[static_cast<std::size_t>(i)])) {
      throw Error(ErrorKind::InvalidArgument, "box domain has an empty side");
    }
  }
}

Chart::Chart(BallDomain ball)
    : dim_(static_cast<int>(ball.center.size())), domain_(std::move(ball)) {
  if (dim_ < kMinDim || dim_ > kMaxDim) {
    throw Error(ErrorKind::InvalidArgument, "ball domain needs 1 <= n <= 4");
  }
  if (!(std::get<BallDomain>(domain_).radius > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "ball radius must be positive");
  }
}

bool Chart::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) return false;
  if (const auto* box = std::get_if<BoxDomain>(&domain_)) {
    for (int i = 0; i < dim_; ++i) {
      const auto k = static_cast<std::size_t>(i);
      if (!(x[k] > box->lo[k] && x[k] < box->hi[k])) return false;
    }
    return true;
  }
  const auto& ball = std::get<BallDomain>(domain_);
  double r2 = 0.0;
  for (int i = 0; i < dim_; ++i) {
    const double d = x[static_cast<std::size_t>(i)] - ball.center[static_cast<std::size_t>(i)];
    r2 += d * d;
  }
  return r2 < ball.radius * ball.radius;
}

std::vector<Vector> Chart::sample(std::size_t count) const {
  std::vector<Vector> out;
  out.reserve(count);
  std::uint64_t index = 1;
  while (out.size() < count) {
    Vector u(dim_);
    for (int i = 0; i < dim_; ++i) u(i) = halton(index, kPrimes[i]);
    ++index;
    Vector x(dim_);
    if (const auto* box = std::get_if<BoxDomain>(&domain_)) {
      for (int i = 0; i < dim_; ++i) {
        const auto k = static_cast<std::size_t>(i);
        x(i) = box->lo[k] + u(i) * (box->hi[k] - box->lo[k]);
      }
    } else {
      const auto& ball = std::get<BallDomain>(domain_);
      const Vector c = 2.0 * u.array() - 1.0;
      if (c.squaredNorm() >= 1.0) continue;
      for (int i = 0; i < dim_; ++i) {
        x(i) = ball.center[static_cast<std::size_t>(i)] + ball.radius * c(i);
      }
    }
    if (contains(x)) out.push_back(std::move(x));
  }
  return out;
}

MetricField::MetricField(int dim, std::vector<Expression> upper)
    : dim_(dim), upper_(std::move(upper)) {
  if (dim_ < kMinDim || dim_ > kMaxDim) {
    throw Error(ErrorKind::InvalidArgument, "metric dimension must be 1..4");
  }
  if (static_cast<int>(upper_.size()) != dim_ * (dim_ + 1) / 2) {
    throw Error(ErrorKind::InvalidArgument, "metric needs n(n+1)/2 upper-triangle entries");
  }
}

MetricField MetricField::euclidean(int dim) {
  std::vector<Expression> upper;
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) upper.push_back(Expression::parse(i == j ? "1" : "0", dim));
  }
  return MetricField(dim, std::move(upper));
}

int MetricField::index(int i, int j) const {
  if (i > j) std::swap(i, j);
  // Row i starts after rows 0..i-1, which hold n, n-1, ..., n-i+1 entries.
  return i * dim_ - i * (i - 1) / 2 + (j - i);
}

const Expression& MetricField::entry(int i, int j) const {
  return upper_[static_cast<std::size_t>(index(i, j))];
}

SymMatrix MetricField::value(const Vector& x) const {
  Matrix m(dim_, dim_);
  const std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
  for (int i = 0; i < dim_; ++i) {
    for (int j = i; j < dim_; ++j) m(i, j) = m(j, i) = entry(i, j).eval(xs);
  }
  return SymMatrix(std::move(m));
}

std::vector<Matrix> MetricField::gradient(const Vector& x) const {
  std::vector<Matrix> out(static_cast<std::size_t>(dim_), Matrix(dim_, dim_));
  const std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
  std::vector<double> dir(static_cast<std::size_t>(dim_), 0.0);
  for (int k = 0; k < dim_; ++k) {
    std::fill(dir.begin(), dir.end(), 0.0);
    dir[static_cast<std::size_t>(k)] = 1.0;
    Matrix& d = out[static_cast<std::size_t>(k)];
    for (int i = 0; i < dim_; ++i) {
      for (int j = i; j < dim_; ++j) d(i, j) = d(j, i) = entry(i, j).eval_dual(xs, dir).second;
    }
  }
  return out;
}

std::vector<Dual> MetricField::eval_dual(std::span<const Dual> x) const {
  std::vector<Dual> out(static_cast<std::size_t>(dim_ * dim_));
  for (int i = 0; i < dim_; ++i) {
    for (int j = i; j < dim_; ++j) {
      const Dual v = entry(i, j).eval(x);
      out[static_cast<std::size_t>(i * dim_ + j)] = v;
      out[static_cast<std::size_t>(j * dim_ + i)] = v;
    }
  }
  return out;
}

WindField::WindField(std::vector<Expression> components) : components_(std::move(components)) {
  if (components_.empty() || components_.size() > static_cast<std::size_t>(kMaxDim)) {
    throw Error(ErrorKind::InvalidArgument, "wind needs 1..4 components");
  }
}

WindField WindField::zero(int dim) {
  return WindField(std::vector<Expression>(static_cast<std::size_t>(dim), Expression::parse("0", dim)));
}

Vector WindField::value(const Vector& x) const {
  Vector w(dim());
  const std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
  for (int k = 0; k < dim(); ++k) w(k) = components_[static_cast<std::size_t>(k)].eval(xs);
  return w;
}

Matrix WindField::jacobian(const Vector& x) const {
  const int n = dim();
  Matrix j(n, n);
  const std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
  std::vector<double> dir(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    std::fill(dir.begin(), dir.end(), 0.0);
    dir[static_cast<std::size_t>(i)] = 1.0;
    for (int k = 0; k < n; ++k) {
      j(k, i) = components_[static_cast<std::size_t>(k)].eval_dual(xs, dir).second;
    }
  }
  return j;
}

std::vector<Dual> WindField::eval_dual(std::span<const Dual> x) const {
  std::vector<Dual> out;
  out.reserve(components_.size());
  for (const auto& c : components_) out.push_back(c.eval(x));
  return out;
}

namespace {

Tensor3 christoffel_from(const Matrix& h_inv, const std::vector<Matrix>& dh) {
  const int n = static_cast<int>(h_inv.rows());
  Tensor3 a(n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) {
          s += h_inv(k, l) * (dh[static_cast<std::size_t>(i)](j, l) +
                              dh[static_cast<std::size_t>(j)](i, l) -
                              dh[static_cast<std::size_t>(l)](i, j));
        }
        a(k, i, j) = a(k, j, i) = 0.5 * s;
      }
    }
  }
  return a;
}

}  // namespace

Tensor3 christoffel(const MetricField& metric, const Vector& x) {
  const SymMatrix h = metric.value(x);
  return christoffel_from(Cholesky(h).inverse(), metric.gradient(x));
}

NavigationData::NavigationData(Chart chart, MetricField metric, WindField wind)
    : chart_(std::move(chart)), metric_(std::move(metric)), wind_(std::move(wind)) {
  if (metric_.dim() != chart_.dim() || wind_.dim() != chart_.dim()) {
    throw Error(ErrorKind::InvalidArgument, "chart, metric and wind dimensions differ");
  }
}

double NavigationData::wind_norm(const Vector& x) const {
  const Vector w = wind_.value(x);
  return std::sqrt(metric_.value(x).quadratic(w, w));
}

double NavigationData::lambda(const Vector& x) const {
  const double n = wind_norm(x);
  return 1.0 - n * n;
}

PointFrame NavigationData::frame(const Vector& x) const {
  PointFrame f;
  f.x = x;
  f.h = metric_.value(x);
  f.h_inv = Cholesky(f.h).inverse();
  f.christoffel = christoffel_from(f.h_inv, metric_.gradient(x));
  f.wind = wind_.value(x);
  f.wind_jacobian = wind_.jacobian(x);
  const int n = dim();
  f.nabla_wind = f.wind_jacobian;
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int s = 0; s < n; ++s) f.nabla_wind(k, i) += f.christoffel(k, i, s) * f.wind(s);
    }
  }
  f.lambda = 1.0 - f.h.quadratic(f.wind, f.wind);
  return f;
}

double randers_norm(const PointFrame& frame, const Vector& y) {
  return randers_norm<double>(frame, std::span<const double>(y.data(), static_cast<std::size_t>(y.size())));
}

Vector randers_gradient(const PointFrame& frame, const Vector& y) {
  if (y.isZero(0.0)) throw Error(ErrorKind::GradientAtZero, "F_y is undefined at y = 0");
  const int n = frame.dim();
  Vector g(n);
  std::vector<Dual> yd(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) yd[static_cast<std::size_t>(j)] = Dual(y(j), i == j ? 1.0 : 0.0);
    g(i) = randers_norm<Dual>(frame, yd).deriv;
  }
  return g;
}

double randers_norm(const NavigationData& nav, const TangentSample& s) {
  return randers_norm(nav.frame(s.x), s.y);
}

Vector randers_gradient(const NavigationData& nav, const TangentSample& s) {
  return randers_gradient(nav.frame(s.x), s.y);
}

AlphaBeta randers_alpha_beta(const NavigationData& nav, const Vector& x) {
  const SymMatrix h = nav.metric().value(x);
  const Vector w = nav.wind().value(x);
  const double lambda = 1.0 - h.quadratic(w, w);
  const Vector beta = -(h.matrix() * w) / lambda;
  Matrix alpha = h.matrix() / lambda + beta * beta.transpose();
  alpha = 0.5 * (alpha + alpha.transpose());
  return {SymMatrix(std::move(alpha)), beta};
}

double alpha_beta_norm(const AlphaBeta& ab, const Vector& y) {
  return std::sqrt(ab.alpha.quadratic(y, y)) + ab.beta.dot(y);
}

ValidationReport validate(const NavigationData& nav, std::size_t samples, double margin) {
  ValidationReport r;
  r.samples = samples;
  r.min_metric_eigenvalue = std::numeric_limits<double>::infinity();
  const auto points = nav.chart().sample(samples);
  for (const Vector& x : points) {
    try {
      const SymMatrix h = nav.metric().value(x);
      const double ev = h.min_eigenvalue();
      r.min_metric_eigenvalue = std::min(r.min_metric_eigenvalue, ev);
      if (!(ev > 0.0)) {
        r.failure = "metric is not positive definite";
        r.witness = x;
        break;
      }
      const Vector w = nav.wind().value(x);
      const double norm = std::sqrt(h.quadratic(w, w));
      r.max_wind_norm = std::max(r.max_wind_norm, norm);
      r.min_lambda = std::min(r.min_lambda, 1.0 - norm * norm);
      if (!(norm < 1.0 - margin)) {
        r.failure = "wind norm " + std::to_string(norm) + " >= 1 - margin";
        r.witness = x;
        break;
      }
    } catch (const Error& e) {
      r.failure = std::string("evaluation failed: ") + e.what();
      r.witness = x;
      break;
    }
  }
  r.passed = r.failure.empty();
  return r;
}

}  // namespace navgeo
