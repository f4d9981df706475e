#include <array>
#include <cmath>
#include <random>

#include <Eigen/LU>

#include "doctest.h"
#include "navgeo/scenario.hpp"
#include "navgeo/sprays.hpp"
#include "testing.hpp"

using namespace navgeo;
using testing::make_nav;
using testing::vec;

namespace {

NavigationData curved() {
  return make_nav(testing::disk(0.8), {"1 + 0.3*x1^2", "0.2*sin(x2)", "exp(0.4*x1)"},
                  {"0.3*cos(x1*x2) - 0.1*x2", "0.2*x1 + 0.1"});
}

// Geodesic spray of F from finite differences of F^2 alone:
//   G^i = 1/4 g^il ([F^2]_{x^k y^l} y^k - [F^2]_{x^l}),  g = 1/2 Hess_y F^2.
Vector true_spray(const NavigationData& nav, const Vector& x, const Vector& y) {
  const auto E = [&](const Vector& p, const Vector& v) {
    const double f = randers_norm(nav, {p, v});
    return f * f;
  };
  const int n = static_cast<int>(x.size());
  const double h = 1e-4;
  const auto e = [&](int i) {
    Vector u = Vector::Zero(n);
    u(i) = h;
    return u;
  };
  Matrix g(n, n), mixed(n, n);
  Vector dx(n);
  for (int i = 0; i < n; ++i) {
    dx(i) = (E(x + e(i), y) - E(x - e(i), y)) / (2 * h);
    for (int j = 0; j < n; ++j) {
      g(i, j) = 0.5 * (E(x, y + e(i) + e(j)) - E(x, y + e(i) - e(j)) - E(x, y - e(i) + e(j)) + E(x, y - e(i) - e(j))) /
                (4 * h * h);
      mixed(i, j) = (E(x + e(i), y + e(j)) - E(x + e(i), y - e(j)) - E(x - e(i), y + e(j)) + E(x - e(i), y - e(j))) /
                    (4 * h * h);  // d^2 F^2 / dx^i dy^j
    }
  }
  const Vector rhs = mixed.transpose() * y - dx;
  return 0.25 * g.inverse() * rhs;
}

// The Randers formula assembled with the untransposed S, for contrast.
Vector randers_spray_untransposed(const PointFrame& f, const Vector& y) {
  const RSTensors rs = rs_tensors(f);
  const double F = randers_norm(f, y);
  const Contracted r = contract(rs.R, rs, y);
  const Contracted s = contract(rs.S, rs, y);
  const Vector& W = rs.wind;
  return riemann_spray(f, y) + r.zero * y + 0.5 * r.zero_zero * W -
         0.5 * F * F * (s.upper + r.upper - r.scalar * W) - F * (s.mixed_zero + 0.5 * r.scalar * y + r.zero * W) -
         (r.zero_zero / (2 * F)) * y;
}

Vector random_dir(std::mt19937_64& rng) {
  return vec({testing::uniform(rng, -1, 1), testing::uniform(rng, -1, 1)});
}

}  // namespace

TEST_CASE("spray kinds round-trip through names") {
  for (const auto k : {SprayKind::Riemann, SprayKind::Natural, SprayKind::Randers}) {
    CHECK(spray_kind_from_string(to_string(k)) == k);
  }
  CHECK_THROWS_AS(spray_kind_from_string("berwald"), Error);
}

TEST_CASE("Funk: the natural spray is F y / 2") {
  const Scenario sc = builtin("funk_ball");
  for (const Vector& x : sc.nav.chart().sample(50)) {
    const PointFrame f = sc.nav.frame(x);
    for (const Vector& y : unit_directions(f, 8)) {
      CHECK(randers_norm(f, y) == doctest::Approx(1.0).epsilon(1e-14));
      CHECK((natural_spray(f, y) - 0.5 * randers_norm(f, y) * y).norm() < 1e-12);
    }
  }
}

TEST_CASE("sprays are positively 2-homogeneous") {
  std::mt19937_64 rng(31);
  const NavigationData nav = curved();
  for (int trial = 0; trial < 30; ++trial) {
    const PointFrame f = nav.frame(testing::random_point(rng, nav.chart(), 0.01));
    const Vector y = random_dir(rng);
    const double s = testing::uniform(rng, 0.2, 4.0);
    using Spray = Vector (*)(const PointFrame&, const Vector&);
    for (const Spray G : std::array<Spray, 3>{riemann_spray, natural_spray, randers_spray}) {
      CHECK((G(f, Vector(s * y)) - s * s * G(f, y)).norm() < 1e-12 * s * s);
    }
  }
}

TEST_CASE("R/S split of the covariant derivative of W") {
  std::mt19937_64 rng(32);
  const NavigationData nav = curved();
  for (int trial = 0; trial < 20; ++trial) {
    const Vector x = testing::random_point(rng, nav.chart(), 0.01);
    const PointFrame f = nav.frame(x);
    const RSTensors rs = rs_tensors(f);
    const Matrix D = (f.h.matrix() * f.nabla_wind).transpose();  // D_ij = h_jl nabla_i W^l
    CHECK((rs.R + rs.S - D).norm() < 1e-14);
    CHECK((rs.R - rs.R.transpose()).norm() == 0.0);
    CHECK((rs.S + rs.S.transpose()).norm() == 0.0);
    CHECK((rs.spray_s() + rs.S).norm() == 0.0);
    const Vector y = random_dir(rng);
    CHECK((detail::natural_spray_from_rs(f, y) - natural_spray(f, y)).norm() < 1e-13);
  }
}

TEST_CASE("Randers spray is the geodesic spray of F") {
  std::mt19937_64 rng(33);
  std::vector<NavigationData> navs = {curved(), builtin("rotation_disk").nav, builtin("sphere_cap").nav,
                                      builtin("conformal_flat").nav, builtin("annulus_constant_length").nav};
  for (const auto& nav : navs) {
    for (int trial = 0; trial < 10; ++trial) {
      const Vector x = testing::random_point(rng, nav.chart(), 0.02);
      const Vector y = random_dir(rng);
      const Vector oracle = true_spray(nav, x, y);
      CHECK((randers_spray(nav.frame(x), y) - oracle).norm() < 1e-5 * std::max(1.0, oracle.norm()));
    }
  }
  // The untransposed S contraction does not give the geodesic spray.
  const NavigationData rot = builtin("rotation_disk").nav;
  const Vector x = vec({0.3, 0.2});
  const Vector y = vec({1.0, 0.4});
  CHECK((randers_spray_untransposed(rot.frame(x), y) - true_spray(rot, x, y)).norm() > 1e-2);
}

TEST_CASE("spray comparison separates concircular winds") {
  CompareOptions opt;
  opt.points = 60;
  const ComparisonReport funk = compare_sprays(builtin("funk_ball").nav, opt);
  CHECK(funk.sprays_coincide);
  CHECK(funk.projectively_riemannian);
  CHECK(funk.sup_natural_minus_randers < 1e-10);
  for (double phi : funk.phi_hat) CHECK(phi == doctest::Approx(-1.0).epsilon(1e-12));
  const ComparisonReport cap = compare_sprays(builtin("sphere_cap").nav, opt);
  CHECK(cap.sprays_coincide);
  CHECK(cap.projectively_riemannian);
  CHECK(cap.phi_fit_residual < 1e-12);
  // phi(x) = (r^2 - 1) / (2 (1 + r^2)) for the stereographic cap.
  for (std::size_t i = 0; i < cap.sample_points.size(); ++i) {
    const double r2 = cap.sample_points[i].squaredNorm();
    CHECK(cap.phi_hat[i] == doctest::Approx((r2 - 1) / (2 * (1 + r2))).epsilon(1e-10));
  }
  const ComparisonReport rot = compare_sprays(builtin("rotation_disk").nav, opt);
  CHECK_FALSE(rot.sprays_coincide);
  CHECK_FALSE(rot.projectively_riemannian);
  CHECK(rot.sup_natural_minus_randers > 1e-3);
}

TEST_CASE("geodesics of the flat Riemann spray are straight lines") {
  const Scenario sc = builtin("zero_wind");
  const auto path = integrate_geodesic(make_spray(sc.nav, SprayKind::Riemann), SprayKind::Riemann, sc.nav.chart(),
                                       vec({-0.5, -0.2}), vec({0.4, 0.3}), 2.0, 1e-2);
  CHECK_FALSE(path.left_domain);
  CHECK(path.samples.size() == 201);
  CHECK((path.samples.back().x - vec({0.3, 0.4})).norm() < 1e-13);
}

TEST_CASE("Funk natural geodesics slow down towards the boundary") {
  // Along a ray x(t) = (1 - exp(-t)) e with unit initial speed.
  const Scenario sc = builtin("funk_ball");
  const auto path = integrate_geodesic(make_spray(sc.nav, SprayKind::Natural), SprayKind::Natural, sc.nav.chart(),
                                       vec({0, 0}), vec({1, 0}), 3.0, 1e-3);
  CHECK(path.left_domain);
  for (const auto& s : path.samples) {
    CHECK(s.x(0) == doctest::Approx(1 - std::exp(-s.t)).epsilon(1e-10));
    CHECK(std::abs(s.x(1)) < 1e-15);
    CHECK(sc.nav.chart().contains(s.x));
  }
  CHECK(path.samples.back().t == doctest::Approx(-std::log(0.1)).epsilon(1e-3));
}

TEST_CASE("Euler-Lagrange residual separates geodesics of F") {
  const Scenario funk = builtin("funk_ball");
  const Scenario rot = builtin("rotation_disk");
  const auto run = [](const NavigationData& nav, SprayKind k) {
    const auto path = integrate_geodesic(make_spray(nav, k), k, nav.chart(), vec({0.1, -0.2}), vec({0.5, 0.6}), 0.8, 1e-3);
    return el_residual(nav, path);
  };
  CHECK(run(funk.nav, SprayKind::Randers) < 1e-5);
  CHECK(run(funk.nav, SprayKind::Natural) < 1e-5);
  CHECK(run(rot.nav, SprayKind::Randers) < 1e-5);
  CHECK(run(funk.nav, SprayKind::Riemann) > 1e-2);
  CHECK(run(rot.nav, SprayKind::Natural) > 1e-3);
  CHECK_THROWS_AS(integrate_geodesic(make_spray(funk.nav, SprayKind::Natural), SprayKind::Natural, funk.nav.chart(),
                                     vec({0, 0}), vec({0, 0}), 1.0, 1e-3),
                  Error);
}
