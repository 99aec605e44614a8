#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hhons/errors.hpp"
#include "hhons/quadrature.hpp"

using namespace hhons;

TEST_CASE("unit square moments") {
  const Mesh mesh = generate_cartesian(1, 1, {0, 0, 1, 1});
  const QuadratureRule rule = element_quadrature(mesh, 0, 2);
  CHECK(rule.integrate([](const Eigen::Vector2d& p) { return p.x() * p.x(); }) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(rule.integrate([](const Eigen::Vector2d& p) { return p.x() * p.y(); }) ==
        doctest::Approx(0.25).epsilon(1e-13));
  CHECK(rule.weights.minCoeff() > 0.0);
  CHECK(rule.weights.sum() == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("reference triangle area") {
  const QuadratureRule rule =
      triangle_quadrature({0, 0}, {1, 0}, {0, 1}, 0);
  CHECK(rule.weights.sum() == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("hexagon area matches shoelace") {
  std::vector<Eigen::Vector2d> loop;
  double shoelace = 0.0;
  for (int i = 0; i < 6; ++i) {
    const double a = M_PI / 3.0 * i;
    loop.emplace_back(1.3 * std::cos(a), 1.3 * std::sin(a));
  }
  for (int i = 0; i < 6; ++i) {
    const Eigen::Vector2d& p = loop[i];
    const Eigen::Vector2d& q = loop[(i + 1) % 6];
    shoelace += 0.5 * (p.x() * q.y() - p.y() * q.x());
  }
  const QuadratureRule rule = polygon_quadrature(loop, Eigen::Vector2d::Zero(), 4);
  CHECK(rule.weights.sum() == doctest::Approx(shoelace).epsilon(1e-13));
}

TEST_CASE("polygon rule is exact for high-degree monomials") {
  // Oracle: split the square integral analytically.
  const Mesh mesh = generate_cartesian(1, 1, {0, 0, 1, 1});
  for (int deg = 0; deg <= 12; ++deg) {
    const QuadratureRule rule = element_quadrature(mesh, 0, deg);
    for (int ax = 0; ax + 0 <= deg; ++ax) {
      for (int ay = 0; ax + ay <= deg; ++ay) {
        const double val = rule.integrate(
            [&](const Eigen::Vector2d& p) { return std::pow(p.x(), ax) * std::pow(p.y(), ay); });
        const double exact = 1.0 / ((ax + 1.0) * (ay + 1.0));
        CHECK(val == doctest::Approx(exact).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("face rule moments") {
  const QuadratureRule rule = face_quadrature(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0), 3);
  CHECK(rule.integrate([](const Eigen::Vector2d& p) { return p.x() * p.x() * p.x(); }) ==
        doctest::Approx(0.25).epsilon(1e-14));

  const Eigen::Vector2d a(0.3, -1.0), b(-0.7, 2.0);
  const QuadratureRule slanted = face_quadrature(a, b, 5);
  CHECK(slanted.weights.sum() == doctest::Approx((b - a).norm()).epsilon(1e-14));
}

TEST_CASE("face rule vs dense monomial oracle") {
  // Products of two degree-(k+1) traces for k up to 4, checked against a
  // much finer rule.
  const Eigen::Vector2d a(0.0, 0.0), b(0.8, 0.6);
  const QuadratureRule oracle = face_quadrature(a, b, 30);
  for (int k = 0; k <= 4; ++k) {
    const QuadratureRule rule = face_quadrature(a, b, 2 * k + 2);
    for (int m = 0; m <= 2 * (k + 1); ++m) {
      auto f = [&](const Eigen::Vector2d& p) { return std::pow(p.x() + 0.5 * p.y(), m); };
      CHECK(rule.integrate(f) == doctest::Approx(oracle.integrate(f)).epsilon(1e-12));
    }
  }
}

TEST_CASE("capability and star-shape errors") {
  const Mesh mesh = generate_cartesian(1, 1, {0, 0, 1, 1});
  CHECK_THROWS_AS(element_quadrature(mesh, 0, kMaxQuadratureDegree + 1), CapabilityError);

  std::vector<Eigen::Vector2d> lshape = {{0, 0}, {3, 0}, {3, 1}, {1, 1}, {1, 3}, {0, 3}};
  CHECK_THROWS_AS(polygon_quadrature(lshape, Eigen::Vector2d(1.1, 1.1), 2),
                  std::invalid_argument);
}
