// Test-only reference computations, kept independent of the implementation
// paths they are used to check.
#ifndef HHONS_TESTS_ORACLES_HPP
#define HHONS_TESTS_ORACLES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "hhons/fespace.hpp"
#include "hhons/local_ops.hpp"

namespace hhons::oracles {

/// Single-element meshes used across the operator identity tests.
inline Mesh single_square() { return generate_cartesian(1, 1, {0, 0, 1, 1}); }

inline Mesh single_triangle() {
  return Mesh::from_polygons({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
}

inline Mesh single_hexagon() {
  std::vector<Eigen::Vector2d> pts;
  for (int i = 0; i < 6; ++i) {
    const double a = M_PI / 3.0 * i + 0.2;
    pts.emplace_back(0.9 * std::cos(a) + 0.3, 0.9 * std::sin(a) - 0.1);
  }
  return Mesh::from_polygons(pts, {{0, 1, 2, 3, 4, 5}});
}

/// Random bivariate polynomial of total degree `deg` with its analytic
/// gradient, reproducible from the seed.
struct RandomPoly {
  std::vector<std::array<int, 2>> exps;
  Eigen::VectorXd coef;

  RandomPoly(int deg, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int d = 0; d <= deg; ++d)
      for (int ax = d; ax >= 0; --ax) exps.push_back({ax, d - ax});
    coef.resize(exps.size());
    for (int i = 0; i < coef.size(); ++i) coef[i] = unif(rng);
  }

  double value(const Eigen::Vector2d& p) const {
    double s = 0.0;
    for (size_t i = 0; i < exps.size(); ++i)
      s += coef[i] * std::pow(p.x(), exps[i][0]) * std::pow(p.y(), exps[i][1]);
    return s;
  }

  double deriv(const Eigen::Vector2d& p, int dir) const {
    double s = 0.0;
    for (size_t i = 0; i < exps.size(); ++i) {
      const int a = exps[i][0] - (dir == 0);
      const int b = exps[i][1] - (dir == 1);
      if (a < 0 || b < 0) continue;
      s += coef[i] * (dir == 0 ? exps[i][0] : exps[i][1]) * std::pow(p.x(), a) * std::pow(p.y(), b);
    }
    return s;
  }
};

/// Random local hybrid DOF vector.
inline Eigen::VectorXd random_local(const FeSpace& space, int elem, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::VectorXd v(space.local_layout(elem).n_vector());
  for (int i = 0; i < v.size(); ++i) v[i] = unif(rng);
  return v;
}

/// |v|_{1,T}^2 of a local hybrid vector, from raw quadrature.
inline double local_seminorm_sq(const FeSpace& space, int elem, const Eigen::VectorXd& v) {
  const ElementContext& T = space.element(elem);
  const LocalLayout loc = space.local_layout(elem);
  double s = 0.0;
  for (int c = 0; c < 2; ++c) {
    const Eigen::VectorXd vc = v.segment(loc.v_elem(c, 0), loc.nk);
    s += (T.dphi[0].leftCols(loc.nk) * vc).cwiseAbs2().dot(T.quad.weights);
    s += (T.dphi[1].leftCols(loc.nk) * vc).cwiseAbs2().dot(T.quad.weights);
  }
  for (int j = 0; j < loc.nfaces; ++j) {
    const FaceContext& F = space.face(T.faces[j].face);
    for (int c = 0; c < 2; ++c) {
      const Eigen::VectorXd diff = F.psi * v.segment(loc.v_face(j, c, 0), loc.kf) -
                                   T.faces[j].trace_phi.leftCols(loc.nk) *
                                       v.segment(loc.v_elem(c, 0), loc.nk);
      s += diff.cwiseAbs2().dot(F.quad.weights) / T.faces[j].h;
    }
  }
  return s;
}

/// Trilinear form evaluated through the materialized degree-2k gradient: the
/// integral definition, not the expanded element formula. Quadrature is
/// boosted to integrate the degree-4k integrand exactly.
inline double trilinear_via_gradient(const FeSpace& space, int elem, const Eigen::VectorXd& w,
                                     const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  const int k = space.spec().k;
  const LocalLayout loc = space.local_layout(elem);
  const Eigen::MatrixXd G = gradient_reconstruction(space, elem, 2 * k);
  const int nl = BasisSpec::dim_poly_2d(2 * k);

  const ElementContext& T = space.element(elem);
  const QuadratureRule quad = element_quadrature(space.mesh(), elem, 4 * k + 2);
  const ElementBasis basis(T.centroid, T.diameter, 2 * k, quad);
  const Eigen::MatrixXd tau = basis.eval(quad.points);
  const Eigen::MatrixXd phi_k = T.basis.eval(quad.points).leftCols(loc.nk);

  const Eigen::VectorXd Gu = G * u;
  const Eigen::VectorXd Gv = G * v;

  double acc = 0.0;
  for (int q = 0; q < quad.size(); ++q) {
    Eigen::Matrix2d gu, gv;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        gu(a, b) = tau.row(q).dot(Gu.segment((2 * a + b) * nl, nl));
        gv(a, b) = tau.row(q).dot(Gv.segment((2 * a + b) * nl, nl));
      }
    Eigen::Vector2d uT, vT, wT;
    for (int c = 0; c < 2; ++c) {
      uT[c] = phi_k.row(q).dot(u.segment(loc.v_elem(c, 0), loc.nk));
      vT[c] = phi_k.row(q).dot(v.segment(loc.v_elem(c, 0), loc.nk));
      wT[c] = phi_k.row(q).dot(w.segment(loc.v_elem(c, 0), loc.nk));
    }
    acc += quad.weights[q] * (0.5 * vT.dot(gu * wT) - 0.5 * uT.dot(gv * wT));
  }
  return acc;
}

}  // namespace hhons::oracles

#endif
