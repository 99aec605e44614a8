#ifndef HHONS_QUADRATURE_HPP
#define HHONS_QUADRATURE_HPP

#include <Eigen/Dense>

#include "hhons/mesh.hpp"

namespace hhons {

/// Point set with positive weights. Points are physical 2D coordinates; for
/// face rules they lie on the segment and the weights sum to its length.
struct QuadratureRule {
  Eigen::Matrix<double, Eigen::Dynamic, 2> points;
  Eigen::VectorXd weights;
  int exactness = 0;

  int size() const { return static_cast<int>(weights.size()); }

  template <typename F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (int q = 0; q < size(); ++q) s += weights[q] * f(Eigen::Vector2d(points.row(q)));
    return s;
  }
};

/// Largest supported polynomial exactness for the rules below.
inline constexpr int kMaxQuadratureDegree = 40;

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

/// Rule on the segment [a, b], exact for 1D polynomials up to `degree`.
QuadratureRule face_quadrature(const Eigen::Vector2d& a, const Eigen::Vector2d& b, int degree);

/// Rule on a triangle, exact for bivariate polynomials up to `degree`.
QuadratureRule triangle_quadrature(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1,
                                   const Eigen::Vector2d& p2, int degree);

/// Rule on a polygon star-shaped with respect to `center`, obtained by
/// sub-triangulating from it. Throws std::invalid_argument if a sub-triangle
/// is inverted, CapabilityError above kMaxQuadratureDegree.
QuadratureRule polygon_quadrature(const std::vector<Eigen::Vector2d>& loop,
                                  const Eigen::Vector2d& center, int degree);

/// Convenience overloads on mesh entities.
QuadratureRule element_quadrature(const Mesh& mesh, int elem, int degree);
QuadratureRule face_quadrature(const Mesh& mesh, int face, int degree);

}  // namespace hhons

#endif
