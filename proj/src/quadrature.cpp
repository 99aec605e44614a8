#include "hhons/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "hhons/errors.hpp"

namespace hhons {

void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  nodes.resize(n);
  weights.resize(n);
  // Newton iteration on P_n from the Chebyshev initial guess; nodes come in
  // symmetric pairs so only the lower half is computed.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

QuadratureRule face_quadrature(const Eigen::Vector2d& a, const Eigen::Vector2d& b, int degree) {
  if (degree < 0) throw std::invalid_argument("face_quadrature: negative degree");
  if (degree > kMaxQuadratureDegree)
    throw CapabilityError("face_quadrature: exactness " + std::to_string(degree) + " not supported");
  const int n = degree / 2 + 1;
  Eigen::VectorXd t, w;
  gauss_legendre(n, t, w);

  QuadratureRule rule;
  rule.exactness = degree;
  rule.points.resize(n, 2);
  rule.weights.resize(n);
  const Eigen::Vector2d mid = 0.5 * (a + b);
  const Eigen::Vector2d half = 0.5 * (b - a);
  for (int q = 0; q < n; ++q) {
    rule.points.row(q) = (mid + t[q] * half).transpose();
    rule.weights[q] = 0.5 * (b - a).norm() * w[q];
  }
  return rule;
}

QuadratureRule triangle_quadrature(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1,
                                   const Eigen::Vector2d& p2, int degree) {
  if (degree < 0) throw std::invalid_argument("triangle_quadrature: negative degree");
  if (degree > kMaxQuadratureDegree)
    throw CapabilityError("triangle_quadrature: exactness " + std::to_string(degree) + " not supported");

  // Collapsed-square (Duffy) product rule on the reference triangle
  // (0,0),(1,0),(0,1): x = u, y = v(1-u), Jacobian (1-u). A polynomial of
  // total degree d pulls back to degree d+1 in u and d in v.
  const int nu = (degree + 2) / 2 + 1;
  const int nv = (degree + 1) / 2 + 1;
  Eigen::VectorXd xu, wu, xv, wv;
  gauss_legendre(nu, xu, wu);
  gauss_legendre(nv, xv, wv);

  const double jac = (p1 - p0).x() * (p2 - p0).y() - (p1 - p0).y() * (p2 - p0).x();

  QuadratureRule rule;
  rule.exactness = degree;
  rule.points.resize(nu * nv, 2);
  rule.weights.resize(nu * nv);
  int idx = 0;
  for (int i = 0; i < nu; ++i) {
    const double u = 0.5 * (xu[i] + 1.0);
    for (int j = 0; j < nv; ++j) {
      const double v = 0.5 * (xv[j] + 1.0);
      const double x = u;
      const double y = v * (1.0 - u);
      rule.points.row(idx) = (p0 + x * (p1 - p0) + y * (p2 - p0)).transpose();
      rule.weights[idx] = 0.25 * wu[i] * wv[j] * (1.0 - u) * jac;
      ++idx;
    }
  }
  return rule;
}

QuadratureRule polygon_quadrature(const std::vector<Eigen::Vector2d>& loop,
                                  const Eigen::Vector2d& center, int degree) {
  if (loop.size() < 3) throw std::invalid_argument("polygon_quadrature: fewer than 3 vertices");
  if (degree > kMaxQuadratureDegree)
    throw CapabilityError("polygon_quadrature: exactness " + std::to_string(degree) + " not supported");

  const int n = static_cast<int>(loop.size());
  std::vector<QuadratureRule> parts;
  parts.reserve(n);
  int total = 0;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d& p = loop[i];
    const Eigen::Vector2d& q = loop[(i + 1) % n];
    const double a2 = (p.x() - center.x()) * (q.y() - center.y()) -
                      (p.y() - center.y()) * (q.x() - center.x());
    if (!(a2 > 0.0))
      throw std::invalid_argument("polygon_quadrature: polygon not star-shaped w.r.t. center");
    parts.push_back(triangle_quadrature(center, p, q, degree));
    total += parts.back().size();
  }

  QuadratureRule rule;
  rule.exactness = degree;
  rule.points.resize(total, 2);
  rule.weights.resize(total);
  int idx = 0;
  for (const QuadratureRule& part : parts) {
    rule.points.middleRows(idx, part.size()) = part.points;
    rule.weights.segment(idx, part.size()) = part.weights;
    idx += part.size();
  }
  return rule;
}

QuadratureRule element_quadrature(const Mesh& mesh, int elem, int degree) {
  const Element& T = mesh.element(elem);
  std::vector<Eigen::Vector2d> loop(T.vertices.size());
  for (size_t i = 0; i < T.vertices.size(); ++i) loop[i] = mesh.vertex(T.vertices[i]);
  return polygon_quadrature(loop, T.centroid, degree);
}

QuadratureRule face_quadrature(const Mesh& mesh, int face, int degree) {
  const Face& F = mesh.face(face);
  return face_quadrature(mesh.vertex(F.vertices[0]), mesh.vertex(F.vertices[1]), degree);
}

}  // namespace hhons
