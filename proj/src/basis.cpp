#include "hhons/basis.hpp"

#include <cmath>
#include <stdexcept>

namespace hhons {

namespace {

// Gram matrix under the rule, then two Cholesky passes. One pass leaves
// O(cond) roundoff in the mass matrix; the second brings it to machine
// precision.
Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& vals, const Eigen::VectorXd& w) {
  const int n = static_cast<int>(vals.cols());
  Eigen::MatrixXd coeff = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd basis = vals;
  for (int pass = 0; pass < 2; ++pass) {
    Eigen::MatrixXd gram = basis.transpose() * w.asDiagonal() * basis;
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("basis orthonormalization failed: singular mass matrix");
    coeff = llt.matrixL().solve(coeff);
    basis = vals * coeff.transpose();
  }
  return coeff;
}

}  // namespace

ElementBasis::ElementBasis(const Eigen::Vector2d& center, double h, int degree,
                           const QuadratureRule& quad)
    : m_center(center), m_h(h), m_degree(degree) {
  if (degree < 0) throw std::invalid_argument("ElementBasis: negative degree");
  for (int d = 0; d <= degree; ++d)
    for (int ax = d; ax >= 0; --ax) m_exponents.emplace_back(ax, d - ax);
  m_coeff = orthonormalize(monomials(quad.points, 0, 0), quad.weights);
}

Eigen::MatrixXd ElementBasis::monomials(const Eigen::Matrix<double, Eigen::Dynamic, 2>& pts,
                                        int dx, int dy) const {
  const int npts = static_cast<int>(pts.rows());
  const int n = static_cast<int>(m_exponents.size());
  Eigen::MatrixXd out(npts, n);
  for (int q = 0; q < npts; ++q) {
    const double xi = (pts(q, 0) - m_center.x()) / m_h;
    const double eta = (pts(q, 1) - m_center.y()) / m_h;
    for (int i = 0; i < n; ++i) {
      const auto [ax, ay] = m_exponents[i];
      if (ax < dx || ay < dy) {
        out(q, i) = 0.0;
        continue;
      }
      double c = 1.0;
      for (int r = 0; r < dx; ++r) c *= (ax - r);
      for (int r = 0; r < dy; ++r) c *= (ay - r);
      out(q, i) = c * std::pow(xi, ax - dx) * std::pow(eta, ay - dy) / std::pow(m_h, dx + dy);
    }
  }
  return out;
}

Eigen::MatrixXd ElementBasis::eval(const Eigen::Matrix<double, Eigen::Dynamic, 2>& pts) const {
  return monomials(pts, 0, 0) * m_coeff.transpose();
}

Eigen::MatrixXd ElementBasis::eval_deriv(const Eigen::Matrix<double, Eigen::Dynamic, 2>& pts,
                                         int dir) const {
  return monomials(pts, dir == 0 ? 1 : 0, dir == 1 ? 1 : 0) * m_coeff.transpose();
}

Eigen::MatrixXd ElementBasis::eval_deriv2(const Eigen::Matrix<double, Eigen::Dynamic, 2>& pts,
                                          int d1, int d2) const {
  const int dx = (d1 == 0) + (d2 == 0);
  const int dy = (d1 == 1) + (d2 == 1);
  return monomials(pts, dx, dy) * m_coeff.transpose();
}

FaceBasis::FaceBasis(const Eigen::Vector2d& a, const Eigen::Vector2d& b, int degree,
                     const QuadratureRule& quad)
    : m_mid(0.5 * (a + b)), m_degree(degree) {
  if (degree < 0) throw std::invalid_argument("FaceBasis: negative degree");
  const Eigen::Vector2d half = 0.5 * (b - a);
  m_tangent = half / half.squaredNorm();  // t(p) = (p - mid).dot(m_tangent) in [-1, 1]

  const int npts = quad.size();
  Eigen::MatrixXd vals(npts, degree + 1);
  for (int q = 0; q < npts; ++q) {
    const double t = (Eigen::Vector2d(quad.points.row(q)) - m_mid).dot(m_tangent);
    double p = 1.0;
    for (int j = 0; j <= degree; ++j) {
      vals(q, j) = p;
      p *= t;
    }
  }
  m_coeff = orthonormalize(vals, quad.weights);
}

Eigen::MatrixXd FaceBasis::eval(const Eigen::Matrix<double, Eigen::Dynamic, 2>& pts) const {
  const int npts = static_cast<int>(pts.rows());
  Eigen::MatrixXd vals(npts, m_degree + 1);
  for (int q = 0; q < npts; ++q) {
    const double t = (Eigen::Vector2d(pts.row(q)) - m_mid).dot(m_tangent);
    double p = 1.0;
    for (int j = 0; j <= m_degree; ++j) {
      vals(q, j) = p;
      p *= t;
    }
  }
  return vals * m_coeff.transpose();
}

}  // namespace hhons
