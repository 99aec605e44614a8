#ifndef HHONS_BASIS_HPP
#define HHONS_BASIS_HPP

#include <Eigen/Dense>
#include <vector>

#include "hhons/quadrature.hpp"

namespace hhons {

/// Polynomial degree bookkeeping for the hybrid space: degree k on faces and
/// elements, k+1 for the local velocity reconstruction.
struct BasisSpec {
  int k = 0;

  explicit BasisSpec(int degree) : k(degree) {
    if (degree < 0) throw std::invalid_argument("BasisSpec: degree must be >= 0");
  }

  static int dim_poly_2d(int degree) { return (degree + 1) * (degree + 2) / 2; }

  int n_elem_scalar() const { return dim_poly_2d(k); }        // dim P^k(T)
  int n_recon_scalar() const { return dim_poly_2d(k + 1); }   // dim P^{k+1}(T)
  int n_face_scalar() const { return k + 1; }                 // dim P^k(F)
};

/// L2-orthonormal scalar basis of P^degree on one element, expressed in
/// scaled monomials ((x - x_T)/h_T)^a ((y - y_T)/h_T)^b in graded order, so
/// the first dim P^l functions form an orthonormal basis of P^l for every
/// l <= degree.
class ElementBasis {
 public:
  ElementBasis() = default;
  ElementBasis(const Eigen::Vector2d& center, double h, int degree, const QuadratureRule& quad);

  int degree() const { return m_degree; }
  int size() const { return static_cast<int>(m_coeff.rows()); }

  /// Values at points: (npts x size).
  Eigen::MatrixXd eval(const Eigen::Matrix<double, Eigen::Dynamic, 2>& pts) const;
  /// First derivatives, one matrix per direction.
  Eigen::MatrixXd eval_deriv(const Eigen::Matrix<double, Eigen::Dynamic, 2>& pts, int dir) const;
  /// Second derivatives: dirs in {(0,0), (0,1), (1,1)}.
  Eigen::MatrixXd eval_deriv2(const Eigen::Matrix<double, Eigen::Dynamic, 2>& pts, int d1, int d2) const;

  /// Orthonormalizing transform: row i gives phi_i in scaled monomials.
  const Eigen::MatrixXd& coeff() const { return m_coeff; }

 private:
  Eigen::MatrixXd monomials(const Eigen::Matrix<double, Eigen::Dynamic, 2>& pts,
                            int dx, int dy) const;

  Eigen::Vector2d m_center = Eigen::Vector2d::Zero();
  double m_h = 1.0;
  int m_degree = 0;
  std::vector<std::pair<int, int>> m_exponents;
  Eigen::MatrixXd m_coeff;
};

/// L2-orthonormal basis of P^degree on one face, in the scaled arclength
/// coordinate (essentially Legendre polynomials). The parametrization runs
/// from the lower-index vertex to the higher, matching the face normal
/// convention, so both incident elements see identical functions.
class FaceBasis {
 public:
  FaceBasis() = default;
  FaceBasis(const Eigen::Vector2d& a, const Eigen::Vector2d& b, int degree,
            const QuadratureRule& quad);

  int degree() const { return m_degree; }
  int size() const { return m_degree + 1; }

  Eigen::MatrixXd eval(const Eigen::Matrix<double, Eigen::Dynamic, 2>& pts) const;

 private:
  Eigen::Vector2d m_mid = Eigen::Vector2d::Zero();
  Eigen::Vector2d m_tangent = Eigen::Vector2d::UnitX();  // scaled: |b-a|/2 absorbed
  int m_degree = 0;
  Eigen::MatrixXd m_coeff;
};

}  // namespace hhons

#endif
