#ifndef HHONS_FESPACE_HPP
#define HHONS_FESPACE_HPP

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "hhons/basis.hpp"
#include "hhons/dofs.hpp"
#include "hhons/mesh.hpp"
#include "hhons/parallel.hpp"
#include "hhons/quadrature.hpp"

namespace hhons {

using ScalarField = std::function<double(const Eigen::Vector2d&)>;
using VectorField = std::function<Eigen::Vector2d(const Eigen::Vector2d&)>;

/// Per-face immutable data shared by both incident elements.
struct FaceContext {
  QuadratureRule quad;
  FaceBasis basis;                // degree k, orthonormal
  Eigen::MatrixXd psi;            // basis values at quad points (nq x (k+1))
  double h = 0.0;                 // face diameter
};

/// Per-element immutable data: quadrature, orthonormal basis of P^{k+1},
/// cached evaluations at volume and face quadrature points.
struct ElementContext {
  int index = -1;
  QuadratureRule quad;
  ElementBasis basis;             // degree k+1; first dim P^l columns span P^l
  Eigen::MatrixXd phi;            // (nq x N_{k+1}) values at volume points
  Eigen::MatrixXd dphi[2];        // first derivatives
  Eigen::VectorXd integrals;      // integral of each basis function over T
  Eigen::MatrixXd stiffness;      // grad-grad Gram of the P^{k+1} basis

  struct FaceLocal {
    int face = -1;                // global face id
    double sign = 1.0;
    Eigen::Vector2d normal;       // outward n_TF
    double h = 0.0;
    Eigen::MatrixXd trace_phi;    // element basis at face quad points
    Eigen::MatrixXd trace_dphi[2];
  };
  std::vector<FaceLocal> faces;

  double measure = 0.0;
  double diameter = 0.0;
  Eigen::Vector2d centroid;

  int n_faces() const { return static_cast<int>(faces.size()); }
};

/// Scalar and vector local DOF indexing on one element: element block first,
/// then one block per face; vector blocks list the x-component coefficients
/// before the y-component ones.
struct LocalLayout {
  int nk = 0;       // dim P^k(T)
  int kf = 0;       // k+1
  int nfaces = 0;

  int n_scalar() const { return nk + nfaces * kf; }
  int n_vector() const { return 2 * n_scalar(); }

  int s_elem(int i) const { return i; }
  int s_face(int j, int i) const { return nk + j * kf + i; }
  int v_elem(int c, int i) const { return c * nk + i; }
  int v_face(int j, int c, int i) const { return 2 * nk + j * 2 * kf + c * kf + i; }
  int v_face_start(int j) const { return 2 * nk + j * 2 * kf; }

  /// Scalar index -> vector index for component c.
  int to_vector(int s, int c) const {
    return s < nk ? v_elem(c, s) : v_face((s - nk) / kf, c, (s - nk) % kf);
  }
};

/// Bases, quadratures and cached evaluations for one mesh/degree pair.
/// Construction is a pure per-element map; everything is immutable afterwards
/// and safe for concurrent reads.
class FeSpace {
 public:
  FeSpace(const Mesh& mesh, const BasisSpec& spec, Exec exec = Exec::Parallel,
          int extra_quad_degree = 0);

  const Mesh& mesh() const { return *m_mesh; }
  const BasisSpec& spec() const { return m_spec; }
  const FieldLayout& field_layout() const { return m_layout; }

  const ElementContext& element(int e) const { return m_elements[e]; }
  const FaceContext& face(int f) const { return m_faces[f]; }

  LocalLayout local_layout(int e) const {
    return {m_spec.n_elem_scalar(), m_spec.n_face_scalar(),
            static_cast<int>(m_elements[e].faces.size())};
  }

  int elem_quad_degree() const { return m_elem_qdeg; }
  int face_quad_degree() const { return m_face_qdeg; }

 private:
  const Mesh* m_mesh;
  BasisSpec m_spec;
  FieldLayout m_layout;
  int m_elem_qdeg;
  int m_face_qdeg;
  std::vector<FaceContext> m_faces;
  std::vector<ElementContext> m_elements;
};

/// L2-orthogonal projection of f onto P^degree(T), as coefficients in the
/// element's orthonormal basis (first dim P^degree entries).
Eigen::VectorXd l2_project_element(const FeSpace& space, int elem, const ScalarField& f,
                                   int degree);

/// Same on a face, degree <= k.
Eigen::VectorXd l2_project_face(const FeSpace& space, int face, const ScalarField& f, int degree);

/// Component-wise element and face projections of a vector field.
HybridVelocity interpolate(const FeSpace& space, const VectorField& v,
                           Exec exec = Exec::Parallel);

/// Restriction of a hybrid field to one element, in LocalLayout order.
Eigen::VectorXd restrict_local(const FeSpace& space, const HybridVelocity& vh, int elem);

/// Scatter a local increment back (element block and all face blocks).
void scatter_local(const FeSpace& space, const Eigen::VectorXd& local, int elem,
                   HybridVelocity& vh);

/// Discrete H1-like seminorm: broken gradients plus face penalty terms.
double norm_1h(const FeSpace& space, const HybridVelocity& vh);

/// L2 norm of the broken element polynomial (face DOFs ignored).
double norm_l2_elements(const FeSpace& space, const HybridVelocity& vh);

/// L2 norm / mean of a broken pressure.
double pressure_l2(const FeSpace& space, const PressureField& p);
double pressure_mean(const FeSpace& space, const PressureField& p);
/// Shift so the global mean vanishes.
void make_zero_mean(const FeSpace& space, PressureField& p);

/// Ratio h_T^{1/2} |v|_{L2(dT)} / |v|_{L2(T)} maximized over the P^k basis of
/// each element; a bounded value across refinements is the expected behavior.
double trace_inequality_ratio(const FeSpace& space);

}  // namespace hhons

#endif
