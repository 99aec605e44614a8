#ifndef HHONS_DOFS_HPP
#define HHONS_DOFS_HPP

#include <Eigen/Dense>
#include <vector>

#include "hhons/basis.hpp"
#include "hhons/mesh.hpp"

namespace hhons {

/// Storage layout of a hybrid velocity field: per-element vector blocks
/// followed by per-face vector blocks (all faces, boundary included). Inside
/// a block the x-component coefficients precede the y-component ones.
struct FieldLayout {
  int n_elems = 0;
  int n_faces = 0;
  int nk = 0;  // dim P^k(T)
  int kf = 0;  // dim P^k(F) = k+1

  FieldLayout() = default;
  FieldLayout(const Mesh& mesh, const BasisSpec& spec)
      : n_elems(mesh.n_elements()),
        n_faces(mesh.n_faces()),
        nk(spec.n_elem_scalar()),
        kf(spec.n_face_scalar()) {}

  long elem_offset(int e) const { return 2L * nk * e; }
  long face_offset(int f) const { return 2L * nk * n_elems + 2L * kf * f; }
  long n_velocity() const { return 2L * (static_cast<long>(nk) * n_elems + static_cast<long>(kf) * n_faces); }
  long n_pressure() const { return static_cast<long>(nk) * n_elems; }
};

/// Coefficients of one hybrid velocity: element polynomials plus face
/// polynomials, addressed through a FieldLayout.
struct HybridVelocity {
  Eigen::VectorXd coeffs;

  HybridVelocity() = default;
  explicit HybridVelocity(const FieldLayout& layout)
      : coeffs(Eigen::VectorXd::Zero(layout.n_velocity())) {}
};

/// Broken P^k pressure, element blocks of size dim P^k(T). In the
/// orthonormal basis the first coefficient carries the element mean.
struct PressureField {
  Eigen::VectorXd coeffs;

  PressureField() = default;
  explicit PressureField(const FieldLayout& layout)
      : coeffs(Eigen::VectorXd::Zero(layout.n_pressure())) {}
};

/// Global numbering of the solver unknowns: element velocity blocks, then
/// interior-face velocity blocks (Dirichlet faces are eliminated), then
/// element pressure blocks, then one scalar multiplier enforcing the
/// zero-mean pressure constraint. Also provides the numbering of the
/// condensed system: interior-face velocities, element pressure means,
/// multiplier.
class DofMap {
 public:
  DofMap(const Mesh& mesh, const BasisSpec& spec);

  const FieldLayout& field_layout() const { return m_layout; }

  int nk() const { return m_layout.nk; }
  int kf() const { return m_layout.kf; }
  int n_elements() const { return m_layout.n_elems; }
  int n_internal_faces() const { return m_n_internal; }

  long n_elem_vdofs() const { return 2L * nk() * n_elements(); }
  long n_face_vdofs() const { return 2L * kf() * m_n_internal; }
  long n_pressure_dofs() const { return static_cast<long>(nk()) * n_elements(); }
  long n_total() const { return n_elem_vdofs() + n_face_vdofs() + n_pressure_dofs() + 1; }

  long elem_v_offset(int e) const { return 2L * nk() * e; }
  /// -1 for boundary faces.
  long face_v_offset(int f) const { return m_face_offset[f]; }
  long pressure_offset(int e) const { return n_elem_vdofs() + n_face_vdofs() + static_cast<long>(nk()) * e; }
  long multiplier_index() const { return n_total() - 1; }

  long condensed_dim() const { return n_face_vdofs() + n_elements() + 1; }
  long condensed_face_offset(int f) const { return m_cond_face_offset[f]; }
  long condensed_pressure_mean(int e) const { return n_face_vdofs() + e; }
  long condensed_multiplier() const { return condensed_dim() - 1; }

 private:
  FieldLayout m_layout;
  int m_n_internal = 0;
  std::vector<long> m_face_offset;       // full-system face block start, -1 on boundary
  std::vector<long> m_cond_face_offset;  // condensed-system face block start, -1 on boundary
};

}  // namespace hhons

#endif
