#include "hhons/dofs.hpp"

namespace hhons {

DofMap::DofMap(const Mesh& mesh, const BasisSpec& spec) : m_layout(mesh, spec) {
  m_face_offset.assign(mesh.n_faces(), -1);
  m_cond_face_offset.assign(mesh.n_faces(), -1);
  for (int f = 0; f < mesh.n_faces(); ++f) {
    if (mesh.face(f).boundary) continue;
    m_face_offset[f] = n_elem_vdofs() + 2L * kf() * m_n_internal;
    m_cond_face_offset[f] = 2L * kf() * m_n_internal;
    ++m_n_internal;
  }
}

}  // namespace hhons
