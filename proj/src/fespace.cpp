#include "hhons/fespace.hpp"

#include <algorithm>
#include <cmath>

namespace hhons {

FeSpace::FeSpace(const Mesh& mesh, const BasisSpec& spec, Exec exec, int extra_quad_degree)
    : m_mesh(&mesh),
      m_spec(spec),
      m_layout(mesh, spec),
      m_elem_qdeg(std::max(2 * (spec.k + 1), 3 * spec.k + 2) + extra_quad_degree),
      m_face_qdeg(std::max(2 * spec.k + 3, 3 * spec.k + 2) + extra_quad_degree) {
  m_faces.resize(mesh.n_faces());
  for_each_index(exec, mesh.n_faces(), [&](std::ptrdiff_t f) {
    const Face& F = mesh.face(static_cast<int>(f));
    FaceContext& ctx = m_faces[f];
    ctx.quad = face_quadrature(mesh.vertex(F.vertices[0]), mesh.vertex(F.vertices[1]), m_face_qdeg);
    ctx.basis = FaceBasis(mesh.vertex(F.vertices[0]), mesh.vertex(F.vertices[1]), spec.k, ctx.quad);
    ctx.psi = ctx.basis.eval(ctx.quad.points);
    ctx.h = F.diameter;
  });

  m_elements.resize(mesh.n_elements());
  for_each_index(exec, mesh.n_elements(), [&](std::ptrdiff_t e) {
    const Element& T = mesh.element(static_cast<int>(e));
    ElementContext& ctx = m_elements[e];
    ctx.index = static_cast<int>(e);
    ctx.measure = T.measure;
    ctx.diameter = T.diameter;
    ctx.centroid = T.centroid;
    ctx.quad = element_quadrature(mesh, static_cast<int>(e), m_elem_qdeg);
    ctx.basis = ElementBasis(T.centroid, T.diameter, spec.k + 1, ctx.quad);
    ctx.phi = ctx.basis.eval(ctx.quad.points);
    ctx.dphi[0] = ctx.basis.eval_deriv(ctx.quad.points, 0);
    ctx.dphi[1] = ctx.basis.eval_deriv(ctx.quad.points, 1);
    ctx.integrals = ctx.phi.transpose() * ctx.quad.weights;
    ctx.stiffness = ctx.dphi[0].transpose() * ctx.quad.weights.asDiagonal() * ctx.dphi[0] +
                    ctx.dphi[1].transpose() * ctx.quad.weights.asDiagonal() * ctx.dphi[1];

    ctx.faces.resize(T.faces.size());
    for (size_t j = 0; j < T.faces.size(); ++j) {
      ElementContext::FaceLocal& fl = ctx.faces[j];
      fl.face = T.faces[j];
      fl.sign = T.face_signs[j];
      fl.normal = mesh.outward_normal(static_cast<int>(e), static_cast<int>(j));
      fl.h = mesh.face(T.faces[j]).diameter;
      const QuadratureRule& fq = m_faces[T.faces[j]].quad;
      fl.trace_phi = ctx.basis.eval(fq.points);
      fl.trace_dphi[0] = ctx.basis.eval_deriv(fq.points, 0);
      fl.trace_dphi[1] = ctx.basis.eval_deriv(fq.points, 1);
    }
  });
}

Eigen::VectorXd l2_project_element(const FeSpace& space, int elem, const ScalarField& f,
                                   int degree) {
  if (degree < 0 || degree > space.spec().k + 1)
    throw std::invalid_argument("l2_project_element: degree outside the available basis range");
  const ElementContext& T = space.element(elem);
  const int n = BasisSpec::dim_poly_2d(degree);
  Eigen::VectorXd fvals(T.quad.size());
  for (int q = 0; q < T.quad.size(); ++q) fvals[q] = f(Eigen::Vector2d(T.quad.points.row(q)));
  // Orthonormal basis: projection coefficients are plain moments.
  return T.phi.leftCols(n).transpose() * (T.quad.weights.asDiagonal() * fvals);
}

Eigen::VectorXd l2_project_face(const FeSpace& space, int face, const ScalarField& f, int degree) {
  if (degree < 0 || degree > space.spec().k)
    throw std::invalid_argument("l2_project_face: degree outside the available basis range");
  const FaceContext& F = space.face(face);
  Eigen::VectorXd fvals(F.quad.size());
  for (int q = 0; q < F.quad.size(); ++q) fvals[q] = f(Eigen::Vector2d(F.quad.points.row(q)));
  return F.psi.leftCols(degree + 1).transpose() * (F.quad.weights.asDiagonal() * fvals);
}

HybridVelocity interpolate(const FeSpace& space, const VectorField& v, Exec exec) {
  const FieldLayout& layout = space.field_layout();
  HybridVelocity out(layout);
  const int nk = layout.nk;
  const int kf = layout.kf;

  for_each_index(exec, layout.n_elems, [&](std::ptrdiff_t e) {
    const ElementContext& T = space.element(static_cast<int>(e));
    Eigen::MatrixXd vals(T.quad.size(), 2);
    for (int q = 0; q < T.quad.size(); ++q)
      vals.row(q) = v(Eigen::Vector2d(T.quad.points.row(q))).transpose();
    const Eigen::MatrixXd m = T.phi.leftCols(nk).transpose() * T.quad.weights.asDiagonal() * vals;
    out.coeffs.segment(layout.elem_offset(static_cast<int>(e)), nk) = m.col(0);
    out.coeffs.segment(layout.elem_offset(static_cast<int>(e)) + nk, nk) = m.col(1);
  });

  for_each_index(exec, layout.n_faces, [&](std::ptrdiff_t f) {
    const FaceContext& F = space.face(static_cast<int>(f));
    Eigen::MatrixXd vals(F.quad.size(), 2);
    for (int q = 0; q < F.quad.size(); ++q)
      vals.row(q) = v(Eigen::Vector2d(F.quad.points.row(q))).transpose();
    const Eigen::MatrixXd m = F.psi.transpose() * F.quad.weights.asDiagonal() * vals;
    out.coeffs.segment(layout.face_offset(static_cast<int>(f)), kf) = m.col(0);
    out.coeffs.segment(layout.face_offset(static_cast<int>(f)) + kf, kf) = m.col(1);
  });
  return out;
}

Eigen::VectorXd restrict_local(const FeSpace& space, const HybridVelocity& vh, int elem) {
  const FieldLayout& layout = space.field_layout();
  const LocalLayout loc = space.local_layout(elem);
  const ElementContext& T = space.element(elem);
  Eigen::VectorXd out(loc.n_vector());
  out.head(2 * loc.nk) = vh.coeffs.segment(layout.elem_offset(elem), 2 * loc.nk);
  for (int j = 0; j < loc.nfaces; ++j)
    out.segment(loc.v_face_start(j), 2 * loc.kf) =
        vh.coeffs.segment(layout.face_offset(T.faces[j].face), 2 * loc.kf);
  return out;
}

void scatter_local(const FeSpace& space, const Eigen::VectorXd& local, int elem,
                   HybridVelocity& vh) {
  const FieldLayout& layout = space.field_layout();
  const LocalLayout loc = space.local_layout(elem);
  const ElementContext& T = space.element(elem);
  vh.coeffs.segment(layout.elem_offset(elem), 2 * loc.nk) = local.head(2 * loc.nk);
  for (int j = 0; j < loc.nfaces; ++j)
    vh.coeffs.segment(layout.face_offset(T.faces[j].face), 2 * loc.kf) =
        local.segment(loc.v_face_start(j), 2 * loc.kf);
}

double norm_1h(const FeSpace& space, const HybridVelocity& vh) {
  const FieldLayout& layout = space.field_layout();
  const int nk = layout.nk;
  const int kf = layout.kf;
  std::vector<double> partial(layout.n_elems, 0.0);

  for_each_index(Exec::Parallel, layout.n_elems, [&](std::ptrdiff_t e) {
    const ElementContext& T = space.element(static_cast<int>(e));
    const Eigen::MatrixXd K = T.stiffness.topLeftCorner(nk, nk);
    double s = 0.0;
    for (int c = 0; c < 2; ++c) {
      const Eigen::VectorXd vc =
          vh.coeffs.segment(layout.elem_offset(static_cast<int>(e)) + c * nk, nk);
      s += vc.dot(K * vc);
    }
    for (int j = 0; j < T.n_faces(); ++j) {
      const ElementContext::FaceLocal& fl = T.faces[j];
      const FaceContext& F = space.face(fl.face);
      for (int c = 0; c < 2; ++c) {
        const Eigen::VectorXd vF = vh.coeffs.segment(layout.face_offset(fl.face) + c * kf, kf);
        const Eigen::VectorXd vT =
            vh.coeffs.segment(layout.elem_offset(static_cast<int>(e)) + c * nk, nk);
        const Eigen::VectorXd diff = F.psi * vF - fl.trace_phi.leftCols(nk) * vT;
        s += diff.cwiseAbs2().dot(F.quad.weights) / fl.h;
      }
    }
    partial[e] = s;
  });

  double total = 0.0;
  for (double s : partial) total += s;
  return std::sqrt(total);
}

double norm_l2_elements(const FeSpace& space, const HybridVelocity& vh) {
  const FieldLayout& layout = space.field_layout();
  // Orthonormal element basis: the broken L2 norm is the coefficient norm.
  return vh.coeffs.head(2L * layout.nk * layout.n_elems).norm();
}

double pressure_l2(const FeSpace& space, const PressureField& p) {
  (void)space;
  return p.coeffs.norm();
}

double pressure_mean(const FeSpace& space, const PressureField& p) {
  const FieldLayout& layout = space.field_layout();
  double integral = 0.0;
  for (int e = 0; e < layout.n_elems; ++e) {
    const ElementContext& T = space.element(e);
    integral += T.integrals.head(layout.nk).dot(p.coeffs.segment(static_cast<long>(layout.nk) * e, layout.nk));
  }
  return integral / space.mesh().total_measure();
}

void make_zero_mean(const FeSpace& space, PressureField& p) {
  const FieldLayout& layout = space.field_layout();
  const double mean = pressure_mean(space, p);
  for (int e = 0; e < layout.n_elems; ++e) {
    const ElementContext& T = space.element(e);
    // The constant 1 has coefficients <1, phi_i> = integrals[i] in the
    // orthonormal basis.
    p.coeffs.segment(static_cast<long>(layout.nk) * e, layout.nk) -=
        mean * T.integrals.head(layout.nk);
  }
}

double trace_inequality_ratio(const FeSpace& space) {
  const int nk = space.field_layout().nk;
  double worst = 0.0;
  for (int e = 0; e < space.mesh().n_elements(); ++e) {
    const ElementContext& T = space.element(e);
    // Boundary mass matrix of the P^k basis; volume mass is the identity.
    Eigen::MatrixXd Mb = Eigen::MatrixXd::Zero(nk, nk);
    for (int j = 0; j < T.n_faces(); ++j) {
      const FaceContext& F = space.face(T.faces[j].face);
      const Eigen::MatrixXd tr = T.faces[j].trace_phi.leftCols(nk);
      Mb += tr.transpose() * F.quad.weights.asDiagonal() * tr;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Mb);
    worst = std::max(worst, std::sqrt(T.diameter * es.eigenvalues().maxCoeff()));
  }
  return worst;
}

}  // namespace hhons
