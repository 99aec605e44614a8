#include "hhons/local_ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hhons {

namespace {

// Scalar gradient blocks: row space P^l, columns over scalar local DOFs.
// Entry [i, j] realizes the integration-by-parts pairing tested against the
// i-th P^l basis function in direction b.
std::array<Eigen::MatrixXd, 2> scalar_gradient_blocks(const FeSpace& space, int elem, int l) {
  const ElementContext& T = space.element(elem);
  const LocalLayout loc = space.local_layout(elem);
  const int nl = BasisSpec::dim_poly_2d(l);
  const int nk = loc.nk;

  std::array<Eigen::MatrixXd, 2> R{Eigen::MatrixXd::Zero(nl, loc.n_scalar()),
                                   Eigen::MatrixXd::Zero(nl, loc.n_scalar())};
  // Volume pairing: rows are tests (P^l), columns trials (P^k).
  for (int b = 0; b < 2; ++b)
    R[b].leftCols(nk) = T.phi.leftCols(nl).transpose() * T.quad.weights.asDiagonal() *
                        T.dphi[b].leftCols(nk);

  for (int j = 0; j < loc.nfaces; ++j) {
    const ElementContext::FaceLocal& fl = T.faces[j];
    const FaceContext& F = space.face(fl.face);
    const Eigen::MatrixXd test = fl.trace_phi.leftCols(nl);
    for (int b = 0; b < 2; ++b) {
      const Eigen::MatrixXd wtest = (F.quad.weights * fl.normal[b]).asDiagonal() * test;
      R[b].block(0, loc.s_face(j, 0), nl, loc.kf) += wtest.transpose() * F.psi;
      R[b].leftCols(nk) -= wtest.transpose() * fl.trace_phi.leftCols(nk);
    }
  }
  return R;
}

// Expand a scalar (rows_s x n_scalar) operator to both components: rows are
// laid out as [comp0 rows_s; comp1 rows_s], columns in LocalLayout order.
Eigen::MatrixXd expand_rows_cols(const Eigen::MatrixXd& S, const LocalLayout& loc) {
  const int rs = static_cast<int>(S.rows());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(2 * rs, loc.n_vector());
  for (int c = 0; c < 2; ++c)
    for (int s = 0; s < loc.n_scalar(); ++s)
      out.block(c * rs, loc.to_vector(s, c), rs, 1) = S.col(s);
  return out;
}

// Component-diagonal expansion of a scalar bilinear form matrix.
Eigen::MatrixXd expand_bilinear(const Eigen::MatrixXd& S, const LocalLayout& loc) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(loc.n_vector(), loc.n_vector());
  for (int c = 0; c < 2; ++c)
    for (int si = 0; si < loc.n_scalar(); ++si)
      for (int sj = 0; sj < loc.n_scalar(); ++sj)
        out(loc.to_vector(si, c), loc.to_vector(sj, c)) = S(si, sj);
  return out;
}

Eigen::MatrixXd scalar_reconstruction(const FeSpace& space, int elem) {
  const ElementContext& T = space.element(elem);
  const LocalLayout loc = space.local_layout(elem);
  const int nk1 = static_cast<int>(T.stiffness.rows());
  const int nk = loc.nk;

  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(nk1, loc.n_scalar());
  // Volume part: -(v_T, laplacian of the test function).
  const Eigen::MatrixXd lap = T.basis.eval_deriv2(T.quad.points, 0, 0) +
                              T.basis.eval_deriv2(T.quad.points, 1, 1);
  rhs.leftCols(nk) = -lap.transpose() * T.quad.weights.asDiagonal() * T.phi.leftCols(nk);

  for (int j = 0; j < loc.nfaces; ++j) {
    const ElementContext::FaceLocal& fl = T.faces[j];
    const FaceContext& F = space.face(fl.face);
    const Eigen::MatrixXd dn = fl.trace_dphi[0] * fl.normal.x() + fl.trace_dphi[1] * fl.normal.y();
    rhs.block(0, loc.s_face(j, 0), nk1, loc.kf) +=
        dn.transpose() * F.quad.weights.asDiagonal() * F.psi;
  }

  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(nk1, loc.n_scalar());
  // The stiffness matrix is singular on constants only; with the orthonormal
  // graded basis that is exactly the first function, so solve on the rest.
  W.bottomRows(nk1 - 1) =
      T.stiffness.bottomRightCorner(nk1 - 1, nk1 - 1).ldlt().solve(rhs.bottomRows(nk1 - 1));

  // Element-mean closure.
  Eigen::RowVectorXd mean_rhs = Eigen::RowVectorXd::Zero(loc.n_scalar());
  mean_rhs.head(nk) = T.integrals.head(nk).transpose();
  W.row(0) = (mean_rhs - T.integrals.tail(nk1 - 1).transpose() * W.bottomRows(nk1 - 1)) /
             T.integrals[0];
  return W;
}

Eigen::MatrixXd scalar_divergence_block(const FeSpace& space, int elem, int c) {
  const ElementContext& T = space.element(elem);
  const LocalLayout loc = space.local_layout(elem);
  const int nk = loc.nk;
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(nk, loc.n_scalar());
  // -(v_T, d/dc of the test) + face flux terms.
  D.leftCols(nk) = -(T.dphi[c].leftCols(nk).transpose() * T.quad.weights.asDiagonal() *
                     T.phi.leftCols(nk));
  for (int j = 0; j < loc.nfaces; ++j) {
    const ElementContext::FaceLocal& fl = T.faces[j];
    const FaceContext& F = space.face(fl.face);
    D.block(0, loc.s_face(j, 0), nk, loc.kf) +=
        fl.normal[c] * fl.trace_phi.leftCols(nk).transpose() * F.quad.weights.asDiagonal() * F.psi;
  }
  return D;
}

Eigen::MatrixXd scalar_face_residual(const FeSpace& space, int elem, int local_face,
                                     const Eigen::MatrixXd& W) {
  const ElementContext& T = space.element(elem);
  const LocalLayout loc = space.local_layout(elem);
  const ElementContext::FaceLocal& fl = T.faces[local_face];
  const FaceContext& F = space.face(fl.face);
  const int nk = loc.nk;
  const int nk1 = static_cast<int>(W.rows());

  // Face projection of element-basis traces.
  const Eigen::MatrixXd TrF = F.psi.transpose() * F.quad.weights.asDiagonal() * fl.trace_phi;

  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(loc.kf, loc.n_scalar());
  d.block(0, loc.s_face(local_face, 0), loc.kf, loc.kf).setIdentity();
  d -= TrF.leftCols(nk1) * W;
  Eigen::MatrixXd elem_sel = Eigen::MatrixXd::Zero(nk, loc.n_scalar());
  elem_sel.leftCols(nk).setIdentity();
  d -= TrF.leftCols(nk) * (elem_sel - W.topRows(nk));
  return d;
}

struct LocalFieldValues {
  // Transport field at volume points (columns x,y) and per-face data.
  Eigen::MatrixXd vol;                    // nq x 2
  Eigen::MatrixXd dvol[2];                // derivative in dir b of each component, nq x 2
  std::vector<Eigen::MatrixXd> trace;     // element polynomial trace, nqF x 2
  std::vector<Eigen::MatrixXd> face;      // face polynomial, nqF x 2
};

LocalFieldValues evaluate_local_field(const FeSpace& space, int elem, const Eigen::VectorXd& w,
                                      bool with_derivs) {
  const ElementContext& T = space.element(elem);
  const LocalLayout loc = space.local_layout(elem);
  const int nk = loc.nk;
  LocalFieldValues out;
  out.vol.resize(T.quad.size(), 2);
  for (int c = 0; c < 2; ++c) {
    const Eigen::VectorXd wc = w.segment(loc.v_elem(c, 0), nk);
    out.vol.col(c) = T.phi.leftCols(nk) * wc;
    if (with_derivs)
      for (int b = 0; b < 2; ++b) {
        if (out.dvol[b].size() == 0) out.dvol[b].resize(T.quad.size(), 2);
        out.dvol[b].col(c) = T.dphi[b].leftCols(nk) * wc;
      }
  }
  out.trace.resize(loc.nfaces);
  out.face.resize(loc.nfaces);
  for (int j = 0; j < loc.nfaces; ++j) {
    const ElementContext::FaceLocal& fl = T.faces[j];
    const FaceContext& F = space.face(fl.face);
    out.trace[j].resize(F.quad.size(), 2);
    out.face[j].resize(F.quad.size(), 2);
    for (int c = 0; c < 2; ++c) {
      out.trace[j].col(c) = fl.trace_phi.leftCols(nk) * w.segment(loc.v_elem(c, 0), nk);
      out.face[j].col(c) = F.psi * w.segment(loc.v_face(j, c, 0), loc.kf);
    }
  }
  return out;
}

// Jump evaluation matrix on one face: rows are face quadrature points, columns
// scalar local DOFs; the value is (v_F - v_T) at the point.
Eigen::MatrixXd jump_matrix(const FeSpace& space, int elem, int local_face) {
  const ElementContext& T = space.element(elem);
  const LocalLayout loc = space.local_layout(elem);
  const ElementContext::FaceLocal& fl = T.faces[local_face];
  const FaceContext& F = space.face(fl.face);
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(F.quad.size(), loc.n_scalar());
  Z.leftCols(loc.nk) = -fl.trace_phi.leftCols(loc.nk);
  Z.block(0, loc.s_face(local_face, 0), F.quad.size(), loc.kf) = F.psi;
  return Z;
}

}  // namespace

OperatorPack build_operator_pack(const FeSpace& space, int elem) {
  const ElementContext& T = space.element(elem);
  const LocalLayout loc = space.local_layout(elem);

  OperatorPack pack;
  pack.elem = elem;
  auto R = scalar_gradient_blocks(space, elem, space.spec().k);
  pack.grad[0] = std::move(R[0]);
  pack.grad[1] = std::move(R[1]);
  pack.recon = scalar_reconstruction(space, elem);

  pack.face_residual.resize(loc.nfaces);
  pack.stab = Eigen::MatrixXd::Zero(loc.n_scalar(), loc.n_scalar());
  for (int j = 0; j < loc.nfaces; ++j) {
    pack.face_residual[j] = scalar_face_residual(space, elem, j, pack.recon);
    pack.stab += pack.face_residual[j].transpose() * pack.face_residual[j] / T.faces[j].h;
  }

  const Eigen::MatrixXd As =
      pack.grad[0].transpose() * pack.grad[0] + pack.grad[1].transpose() * pack.grad[1] + pack.stab;
  pack.viscous = expand_bilinear(As, loc);

  pack.divergence = Eigen::MatrixXd::Zero(loc.nk, loc.n_vector());
  for (int c = 0; c < 2; ++c) {
    const Eigen::MatrixXd Dc = scalar_divergence_block(space, elem, c);
    for (int s = 0; s < loc.n_scalar(); ++s) pack.divergence.col(loc.to_vector(s, c)) = Dc.col(s);
  }
  pack.coupling = -pack.divergence;
  return pack;
}

std::vector<OperatorPack> build_operator_packs(const FeSpace& space, Exec exec) {
  std::vector<OperatorPack> packs(space.mesh().n_elements());
  for_each_index(exec, space.mesh().n_elements(),
                 [&](std::ptrdiff_t e) { packs[e] = build_operator_pack(space, static_cast<int>(e)); });
  return packs;
}

Eigen::MatrixXd gradient_reconstruction(const FeSpace& space, int elem, int l) {
  if (l < 0) throw std::invalid_argument("gradient_reconstruction: negative degree");
  const int k = space.spec().k;
  const LocalLayout loc = space.local_layout(elem);
  const int nl = BasisSpec::dim_poly_2d(l);

  std::array<Eigen::MatrixXd, 2> R;
  if (l <= k + 1) {
    R = scalar_gradient_blocks(space, elem, l);
  } else {
    // Build a dedicated basis of degree l with quadrature able to integrate
    // its Gram matrix and the pairings against the degree-k data.
    const ElementContext& T = space.element(elem);
    const int qdeg = std::max(2 * l, l + k + 1);
    const QuadratureRule quad = element_quadrature(space.mesh(), elem, qdeg);
    const ElementBasis basis(T.centroid, T.diameter, l, quad);
    const Eigen::MatrixXd tau = basis.eval(quad.points);
    const Eigen::MatrixXd phi_k = T.basis.eval(quad.points).leftCols(loc.nk);
    Eigen::MatrixXd dphi_k[2] = {T.basis.eval_deriv(quad.points, 0).leftCols(loc.nk),
                                 T.basis.eval_deriv(quad.points, 1).leftCols(loc.nk)};

    for (int b = 0; b < 2; ++b) {
      R[b] = Eigen::MatrixXd::Zero(nl, loc.n_scalar());
      R[b].leftCols(loc.nk) = tau.transpose() * quad.weights.asDiagonal() * dphi_k[b];
    }
    for (int j = 0; j < loc.nfaces; ++j) {
      const ElementContext::FaceLocal& fl = space.element(elem).faces[j];
      const Face& F = space.mesh().face(fl.face);
      const QuadratureRule fq = face_quadrature(space.mesh().vertex(F.vertices[0]),
                                                space.mesh().vertex(F.vertices[1]), l + k + 1);
      const Eigen::MatrixXd tauF = basis.eval(fq.points);
      const Eigen::MatrixXd phiF = T.basis.eval(fq.points).leftCols(loc.nk);
      const Eigen::MatrixXd psiF = space.face(fl.face).basis.eval(fq.points);
      for (int b = 0; b < 2; ++b) {
        const Eigen::MatrixXd wtest = (fq.weights * fl.normal[b]).asDiagonal() * tauF;
        R[b].block(0, loc.s_face(j, 0), nl, loc.kf) += wtest.transpose() * psiF;
        R[b].leftCols(loc.nk) -= wtest.transpose() * phiF;
      }
    }
  }

  // Rows: tensor components (a,b) in order (0,0),(0,1),(1,0),(1,1); block
  // (a,b) reads component a of the velocity through R[b].
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(4 * nl, loc.n_vector());
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int s = 0; s < loc.n_scalar(); ++s)
        G.block((2 * a + b) * nl, loc.to_vector(s, a), nl, 1) = R[b].col(s);
  return G;
}

Eigen::MatrixXd velocity_reconstruction(const FeSpace& space, int elem) {
  const LocalLayout loc = space.local_layout(elem);
  return expand_rows_cols(scalar_reconstruction(space, elem), loc);
}

Eigen::MatrixXd divergence_reconstruction(const FeSpace& space, int elem) {
  const LocalLayout loc = space.local_layout(elem);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(loc.nk, loc.n_vector());
  for (int c = 0; c < 2; ++c) {
    const Eigen::MatrixXd Dc = scalar_divergence_block(space, elem, c);
    for (int s = 0; s < loc.n_scalar(); ++s) D.col(loc.to_vector(s, c)) = Dc.col(s);
  }
  return D;
}

Eigen::MatrixXd face_residual(const FeSpace& space, int elem, int local_face) {
  const LocalLayout loc = space.local_layout(elem);
  const Eigen::MatrixXd W = scalar_reconstruction(space, elem);
  return expand_rows_cols(scalar_face_residual(space, elem, local_face, W), loc);
}

Eigen::MatrixXd viscous_matrix(const FeSpace& space, int elem) {
  return build_operator_pack(space, elem).viscous;
}

Eigen::MatrixXd coupling_matrix(const FeSpace& space, int elem) {
  return -divergence_reconstruction(space, elem);
}

Eigen::MatrixXd convective_fixed_transport(const FeSpace& space, int elem,
                                           const Eigen::VectorXd& w_local, ConvectiveForm form,
                                           double eta) {
  if (eta < 0.0) throw std::invalid_argument("convective form: eta must be >= 0");
  const ElementContext& T = space.element(elem);
  const LocalLayout loc = space.local_layout(elem);
  const int nk = loc.nk;
  const LocalFieldValues w = evaluate_local_field(space, elem, w_local, false);

  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(loc.n_scalar(), loc.n_scalar());

  // Volume advection: C1[i,j] = (phi_j, grad phi_i . w_T).
  Eigen::MatrixXd C1 =
      T.dphi[0].leftCols(nk).transpose() *
          (T.quad.weights.cwiseProduct(w.vol.col(0))).asDiagonal() * T.phi.leftCols(nk) +
      T.dphi[1].leftCols(nk).transpose() *
          (T.quad.weights.cwiseProduct(w.vol.col(1))).asDiagonal() * T.phi.leftCols(nk);
  M.topLeftCorner(nk, nk) = 0.5 * (C1.transpose() - C1);

  for (int j = 0; j < loc.nfaces; ++j) {
    const ElementContext::FaceLocal& fl = T.faces[j];
    const FaceContext& F = space.face(fl.face);
    const Eigen::MatrixXd& transport = (form == ConvectiveForm::Hho) ? w.trace[j] : w.face[j];
    const Eigen::VectorXd wn = transport.col(0) * fl.normal.x() + transport.col(1) * fl.normal.y();
    const Eigen::MatrixXd F1 = fl.trace_phi.leftCols(nk).transpose() *
                               (F.quad.weights.cwiseProduct(wn)).asDiagonal() * F.psi;
    M.block(0, loc.s_face(j, 0), nk, loc.kf) += 0.5 * F1;
    M.block(loc.s_face(j, 0), 0, loc.kf, nk) -= 0.5 * F1.transpose();

    if (form == ConvectiveForm::Hdg && eta > 0.0) {
      const Eigen::MatrixXd Z = jump_matrix(space, elem, j);
      M += 0.5 * eta * Z.transpose() *
           (F.quad.weights.cwiseProduct(wn.cwiseAbs())).asDiagonal() * Z;
    }
  }
  return expand_bilinear(M, loc);
}

Eigen::MatrixXd convective_transport_jacobian(const FeSpace& space, int elem,
                                              const Eigen::VectorXd& u_local, ConvectiveForm form,
                                              double eta) {
  if (eta < 0.0) throw std::invalid_argument("convective form: eta must be >= 0");
  const ElementContext& T = space.element(elem);
  const LocalLayout loc = space.local_layout(elem);
  const int nk = loc.nk;
  const LocalFieldValues u = evaluate_local_field(space, elem, u_local, true);

  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(loc.n_vector(), loc.n_vector());
  for (int a = 0; a < 2; ++a) {
    for (int c = 0; c < 2; ++c) {
      // Volume terms: -1/2 (u_a, d_c(test) phi_j) + 1/2 (test, d_c(u_a) phi_j).
      Eigen::MatrixXd blk =
          -0.5 * T.dphi[c].leftCols(nk).transpose() *
              (T.quad.weights.cwiseProduct(u.vol.col(a))).asDiagonal() * T.phi.leftCols(nk) +
          0.5 * T.phi.leftCols(nk).transpose() *
              (T.quad.weights.cwiseProduct(u.dvol[c].col(a))).asDiagonal() * T.phi.leftCols(nk);
      for (int i = 0; i < nk; ++i)
        for (int jj = 0; jj < nk; ++jj)
          M(loc.v_elem(a, i), loc.v_elem(c, jj)) += blk(i, jj);
    }
  }

  for (int j = 0; j < loc.nfaces; ++j) {
    const ElementContext::FaceLocal& fl = T.faces[j];
    const FaceContext& F = space.face(fl.face);
    for (int a = 0; a < 2; ++a) {
      for (int c = 0; c < 2; ++c) {
        const Eigen::VectorXd uFa = F.quad.weights.cwiseProduct(u.face[j].col(a)) * fl.normal[c];
        const Eigen::VectorXd uTa = F.quad.weights.cwiseProduct(u.trace[j].col(a)) * fl.normal[c];
        if (form == ConvectiveForm::Hho) {
          // Transport columns are element DOFs of component c.
          const Eigen::MatrixXd t3 =
              0.5 * fl.trace_phi.leftCols(nk).transpose() * uFa.asDiagonal() * fl.trace_phi.leftCols(nk);
          const Eigen::MatrixXd t4 =
              -0.5 * F.psi.transpose() * uTa.asDiagonal() * fl.trace_phi.leftCols(nk);
          for (int i = 0; i < nk; ++i)
            for (int jj = 0; jj < nk; ++jj) M(loc.v_elem(a, i), loc.v_elem(c, jj)) += t3(i, jj);
          for (int i = 0; i < loc.kf; ++i)
            for (int jj = 0; jj < nk; ++jj) M(loc.v_face(j, a, i), loc.v_elem(c, jj)) += t4(i, jj);
        } else {
          // Transport columns are the face DOFs of component c.
          const Eigen::MatrixXd t3 =
              0.5 * fl.trace_phi.leftCols(nk).transpose() * uFa.asDiagonal() * F.psi;
          const Eigen::MatrixXd t4 = -0.5 * F.psi.transpose() * uTa.asDiagonal() * F.psi;
          for (int i = 0; i < nk; ++i)
            for (int jj = 0; jj < loc.kf; ++jj) M(loc.v_elem(a, i), loc.v_face(j, c, jj)) += t3(i, jj);
          for (int i = 0; i < loc.kf; ++i)
            for (int jj = 0; jj < loc.kf; ++jj) M(loc.v_face(j, a, i), loc.v_face(j, c, jj)) += t4(i, jj);
        }
      }
    }

    if (form == ConvectiveForm::Hdg && eta > 0.0) {
      // Derivative of |w_F . n| in the transport slot (a.e.), at w = u.
      const Eigen::VectorXd wn =
          u.face[j].col(0) * fl.normal.x() + u.face[j].col(1) * fl.normal.y();
      const Eigen::VectorXd sgn = wn.unaryExpr([](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); });
      const Eigen::MatrixXd Z = jump_matrix(space, elem, j);
      for (int a = 0; a < 2; ++a) {
        const Eigen::VectorXd jumpUa =
            u.face[j].col(a) - u.trace[j].col(a);
        for (int c = 0; c < 2; ++c) {
          const Eigen::VectorXd wq =
              0.5 * eta * F.quad.weights.cwiseProduct(jumpUa).cwiseProduct(sgn) * fl.normal[c];
          const Eigen::MatrixXd blk = Z.transpose() * wq.asDiagonal() * F.psi;
          for (int s = 0; s < loc.n_scalar(); ++s)
            for (int jj = 0; jj < loc.kf; ++jj)
              M(loc.to_vector(s, a), loc.v_face(j, c, jj)) += blk(s, jj);
        }
      }
    }
  }
  return M;
}

double convective_apply(const FeSpace& space, int elem, const Eigen::VectorXd& w,
                        const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  return v.dot(convective_fixed_transport(space, elem, w, ConvectiveForm::Hho) * u);
}

double hdg_convective_apply(const FeSpace& space, int elem, const Eigen::VectorXd& w,
                            const Eigen::VectorXd& u, const Eigen::VectorXd& v, double eta) {
  if (eta < 0.0) throw std::invalid_argument("hdg_convective_apply: eta must be >= 0");
  return v.dot(convective_fixed_transport(space, elem, w, ConvectiveForm::Hdg, eta) * u);
}

Eigen::MatrixXd convective_jacobian(const FeSpace& space, int elem, const Eigen::VectorXd& u,
                                    ConvectiveForm form, double eta) {
  return convective_fixed_transport(space, elem, u, form, eta) +
         convective_transport_jacobian(space, elem, u, form, eta);
}

}  // namespace hhons
