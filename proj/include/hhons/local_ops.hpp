#ifndef HHONS_LOCAL_OPS_HPP
#define HHONS_LOCAL_OPS_HPP

#include <Eigen/Dense>
#include <vector>

#include "hhons/fespace.hpp"

namespace hhons {

/// Which trilinear convective form drives the momentum equation: the
/// gradient-reconstruction based one, or the variant with face transport and
/// an optional jump penalty.
enum class ConvectiveForm { Hho, Hdg };

/// Per-element matrices of the scheme, all acting on the LocalLayout DOF
/// ordering. Scalar operators apply component-wise; `viscous`, `divergence`
/// and `coupling` act on the full vector DOF set.
struct OperatorPack {
  int elem = -1;
  Eigen::MatrixXd grad[2];        // scalar gradient blocks, dim P^k x n_scalar
  Eigen::MatrixXd recon;          // scalar potential reconstruction, dim P^{k+1} x n_scalar
  std::vector<Eigen::MatrixXd> face_residual;  // per face, (k+1) x n_scalar
  Eigen::MatrixXd stab;           // scalar penalty matrix, n_scalar x n_scalar
  Eigen::MatrixXd viscous;        // vector form matrix, n_vector x n_vector
  Eigen::MatrixXd divergence;     // dim P^k x n_vector
  Eigen::MatrixXd coupling;       // -divergence
};

OperatorPack build_operator_pack(const FeSpace& space, int elem);
std::vector<OperatorPack> build_operator_packs(const FeSpace& space, Exec exec = Exec::Parallel);

/// Gradient reconstruction into P^l(T)^{2x2}, returned as a (4 dim P^l) x
/// n_vector matrix; row blocks are the (0,0),(0,1),(1,0),(1,1) tensor
/// components. Degrees above k+1 build a temporary basis.
Eigen::MatrixXd gradient_reconstruction(const FeSpace& space, int elem, int l);

/// Potential reconstruction into P^{k+1}(T)^2 with the element-mean closure,
/// returned as (2 dim P^{k+1}) x n_vector.
Eigen::MatrixXd velocity_reconstruction(const FeSpace& space, int elem);

/// Divergence reconstruction into P^k(T), dim P^k x n_vector.
Eigen::MatrixXd divergence_reconstruction(const FeSpace& space, int elem);

/// Face residual of one local face, (2(k+1)) x n_vector.
Eigen::MatrixXd face_residual(const FeSpace& space, int elem, int local_face);

/// Viscous bilinear form matrix (consistency plus penalty), symmetric PSD.
Eigen::MatrixXd viscous_matrix(const FeSpace& space, int elem);

/// Velocity-pressure coupling: q^T C v = -integral of (div reconstruction of
/// v) against q; dim P^k x n_vector.
Eigen::MatrixXd coupling_matrix(const FeSpace& space, int elem);

/// Matrix of the trilinear form with the transport field frozen:
/// v^T M u = t_T(w, u, v). Antisymmetric for the jump-free forms.
Eigen::MatrixXd convective_fixed_transport(const FeSpace& space, int elem,
                                           const Eigen::VectorXd& w_local,
                                           ConvectiveForm form = ConvectiveForm::Hho,
                                           double eta = 0.0);

/// Matrix of the transport-slot derivative: v^T M w = t_T(w, u, v).
Eigen::MatrixXd convective_transport_jacobian(const FeSpace& space, int elem,
                                              const Eigen::VectorXd& u_local,
                                              ConvectiveForm form = ConvectiveForm::Hho,
                                              double eta = 0.0);

/// t_T(w, u, v) for one element.
double convective_apply(const FeSpace& space, int elem, const Eigen::VectorXd& w,
                        const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// Variant with face-based transport and jump penalty eta >= 0.
double hdg_convective_apply(const FeSpace& space, int elem, const Eigen::VectorXd& w,
                            const Eigen::VectorXd& u, const Eigen::VectorXd& v, double eta);

/// Newton matrix of u -> t_T(u, u, .) at the current state.
Eigen::MatrixXd convective_jacobian(const FeSpace& space, int elem, const Eigen::VectorXd& u,
                                    ConvectiveForm form = ConvectiveForm::Hho, double eta = 0.0);

}  // namespace hhons

#endif
