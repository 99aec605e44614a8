#ifndef HHONS_ASSEMBLY_HPP
#define HHONS_ASSEMBLY_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

#include "hhons/dofs.hpp"
#include "hhons/fespace.hpp"
#include "hhons/local_ops.hpp"

namespace hhons {

struct AssemblyOptions {
  double nu = 1.0;
  bool convection = true;
  ConvectiveForm form = ConvectiveForm::Hho;
  double eta = 0.0;
};

/// Newton-linearized saddle-point system at the current state, kept as
/// per-element dense blocks over [velocity DOFs; pressure DOFs] plus the
/// zero-mean multiplier coupling. Dirichlet face DOFs are dropped when the
/// blocks are scattered; their data enters through the residual.
struct LinearizedSystem {
  const FeSpace* space = nullptr;
  const DofMap* dofs = nullptr;
  std::vector<Eigen::MatrixXd> local_matrix;
  std::vector<Eigen::VectorXd> local_residual;
  std::vector<double> mean_weight;  // integral of the mean pressure basis function
  double constraint_residual = 0.0;
};

/// State of one nonlinear iterate.
struct State {
  HybridVelocity u;
  PressureField p;
  double lambda = 0.0;
};

LinearizedSystem assemble_linearized(const FeSpace& space, const std::vector<OperatorPack>& packs,
                                     const DofMap& dofs, const State& state, const VectorField& f,
                                     const AssemblyOptions& opts, Exec exec = Exec::Parallel);

/// Assembled sparse form of the full (uncondensed) system; rhs is the negated
/// residual, so solving yields the Newton increment.
struct SparseSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
};

SparseSystem to_full_sparse(const LinearizedSystem& sys);

/// Residual vector over the solver unknowns (face contributions summed).
Eigen::VectorXd scatter_residual(const LinearizedSystem& sys);

/// Euclidean norm of the nonlinear residual. Unlike the condensed residual,
/// this is a fixed functional of the state, so a damped Newton step always
/// reduces it for small enough steps.
double residual_norm(const LinearizedSystem& sys);

/// Schur complement onto interior-face velocities, element pressure means and
/// the multiplier, with per-element recovery data.
struct CondensedSystem {
  const DofMap* dofs = nullptr;
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;  // negated condensed residual
  // delta_x = recover_shift[e] - recover_map[e] * delta_y.
  std::vector<Eigen::MatrixXd> recover_map;
  std::vector<Eigen::VectorXd> recover_shift;
  std::vector<std::vector<long>> kept_indices;  // condensed indices of y per element

  double residual_norm() const { return rhs.norm(); }
};

CondensedSystem static_condense(const LinearizedSystem& sys, Exec exec = Exec::Parallel);

/// Newton increment produced by either solve path.
struct Correction {
  HybridVelocity du;
  PressureField dp;
  double dlambda = 0.0;
};

/// Back-substitute the condensed solution into element blocks.
Correction recover_local(const CondensedSystem& cond, const Eigen::VectorXd& y,
                         const FeSpace& space, Exec exec = Exec::Parallel);

/// Direct solve of the uncondensed sparse system, mapped to the same
/// Correction layout. Reference path for condensation checks.
Correction solve_full(const LinearizedSystem& sys, const FeSpace& space);

/// Fill the Dirichlet face blocks of u with the face projections of g.
void set_boundary_data(const FeSpace& space, const VectorField& g, HybridVelocity& u);

/// Bilinear/trilinear form evaluations at a state (diagnostics and tests).
double viscous_energy(const FeSpace& space, const std::vector<OperatorPack>& packs,
                      const HybridVelocity& u);
double load_inner_product(const FeSpace& space, const VectorField& f, const HybridVelocity& u);
double mass_equation_residual(const FeSpace& space, const std::vector<OperatorPack>& packs,
                              const HybridVelocity& u);

}  // namespace hhons

#endif
