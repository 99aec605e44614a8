#include "hhons/solver.hpp"

#include <Eigen/SparseLU>
#include <cmath>

namespace hhons {

namespace {

Eigen::VectorXd sparse_solve(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b) {
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("linear solver: sparse factorization failed");
  Eigen::VectorXd x = lu.solve(b);
  if (!x.allFinite()) throw std::runtime_error("linear solver: solution is not finite");
  return x;
}

void apply_correction(State& state, const Correction& corr, double alpha) {
  state.u.coeffs += alpha * corr.du.coeffs;
  state.p.coeffs += alpha * corr.dp.coeffs;
  state.lambda += alpha * corr.dlambda;
}

void finalize_report(const FeSpace& space, const std::vector<OperatorPack>& packs,
                     const SolverConfig& config, const VectorField& f, Solution& sol) {
  sol.report.velocity_norm_1h = norm_1h(space, sol.u);
  sol.report.pressure_l2 = pressure_l2(space, sol.p);
  sol.report.energy_defect = std::abs(config.nu * viscous_energy(space, packs, sol.u) -
                                      load_inner_product(space, f, sol.u));
}

}  // namespace

Solution solve_stokes(const FeSpace& space, const std::vector<OperatorPack>& packs,
                      const SolverConfig& config, const VectorField& f, const VectorField& g) {
  if (!(config.nu > 0.0)) throw std::invalid_argument("solve_stokes: viscosity must be > 0");
  const DofMap dofs(space.mesh(), space.spec());

  Solution sol;
  sol.u = HybridVelocity(space.field_layout());
  sol.p = PressureField(space.field_layout());
  set_boundary_data(space, g, sol.u);

  const AssemblyOptions opts{config.nu, false, config.form, config.eta};
  State state{sol.u, sol.p, 0.0};
  LinearizedSystem sys = assemble_linearized(space, packs, dofs, state, f, opts, config.exec);
  CondensedSystem cond = static_condense(sys, config.exec);

  const double initial = residual_norm(sys);
  const double scale = initial > 0.0 ? initial : 1.0;
  sol.report.residual_scale = scale;
  sol.report.residual_history.push_back(initial / scale);

  const Eigen::VectorXd y = sparse_solve(cond.matrix, cond.rhs);
  const Correction corr = recover_local(cond, y, space, config.exec);
  apply_correction(state, corr, 1.0);

  // The problem is linear, so one step lands on the solution; re-assemble to
  // report the verified residual.
  sys = assemble_linearized(space, packs, dofs, state, f, opts, config.exec);
  sol.report.residual_history.push_back(residual_norm(sys) / scale);
  sol.report.iterations = 1;
  sol.report.converged = sol.report.residual_history.back() < 1e-8;

  sol.u = std::move(state.u);
  sol.p = std::move(state.p);
  sol.lambda = state.lambda;
  finalize_report(space, packs, config, f, sol);
  return sol;
}

namespace {

struct NewtonOutcome {
  bool converged = false;
  double residual = 0.0;
  int steps = 0;
  std::vector<double> history;
};

// Damped Newton on the nonlinear system with fixed data; halves the step until
// the residual decreases, and stops on stagnation.
NewtonOutcome newton_iterate(const FeSpace& space, const std::vector<OperatorPack>& packs,
                             const DofMap& dofs, State& state, const VectorField& f,
                             const AssemblyOptions& opts, const SolverConfig& config,
                             double scale) {
  NewtonOutcome out;
  LinearizedSystem sys = assemble_linearized(space, packs, dofs, state, f, opts, config.exec);
  out.residual = residual_norm(sys) / scale;
  out.history.push_back(out.residual);

  for (int it = 0; it < config.max_iterations && out.residual >= config.tolerance; ++it) {
    const CondensedSystem cond = static_condense(sys, config.exec);
    const Eigen::VectorXd y = sparse_solve(cond.matrix, cond.rhs);
    const Correction corr = recover_local(cond, y, space, config.exec);

    bool accepted = false;
    double alpha = 1.0;
    for (int bt = 0; bt <= config.max_backtracks; ++bt) {
      State trial = state;
      apply_correction(trial, corr, alpha);
      LinearizedSystem tsys = assemble_linearized(space, packs, dofs, trial, f, opts, config.exec);
      const double tres = residual_norm(tsys) / scale;
      if (tres < out.residual || tres < config.tolerance) {
        state = std::move(trial);
        sys = std::move(tsys);
        out.residual = tres;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) return out;  // stagnation

    ++out.steps;
    out.history.push_back(out.residual);
  }
  out.converged = out.residual < config.tolerance;
  return out;
}

}  // namespace

Solution solve_navier_stokes(const FeSpace& space, const std::vector<OperatorPack>& packs,
                             const SolverConfig& config, const VectorField& f,
                             const VectorField& g) {
  if (!(config.nu > 0.0)) throw std::invalid_argument("solve_navier_stokes: viscosity must be > 0");
  const DofMap dofs(space.mesh(), space.spec());

  const Solution stokes = solve_stokes(space, packs, config, f, g);
  const double scale = stokes.report.residual_scale;

  State state{stokes.u, stokes.p, stokes.lambda};
  const AssemblyOptions opts{config.nu, true, config.form, config.eta};

  Solution sol;
  sol.report.residual_scale = scale;

  NewtonOutcome out = newton_iterate(space, packs, dofs, state, f, opts, config, scale);
  int total_steps = out.steps;

  if (!out.converged) {
    // Under-resolved large-data cases can push the Stokes guess outside the
    // Newton basin. Re-walk the solution branch by load stepping: solve with
    // ramped data theta * (f, g), each stage warm-starting the next.
    State ramp{stokes.u, stokes.p, stokes.lambda};

    bool ramp_ok = true;
    for (const double theta : {0.25, 0.5, 0.75, 1.0}) {
      const VectorField f_theta = [&f, theta](const Eigen::Vector2d& x) {
        return (theta * f(x)).eval();
      };
      const VectorField g_theta = [&g, theta](const Eigen::Vector2d& x) {
        return (theta * g(x)).eval();
      };
      set_boundary_data(space, g_theta, ramp.u);
      out = newton_iterate(space, packs, dofs, ramp, f_theta, opts, config, scale);
      total_steps += out.steps;
      if (!out.converged) {
        ramp_ok = false;
        break;
      }
    }
    if (ramp_ok) state = std::move(ramp);
  }

  sol.report.iterations = total_steps;
  sol.report.residual_history = out.history;
  sol.report.converged = out.converged;
  sol.u = std::move(state.u);
  sol.p = std::move(state.p);
  sol.lambda = state.lambda;
  finalize_report(space, packs, config, f, sol);

  if (!sol.report.converged)
    throw SolverDivergence("Newton iteration did not converge (relative residual " +
                               std::to_string(out.residual) + " after " +
                               std::to_string(total_steps) + " steps)",
                           sol.report);
  return sol;
}

AprioriDiagnostics apriori_check(const FeSpace& space, const Solution& sol,
                                 const SolverConfig& config, const VectorField& f) {
  AprioriDiagnostics d;
  double f2 = 0.0;
  for (int e = 0; e < space.mesh().n_elements(); ++e) {
    const ElementContext& T = space.element(e);
    for (int q = 0; q < T.quad.size(); ++q)
      f2 += T.quad.weights[q] * f(Eigen::Vector2d(T.quad.points.row(q))).squaredNorm();
  }
  d.f_l2 = std::sqrt(f2);
  d.velocity_norm = norm_1h(space, sol.u);
  d.pressure_norm = pressure_l2(space, sol.p);
  if (d.f_l2 > 0.0) {
    d.velocity_ratio = config.nu * d.velocity_norm / d.f_l2;
    d.pressure_ratio = d.pressure_norm / (d.f_l2 + d.f_l2 * d.f_l2 / (config.nu * config.nu));
  }
  return d;
}

}  // namespace hhons
