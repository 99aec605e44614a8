#ifndef HHONS_SOLVER_HPP
#define HHONS_SOLVER_HPP

#include <stdexcept>
#include <vector>

#include "hhons/assembly.hpp"

namespace hhons {

struct SolverConfig {
  double nu = 1.0;
  double tolerance = 1e-10;  // relative nonlinear residual
  int max_iterations = 25;
  int max_backtracks = 5;
  ConvectiveForm form = ConvectiveForm::Hho;
  double eta = 0.0;
  Exec exec = Exec::Parallel;
};

struct SolveReport {
  int iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;  // relative condensed residual per check
  double residual_scale = 1.0;
  double velocity_norm_1h = 0.0;
  double pressure_l2 = 0.0;
  double energy_defect = 0.0;  // |nu a_h(u,u) - (f, u)|, meaningful for zero BC
};

struct Solution {
  HybridVelocity u;
  PressureField p;
  double lambda = 0.0;
  SolveReport report;
};

/// Newton iteration failed to reduce the residual below tolerance.
class SolverDivergence : public std::runtime_error {
 public:
  SolverDivergence(const std::string& what, SolveReport report)
      : std::runtime_error(what), m_report(std::move(report)) {}
  const SolveReport& report() const { return m_report; }

 private:
  SolveReport m_report;
};

/// Linear Stokes solve (no convective term) with Dirichlet data g.
Solution solve_stokes(const FeSpace& space, const std::vector<OperatorPack>& packs,
                      const SolverConfig& config, const VectorField& f, const VectorField& g);

/// Newton iteration on the full nonlinear problem, started from the Stokes
/// solution. Throws SolverDivergence (carrying the report) on failure.
Solution solve_navier_stokes(const FeSpace& space, const std::vector<OperatorPack>& packs,
                             const SolverConfig& config, const VectorField& f,
                             const VectorField& g);

/// Scale-invariant ratios mirroring the discrete a priori velocity and
/// pressure bounds; reported, never asserted.
struct AprioriDiagnostics {
  double f_l2 = 0.0;
  double velocity_norm = 0.0;
  double pressure_norm = 0.0;
  double velocity_ratio = 0.0;  // nu |u|_{1,h} / |f|_{L2}
  double pressure_ratio = 0.0;  // |p| / (|f| + nu^-2 |f|^2)
};

AprioriDiagnostics apriori_check(const FeSpace& space, const Solution& sol,
                                 const SolverConfig& config, const VectorField& f);

}  // namespace hhons

#endif
