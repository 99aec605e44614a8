#ifndef HHONS_BENCH_HPP
#define HHONS_BENCH_HPP

#include <string>
#include <vector>

#include "hhons/exact_solution.hpp"
#include "hhons/solver.hpp"

namespace hhons {

/// One refinement level of a convergence study. Errors compare against the
/// interpolate/projection of the exact fields, matching the quantities the
/// estimates control: err_u in the discrete H1 seminorm, err_l2_u and err_p
/// in L2 (pressures normalized to zero mean first).
struct ConvergenceRow {
  double meshsize = 0.0;
  double err_u = 0.0;
  double err_l2_u = 0.0;
  double err_p = 0.0;
  int iters = 0;
};

ConvergenceRow compute_errors(const FeSpace& space, const Solution& sol,
                              const ExactSolution& exact);

enum class MeshFamily { Cartesian, Triangular, File };

struct StudyConfig {
  int degree = 2;
  MeshFamily family = MeshFamily::Cartesian;
  std::vector<int> refinements = {4, 8, 16, 32};
  Rect bbox{-0.5, 0.0, 1.5, 2.0};
  std::string mesh_file;  // used when family == File
  SolverConfig solver;
  bool stokes_only = false;
};

struct StudyResult {
  std::vector<ConvergenceRow> rows;
  // Least-squares slopes of log(err) vs log(h) over the last (up to) three
  // rows, for err_u / err_l2_u / err_p.
  double slope_u = 0.0;
  double slope_l2_u = 0.0;
  double slope_p = 0.0;
};

StudyResult convergence_study(const ExactSolution& exact, const StudyConfig& config);

/// Least-squares slope of log(err) against log(h) over the last n rows.
double fit_slope(const std::vector<double>& h, const std::vector<double>& err, int last_n);

/// Columns: meshsize,err_u,err_l2_u,err_p,iters
void write_csv(const std::string& path, const std::vector<ConvergenceRow>& rows);

}  // namespace hhons

#endif
