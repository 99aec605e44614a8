#include "hhons/bench.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace hhons {

ConvergenceRow compute_errors(const FeSpace& space, const Solution& sol,
                              const ExactSolution& exact) {
  ConvergenceRow row;
  row.meshsize = space.mesh().meshsize();
  row.iters = sol.report.iterations;

  const HybridVelocity u_hat = interpolate(space, exact.velocity);
  HybridVelocity diff(space.field_layout());
  diff.coeffs = sol.u.coeffs - u_hat.coeffs;
  row.err_u = norm_1h(space, diff);
  row.err_l2_u = norm_l2_elements(space, diff);

  const FieldLayout& layout = space.field_layout();
  PressureField p_hat(layout);
  for (int e = 0; e < layout.n_elems; ++e)
    p_hat.coeffs.segment(static_cast<long>(layout.nk) * e, layout.nk) =
        l2_project_element(space, e, exact.pressure, space.spec().k);
  make_zero_mean(space, p_hat);
  PressureField p_num = sol.p;
  make_zero_mean(space, p_num);
  row.err_p = (p_num.coeffs - p_hat.coeffs).norm();
  return row;
}

double fit_slope(const std::vector<double>& h, const std::vector<double>& err, int last_n) {
  const int n = static_cast<int>(h.size());
  const int m = std::min(last_n, n);
  if (m < 2) throw std::invalid_argument("fit_slope: need at least two rows");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = n - m; i < n; ++i) {
    const double x = std::log(h[i]);
    const double y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

StudyResult convergence_study(const ExactSolution& exact, const StudyConfig& config) {
  if (config.refinements.empty())
    throw std::invalid_argument("convergence_study: empty refinement list");

  StudyResult out;
  std::vector<double> hs, eu, el2, ep;

  for (int n : config.refinements) {
    Mesh mesh;
    switch (config.family) {
      case MeshFamily::Cartesian:
        mesh = generate_cartesian(n, n, config.bbox);
        break;
      case MeshFamily::Triangular:
        mesh = generate_triangular(n, n, config.bbox);
        break;
      case MeshFamily::File:
        mesh = read_polymesh(config.mesh_file);
        break;
    }

    const FeSpace space(mesh, BasisSpec(config.degree), config.solver.exec);
    const std::vector<OperatorPack> packs = build_operator_packs(space, config.solver.exec);
    const Solution sol =
        config.stokes_only
            ? solve_stokes(space, packs, config.solver, exact.forcing, exact.velocity)
            : solve_navier_stokes(space, packs, config.solver, exact.forcing, exact.velocity);

    const ConvergenceRow row = compute_errors(space, sol, exact);
    out.rows.push_back(row);
    hs.push_back(row.meshsize);
    eu.push_back(row.err_u);
    el2.push_back(row.err_l2_u);
    ep.push_back(row.err_p);

    if (config.family == MeshFamily::File) break;  // a file is a single level
  }

  if (out.rows.size() >= 2) {
    out.slope_u = fit_slope(hs, eu, 3);
    out.slope_l2_u = fit_slope(hs, el2, 3);
    out.slope_p = fit_slope(hs, ep, 3);
  }
  return out;
}

void write_csv(const std::string& path, const std::vector<ConvergenceRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("write_csv: cannot open '" + path + "'");
  out << "meshsize,err_u,err_l2_u,err_p,iters\n";
  out.precision(12);
  for (const ConvergenceRow& r : rows)
    out << r.meshsize << ',' << r.err_u << ',' << r.err_l2_u << ',' << r.err_p << ',' << r.iters
        << '\n';
}

}  // namespace hhons
