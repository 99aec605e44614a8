// Compares the serial reference kernels against the OpenMP ones on the three
// element-parallel phases (operator packs, assembly, condensation) and checks
// that both produce identical output.
#include <chrono>
#include <cstdio>

#include "hhons/assembly.hpp"
#include "hhons/exact_solution.hpp"

using namespace hhons;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

struct PhaseTimes {
  double packs = 0.0;
  double assemble = 0.0;
  double condense = 0.0;
};

PhaseTimes run(const Mesh& mesh, const BasisSpec& spec, Exec exec, int reps,
               LinearizedSystem* sys_out, CondensedSystem* cond_out) {
  const ExactSolution exact = kovasznay(1.0);
  PhaseTimes times;

  const FeSpace space(mesh, spec, exec);
  const DofMap dofs(mesh, spec);

  auto t0 = clock_type::now();
  std::vector<OperatorPack> packs;
  for (int r = 0; r < reps; ++r) packs = build_operator_packs(space, exec);
  times.packs = seconds_since(t0) / reps;

  State state;
  state.u = interpolate(space, exact.velocity, exec);
  state.p = PressureField(space.field_layout());

  t0 = clock_type::now();
  LinearizedSystem sys;
  for (int r = 0; r < reps; ++r)
    sys = assemble_linearized(space, packs, dofs, state, exact.forcing,
                              {1.0, true, ConvectiveForm::Hho, 0.0}, exec);
  times.assemble = seconds_since(t0) / reps;

  t0 = clock_type::now();
  CondensedSystem cond;
  for (int r = 0; r < reps; ++r) cond = static_condense(sys, exec);
  times.condense = seconds_since(t0) / reps;

  if (sys_out) *sys_out = std::move(sys);
  if (cond_out) *cond_out = std::move(cond);
  return times;
}

}  // namespace

int main(int argc, char** argv) {
  int n = 32;
  int degree = 2;
  int reps = 3;
  if (argc > 1) n = std::atoi(argv[1]);
  if (argc > 2) degree = std::atoi(argv[2]);
  if (argc > 3) reps = std::atoi(argv[3]);

  const Mesh mesh = generate_cartesian(n, n, {-0.5, 0.0, 1.5, 2.0});
  const BasisSpec spec(degree);
  std::printf("mesh %dx%d, degree %d, %d elements, %d reps\n", n, n, degree, mesh.n_elements(),
              reps);

  LinearizedSystem sys_s, sys_p;
  CondensedSystem cond_s, cond_p;
  const PhaseTimes serial = run(mesh, spec, Exec::Serial, reps, &sys_s, &cond_s);
  const PhaseTimes parallel = run(mesh, spec, Exec::Parallel, reps, &sys_p, &cond_p);

  std::printf("%-12s %12s %12s %9s\n", "phase", "serial [s]", "openmp [s]", "speedup");
  std::printf("%-12s %12.4f %12.4f %8.2fx\n", "packs", serial.packs, parallel.packs,
              serial.packs / parallel.packs);
  std::printf("%-12s %12.4f %12.4f %8.2fx\n", "assemble", serial.assemble, parallel.assemble,
              serial.assemble / parallel.assemble);
  std::printf("%-12s %12.4f %12.4f %8.2fx\n", "condense", serial.condense, parallel.condense,
              serial.condense / parallel.condense);

  double dmat = 0.0, dres = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    dmat = std::max(dmat, (sys_s.local_matrix[e] - sys_p.local_matrix[e]).cwiseAbs().maxCoeff());
    dres = std::max(dres, (sys_s.local_residual[e] - sys_p.local_residual[e]).cwiseAbs().maxCoeff());
  }
  const double dcond = (cond_s.rhs - cond_p.rhs).cwiseAbs().maxCoeff();
  std::printf("max differences: local matrices %.1e, residuals %.1e, condensed rhs %.1e\n", dmat,
              dres, dcond);
  return (dmat == 0.0 && dres == 0.0 && dcond == 0.0) ? 0 : 1;
}
