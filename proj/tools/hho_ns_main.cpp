#include <CLI11.hpp>
#include <cstdio>
#include <string>
#include <vector>

#include "hhons/bench.hpp"
#include "hhons/errors.hpp"

using namespace hhons;

namespace {

int run_case(const std::string& case_name, double nu, int degree, const std::string& mesh_kind,
             const std::vector<int>& refine, const std::string& form, double eta, double tol,
             const std::string& out_path, int threads) {
  if (case_name != "kovasznay")
    throw std::invalid_argument("unknown case '" + case_name + "' (available: kovasznay)");

  StudyConfig config;
  config.degree = degree;
  config.refinements = refine;
  config.solver.nu = nu;
  config.solver.tolerance = tol;
  config.solver.eta = eta;
  if (form == "hho")
    config.solver.form = ConvectiveForm::Hho;
  else if (form == "hdg")
    config.solver.form = ConvectiveForm::Hdg;
  else
    throw std::invalid_argument("unknown form '" + form + "' (hho|hdg)");

  if (mesh_kind == "cartesian")
    config.family = MeshFamily::Cartesian;
  else if (mesh_kind == "triangular")
    config.family = MeshFamily::Triangular;
  else if (mesh_kind.rfind("file:", 0) == 0) {
    config.family = MeshFamily::File;
    config.mesh_file = mesh_kind.substr(5);
  } else
    throw std::invalid_argument("unknown mesh '" + mesh_kind + "' (cartesian|triangular|file:PATH)");

  config.solver.exec = threads == 1 ? Exec::Serial : Exec::Parallel;

  const ExactSolution exact = kovasznay(nu);
  const StudyResult result = convergence_study(exact, config);

  std::printf("# case=%s nu=%g degree=%d mesh=%s form=%s eta=%g\n", case_name.c_str(), nu, degree,
              mesh_kind.c_str(), form.c_str(), eta);
  std::printf("%12s %14s %14s %14s %6s\n", "meshsize", "err_u", "err_l2_u", "err_p", "iters");
  for (const ConvergenceRow& r : result.rows)
    std::printf("%12.6f %14.6e %14.6e %14.6e %6d\n", r.meshsize, r.err_u, r.err_l2_u, r.err_p,
                r.iters);
  if (result.rows.size() >= 2)
    std::printf("# slopes (last three rows): err_u %.3f  err_l2_u %.3f  err_p %.3f\n",
                result.slope_u, result.slope_l2_u, result.slope_p);

  if (!out_path.empty()) {
    write_csv(out_path, result.rows);
    std::printf("# wrote %s\n", out_path.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid high-order solver for the steady incompressible Navier-Stokes equations"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "solve a benchmark case over a mesh refinement list");
  std::string case_name = "kovasznay";
  double nu = 1.0;
  int degree = 2;
  std::string mesh_kind = "cartesian";
  std::vector<int> refine = {4, 8, 16, 32};
  std::string form = "hho";
  double eta = 0.0;
  double tol = 1e-10;
  std::string out_path;
  int threads = 0;

  run->add_option("--case", case_name, "benchmark case (kovasznay)");
  run->add_option("--nu", nu, "kinematic viscosity")->check(CLI::PositiveNumber);
  run->add_option("--degree", degree, "polynomial degree k >= 0")->check(CLI::NonNegativeNumber);
  run->add_option("--mesh", mesh_kind, "cartesian | triangular | file:PATH");
  run->add_option("--refine", refine, "refinement list, e.g. 4,8,16,32")->delimiter(',');
  run->add_option("--form", form, "convective form: hho | hdg");
  run->add_option("--eta", eta, "jump penalty for the hdg form (>= 0)");
  run->add_option("--tol", tol, "relative nonlinear tolerance")->check(CLI::PositiveNumber);
  run->add_option("--out", out_path, "CSV output path");
  run->add_option("--threads", threads, "1 = serial reference kernels; otherwise OpenMP");

  try {
    app.parse(argc, argv);
    return run_case(case_name, nu, degree, mesh_kind, refine, form, eta, tol, out_path, threads);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  } catch (const SolverDivergence& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const MeshError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const CapabilityError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
