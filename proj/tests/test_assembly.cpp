#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hhons/assembly.hpp"
#include "hhons/errors.hpp"
#include "oracles.hpp"

using namespace hhons;

namespace {

VectorField zero_field() {
  return [](const Eigen::Vector2d&) { return Eigen::Vector2d::Zero().eval(); };
}

State zero_state(const FeSpace& space) {
  State s;
  s.u = HybridVelocity(space.field_layout());
  s.p = PressureField(space.field_layout());
  return s;
}

}  // namespace

TEST_CASE("dofmap dimensions") {
  // 2x2 grid at k = 1: four interior faces.
  {
    const Mesh mesh = generate_cartesian(2, 2, {0, 0, 1, 1});
    const DofMap dofs(mesh, BasisSpec(1));
    CHECK(dofs.condensed_dim() == 2 * 4 * 2 + 4 + 1);  // 21
    CHECK(dofs.field_layout().n_velocity() == 2 * (4 * 3 + 12 * 2));
    CHECK(dofs.n_total() == 2 * 4 * 3 + 2 * 4 * 2 + 4 * 3 + 1);
  }
  // Single cell at k = 0: no interior faces, mean + multiplier remain.
  {
    const Mesh mesh = generate_cartesian(1, 1, {0, 0, 1, 1});
    const DofMap dofs(mesh, BasisSpec(0));
    CHECK(dofs.condensed_dim() == 2);
    CHECK(dofs.n_internal_faces() == 0);
  }
  // Face block size at k = 3.
  {
    const Mesh mesh = generate_cartesian(2, 1, {0, 0, 1, 1});
    const DofMap dofs(mesh, BasisSpec(3));
    CHECK(2 * dofs.kf() == 8);
  }
}

TEST_CASE("zero data gives zero residual") {
  const Mesh mesh = generate_cartesian(2, 2, {0, 0, 1, 1});
  const FeSpace space(mesh, BasisSpec(1), Exec::Serial);
  const DofMap dofs(mesh, space.spec());
  const auto packs = build_operator_packs(space, Exec::Serial);

  const LinearizedSystem sys = assemble_linearized(space, packs, dofs, zero_state(space),
                                                   zero_field(), {1.0, true}, Exec::Serial);
  for (const Eigen::VectorXd& r : sys.local_residual) CHECK(r.cwiseAbs().maxCoeff() == 0.0);
  CHECK(sys.constraint_residual == 0.0);
}

TEST_CASE("viscous block of the Stokes matrix is symmetric") {
  const Mesh mesh = generate_triangular(2, 2, {0, 0, 1, 1});
  const FeSpace space(mesh, BasisSpec(2), Exec::Serial);
  const DofMap dofs(mesh, space.spec());
  const auto packs = build_operator_packs(space, Exec::Serial);
  const LinearizedSystem sys = assemble_linearized(space, packs, dofs, zero_state(space),
                                                   zero_field(), {0.7, false}, Exec::Serial);
  const SparseSystem full = to_full_sparse(sys);
  const Eigen::MatrixXd dense = Eigen::MatrixXd(full.matrix);
  CHECK((dense - dense.transpose()).cwiseAbs().maxCoeff() <
        1e-12 * dense.cwiseAbs().maxCoeff());
}

TEST_CASE("condensed solve and recovery match the full solve") {
  // Stokes problem with a manufactured load on a 2x2 grid.
  auto f = [](const Eigen::Vector2d& p) {
    return Eigen::Vector2d(std::sin(M_PI * p.y()), std::cos(M_PI * p.x()));
  };
  auto g = [](const Eigen::Vector2d& p) {
    return Eigen::Vector2d(p.y() * (1 - p.y()), 0.0);
  };

  for (int k = 0; k <= 2; ++k) {
    const Mesh mesh = generate_cartesian(2, 2, {0, 0, 1, 1});
    const FeSpace space(mesh, BasisSpec(k), Exec::Serial);
    const DofMap dofs(mesh, space.spec());
    const auto packs = build_operator_packs(space, Exec::Serial);

    State state = zero_state(space);
    set_boundary_data(space, g, state.u);

    const LinearizedSystem sys =
        assemble_linearized(space, packs, dofs, state, f, {1.0, false}, Exec::Serial);

    const CondensedSystem cond = static_condense(sys, Exec::Serial);
    CHECK(cond.matrix.rows() == dofs.condensed_dim());

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(cond.matrix);
    REQUIRE(lu.info() == Eigen::Success);
    const Correction via_cond = recover_local(cond, lu.solve(cond.rhs).eval(), space, Exec::Serial);

    const Correction via_full = solve_full(sys, space);

    const double unorm = via_full.du.coeffs.norm();
    CHECK((via_cond.du.coeffs - via_full.du.coeffs).norm() < 1e-9 * unorm);
    CHECK((via_cond.dp.coeffs - via_full.dp.coeffs).norm() <
          1e-9 * (1.0 + via_full.dp.coeffs.norm()));
    CHECK(via_cond.dlambda == doctest::Approx(via_full.dlambda).epsilon(1e-9));
  }
}

TEST_CASE("single element: condensed system is the mean-multiplier block") {
  const Mesh mesh = generate_cartesian(1, 1, {0, 0, 1, 1});
  const FeSpace space(mesh, BasisSpec(0), Exec::Serial);
  const DofMap dofs(mesh, space.spec());
  const auto packs = build_operator_packs(space, Exec::Serial);

  const LinearizedSystem sys = assemble_linearized(space, packs, dofs, zero_state(space),
                                                   zero_field(), {1.0, false}, Exec::Serial);
  const CondensedSystem cond = static_condense(sys, Exec::Serial);
  REQUIRE(cond.matrix.rows() == 2);
  const Eigen::MatrixXd dense = Eigen::MatrixXd(cond.matrix);
  // Antidiagonal coupling (mean, multiplier); the diagonal is empty because
  // k = 0 pressure does not couple to element velocities.
  CHECK(std::abs(dense(0, 1)) > 0.5);
  CHECK(dense(0, 1) == doctest::Approx(dense(1, 0)).epsilon(1e-14));
  CHECK(std::abs(dense(0, 0)) < 1e-14);

  // Zero data: zero condensed solution recovers zero fields.
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(cond.matrix);
  const Correction corr = recover_local(cond, lu.solve(cond.rhs).eval(), space, Exec::Serial);
  CHECK(corr.du.coeffs.cwiseAbs().maxCoeff() < 1e-14);
  CHECK(corr.dp.coeffs.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("serial and parallel assembly agree bitwise") {
  const Mesh mesh = generate_triangular(3, 3, {0, 0, 1, 1});
  const FeSpace space_s(mesh, BasisSpec(2), Exec::Serial);
  const FeSpace space_p(mesh, BasisSpec(2), Exec::Parallel);
  const DofMap dofs(mesh, space_s.spec());

  const auto packs_s = build_operator_packs(space_s, Exec::Serial);
  const auto packs_p = build_operator_packs(space_p, Exec::Parallel);

  auto f = [](const Eigen::Vector2d& p) { return Eigen::Vector2d(p.x(), -p.y()); };
  State state = zero_state(space_s);
  set_boundary_data(space_s, f, state.u);

  const LinearizedSystem sys_s =
      assemble_linearized(space_s, packs_s, dofs, state, f, {1.0, true}, Exec::Serial);
  const LinearizedSystem sys_p =
      assemble_linearized(space_p, packs_p, dofs, state, f, {1.0, true}, Exec::Parallel);

  for (int e = 0; e < mesh.n_elements(); ++e) {
    CHECK((sys_s.local_matrix[e] - sys_p.local_matrix[e]).cwiseAbs().maxCoeff() == 0.0);
    CHECK((sys_s.local_residual[e] - sys_p.local_residual[e]).cwiseAbs().maxCoeff() == 0.0);
  }

  const CondensedSystem cond_s = static_condense(sys_s, Exec::Serial);
  const CondensedSystem cond_p = static_condense(sys_p, Exec::Parallel);
  CHECK((cond_s.rhs - cond_p.rhs).cwiseAbs().maxCoeff() == 0.0);
  CHECK((Eigen::MatrixXd(cond_s.matrix) - Eigen::MatrixXd(cond_p.matrix)).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("mismatched operator packs are rejected") {
  const Mesh mesh = generate_cartesian(2, 2, {0, 0, 1, 1});
  const Mesh other = generate_cartesian(3, 3, {0, 0, 1, 1});
  const FeSpace space(mesh, BasisSpec(1), Exec::Serial);
  const FeSpace other_space(other, BasisSpec(1), Exec::Serial);
  const DofMap dofs(mesh, space.spec());
  const auto packs = build_operator_packs(other_space, Exec::Serial);
  CHECK_THROWS_AS(assemble_linearized(space, packs, dofs, zero_state(space), zero_field(),
                                      {1.0, false}, Exec::Serial),
                  std::invalid_argument);
}
