#include "hhons/assembly.hpp"

#include <Eigen/SparseLU>
#include <cmath>

#include "hhons/errors.hpp"

namespace hhons {

namespace {

// Global full-system index of a local DOF, -1 for eliminated boundary faces.
long global_index(const FeSpace& space, const DofMap& dofs, int elem, int local) {
  const LocalLayout loc = space.local_layout(elem);
  const ElementContext& T = space.element(elem);
  const int nv = loc.n_vector();
  if (local >= nv) return dofs.pressure_offset(elem) + (local - nv);
  if (local < 2 * loc.nk) return dofs.elem_v_offset(elem) + local;
  const int j = (local - 2 * loc.nk) / (2 * loc.kf);
  const int within = (local - 2 * loc.nk) % (2 * loc.kf);
  const long base = dofs.face_v_offset(T.faces[j].face);
  return base < 0 ? -1 : base + within;
}

Eigen::VectorXd load_vector(const FeSpace& space, int elem, const VectorField& f) {
  const ElementContext& T = space.element(elem);
  const LocalLayout loc = space.local_layout(elem);
  Eigen::MatrixXd fvals(T.quad.size(), 2);
  for (int q = 0; q < T.quad.size(); ++q)
    fvals.row(q) = f(Eigen::Vector2d(T.quad.points.row(q))).transpose();
  Eigen::VectorXd F = Eigen::VectorXd::Zero(loc.n_vector());
  const Eigen::MatrixXd m = T.phi.leftCols(loc.nk).transpose() * T.quad.weights.asDiagonal() * fvals;
  F.segment(loc.v_elem(0, 0), loc.nk) = m.col(0);
  F.segment(loc.v_elem(1, 0), loc.nk) = m.col(1);
  return F;
}

}  // namespace

LinearizedSystem assemble_linearized(const FeSpace& space, const std::vector<OperatorPack>& packs,
                                     const DofMap& dofs, const State& state, const VectorField& f,
                                     const AssemblyOptions& opts, Exec exec) {
  if (static_cast<int>(packs.size()) != space.mesh().n_elements())
    throw std::invalid_argument("assemble_linearized: operator packs do not match the mesh");
  if (!(opts.nu > 0.0)) throw std::invalid_argument("assemble_linearized: viscosity must be > 0");

  const int ne = space.mesh().n_elements();
  LinearizedSystem sys;
  sys.space = &space;
  sys.dofs = &dofs;
  sys.local_matrix.resize(ne);
  sys.local_residual.resize(ne);
  sys.mean_weight.resize(ne);
  std::vector<double> constraint(ne);

  const int nk = dofs.nk();

  for_each_index(exec, ne, [&](std::ptrdiff_t e) {
    const OperatorPack& pack = packs[e];
    const LocalLayout loc = space.local_layout(static_cast<int>(e));
    const int nv = loc.n_vector();

    const Eigen::VectorXd u_loc = restrict_local(space, state.u, static_cast<int>(e));
    const Eigen::VectorXd p_loc = state.p.coeffs.segment(static_cast<long>(nk) * e, nk);
    const double mean_w = space.element(static_cast<int>(e)).integrals[0];

    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(nv + nk, nv + nk);
    J.topLeftCorner(nv, nv) = opts.nu * pack.viscous;
    J.topRightCorner(nv, nk) = pack.coupling.transpose();
    J.bottomLeftCorner(nk, nv) = pack.coupling;

    Eigen::VectorXd r(nv + nk);
    r.head(nv) = opts.nu * (pack.viscous * u_loc) + pack.coupling.transpose() * p_loc -
                 load_vector(space, static_cast<int>(e), f);
    r.tail(nk) = pack.coupling * u_loc;
    r[nv] += state.lambda * mean_w;

    if (opts.convection) {
      const Eigen::MatrixXd T2 =
          convective_fixed_transport(space, static_cast<int>(e), u_loc, opts.form, opts.eta);
      r.head(nv) += T2 * u_loc;
      J.topLeftCorner(nv, nv) +=
          T2 + convective_transport_jacobian(space, static_cast<int>(e), u_loc, opts.form, opts.eta);
    }

    sys.local_matrix[e] = std::move(J);
    sys.local_residual[e] = std::move(r);
    sys.mean_weight[e] = mean_w;
    constraint[e] = mean_w * state.p.coeffs[static_cast<long>(nk) * e];
  });

  sys.constraint_residual = 0.0;
  for (double c : constraint) sys.constraint_residual += c;
  return sys;
}

Eigen::VectorXd scatter_residual(const LinearizedSystem& sys) {
  const FeSpace& space = *sys.space;
  const DofMap& dofs = *sys.dofs;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dofs.n_total());
  for (int e = 0; e < space.mesh().n_elements(); ++e) {
    const Eigen::VectorXd& r = sys.local_residual[e];
    for (int i = 0; i < r.size(); ++i) {
      const long g = global_index(space, dofs, e, i);
      if (g >= 0) rhs[g] -= r[i];
    }
  }
  rhs[dofs.multiplier_index()] = -sys.constraint_residual;
  return rhs;
}

double residual_norm(const LinearizedSystem& sys) { return scatter_residual(sys).norm(); }

SparseSystem to_full_sparse(const LinearizedSystem& sys) {
  const FeSpace& space = *sys.space;
  const DofMap& dofs = *sys.dofs;
  const long n = dofs.n_total();

  std::vector<Eigen::Triplet<double>> trips;
  for (int e = 0; e < space.mesh().n_elements(); ++e) {
    const Eigen::MatrixXd& J = sys.local_matrix[e];
    const int nloc = static_cast<int>(sys.local_residual[e].size());
    std::vector<long> gidx(nloc);
    for (int i = 0; i < nloc; ++i) gidx[i] = global_index(space, dofs, e, i);
    for (int i = 0; i < nloc; ++i) {
      if (gidx[i] < 0) continue;
      for (int j = 0; j < nloc; ++j) {
        if (gidx[j] < 0 || J(i, j) == 0.0) continue;
        trips.emplace_back(gidx[i], gidx[j], J(i, j));
      }
    }
    const long prow = dofs.pressure_offset(e);
    trips.emplace_back(prow, dofs.multiplier_index(), sys.mean_weight[e]);
    trips.emplace_back(dofs.multiplier_index(), prow, sys.mean_weight[e]);
  }

  SparseSystem out;
  out.matrix.resize(n, n);
  out.matrix.setFromTriplets(trips.begin(), trips.end());
  out.rhs = scatter_residual(sys);
  return out;
}

CondensedSystem static_condense(const LinearizedSystem& sys, Exec exec) {
  const FeSpace& space = *sys.space;
  const DofMap& dofs = *sys.dofs;
  const int ne = space.mesh().n_elements();
  const int nk = dofs.nk();
  const int kf = dofs.kf();

  CondensedSystem cond;
  cond.dofs = &dofs;
  cond.recover_map.resize(ne);
  cond.recover_shift.resize(ne);
  cond.kept_indices.resize(ne);

  struct ElemResult {
    Eigen::MatrixXd S;
    Eigen::VectorXd g;
    bool ok = true;
  };
  std::vector<ElemResult> results(ne);

  for_each_index(exec, ne, [&](std::ptrdiff_t e) {
    const LocalLayout loc = space.local_layout(static_cast<int>(e));
    const ElementContext& T = space.element(static_cast<int>(e));
    const int nv = loc.n_vector();

    // Locally eliminated: element velocity block and pressure fluctuations.
    std::vector<int> x_idx;
    x_idx.reserve(2 * nk + nk - 1);
    for (int i = 0; i < 2 * nk; ++i) x_idx.push_back(i);
    for (int i = 1; i < nk; ++i) x_idx.push_back(nv + i);

    // Kept: interior-face velocity blocks and the pressure mean.
    std::vector<int> y_idx;
    std::vector<long>& y_glob = cond.kept_indices[e];
    for (int j = 0; j < loc.nfaces; ++j) {
      const long base = dofs.condensed_face_offset(T.faces[j].face);
      if (base < 0) continue;
      for (int i = 0; i < 2 * kf; ++i) {
        y_idx.push_back(loc.v_face_start(j) + i);
        y_glob.push_back(base + i);
      }
    }
    y_idx.push_back(nv);
    y_glob.push_back(dofs.condensed_pressure_mean(static_cast<int>(e)));

    const Eigen::MatrixXd& J = sys.local_matrix[e];
    const Eigen::VectorXd& r = sys.local_residual[e];
    const int nx = static_cast<int>(x_idx.size());
    const int ny = static_cast<int>(y_idx.size());

    Eigen::MatrixXd Kxx(nx, nx), Kxy(nx, ny), Kyx(ny, nx), Kyy(ny, ny);
    Eigen::VectorXd bx(nx), by(ny);
    for (int i = 0; i < nx; ++i) {
      bx[i] = -r[x_idx[i]];
      for (int j = 0; j < nx; ++j) Kxx(i, j) = J(x_idx[i], x_idx[j]);
      for (int j = 0; j < ny; ++j) Kxy(i, j) = J(x_idx[i], y_idx[j]);
    }
    for (int i = 0; i < ny; ++i) {
      by[i] = -r[y_idx[i]];
      for (int j = 0; j < nx; ++j) Kyx(i, j) = J(y_idx[i], x_idx[j]);
      for (int j = 0; j < ny; ++j) Kyy(i, j) = J(y_idx[i], y_idx[j]);
    }

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(Kxx);
    Eigen::MatrixXd X = lu.solve(Kxy);
    Eigen::VectorXd xb = lu.solve(bx);
    results[e].S = Kyy - Kyx * X;
    results[e].g = by - Kyx * xb;
    results[e].ok = results[e].S.allFinite() && results[e].g.allFinite() && xb.allFinite();

    cond.recover_map[e] = std::move(X);
    cond.recover_shift[e] = std::move(xb);
  });

  for (int e = 0; e < ne; ++e)
    if (!results[e].ok)
      throw CondensationError("static condensation: singular local block", e);

  const long n = dofs.condensed_dim();
  std::vector<Eigen::Triplet<double>> trips;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (int e = 0; e < ne; ++e) {
    const std::vector<long>& y_glob = cond.kept_indices[e];
    const ElemResult& res = results[e];
    for (size_t i = 0; i < y_glob.size(); ++i) {
      rhs[y_glob[i]] += res.g[i];
      for (size_t j = 0; j < y_glob.size(); ++j)
        trips.emplace_back(y_glob[i], y_glob[j], res.S(i, j));
    }
    trips.emplace_back(dofs.condensed_pressure_mean(e), dofs.condensed_multiplier(),
                       sys.mean_weight[e]);
    trips.emplace_back(dofs.condensed_multiplier(), dofs.condensed_pressure_mean(e),
                       sys.mean_weight[e]);
  }
  rhs[dofs.condensed_multiplier()] = -sys.constraint_residual;

  cond.matrix.resize(n, n);
  cond.matrix.setFromTriplets(trips.begin(), trips.end());
  cond.rhs = std::move(rhs);
  return cond;
}

Correction recover_local(const CondensedSystem& cond, const Eigen::VectorXd& y,
                         const FeSpace& space, Exec exec) {
  const DofMap& dofs = *cond.dofs;
  const FieldLayout& layout = dofs.field_layout();
  const int nk = dofs.nk();
  const int kf = dofs.kf();

  Correction out;
  out.du = HybridVelocity(layout);
  out.dp = PressureField(layout);
  out.dlambda = y[dofs.condensed_multiplier()];

  // Face blocks come straight from the condensed solution (boundary stays 0).
  for (int f = 0; f < space.mesh().n_faces(); ++f) {
    const long cbase = dofs.condensed_face_offset(f);
    if (cbase < 0) continue;
    out.du.coeffs.segment(layout.face_offset(f), 2 * kf) = y.segment(cbase, 2 * kf);
  }

  for_each_index(exec, space.mesh().n_elements(), [&](std::ptrdiff_t e) {
    const std::vector<long>& y_glob = cond.kept_indices[e];
    Eigen::VectorXd ye(y_glob.size());
    for (size_t i = 0; i < y_glob.size(); ++i) ye[i] = y[y_glob[i]];
    const Eigen::VectorXd x = cond.recover_shift[e] - cond.recover_map[e] * ye;
    out.du.coeffs.segment(layout.elem_offset(static_cast<int>(e)), 2 * nk) = x.head(2 * nk);
    out.dp.coeffs[static_cast<long>(nk) * e] = y[dofs.condensed_pressure_mean(static_cast<int>(e))];
    for (int i = 1; i < nk; ++i)
      out.dp.coeffs[static_cast<long>(nk) * e + i] = x[2 * nk + (i - 1)];
  });
  return out;
}

Correction solve_full(const LinearizedSystem& sys, const FeSpace& space) {
  const DofMap& dofs = *sys.dofs;
  const FieldLayout& layout = dofs.field_layout();
  SparseSystem full = to_full_sparse(sys);

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(full.matrix);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("solve_full: sparse factorization failed");
  const Eigen::VectorXd sol = lu.solve(full.rhs);

  Correction out;
  out.du = HybridVelocity(layout);
  out.dp = PressureField(layout);
  out.dlambda = sol[dofs.multiplier_index()];
  const int nk = dofs.nk();
  const int kf = dofs.kf();
  for (int e = 0; e < space.mesh().n_elements(); ++e) {
    out.du.coeffs.segment(layout.elem_offset(e), 2 * nk) =
        sol.segment(dofs.elem_v_offset(e), 2 * nk);
    out.dp.coeffs.segment(static_cast<long>(nk) * e, nk) =
        sol.segment(dofs.pressure_offset(e), nk);
  }
  for (int f = 0; f < space.mesh().n_faces(); ++f) {
    const long base = dofs.face_v_offset(f);
    if (base < 0) continue;
    out.du.coeffs.segment(layout.face_offset(f), 2 * kf) = sol.segment(base, 2 * kf);
  }
  return out;
}

void set_boundary_data(const FeSpace& space, const VectorField& g, HybridVelocity& u) {
  const FieldLayout& layout = space.field_layout();
  const int kf = layout.kf;
  for (int f = 0; f < space.mesh().n_faces(); ++f) {
    if (!space.mesh().face(f).boundary) continue;
    for (int c = 0; c < 2; ++c) {
      const Eigen::VectorXd coeff = l2_project_face(
          space, f, [&](const Eigen::Vector2d& x) { return g(x)[c]; }, space.spec().k);
      u.coeffs.segment(layout.face_offset(f) + c * kf, kf) = coeff;
    }
  }
}

double viscous_energy(const FeSpace& space, const std::vector<OperatorPack>& packs,
                      const HybridVelocity& u) {
  std::vector<double> partial(space.mesh().n_elements());
  for_each_index(Exec::Parallel, space.mesh().n_elements(), [&](std::ptrdiff_t e) {
    const Eigen::VectorXd u_loc = restrict_local(space, u, static_cast<int>(e));
    partial[e] = u_loc.dot(packs[e].viscous * u_loc);
  });
  double s = 0.0;
  for (double v : partial) s += v;
  return s;
}

double load_inner_product(const FeSpace& space, const VectorField& f, const HybridVelocity& u) {
  const FieldLayout& layout = space.field_layout();
  std::vector<double> partial(space.mesh().n_elements());
  for_each_index(Exec::Parallel, space.mesh().n_elements(), [&](std::ptrdiff_t e) {
    const ElementContext& T = space.element(static_cast<int>(e));
    const int nk = layout.nk;
    double s = 0.0;
    for (int q = 0; q < T.quad.size(); ++q) {
      const Eigen::Vector2d fq = f(Eigen::Vector2d(T.quad.points.row(q)));
      for (int c = 0; c < 2; ++c) {
        const double uq = T.phi.row(q).head(nk).dot(
            u.coeffs.segment(layout.elem_offset(static_cast<int>(e)) + c * nk, nk));
        s += T.quad.weights[q] * fq[c] * uq;
      }
    }
    partial[e] = s;
  });
  double s = 0.0;
  for (double v : partial) s += v;
  return s;
}

double mass_equation_residual(const FeSpace& space, const std::vector<OperatorPack>& packs,
                              const HybridVelocity& u) {
  std::vector<double> partial(space.mesh().n_elements());
  for_each_index(Exec::Parallel, space.mesh().n_elements(), [&](std::ptrdiff_t e) {
    const Eigen::VectorXd u_loc = restrict_local(space, u, static_cast<int>(e));
    partial[e] = (packs[e].coupling * u_loc).squaredNorm();
  });
  double s = 0.0;
  for (double v : partial) s += v;
  return std::sqrt(s);
}

}  // namespace hhons
