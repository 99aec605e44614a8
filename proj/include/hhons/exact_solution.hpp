#ifndef HHONS_EXACT_SOLUTION_HPP
#define HHONS_EXACT_SOLUTION_HPP

#include <Eigen/Dense>
#include <functional>
#include <string>

#include "hhons/fespace.hpp"

namespace hhons {

using MatrixField = std::function<Eigen::Matrix2d(const Eigen::Vector2d&)>;

/// Evaluable exact velocity/gradient/pressure/forcing for benchmarking.
/// The gradient convention is grad(i,j) = d u_i / d x_j.
struct ExactSolution {
  std::string name;
  VectorField velocity;
  MatrixField velocity_gradient;
  ScalarField pressure;
  VectorField forcing;
  bool zero_forcing = false;
};

/// Closed-form steady solution with zero body force; the benchmark case.
ExactSolution kovasznay(double nu);

/// Decay rate entering the closed form, lambda = Re - sqrt(Re^2 + 4 pi^2)
/// with Re = 1/(2 nu).
double kovasznay_lambda(double nu);

/// Exact solution from user-supplied fields; the forcing is composed from
/// the strong momentum equation. The velocity must be divergence-free
/// (checked by sampling the supplied gradient).
ExactSolution manufactured(const std::string& name, VectorField u, MatrixField grad_u,
                           VectorField laplacian_u, ScalarField p, VectorField grad_p, double nu);

}  // namespace hhons

#endif
