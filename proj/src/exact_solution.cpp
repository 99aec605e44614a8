#include "hhons/exact_solution.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace hhons {

double kovasznay_lambda(double nu) {
  if (!(nu > 0.0)) throw std::invalid_argument("kovasznay: viscosity must be > 0");
  const double re = 1.0 / (2.0 * nu);
  return re - std::sqrt(re * re + 4.0 * M_PI * M_PI);
}

ExactSolution kovasznay(double nu) {
  const double lam = kovasznay_lambda(nu);
  const double two_pi = 2.0 * M_PI;
  const double p_shift = 0.5 * lam * (std::exp(4.0 * lam) - 1.0);

  ExactSolution s;
  s.name = "kovasznay";
  s.zero_forcing = true;
  s.velocity = [=](const Eigen::Vector2d& x) {
    const double ex = std::exp(lam * x.x());
    return Eigen::Vector2d(1.0 - ex * std::cos(two_pi * x.y()),
                           lam / two_pi * ex * std::sin(two_pi * x.y()));
  };
  s.velocity_gradient = [=](const Eigen::Vector2d& x) {
    const double ex = std::exp(lam * x.x());
    const double c = std::cos(two_pi * x.y());
    const double sn = std::sin(two_pi * x.y());
    Eigen::Matrix2d g;
    g(0, 0) = -lam * ex * c;
    g(0, 1) = two_pi * ex * sn;
    g(1, 0) = lam * lam / two_pi * ex * sn;
    g(1, 1) = lam * ex * c;
    return g;
  };
  s.pressure = [=](const Eigen::Vector2d& x) {
    return -0.5 * std::exp(2.0 * lam * x.x()) + p_shift;
  };
  s.forcing = [](const Eigen::Vector2d&) { return Eigen::Vector2d::Zero().eval(); };
  return s;
}

ExactSolution manufactured(const std::string& name, VectorField u, MatrixField grad_u,
                           VectorField laplacian_u, ScalarField p, VectorField grad_p, double nu) {
  if (!(nu > 0.0)) throw std::invalid_argument("manufactured: viscosity must be > 0");

  // Solenoidality check by sampling the supplied gradient.
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int i = 0; i < 64; ++i) {
    const Eigen::Vector2d x(unif(rng), unif(rng));
    if (std::abs(grad_u(x).trace()) > 1e-10)
      throw std::invalid_argument("manufactured: velocity is not divergence-free");
  }

  ExactSolution s;
  s.name = name;
  s.velocity = u;
  s.velocity_gradient = grad_u;
  s.pressure = p;
  s.forcing = [=](const Eigen::Vector2d& x) {
    const Eigen::Vector2d conv = grad_u(x) * u(x);
    return Eigen::Vector2d(-nu * laplacian_u(x) + conv + grad_p(x));
  };
  return s;
}

}  // namespace hhons
