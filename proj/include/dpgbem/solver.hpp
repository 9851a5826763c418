#ifndef DPGBEM_SOLVER_HPP
#define DPGBEM_SOLVER_HPP

#include <Eigen/Dense>

#include "dpgbem/assembly.hpp"

namespace dpgbem {

/// Solution coefficients, sliced into the sigma / phi / sigma_hat parts.
struct TrialCoefficients {
  DofLayout layout;
  Eigen::VectorXd u;

  Eigen::Vector2d sigma(int t) const {
    return Eigen::Vector2d(u[layout.sigma_col(t, 0)], u[layout.sigma_col(t, 1)]);
  }
  double phi(int t) const { return u[layout.phi_col(t)]; }
  double sigma_hat(int e) const { return u[layout.sigma_hat_col(e)]; }
};

struct SolveReport {
  int iterations = 0;
  double rel_residual = 0.0;
  bool converged = false;
  double energy_error_sq = 0.0;
  Eigen::VectorXd indicators;  // per element
};

/// Unpreconditioned conjugate gradients on the normal operator
/// S = B^T Gram^-1 B with right-hand side B^T Gram^-1 F. max_iter < 0 means
/// 10 * n_trial.
std::pair<TrialCoefficients, SolveReport> solve_normal_equations(
    const SystemMatrices& sys, double tol = 1e-10, int max_iter = -1);

/// Squared energy (residual) norm r^T Gram^-1 r with r = F - B u.
double energy_error_sq(const SystemMatrices& sys, const Eigen::VectorXd& u);

/// Element-local contributions r_T^T Gram_T^-1 r_T; they sum to
/// energy_error_sq.
Eigen::VectorXd local_indicators(const SystemMatrices& sys,
                                 const Eigen::VectorXd& u);

/// Discrete optimal test function of one trial basis function:
/// Gram^-1 (B column).
Eigen::VectorXd trial_to_test(const SystemMatrices& sys, int trial_index);

/// Direct factorization of the dense normal matrix; cross-check oracle for
/// n_trial <= 2000.
TrialCoefficients dense_solve(const SystemMatrices& sys);

}  // namespace dpgbem

#endif
