#include "dpgbem/solver.hpp"

#include <stdexcept>

namespace dpgbem {

std::pair<TrialCoefficients, SolveReport> solve_normal_equations(
    const SystemMatrices& sys, double tol, int max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("solver tolerance must be positive");
  const int n = sys.layout.n_trial();
  if (max_iter < 0) max_iter = 10 * n;

  TrialCoefficients sol;
  sol.layout = sys.layout;
  sol.u = Eigen::VectorXd::Zero(n);
  SolveReport report;

  Eigen::VectorXd b = sys.apply_Bt(sys.gram_solve(sys.F));
  double nb = b.norm();
  if (nb == 0.0) {
    report.converged = true;
    report.energy_error_sq = energy_error_sq(sys, sol.u);
    report.indicators = local_indicators(sys, sol.u);
    return {sol, report};
  }

  Eigen::VectorXd r = b;
  Eigen::VectorXd p = r;
  double rs = r.squaredNorm();
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::VectorXd Sp = sys.apply_S(p);
    double pSp = p.dot(Sp);
    if (!(pSp > 0.0))
      throw std::runtime_error("normal operator lost definiteness in CG");
    double alpha = rs / pSp;
    sol.u += alpha * p;
    r -= alpha * Sp;
    double rs_new = r.squaredNorm();
    report.iterations = it;
    report.rel_residual = std::sqrt(rs_new) / nb;
    if (report.rel_residual <= tol) {
      report.converged = true;
      break;
    }
    p = r + (rs_new / rs) * p;
    rs = rs_new;
  }
  report.energy_error_sq = energy_error_sq(sys, sol.u);
  report.indicators = local_indicators(sys, sol.u);
  return {sol, report};
}

double energy_error_sq(const SystemMatrices& sys, const Eigen::VectorXd& u) {
  if (u.size() != sys.layout.n_trial())
    throw std::invalid_argument("coefficient vector length mismatch");
  Eigen::VectorXd r = sys.F - sys.apply_B(u);
  return r.dot(sys.gram_solve(r));
}

Eigen::VectorXd local_indicators(const SystemMatrices& sys,
                                 const Eigen::VectorXd& u) {
  Eigen::VectorXd r = sys.F - sys.apply_B(u);
  const int ed = sys.layout.elem_test_dim();
  Eigen::VectorXd ind(sys.layout.n_tri);
  for (int t = 0; t < sys.layout.n_tri; ++t) {
    Eigen::VectorXd rt = r.segment(t * ed, ed);
    ind[t] = rt.dot(sys.gram[t].solve(rt));
  }
  return ind;
}

Eigen::VectorXd trial_to_test(const SystemMatrices& sys, int trial_index) {
  if (trial_index < 0 || trial_index >= sys.layout.n_trial())
    throw std::out_of_range("trial index out of range");
  Eigen::VectorXd e = Eigen::VectorXd::Zero(sys.layout.n_trial());
  e[trial_index] = 1.0;
  return sys.gram_solve(sys.apply_B(e));
}

TrialCoefficients dense_solve(const SystemMatrices& sys) {
  const int n = sys.layout.n_trial();
  if (n > 2000)
    throw std::invalid_argument("dense_solve is limited to n_trial <= 2000");
  Eigen::MatrixXd S = sys.dense_S();
  Eigen::VectorXd b = sys.apply_Bt(sys.gram_solve(sys.F));
  TrialCoefficients sol;
  sol.layout = sys.layout;
  Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("dense normal matrix is not positive definite");
  sol.u = llt.solve(b);
  return sol;
}

}  // namespace dpgbem
