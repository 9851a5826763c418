#ifndef DPGBEM_ASSEMBLY_HPP
#define DPGBEM_ASSEMBLY_HPP

#include <functional>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "dpgbem/basis.hpp"
#include "dpgbem/error_analysis.hpp"
#include "dpgbem/local_fem.hpp"
#include "dpgbem/mesh.hpp"
#include "dpgbem/potentials.hpp"

namespace dpgbem {

/// Index maps for trial dofs (2 sigma + 1 phi per triangle, 1 sigma_hat per
/// skeleton edge) and test dofs (tau and v blocks per triangle).
struct DofLayout {
  int n_tri = 0;
  int n_edge = 0;
  int tau_degree = 2;
  int v_degree = 3;

  int tau_scalar_dim() const { return (tau_degree + 1) * (tau_degree + 2) / 2; }
  int tau_dim() const { return 2 * tau_scalar_dim(); }
  int v_dim() const { return (v_degree + 1) * (v_degree + 2) / 2; }
  int elem_test_dim() const { return tau_dim() + v_dim(); }

  int n_trial() const { return 3 * n_tri + n_edge; }
  int n_test() const { return elem_test_dim() * n_tri; }

  int sigma_col(int t, int comp) const { return 2 * t + comp; }
  int phi_col(int t) const { return 2 * n_tri + t; }
  int sigma_hat_col(int e) const { return 3 * n_tri + e; }
  int tau_row(int t, int comp, int k) const {
    return t * elem_test_dim() + comp * tau_scalar_dim() + k;
  }
  int v_row(int t, int j) const {
    return t * elem_test_dim() + tau_dim() + j;
  }
};

/// degree_increment r gives tau degree r and v degree 1+r (r = 2 reproduces
/// the default enriched test space).
DofLayout make_dof_layout(const SurfaceMesh& mesh, int degree_increment = 2);

/// Assembled DPG system: B = local sparse part (sigma and sigma_hat columns)
/// + dense nonlocal block (phi columns against tau rows) + rank-one factors
/// (phi columns against v rows, closed surfaces only), block Gram, load F.
struct SystemMatrices {
  DofLayout layout;
  bool closed = false;
  Eigen::SparseMatrix<double> local;
  Eigen::MatrixXd nonlocal;    // (tau_dim * n_tri) x n_tri
  Eigen::VectorXd mgamma_phi;  // <phi_col, 1> per triangle; empty if open
  Eigen::VectorXd mgamma_v;    // integral of v_j per v row; empty if open
  std::vector<LocalGramBlock> gram;
  Eigen::VectorXd F;

  Eigen::VectorXd apply_B(const Eigen::VectorXd& x) const;
  Eigen::VectorXd apply_Bt(const Eigen::VectorXd& y) const;
  Eigen::VectorXd gram_solve(const Eigen::VectorXd& y) const;
  Eigen::VectorXd gram_apply(const Eigen::VectorXd& y) const;
  /// S x = B^T Gram^-1 B x
  Eigen::VectorXd apply_S(const Eigen::VectorXd& x) const;

  Eigen::MatrixXd dense_B() const;
  Eigen::MatrixXd dense_S() const;
  /// Plain-text coordinate dump (row col value per line) of B.
  void dump_coordinate(std::ostream& out) const;
};

std::vector<LocalGramBlock> assemble_gram(const SurfaceMesh& mesh,
                                          const DofLayout& layout);

/// Fills local, nonlocal and the rank-one factors of sys.
void assemble_B(const SurfaceMesh& mesh, const DofLayout& layout,
                const QuadratureConfig& cfg, SystemMatrices& sys);

/// Gram + B; F left empty.
SystemMatrices assemble_system(const SurfaceMesh& mesh, const DofLayout& layout,
                               const QuadratureConfig& cfg);

/// Load vector for an analytic right-hand side; requires mean-zero f on
/// closed surfaces.
Eigen::VectorXd assemble_load_analytic(
    const SurfaceMesh& mesh, const DofLayout& layout,
    const std::function<double(const Eigen::Vector3d&)>& f,
    int quad_degree = 7);

struct ManufacturedLoad {
  Eigen::VectorXd F;
  ExactSolution exact;
};

/// Load induced by a manufactured piecewise-affine phi on the coarse mesh,
/// via <f,v> = <sigma, curl v>_T + sum_edges sign * int (sigma.t) v with
/// sigma = V curl(phi). The fine mesh must be a refinement of `coarse`
/// (triangle roots index into it).
ManufacturedLoad assemble_load_manufactured(
    const SurfaceMesh& mesh, const DofLayout& layout, const SurfaceMesh& coarse,
    const std::vector<double>& vertex_values, const QuadratureConfig& cfg,
    int area_quad_degree = 9, int edge_quad_points = 8);

}  // namespace dpgbem

#endif
