#ifndef DPGBEM_ERROR_ANALYSIS_HPP
#define DPGBEM_ERROR_ANALYSIS_HPP

#include <vector>

#include <Eigen/Dense>

#include "dpgbem/mesh.hpp"
#include "dpgbem/potentials.hpp"

namespace dpgbem {

struct DofLayout;

/// Manufactured exact solution: a continuous piecewise-affine phi on the
/// coarse mesh, sigma = V curl(phi) with piecewise-constant curl densities,
/// and the tangential skeleton trace sigma . t.
struct ExactSolution {
  SurfaceMesh coarse;
  std::vector<double> phi_vertex;         // per coarse vertex
  std::vector<Eigen::Vector3d> curl_phi;  // per coarse triangle, constant
  QuadratureConfig quad;

  /// phi at a point of the fine triangle whose coarse ancestor is `root`.
  double phi(int root, const Eigen::Vector3d& x) const;
  /// Componentwise single-layer potential of curl(phi) (full 3-vector).
  Eigen::Vector3d sigma(const Eigen::Vector3d& x) const;
  /// sigma . t for a unit tangent t.
  double sigma_hat(const Eigen::Vector3d& x, const Eigen::Vector3d& t) const {
    return sigma(x).dot(t);
  }
};

/// Builds the exact-solution handles and checks admissibility: the nodal
/// function must vanish on the boundary (open surface) or have zero mean
/// (closed surface).
ExactSolution make_exact_solution(const SurfaceMesh& coarse,
                                  const std::vector<double>& vertex_values,
                                  const QuadratureConfig& quad);

struct ErrorQuadConfig {
  int tri_degree = 5;   // 7-point rule
  int edge_points = 4;
};

double l2_error_phi(const SurfaceMesh& mesh, const DofLayout& layout,
                    const Eigen::VectorXd& u, const ExactSolution& exact,
                    const ErrorQuadConfig& eq = {});

double l2_error_sigma(const SurfaceMesh& mesh, const DofLayout& layout,
                      const Eigen::VectorXd& u, const ExactSolution& exact,
                      const ErrorQuadConfig& eq = {});

double l2_error_sigma_hat(const SurfaceMesh& mesh, const DofLayout& layout,
                          const Eigen::VectorXd& u, const ExactSolution& exact,
                          const ErrorQuadConfig& eq = {});

}  // namespace dpgbem

#endif
