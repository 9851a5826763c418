#ifndef DPGBEM_LOCAL_FEM_HPP
#define DPGBEM_LOCAL_FEM_HPP

#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "dpgbem/basis.hpp"
#include "dpgbem/mesh.hpp"

namespace dpgbem {

/// curl v = -n x grad(v) for a scalar v on a flat element with unit normal n.
inline Eigen::Vector3d surface_curl_scalar(const Eigen::Vector3d& grad_v,
                                           const Eigen::Vector3d& normal) {
  return -normal.cross(grad_v);
}

/// curl of a tangential field from its in-plane Jacobian: with J(i,j) the
/// derivative of the i-th frame component in the j-th frame direction,
/// curl sigma = d1 sigma2 - d2 sigma1.
inline double surface_curl_vector(const Eigen::Matrix2d& inplane_jacobian) {
  return inplane_jacobian(1, 0) - inplane_jacobian(0, 1);
}

/// Test-space Gram block of one element for the inner product
/// <tau,dtau>_T + <v,dv>_T + <curl v, curl dv>_T, split into the
/// vector tau mass block and the v (mass + curl-stiffness) block.
struct LocalGramBlock {
  int element = -1;
  Eigen::MatrixXd tau;  // 2*dim(P_tau) square
  Eigen::MatrixXd v;    // dim(P_v) square
  Eigen::LLT<Eigen::MatrixXd> tau_llt;
  Eigen::LLT<Eigen::MatrixXd> v_llt;

  int tau_dim() const { return static_cast<int>(tau.rows()); }
  int v_dim() const { return static_cast<int>(v.rows()); }
  int dim() const { return tau_dim() + v_dim(); }

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
};

/// tau dofs are ordered component-major: index i*dim(P_tau)+k is basis k of
/// frame component i.
LocalGramBlock local_gram(const ElementGeometry& geom, int tau_degree,
                          int v_degree);

/// sign(T,e) * integral over the edge of each local v basis function,
/// restricted to the given triangle. The edge is parametrized in its global
/// (low-to-high vertex) orientation.
Eigen::VectorXd edge_jump_pairing(const SurfaceMesh& mesh, const Skeleton& sk,
                                  int tri, int local_edge, int v_degree);

/// Variant addressed by global edge index; throws if the edge is not
/// incident to the triangle.
Eigen::VectorXd edge_jump_pairing_global(const SurfaceMesh& mesh,
                                         const Skeleton& sk, int edge, int tri,
                                         int v_degree);

/// Gauss nodes of the canonical edge parametrization (global orientation)
/// mapped into the reference coordinates of the incident triangle.
std::vector<Eigen::Vector2d> edge_nodes_on_reference(const SurfaceMesh& mesh,
                                                     int tri, int local_edge,
                                                     int npts);

}  // namespace dpgbem

#endif
