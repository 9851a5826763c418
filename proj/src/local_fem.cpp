#include "dpgbem/local_fem.hpp"

#include <stdexcept>

#include "dpgbem/quadrature.hpp"

namespace dpgbem {

Eigen::VectorXd LocalGramBlock::solve(const Eigen::VectorXd& rhs) const {
  Eigen::VectorXd out(dim());
  out.head(tau_dim()) = tau_llt.solve(rhs.head(tau_dim()));
  out.tail(v_dim()) = v_llt.solve(rhs.tail(v_dim()));
  return out;
}

Eigen::VectorXd LocalGramBlock::apply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd out(dim());
  out.head(tau_dim()) = tau * x.head(tau_dim());
  out.tail(v_dim()) = v * x.tail(v_dim());
  return out;
}

LocalGramBlock local_gram(const ElementGeometry& geom, int tau_degree,
                          int v_degree) {
  const PolyBasis& tau_basis = PolyBasis::get(tau_degree);
  const PolyBasis& v_basis = PolyBasis::get(v_degree);
  int nt = tau_basis.dim();
  int nv = v_basis.dim();

  Eigen::MatrixXd mass_tau = Eigen::MatrixXd::Zero(nt, nt);
  Eigen::MatrixXd gram_v = Eigen::MatrixXd::Zero(nv, nv);

  const auto& rule = triangle_rule(2 * std::max(tau_degree, v_degree) + 1);
  double jac = 2.0 * geom.area;
  for (const auto& q : rule) {
    Eigen::Vector2d p(q.xi, q.eta);
    double w = q.w * jac;
    Eigen::VectorXd bt = tau_basis.values(p);
    mass_tau += w * bt * bt.transpose();

    Eigen::VectorXd bv = v_basis.values(p);
    Eigen::MatrixXd gv = v_basis.gradients(p);
    gram_v += w * bv * bv.transpose();
    // The curl of a scalar is the rotated tangential gradient, so the
    // curl-curl term equals the tangential stiffness term.
    Eigen::MatrixXd inplane(nv, 2);
    for (int j = 0; j < nv; ++j)
      inplane.row(j) = geom.inplane_gradient(gv.row(j).transpose()).transpose();
    gram_v += w * inplane * inplane.transpose();
  }

  LocalGramBlock block;
  block.tau = Eigen::MatrixXd::Zero(2 * nt, 2 * nt);
  block.tau.topLeftCorner(nt, nt) = mass_tau;
  block.tau.bottomRightCorner(nt, nt) = mass_tau;
  block.v = gram_v;
  block.tau_llt.compute(block.tau);
  block.v_llt.compute(block.v);
  if (block.tau_llt.info() != Eigen::Success ||
      block.v_llt.info() != Eigen::Success)
    throw std::runtime_error("local Gram factorization failed (degenerate element?)");
  return block;
}

std::vector<Eigen::Vector2d> edge_nodes_on_reference(const SurfaceMesh& mesh,
                                                     int tri, int local_edge,
                                                     int npts) {
  static const Eigen::Vector2d ref_corner[3] = {
      Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)};
  const auto& t = mesh.triangles[tri];
  int a = t.v[local_edge];
  int b = t.v[(local_edge + 1) % 3];
  Eigen::Vector2d ra = ref_corner[local_edge];
  Eigen::Vector2d rb = ref_corner[(local_edge + 1) % 3];
  if (a > b) std::swap(ra, rb);  // parametrize low -> high vertex

  const auto& g = gauss_legendre(npts);
  std::vector<Eigen::Vector2d> nodes;
  nodes.reserve(npts);
  for (const auto& q : g) nodes.push_back(ra + q.x * (rb - ra));
  return nodes;
}

Eigen::VectorXd edge_jump_pairing(const SurfaceMesh& mesh, const Skeleton& sk,
                                  int tri, int local_edge, int v_degree) {
  if (local_edge < 0 || local_edge > 2)
    throw std::invalid_argument("edge_jump_pairing: local edge out of range");
  const PolyBasis& v_basis = PolyBasis::get(v_degree);
  const auto& ref = sk.tri_edges[tri][local_edge];
  double length = sk.edge_length[ref.edge];

  int npts = v_degree / 2 + 2;  // exact for degree up to 2*npts-1 >= v_degree
  auto nodes = edge_nodes_on_reference(mesh, tri, local_edge, npts);
  const auto& g = gauss_legendre(npts);

  Eigen::VectorXd out = Eigen::VectorXd::Zero(v_basis.dim());
  for (int q = 0; q < npts; ++q)
    out += g[q].w * length * v_basis.values(nodes[q]);
  return ref.sign * out;
}

Eigen::VectorXd edge_jump_pairing_global(const SurfaceMesh& mesh,
                                         const Skeleton& sk, int edge, int tri,
                                         int v_degree) {
  for (int k = 0; k < 3; ++k)
    if (sk.tri_edges[tri][k].edge == edge)
      return edge_jump_pairing(mesh, sk, tri, k, v_degree);
  throw std::invalid_argument("edge_jump_pairing: edge not incident to triangle");
}

}  // namespace dpgbem
