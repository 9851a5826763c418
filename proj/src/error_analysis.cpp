#include "dpgbem/error_analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "dpgbem/assembly.hpp"
#include "dpgbem/quadrature.hpp"

namespace dpgbem {

double ExactSolution::phi(int root, const Eigen::Vector3d& x) const {
  const Triangle& tri = coarse.triangles.at(root);
  ElementGeometry g = element_geometry(coarse, root);
  Eigen::Vector2d rc = g.to_reference(x);
  double l0 = 1.0 - rc[0] - rc[1];
  return l0 * phi_vertex[tri.v[0]] + rc[0] * phi_vertex[tri.v[1]] +
         rc[1] * phi_vertex[tri.v[2]];
}

Eigen::Vector3d ExactSolution::sigma(const Eigen::Vector3d& x) const {
  Eigen::Vector3d out = Eigen::Vector3d::Zero();
  for (int t = 0; t < coarse.num_triangles(); ++t) {
    if (curl_phi[t].squaredNorm() == 0.0) continue;
    out += analytic_deg0(element_geometry(coarse, t), x) * curl_phi[t];
  }
  return out;
}

ExactSolution make_exact_solution(const SurfaceMesh& coarse,
                                  const std::vector<double>& vertex_values,
                                  const QuadratureConfig& quad) {
  if (static_cast<int>(vertex_values.size()) != coarse.num_vertices())
    throw std::invalid_argument("one nodal value per coarse vertex required");

  double scale = 0.0;
  for (double v : vertex_values) scale = std::max(scale, std::abs(v));

  if (coarse.is_closed) {
    double mean = 0.0;
    for (int t = 0; t < coarse.num_triangles(); ++t) {
      const auto& tri = coarse.triangles[t];
      double avg = (vertex_values[tri.v[0]] + vertex_values[tri.v[1]] +
                    vertex_values[tri.v[2]]) / 3.0;
      mean += avg * element_geometry(coarse, t).area;
    }
    if (std::abs(mean) > 1e-10 * std::max(scale, 1e-300) * coarse.total_area())
      throw std::invalid_argument("manufactured phi must have zero mean on a closed surface");
  } else {
    for (const auto& e : coarse.edges)
      if (e.boundary)
        for (int vi : e.v)
          if (std::abs(vertex_values[vi]) > 1e-14 * std::max(scale, 1.0))
            throw std::invalid_argument("manufactured phi must vanish on the boundary");
  }

  ExactSolution exact;
  exact.coarse = coarse;
  exact.phi_vertex = vertex_values;
  exact.quad = quad;
  exact.curl_phi.resize(coarse.num_triangles());
  for (int t = 0; t < coarse.num_triangles(); ++t) {
    const auto& tri = coarse.triangles[t];
    ElementGeometry g = element_geometry(coarse, t);
    Eigen::Vector2d ref_grad(vertex_values[tri.v[1]] - vertex_values[tri.v[0]],
                             vertex_values[tri.v[2]] - vertex_values[tri.v[0]]);
    Eigen::Vector3d grad = g.world_gradient(ref_grad);
    exact.curl_phi[t] = -g.normal.cross(grad);
  }
  return exact;
}

double l2_error_phi(const SurfaceMesh& mesh, const DofLayout& layout,
                    const Eigen::VectorXd& u, const ExactSolution& exact,
                    const ErrorQuadConfig& eq) {
  const auto& rule = triangle_rule(std::max(2, eq.tri_degree));
  double sum = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    ElementGeometry g = element_geometry(mesh, t);
    double phi_t = u[layout.phi_col(t)];
    int root = mesh.triangles[t].root;
    for (const auto& q : rule) {
      Eigen::Vector3d x = g.map(q.xi, q.eta);
      double d = exact.phi(root, x) - phi_t;
      sum += q.w * 2.0 * g.area * d * d;
    }
  }
  return std::sqrt(sum);
}

double l2_error_sigma(const SurfaceMesh& mesh, const DofLayout& layout,
                      const Eigen::VectorXd& u, const ExactSolution& exact,
                      const ErrorQuadConfig& eq) {
  const auto& rule = triangle_rule(eq.tri_degree);
  double sum = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    ElementGeometry g = element_geometry(mesh, t);
    Eigen::Vector3d sigma_hp = u[layout.sigma_col(t, 0)] * g.t1 +
                               u[layout.sigma_col(t, 1)] * g.t2;
    for (const auto& q : rule) {
      Eigen::Vector3d x = g.map(q.xi, q.eta);
      Eigen::Vector3d s = exact.sigma(x);
      Eigen::Vector3d s_tan = s - g.normal.dot(s) * g.normal;
      sum += q.w * 2.0 * g.area * (s_tan - sigma_hp).squaredNorm();
    }
  }
  return std::sqrt(sum);
}

double l2_error_sigma_hat(const SurfaceMesh& mesh, const DofLayout& layout,
                          const Eigen::VectorXd& u, const ExactSolution& exact,
                          const ErrorQuadConfig& eq) {
  const auto& gl = gauss_legendre(eq.edge_points);
  double sum = 0.0;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    Eigen::Vector3d a = mesh.vertices[mesh.edges[e].v[0]];
    Eigen::Vector3d b = mesh.vertices[mesh.edges[e].v[1]];
    double len = (b - a).norm();
    Eigen::Vector3d that = (b - a) / len;
    double coeff = u[layout.sigma_hat_col(e)];
    for (const auto& q : gl) {
      Eigen::Vector3d x = a + q.x * (b - a);
      double d = exact.sigma_hat(x, that) - coeff;
      sum += q.w * len * d * d;
    }
  }
  return std::sqrt(sum);
}

}  // namespace dpgbem
