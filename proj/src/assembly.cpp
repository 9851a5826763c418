#include "dpgbem/assembly.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "dpgbem/quadrature.hpp"

namespace dpgbem {

DofLayout make_dof_layout(const SurfaceMesh& mesh, int degree_increment) {
  if (degree_increment < 1 || degree_increment > 3)
    throw std::invalid_argument("degree increment must be in {1,2,3}");
  DofLayout layout;
  layout.n_tri = mesh.num_triangles();
  layout.n_edge = mesh.num_edges();
  layout.tau_degree = degree_increment;      // enriched from degree 0
  layout.v_degree = 1 + degree_increment;    // enriched from degree 1
  return layout;
}

Eigen::VectorXd SystemMatrices::apply_B(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = local * x;
  const int td = layout.tau_dim();
  const int ed = layout.elem_test_dim();
  const int vd = layout.v_dim();
  Eigen::VectorXd phi = x.segment(2 * layout.n_tri, layout.n_tri);
  Eigen::VectorXd ytau = nonlocal * phi;
  for (int t = 0; t < layout.n_tri; ++t)
    y.segment(t * ed, td) += ytau.segment(t * td, td);
  if (closed) {
    double s = mgamma_phi.dot(phi);
    for (int t = 0; t < layout.n_tri; ++t)
      y.segment(t * ed + td, vd) += s * mgamma_v.segment(t * vd, vd);
  }
  return y;
}

Eigen::VectorXd SystemMatrices::apply_Bt(const Eigen::VectorXd& y) const {
  Eigen::VectorXd x = local.transpose() * y;
  const int td = layout.tau_dim();
  const int ed = layout.elem_test_dim();
  const int vd = layout.v_dim();
  Eigen::VectorXd ytau(td * layout.n_tri);
  for (int t = 0; t < layout.n_tri; ++t)
    ytau.segment(t * td, td) = y.segment(t * ed, td);
  x.segment(2 * layout.n_tri, layout.n_tri) += nonlocal.transpose() * ytau;
  if (closed) {
    double s = 0.0;
    for (int t = 0; t < layout.n_tri; ++t)
      s += mgamma_v.segment(t * vd, vd).dot(y.segment(t * ed + td, vd));
    x.segment(2 * layout.n_tri, layout.n_tri) += s * mgamma_phi;
  }
  return x;
}

Eigen::VectorXd SystemMatrices::gram_solve(const Eigen::VectorXd& y) const {
  Eigen::VectorXd out(y.size());
  const int ed = layout.elem_test_dim();
  for (int t = 0; t < layout.n_tri; ++t)
    out.segment(t * ed, ed) = gram[t].solve(y.segment(t * ed, ed));
  return out;
}

Eigen::VectorXd SystemMatrices::gram_apply(const Eigen::VectorXd& y) const {
  Eigen::VectorXd out(y.size());
  const int ed = layout.elem_test_dim();
  for (int t = 0; t < layout.n_tri; ++t)
    out.segment(t * ed, ed) = gram[t].apply(y.segment(t * ed, ed));
  return out;
}

Eigen::VectorXd SystemMatrices::apply_S(const Eigen::VectorXd& x) const {
  return apply_Bt(gram_solve(apply_B(x)));
}

Eigen::MatrixXd SystemMatrices::dense_B() const {
  Eigen::MatrixXd B(layout.n_test(), layout.n_trial());
  Eigen::VectorXd e = Eigen::VectorXd::Zero(layout.n_trial());
  for (int j = 0; j < layout.n_trial(); ++j) {
    e[j] = 1.0;
    B.col(j) = apply_B(e);
    e[j] = 0.0;
  }
  return B;
}

Eigen::MatrixXd SystemMatrices::dense_S() const {
  Eigen::MatrixXd S(layout.n_trial(), layout.n_trial());
  Eigen::VectorXd e = Eigen::VectorXd::Zero(layout.n_trial());
  for (int j = 0; j < layout.n_trial(); ++j) {
    e[j] = 1.0;
    S.col(j) = apply_S(e);
    e[j] = 0.0;
  }
  return S;
}

void SystemMatrices::dump_coordinate(std::ostream& out) const {
  out.precision(17);
  Eigen::MatrixXd B = dense_B();
  for (int i = 0; i < B.rows(); ++i)
    for (int j = 0; j < B.cols(); ++j)
      if (B(i, j) != 0.0) out << i << " " << j << " " << B(i, j) << "\n";
}

std::vector<LocalGramBlock> assemble_gram(const SurfaceMesh& mesh,
                                          const DofLayout& layout) {
  std::vector<LocalGramBlock> gram;
  gram.reserve(mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    LocalGramBlock block =
        local_gram(element_geometry(mesh, t), layout.tau_degree, layout.v_degree);
    block.element = t;
    gram.push_back(std::move(block));
  }
  return gram;
}

void assemble_B(const SurfaceMesh& mesh, const DofLayout& layout,
                const QuadratureConfig& cfg, SystemMatrices& sys) {
  cfg.check();
  const Skeleton sk = skeleton(mesh);
  const PolyBasis& tau_basis = PolyBasis::get(layout.tau_degree);
  const PolyBasis& v_basis = PolyBasis::get(layout.v_degree);
  const int nts = tau_basis.dim();       // scalar tau basis size
  const int ntd = layout.tau_dim();      // both frame components
  const int nv = v_basis.dim();
  const int n_tri = layout.n_tri;

  sys.layout = layout;
  sys.closed = mesh.is_closed;

  std::vector<ElementGeometry> geom;
  geom.reserve(n_tri);
  for (int t = 0; t < n_tri; ++t) geom.push_back(element_geometry(mesh, t));

  // local terms: sigma columns (tau mass + curl pairing) and sigma_hat
  // columns (jump pairing); also the rank-one factors for closed surfaces
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(n_tri * (ntd + 2 * nv + 3 * nv));
  if (mesh.is_closed) {
    sys.mgamma_phi.resize(n_tri);
    sys.mgamma_v = Eigen::VectorXd::Zero(nv * n_tri);
  } else {
    sys.mgamma_phi.resize(0);
    sys.mgamma_v.resize(0);
  }

  const auto& rule = triangle_rule(2 * layout.v_degree + 1);
  for (int t = 0; t < n_tri; ++t) {
    const ElementGeometry& g = geom[t];
    double jac = 2.0 * g.area;
    Eigen::VectorXd int_tau = Eigen::VectorXd::Zero(nts);
    Eigen::VectorXd int_g1 = Eigen::VectorXd::Zero(nv);
    Eigen::VectorXd int_g2 = Eigen::VectorXd::Zero(nv);
    Eigen::VectorXd int_v = Eigen::VectorXd::Zero(nv);
    for (const auto& q : rule) {
      Eigen::Vector2d p(q.xi, q.eta);
      double w = q.w * jac;
      int_tau += w * tau_basis.values(p);
      int_v += w * v_basis.values(p);
      Eigen::MatrixXd gv = v_basis.gradients(p);
      for (int j = 0; j < nv; ++j) {
        Eigen::Vector2d ip = g.inplane_gradient(gv.row(j).transpose());
        int_g1[j] += w * ip[0];
        int_g2[j] += w * ip[1];
      }
    }
    // <sigma_i, tau_{i,k}> = int b_k for matching frame component
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < nts; ++k)
        trip.emplace_back(layout.tau_row(t, i, k), layout.sigma_col(t, i),
                          int_tau[k]);
    // <sigma, curl v>: t1 . curl v = g2, t2 . curl v = -g1
    for (int j = 0; j < nv; ++j) {
      trip.emplace_back(layout.v_row(t, j), layout.sigma_col(t, 0), int_g2[j]);
      trip.emplace_back(layout.v_row(t, j), layout.sigma_col(t, 1), -int_g1[j]);
    }
    // jump pairing
    for (int k = 0; k < 3; ++k) {
      Eigen::VectorXd jp = edge_jump_pairing(mesh, sk, t, k, layout.v_degree);
      int e = sk.tri_edges[t][k].edge;
      for (int j = 0; j < nv; ++j)
        trip.emplace_back(layout.v_row(t, j), layout.sigma_hat_col(e), jp[j]);
    }
    if (mesh.is_closed) {
      sys.mgamma_phi[t] = g.area;
      sys.mgamma_v.segment(t * nv, nv) = int_v;
    }
  }
  sys.local.resize(layout.n_test(), layout.n_trial());
  sys.local.setFromTriplets(trip.begin(), trip.end());

  // nonlocal block: -<phi, curl V tau> = -sum over target edges of
  // sign * (t_edge . t^s_i) * int_e M_k ds
  sys.nonlocal = Eigen::MatrixXd::Zero(ntd * n_tri, n_tri);
  const int chunk = 64;
  std::vector<Eigen::MatrixXd> buffer(chunk);
  for (int e0 = 0; e0 < mesh.num_edges(); e0 += chunk) {
    int e1 = std::min(e0 + chunk, mesh.num_edges());
#pragma omp parallel for schedule(dynamic)
    for (int e = e0; e < e1; ++e) {
      const MeshEdge& edge = mesh.edges[e];
      Eigen::Vector3d a = mesh.vertices[edge.v[0]];
      Eigen::Vector3d b = mesh.vertices[edge.v[1]];
      Eigen::MatrixXd& I = buffer[e - e0];
      I.resize(nts, n_tri);
      for (int s = 0; s < n_tri; ++s)
        I.col(s) = edge_moment_integrals_swapped(a, b, geom[s],
                                                 layout.tau_degree, cfg);
    }
    for (int e = e0; e < e1; ++e) {
      const MeshEdge& edge = mesh.edges[e];
      Eigen::Vector3d a = mesh.vertices[edge.v[0]];
      Eigen::Vector3d b = mesh.vertices[edge.v[1]];
      Eigen::Vector3d that = (b - a).normalized();
      const Eigen::MatrixXd& I = buffer[e - e0];
      for (int side = 0; side < edge.num_incident(); ++side) {
        int t = edge.tris[side];
        int sign = 0;
        for (int k = 0; k < 3; ++k)
          if (sk.tri_edges[t][k].edge == e) sign = sk.tri_edges[t][k].sign;
        for (int s = 0; s < n_tri; ++s) {
          double f1 = sign * that.dot(geom[s].t1);
          double f2 = sign * that.dot(geom[s].t2);
          for (int k = 0; k < nts; ++k) {
            sys.nonlocal(s * ntd + k, t) -= f1 * I(k, s);
            sys.nonlocal(s * ntd + nts + k, t) -= f2 * I(k, s);
          }
        }
      }
    }
  }
}

SystemMatrices assemble_system(const SurfaceMesh& mesh, const DofLayout& layout,
                               const QuadratureConfig& cfg) {
  SystemMatrices sys;
  sys.gram = assemble_gram(mesh, layout);
  assemble_B(mesh, layout, cfg, sys);
  sys.F = Eigen::VectorXd::Zero(layout.n_test());
  return sys;
}

Eigen::VectorXd assemble_load_analytic(
    const SurfaceMesh& mesh, const DofLayout& layout,
    const std::function<double(const Eigen::Vector3d&)>& f, int quad_degree) {
  const PolyBasis& v_basis = PolyBasis::get(layout.v_degree);
  const int nv = v_basis.dim();
  const auto& rule = triangle_rule(quad_degree);

  double mean = 0.0, norm_sq = 0.0, area = 0.0;
  Eigen::VectorXd F = Eigen::VectorXd::Zero(layout.n_test());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    ElementGeometry g = element_geometry(mesh, t);
    double jac = 2.0 * g.area;
    area += g.area;
    for (const auto& q : rule) {
      Eigen::Vector3d x = g.map(q.xi, q.eta);
      double fx = f(x);
      double w = q.w * jac;
      mean += w * fx;
      norm_sq += w * fx * fx;
      Eigen::VectorXd bv = v_basis.values(Eigen::Vector2d(q.xi, q.eta));
      for (int j = 0; j < nv; ++j) F[layout.v_row(t, j)] += w * fx * bv[j];
    }
  }
  if (mesh.is_closed) {
    double fnorm = std::sqrt(norm_sq);
    if (std::abs(mean) > 1e-10 * fnorm * area)
      throw std::invalid_argument(
          "assemble_load_analytic: f must have zero mean on a closed surface");
  }
  return F;
}

ManufacturedLoad assemble_load_manufactured(
    const SurfaceMesh& mesh, const DofLayout& layout, const SurfaceMesh& coarse,
    const std::vector<double>& vertex_values, const QuadratureConfig& cfg,
    int area_quad_degree, int edge_quad_points) {
  ManufacturedLoad out;
  out.exact = make_exact_solution(coarse, vertex_values, cfg);
  const ExactSolution& exact = out.exact;

  const PolyBasis& v_basis = PolyBasis::get(layout.v_degree);
  const int nv = v_basis.dim();
  const Skeleton sk = skeleton(mesh);
  const auto& rule = triangle_rule(area_quad_degree);
  const auto& gl = gauss_legendre(edge_quad_points);

  out.F = Eigen::VectorXd::Zero(layout.n_test());
  bool trivial = true;
  for (const auto& c : exact.curl_phi)
    if (c.norm() > 0) trivial = false;
  if (trivial) return out;

  // sigma . t at the canonical Gauss nodes of each edge, shared by both
  // incident elements so that interior contributions cancel exactly for
  // continuous test functions
  Eigen::MatrixXd sigma_t(edge_quad_points, mesh.num_edges());
#pragma omp parallel for schedule(dynamic)
  for (int e = 0; e < mesh.num_edges(); ++e) {
    Eigen::Vector3d a = mesh.vertices[mesh.edges[e].v[0]];
    Eigen::Vector3d b = mesh.vertices[mesh.edges[e].v[1]];
    Eigen::Vector3d that = (b - a).normalized();
    for (int q = 0; q < edge_quad_points; ++q) {
      Eigen::Vector3d x = a + gl[q].x * (b - a);
      sigma_t(q, e) = exact.sigma(x).dot(that);
    }
  }

  std::vector<Eigen::VectorXd> area_part(mesh.num_triangles());
#pragma omp parallel for schedule(dynamic)
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    ElementGeometry g = element_geometry(mesh, t);
    double jac = 2.0 * g.area;
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(nv);
    for (const auto& q : rule) {
      Eigen::Vector3d x = g.map(q.xi, q.eta);
      Eigen::Vector3d sig = exact.sigma(x);
      Eigen::MatrixXd gv = v_basis.gradients(Eigen::Vector2d(q.xi, q.eta));
      for (int j = 0; j < nv; ++j) {
        Eigen::Vector2d ip = g.inplane_gradient(gv.row(j).transpose());
        Eigen::Vector3d curl_vj = ip[1] * g.t1 - ip[0] * g.t2;
        acc[j] += q.w * jac * sig.dot(curl_vj);
      }
    }
    area_part[t] = acc;
  }

  for (int t = 0; t < mesh.num_triangles(); ++t) {
    for (int j = 0; j < nv; ++j) out.F[layout.v_row(t, j)] += area_part[t][j];
    for (int k = 0; k < 3; ++k) {
      int e = sk.tri_edges[t][k].edge;
      int sign = sk.tri_edges[t][k].sign;
      double len = sk.edge_length[e];
      auto nodes = edge_nodes_on_reference(mesh, t, k, edge_quad_points);
      for (int q = 0; q < edge_quad_points; ++q) {
        Eigen::VectorXd bv = v_basis.values(nodes[q]);
        double w = sign * gl[q].w * len * sigma_t(q, e);
        for (int j = 0; j < nv; ++j) out.F[layout.v_row(t, j)] += w * bv[j];
      }
    }
  }
  return out;
}

}  // namespace dpgbem
