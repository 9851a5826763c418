#include "dpgbem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace dpgbem {

namespace {

double triangle_area(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                     const Eigen::Vector3d& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

void build_edges(SurfaceMesh& mesh) {
  mesh.edges.clear();
  std::map<std::pair<int, int>, int> index;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      int a = tri.v[k];
      int b = tri.v[(k + 1) % 3];
      auto key = std::minmax(a, b);
      auto it = index.find(key);
      if (it == index.end()) {
        MeshEdge e;
        e.v = {key.first, key.second};
        e.tris = {t, -1};
        index.emplace(key, mesh.num_edges());
        mesh.edges.push_back(e);
      } else {
        MeshEdge& e = mesh.edges[it->second];
        if (e.tris[1] >= 0)
          throw std::runtime_error("mesh edge with more than 2 incident triangles");
        e.tris[1] = t;
        e.boundary = false;
      }
    }
  }
  for (auto& e : mesh.edges) e.boundary = (e.tris[1] < 0);
  mesh.is_closed = (mesh.num_boundary_edges() == 0);
}

// Local index of the longest edge; ties broken by the lowest opposite
// vertex index.
int longest_edge(const SurfaceMesh& mesh, const Triangle& tri) {
  double len[3];
  for (int k = 0; k < 3; ++k)
    len[k] = (mesh.vertices[tri.v[(k + 1) % 3]] - mesh.vertices[tri.v[k]]).norm();
  double lmax = std::max({len[0], len[1], len[2]});
  int best = -1;
  for (int k = 0; k < 3; ++k) {
    if (len[k] < lmax * (1.0 - 1e-12)) continue;
    if (best < 0 || tri.v[(best + 2) % 3] > tri.v[(k + 2) % 3]) best = k;
  }
  return best;
}

}  // namespace

int SurfaceMesh::num_boundary_edges() const {
  int n = 0;
  for (const auto& e : edges) n += e.boundary ? 1 : 0;
  return n;
}

double SurfaceMesh::total_area() const {
  double a = 0.0;
  for (const auto& t : triangles)
    a += triangle_area(vertices[t.v[0]], vertices[t.v[1]], vertices[t.v[2]]);
  return a;
}

SurfaceMesh build_cube_surface() {
  SurfaceMesh mesh;
  for (int i = 0; i < 8; ++i)
    mesh.vertices.emplace_back(i & 1 ? 1.0 : -1.0, i & 2 ? 1.0 : -1.0,
                               i & 4 ? 1.0 : -1.0);

  // Face corner loops, counterclockwise as seen from outside.
  const std::array<std::array<int, 4>, 6> faces = {{
      {0, 2, 3, 1},  // z = -1
      {4, 5, 7, 6},  // z = +1
      {0, 1, 5, 4},  // y = -1
      {2, 6, 7, 3},  // y = +1
      {0, 4, 6, 2},  // x = -1
      {1, 3, 7, 5},  // x = +1
  }};

  auto lex_less = [&](int a, int b) {
    const auto& p = mesh.vertices[a];
    const auto& q = mesh.vertices[b];
    return std::lexicographical_compare(p.data(), p.data() + 3, q.data(), q.data() + 3);
  };

  for (int f = 0; f < 6; ++f) {
    std::array<int, 4> loop = faces[f];
    // Rotate so the loop starts at the lexicographically smallest corner;
    // the splitting diagonal then runs from that corner.
    int s = 0;
    for (int i = 1; i < 4; ++i)
      if (lex_less(loop[i], loop[s])) s = i;
    std::rotate(loop.begin(), loop.begin() + s, loop.end());
    for (auto tri_v : {std::array<int, 3>{loop[0], loop[1], loop[2]},
                       std::array<int, 3>{loop[0], loop[2], loop[3]}}) {
      Triangle t;
      t.v = tri_v;
      t.face = f;
      t.root = mesh.num_triangles();
      mesh.triangles.push_back(t);
    }
  }
  for (auto& t : mesh.triangles) t.refinement_edge = longest_edge(mesh, t);
  build_edges(mesh);
  validate(mesh);
  return mesh;
}

SurfaceMesh build_square_screen() {
  SurfaceMesh mesh;
  mesh.vertices = {{-1, -1, 0}, {1, -1, 0}, {1, 1, 0}, {-1, 1, 0}, {0, 0, 0}};
  for (int k = 0; k < 4; ++k) {
    Triangle t;
    t.v = {k, (k + 1) % 4, 4};  // counterclockwise w.r.t. +e_z
    t.face = 0;
    t.root = k;
    mesh.triangles.push_back(t);
  }
  for (auto& t : mesh.triangles) t.refinement_edge = longest_edge(mesh, t);
  build_edges(mesh);
  validate(mesh);
  return mesh;
}

SurfaceMesh make_surface_mesh(std::vector<Eigen::Vector3d> vertices,
                              std::vector<Triangle> triangles) {
  SurfaceMesh mesh;
  mesh.vertices = std::move(vertices);
  mesh.triangles = std::move(triangles);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    if (mesh.triangles[t].root < 0) mesh.triangles[t].root = t;
    mesh.triangles[t].refinement_edge = longest_edge(mesh, mesh.triangles[t]);
  }
  build_edges(mesh);
  validate(mesh);
  return mesh;
}

SurfaceMesh refine_uniform(const SurfaceMesh& mesh) {
  SurfaceMesh out;
  out.vertices = mesh.vertices;
  out.triangles.reserve(4 * mesh.triangles.size());

  std::map<std::pair<int, int>, int> midpoint;
  auto mid = [&](int a, int b) {
    auto key = std::minmax(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    int idx = out.num_vertices();
    out.vertices.push_back(0.5 * (mesh.vertices[a] + mesh.vertices[b]));
    midpoint.emplace(key, idx);
    return idx;
  };

  // Bisection of (a, b, c) with refinement edge (a, b) yields (c, a, m) and
  // (b, c, m); the new vertex m is the newest vertex of both children, so
  // their refinement edges are (c, a) and (b, c).
  for (const auto& tri : mesh.triangles) {
    int r = tri.refinement_edge;
    int a = tri.v[r], b = tri.v[(r + 1) % 3], c = tri.v[(r + 2) % 3];
    int m_ab = mid(a, b);
    int m_ca = mid(c, a);
    int m_bc = mid(b, c);
    for (auto child : {std::array<int, 3>{m_ab, c, m_ca},
                       std::array<int, 3>{a, m_ab, m_ca},
                       std::array<int, 3>{m_ab, b, m_bc},
                       std::array<int, 3>{c, m_ab, m_bc}}) {
      Triangle t;
      t.v = child;
      t.face = tri.face;
      t.root = tri.root >= 0 ? tri.root : -1;
      t.refinement_edge = 0;  // children are listed with the split edge first
      out.triangles.push_back(t);
    }
  }
  build_edges(out);
  validate(out);
  return out;
}

ElementGeometry element_geometry(const std::array<Eigen::Vector3d, 3>& corners) {
  ElementGeometry g;
  g.corner = corners;
  Eigen::Vector3d e01 = corners[1] - corners[0];
  Eigen::Vector3d e02 = corners[2] - corners[0];
  Eigen::Vector3d cr = e01.cross(e02);
  double cn = cr.norm();
  double scale = std::max(e01.norm(), e02.norm());
  if (!(cn > 1e-14 * scale * scale))
    throw std::runtime_error("degenerate (zero-area) triangle");
  g.area = 0.5 * cn;
  g.h = std::sqrt(g.area);
  g.normal = cr / cn;
  g.t1 = e01.normalized();
  g.t2 = g.normal.cross(g.t1);

  const Eigen::Vector3d* c = corners.data();
  for (int k = 0; k < 3; ++k) {
    Eigen::Vector3d e = c[(k + 1) % 3] - c[k];
    g.edge_length[k] = e.norm();
    g.edge_tangent[k] = e / g.edge_length[k];
  }
  g.diameter = std::max({g.edge_length[0], g.edge_length[1], g.edge_length[2]});

  g.ref_to_frame_ << g.t1.dot(e01), g.t1.dot(e02), g.t2.dot(e01), g.t2.dot(e02);
  g.frame_to_ref_grad_ = g.ref_to_frame_.inverse().transpose();
  return g;
}

ElementGeometry element_geometry(const SurfaceMesh& mesh, int tri) {
  if (tri < 0 || tri >= mesh.num_triangles())
    throw std::out_of_range("triangle index out of range");
  const auto& t = mesh.triangles[tri];
  return element_geometry({mesh.vertices[t.v[0]], mesh.vertices[t.v[1]],
                           mesh.vertices[t.v[2]]});
}

Eigen::Vector2d ElementGeometry::to_reference(const Eigen::Vector3d& x) const {
  Eigen::Vector3d d = x - corner[0];
  Eigen::Vector2d rhs(t1.dot(d), t2.dot(d));
  return ref_to_frame_.inverse() * rhs;
}

Eigen::Vector2d ElementGeometry::inplane_gradient(const Eigen::Vector2d& ref_grad) const {
  return frame_to_ref_grad_ * ref_grad;
}

Skeleton skeleton(const SurfaceMesh& mesh) {
  Skeleton sk;
  sk.num_edges = mesh.num_edges();
  sk.edge_length.resize(mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e)
    sk.edge_length[e] =
        (mesh.vertices[mesh.edges[e].v[1]] - mesh.vertices[mesh.edges[e].v[0]]).norm();

  std::map<std::pair<int, int>, int> index;
  for (int e = 0; e < mesh.num_edges(); ++e)
    index.emplace(std::make_pair(mesh.edges[e].v[0], mesh.edges[e].v[1]), e);

  sk.tri_edges.resize(mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    for (int k = 0; k < 3; ++k) {
      int a = mesh.triangles[t].v[k];
      int b = mesh.triangles[t].v[(k + 1) % 3];
      auto key = std::minmax(a, b);
      sk.tri_edges[t][k].edge = index.at(key);
      sk.tri_edges[t][k].sign = (a < b) ? +1 : -1;
    }
  }
  return sk;
}

void validate(const SurfaceMesh& mesh) {
  for (const auto& tri : mesh.triangles) {
    for (int vi : tri.v)
      if (vi < 0 || vi >= mesh.num_vertices())
        throw std::runtime_error("triangle vertex index out of range");
    if (tri.v[0] == tri.v[1] || tri.v[1] == tri.v[2] || tri.v[0] == tri.v[2])
      throw std::runtime_error("triangle with repeated vertex");
    double a = triangle_area(mesh.vertices[tri.v[0]], mesh.vertices[tri.v[1]],
                             mesh.vertices[tri.v[2]]);
    if (!(a > 0.0)) throw std::runtime_error("triangle with non-positive area");
    if (tri.refinement_edge < 0 || tri.refinement_edge > 2)
      throw std::runtime_error("invalid refinement edge");
  }

  int boundary = 0;
  for (const auto& e : mesh.edges) {
    int n = e.num_incident();
    if (n != 1 && n != 2) throw std::runtime_error("edge incidence not in {1,2}");
    if (e.boundary != (n == 1)) throw std::runtime_error("inconsistent boundary flag");
    boundary += e.boundary ? 1 : 0;
    if (n == 2) {
      // Orientation consistency: the two triangles traverse the edge in
      // opposite directions.
      int dir[2];
      for (int i = 0; i < 2; ++i) {
        const auto& tri = mesh.triangles[e.tris[i]];
        dir[i] = 0;
        for (int k = 0; k < 3; ++k) {
          if (tri.v[k] == e.v[0] && tri.v[(k + 1) % 3] == e.v[1]) dir[i] = +1;
          if (tri.v[k] == e.v[1] && tri.v[(k + 1) % 3] == e.v[0]) dir[i] = -1;
        }
        if (dir[i] == 0) throw std::runtime_error("edge not traversed by incident triangle");
      }
      if (dir[0] + dir[1] != 0)
        throw std::runtime_error("inconsistent triangle orientations across an edge");
    }
  }
  if (mesh.is_closed && boundary != 0)
    throw std::runtime_error("closed mesh with boundary edges");
  if (!mesh.is_closed && boundary < 3)
    throw std::runtime_error("open mesh with fewer than 3 boundary edges");

  // Triangles sharing a face id must be coplanar (flat-faced surface).
  std::map<int, std::pair<Eigen::Vector3d, Eigen::Vector3d>> face_plane;
  for (const auto& tri : mesh.triangles) {
    auto g = element_geometry({mesh.vertices[tri.v[0]], mesh.vertices[tri.v[1]],
                               mesh.vertices[tri.v[2]]});
    auto it = face_plane.find(tri.face);
    if (it == face_plane.end()) {
      face_plane.emplace(tri.face, std::make_pair(g.normal, mesh.vertices[tri.v[0]]));
    } else {
      const auto& [n0, p0] = it->second;
      if (g.normal.dot(n0) < 1.0 - 1e-10)
        throw std::runtime_error("face contains non-parallel triangles");
      for (int vi : tri.v)
        if (std::abs((mesh.vertices[vi] - p0).dot(n0)) > 1e-10 * (1.0 + p0.norm()))
          throw std::runtime_error("face contains non-coplanar triangles");
    }
  }
}

double shape_regularity(const SurfaceMesh& mesh) {
  double gamma = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    auto g = element_geometry(mesh, t);
    double s = 0.5 * (g.edge_length[0] + g.edge_length[1] + g.edge_length[2]);
    double inradius = g.area / s;
    gamma = std::max(gamma, g.diameter / (2.0 * inradius));
  }
  return gamma;
}

void write_obj(const SurfaceMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.precision(17);
  for (const auto& v : mesh.vertices)
    out << "v " << v[0] << " " << v[1] << " " << v[2] << "\n";
  for (const auto& t : mesh.triangles)
    out << "f " << t.v[0] + 1 << " " << t.v[1] + 1 << " " << t.v[2] + 1 << "\n";
  if (!out) throw std::runtime_error("write failure on " + path);
}

}  // namespace dpgbem
