#ifndef DPGBEM_MESH_HPP
#define DPGBEM_MESH_HPP

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dpgbem {

/// Triangle of a surface mesh. Vertices are ordered counterclockwise with
/// respect to the element normal (outward for closed surfaces). Local edge k
/// runs from v[k] to v[(k+1)%3]. The refinement edge is the local edge that
/// newest-vertex bisection splits next.
struct Triangle {
  std::array<int, 3> v{-1, -1, -1};
  int face = 0;
  int root = -1;
  int refinement_edge = 0;
};

/// Undirected mesh edge. The vertex pair is stored with v[0] < v[1]; this
/// order defines the global edge orientation.
struct MeshEdge {
  std::array<int, 2> v{-1, -1};
  std::array<int, 2> tris{-1, -1};
  bool boundary = true;

  int num_incident() const { return tris[1] < 0 ? 1 : 2; }
};

/// Triangulated flat-faced surface, closed (cube boundary) or open (screen).
struct SurfaceMesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<Triangle> triangles;
  std::vector<MeshEdge> edges;
  bool is_closed = false;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_boundary_edges() const;
  double total_area() const;
};

/// Affine geometry of one triangle: reference element is the unit triangle
/// with vertices (0,0), (1,0), (0,1).
struct ElementGeometry {
  std::array<Eigen::Vector3d, 3> corner;
  Eigen::Vector3d normal;
  double area = 0.0;
  double h = 0.0;  // h_T = sqrt(area)
  double diameter = 0.0;
  Eigen::Vector3d t1, t2;  // in-plane orthonormal frame, t2 = normal x t1
  std::array<Eigen::Vector3d, 3> edge_tangent;  // unit, counterclockwise
  std::array<double, 3> edge_length{};

  Eigen::Vector3d map(double xi, double eta) const {
    return corner[0] + xi * (corner[1] - corner[0]) + eta * (corner[2] - corner[0]);
  }
  /// Inverse of the affine map (valid for points in the element plane).
  Eigen::Vector2d to_reference(const Eigen::Vector3d& x) const;
  /// In-plane gradient components (w.r.t. t1, t2) from a reference gradient.
  Eigen::Vector2d inplane_gradient(const Eigen::Vector2d& ref_grad) const;
  /// World-space tangential gradient from a reference gradient.
  Eigen::Vector3d world_gradient(const Eigen::Vector2d& ref_grad) const {
    Eigen::Vector2d g = inplane_gradient(ref_grad);
    return g[0] * t1 + g[1] * t2;
  }

 private:
  Eigen::Matrix2d ref_to_frame_;  // columns: frame coords of edge vectors
  Eigen::Matrix2d frame_to_ref_grad_;
  friend ElementGeometry element_geometry(const SurfaceMesh&, int);
  friend ElementGeometry element_geometry(const std::array<Eigen::Vector3d, 3>&);
};

/// Edge skeleton with per-(triangle, local edge) orientation signs relative
/// to the global low-to-high vertex orientation of each edge.
struct Skeleton {
  struct TriEdgeRef {
    int edge = -1;
    int sign = 0;  // +1 if counterclockwise traversal runs low -> high vertex
  };
  std::vector<std::array<TriEdgeRef, 3>> tri_edges;  // per triangle
  std::vector<double> edge_length;                   // per mesh edge
  int num_edges = 0;
};

SurfaceMesh build_cube_surface();
SurfaceMesh build_square_screen();

/// Builds a mesh from raw vertex/triangle data, derives edges and the
/// closed/open flag, and validates the result. Triangles keep their given
/// face ids; roots default to the triangle's own index.
SurfaceMesh make_surface_mesh(std::vector<Eigen::Vector3d> vertices,
                              std::vector<Triangle> triangles);

/// Splits every triangle into 4 children by two sweeps of newest-vertex
/// bisection. Conforming; face ids and roots are inherited.
SurfaceMesh refine_uniform(const SurfaceMesh& mesh);

ElementGeometry element_geometry(const SurfaceMesh& mesh, int tri);
ElementGeometry element_geometry(const std::array<Eigen::Vector3d, 3>& corners);

Skeleton skeleton(const SurfaceMesh& mesh);

/// Throws std::runtime_error on any violated mesh invariant.
void validate(const SurfaceMesh& mesh);

/// Shape-regularity parameter gamma = max over T of diam(T) / (2 inradius(T)).
double shape_regularity(const SurfaceMesh& mesh);

/// Wavefront OBJ text with 17-significant-digit vertex coordinates.
void write_obj(const SurfaceMesh& mesh, const std::string& path);

}  // namespace dpgbem

#endif
