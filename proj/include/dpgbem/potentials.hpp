#ifndef DPGBEM_POTENTIALS_HPP
#define DPGBEM_POTENTIALS_HPP

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "dpgbem/basis.hpp"
#include "dpgbem/mesh.hpp"

namespace dpgbem {

/// Quadrature controls for single-layer integration.
struct QuadratureConfig {
  int far_order = 7;            // triangle Gauss degree away from the source
  int duffy_order = 12;         // tensor Gauss points per Duffy direction
  double near_threshold = 4.0;  // near-field cutoff in multiples of source h_T
                                // (about 2 source diameters for our meshes)
  int edge_order = 8;           // Gauss points per outer edge sub-interval
  int max_depth = 12;           // dyadic grading depth cap

  void check() const {
    if (far_order < 1 || duffy_order < 1 || edge_order < 1 || max_depth < 1 ||
        !(near_threshold > 0.0))
      throw std::invalid_argument("invalid QuadratureConfig");
  }
};

/// Thrown when a quadrature path cannot certify its value; carries the
/// partial result.
struct QuadratureDiagnostic : std::runtime_error {
  QuadratureDiagnostic(const std::string& what, double partial_value)
      : std::runtime_error(what), partial(partial_value) {}
  double partial;
};

struct SingleLayerQuery {
  ElementGeometry source;
  int degree = 0;                  // density degree, <= 3
  Eigen::VectorXd density_coeff;   // nodal coefficients, length dim(degree)
  Eigen::Vector3d target;
};

double point_triangle_distance(const ElementGeometry& geom,
                               const Eigen::Vector3d& p);

double segment_triangle_distance(const Eigen::Vector3d& a,
                                 const Eigen::Vector3d& b,
                                 const ElementGeometry& geom);

/// Closed-form single-layer potential of a unit density on the segment
/// [a,b]: integral of 1/(4 pi |x-y|) ds_x over the segment, evaluated at y.
double segment_potential(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                         const Eigen::Vector3d& y);

/// Closed-form integral of 1/(4 pi |x-y|) over a flat triangle (edge-wise
/// log/arctan potential). Valid for any target, including points on the
/// triangle.
double analytic_deg0(const ElementGeometry& geom, const Eigen::Vector3d& x);
double analytic_deg0(const std::array<Eigen::Vector3d, 3>& corners,
                     const Eigen::Vector3d& x);

/// Per-basis moments of the single-layer kernel over one triangle:
/// out[k] = integral of b_k(y) / (4 pi |x-y|) over T. Near targets split the
/// triangle at the projection of x and use Duffy-transformed tensor Gauss.
Eigen::VectorXd single_layer_moments(const ElementGeometry& geom, int degree,
                                     const Eigen::Vector3d& x,
                                     const QuadratureConfig& cfg);

/// Single-layer moment of the query's polynomial density.
double duffy_moment(const SingleLayerQuery& q, const QuadratureConfig& cfg);

/// Per-basis outer integrals over a straight edge of the scalar moments:
/// out[k] = integral along [a,b] of M_k(x) ds_x, with the outer rule graded
/// dyadically toward endpoints that lie on the source triangle.
Eigen::VectorXd edge_moment_integrals(const Eigen::Vector3d& a,
                                      const Eigen::Vector3d& b,
                                      const ElementGeometry& source, int degree,
                                      const QuadratureConfig& cfg);

/// Same quantity as edge_moment_integrals, computed with the integration
/// order swapped: the edge integral of the kernel is the closed-form segment
/// potential, leaving a single surface quadrature with panels graded toward
/// the segment where it meets the source triangle. Used by assembly, where
/// the nested rule would dominate the runtime.
Eigen::VectorXd edge_moment_integrals_swapped(const Eigen::Vector3d& a,
                                              const Eigen::Vector3d& b,
                                              const ElementGeometry& source,
                                              int degree,
                                              const QuadratureConfig& cfg);

/// sign * integral over the edge of t . (V density), with density given as
/// world-space vectors per source basis function (3 x dim) and the edge
/// traversed from a to b.
double edge_potential_entry(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                            int sign, const ElementGeometry& source,
                            const Eigen::Matrix3Xd& density_world,
                            const QuadratureConfig& cfg);

/// Piecewise-polynomial tangential density on a mesh: per triangle one world
/// 3-vector coefficient per basis function of the given degree.
struct PiecewiseVectorDensity {
  int degree = 0;
  std::vector<Eigen::Matrix3Xd> coeff;  // per triangle, 3 x dim(degree)
};

struct PiecewiseScalarDensity {
  int degree = 0;
  std::vector<Eigen::VectorXd> coeff;  // per triangle, dim(degree)
};

/// Componentwise single-layer potential of a piecewise vector density.
Eigen::Vector3d eval_single_layer_field(const SurfaceMesh& mesh,
                                        const PiecewiseVectorDensity& density,
                                        const Eigen::Vector3d& x,
                                        const QuadratureConfig& cfg);

double eval_single_layer_scalar(const SurfaceMesh& mesh,
                                const PiecewiseScalarDensity& density,
                                const Eigen::Vector3d& x,
                                const QuadratureConfig& cfg);

}  // namespace dpgbem

#endif
