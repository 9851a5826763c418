#ifndef DPGBEM_BASIS_HPP
#define DPGBEM_BASIS_HPP

#include <vector>

#include <Eigen/Dense>

namespace dpgbem {

/// Nodal Lagrange basis of given degree on the unit reference triangle,
/// with nodes on the uniform lattice. Degree 0 is the single constant
/// function with node at the centroid.
class PolyBasis {
 public:
  explicit PolyBasis(int degree);

  int degree() const { return degree_; }
  int dim() const { return static_cast<int>(nodes_.size()); }
  const std::vector<Eigen::Vector2d>& nodes() const { return nodes_; }

  /// Basis values at one reference point (length dim).
  Eigen::VectorXd values(const Eigen::Vector2d& p) const;
  /// Allocation-free variant for hot loops; out must hold dim() values.
  void values_into(double xi, double eta, double* out) const;
  /// Reference-coordinate gradients at one point (dim x 2).
  Eigen::MatrixXd gradients(const Eigen::Vector2d& p) const;

  /// Cached instance; degree must be in [0, 4].
  static const PolyBasis& get(int degree);

 private:
  int degree_;
  std::vector<Eigen::Vector2d> nodes_;
  std::vector<std::pair<int, int>> exponents_;
  Eigen::MatrixXd coeff_;  // column j: monomial coefficients of basis j
};

/// Per-operation entry point matching the low-level contract: values and
/// reference gradients of the degree-k basis at the given points.
struct BasisEval {
  Eigen::MatrixXd values;                // dim x npts
  std::vector<Eigen::MatrixXd> grads;    // per point, dim x 2
};
BasisEval eval_basis(int degree, const std::vector<Eigen::Vector2d>& points);

}  // namespace dpgbem

#endif
