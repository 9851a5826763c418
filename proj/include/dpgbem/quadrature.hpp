#ifndef DPGBEM_QUADRATURE_HPP
#define DPGBEM_QUADRATURE_HPP

#include <vector>

namespace dpgbem {

struct QuadPoint1D {
  double x;
  double w;
};

struct TriQuadPoint {
  double xi;
  double eta;
  double w;  // reference weights, sum to 1/2
};

/// Gauss-Legendre rule on [0,1], exact for polynomials of degree 2n-1.
const std::vector<QuadPoint1D>& gauss_legendre(int n);

/// Rule for integrals with weight (1-x) on [0,1]: sum w_i f(x_i) equals
/// the integral of f(x)(1-x) exactly for f of degree 2n-1.
const std::vector<QuadPoint1D>& gauss_jacobi10(int n);

/// Symmetric/conical rule on the unit reference triangle, exact for total
/// degree <= degree. Low degrees use classical symmetric rules; higher
/// degrees a conical product rule.
const std::vector<TriQuadPoint>& triangle_rule(int degree);

}  // namespace dpgbem

#endif
