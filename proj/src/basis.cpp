#include "dpgbem/basis.hpp"

#include <array>
#include <stdexcept>

namespace dpgbem {

PolyBasis::PolyBasis(int degree) : degree_(degree) {
  if (degree < 0 || degree > 4)
    throw std::invalid_argument("PolyBasis: unsupported degree");

  if (degree == 0) {
    nodes_ = {Eigen::Vector2d(1.0 / 3.0, 1.0 / 3.0)};
    exponents_ = {{0, 0}};
    coeff_ = Eigen::MatrixXd::Ones(1, 1);
    return;
  }

  for (int iy = 0; iy <= degree; ++iy)
    for (int ix = 0; ix <= degree - iy; ++ix)
      nodes_.emplace_back(double(ix) / degree, double(iy) / degree);
  for (int a = 0; a <= degree; ++a)
    for (int b = 0; b <= degree - a; ++b)
      exponents_.emplace_back(a, b);

  int n = dim();
  Eigen::MatrixXd vand(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      vand(i, j) = std::pow(nodes_[i][0], exponents_[j].first) *
                   std::pow(nodes_[i][1], exponents_[j].second);
  coeff_ = vand.fullPivLu().inverse();  // column j gives basis_j coefficients
}

Eigen::VectorXd PolyBasis::values(const Eigen::Vector2d& p) const {
  Eigen::VectorXd out(dim());
  values_into(p[0], p[1], out.data());
  return out;
}

void PolyBasis::values_into(double xi, double eta, double* out) const {
  double px[5], py[5];
  px[0] = py[0] = 1.0;
  for (int i = 1; i <= degree_; ++i) {
    px[i] = px[i - 1] * xi;
    py[i] = py[i - 1] * eta;
  }
  int n = dim();
  double mono[15];
  for (int j = 0; j < n; ++j)
    mono[j] = px[exponents_[j].first] * py[exponents_[j].second];
  for (int k = 0; k < n; ++k) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += coeff_(j, k) * mono[j];
    out[k] = acc;
  }
}

Eigen::MatrixXd PolyBasis::gradients(const Eigen::Vector2d& p) const {
  int n = dim();
  Eigen::VectorXd dx(n), dy(n);
  for (int j = 0; j < n; ++j) {
    auto [a, b] = exponents_[j];
    dx[j] = a == 0 ? 0.0 : a * std::pow(p[0], a - 1) * std::pow(p[1], b);
    dy[j] = b == 0 ? 0.0 : b * std::pow(p[0], a) * std::pow(p[1], b - 1);
  }
  Eigen::MatrixXd g(n, 2);
  g.col(0) = coeff_.transpose() * dx;
  g.col(1) = coeff_.transpose() * dy;
  return g;
}

const PolyBasis& PolyBasis::get(int degree) {
  static const std::array<PolyBasis, 5> cache = {PolyBasis(0), PolyBasis(1),
                                                 PolyBasis(2), PolyBasis(3),
                                                 PolyBasis(4)};
  if (degree < 0 || degree > 4)
    throw std::invalid_argument("PolyBasis: unsupported degree");
  return cache[degree];
}

BasisEval eval_basis(int degree, const std::vector<Eigen::Vector2d>& points) {
  const PolyBasis& basis = PolyBasis::get(degree);
  BasisEval out;
  out.values.resize(basis.dim(), points.size());
  out.grads.reserve(points.size());
  for (size_t q = 0; q < points.size(); ++q) {
    out.values.col(q) = basis.values(points[q]);
    out.grads.push_back(basis.gradients(points[q]));
  }
  return out;
}

}  // namespace dpgbem
