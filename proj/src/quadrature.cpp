#include "dpgbem/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include <Eigen/Dense>

namespace dpgbem {

namespace {

std::vector<QuadPoint1D> make_gauss_legendre(int n) {
  // Newton iteration on Legendre polynomials over [-1,1], mapped to [0,1].
  std::vector<QuadPoint1D> rule(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule[n - 1 - i].x = 0.5 * (x + 1.0);
    rule[n - 1 - i].w = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

std::vector<QuadPoint1D> make_gauss_jacobi10(int n) {
  // Golub-Welsch for the Jacobi weight (1-x)^1 (1+x)^0 on [-1,1].
  const double alpha = 1.0, beta = 0.0;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    double den = (2 * k + alpha + beta) * (2 * k + alpha + beta + 2);
    J(k, k) = den == 0.0 ? (beta - alpha) / (alpha + beta + 2)
                         : (beta * beta - alpha * alpha) / den;
    if (k > 0) {
      double num = 4.0 * k * (k + alpha) * (k + beta) * (k + alpha + beta);
      double d = (2 * k + alpha + beta);
      double off = std::sqrt(num / (d * d * (d + 1) * (d - 1)));
      J(k, k - 1) = J(k - 1, k) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  const double mu0 = 2.0;  // total mass of (1-x) on [-1,1]
  std::vector<QuadPoint1D> rule(n);
  for (int i = 0; i < n; ++i) {
    double xi = es.eigenvalues()[i];
    double wi = mu0 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
    // Map to [0,1] with weight (1-u): u = (1+x)/2, (1-x) dx = 4 (1-u) du.
    rule[i].x = 0.5 * (1.0 + xi);
    rule[i].w = 0.25 * wi;
  }
  return rule;
}

std::vector<TriQuadPoint> conical_rule(int degree) {
  int n = degree / 2 + 1;
  const auto& gu = gauss_jacobi10(n);
  const auto& gv = gauss_legendre(n);
  std::vector<TriQuadPoint> rule;
  rule.reserve(n * n);
  for (const auto& pu : gu)
    for (const auto& pv : gv)
      rule.push_back({pu.x, pv.x * (1.0 - pu.x), pu.w * pv.w});
  return rule;
}

void push_sym3(std::vector<TriQuadPoint>& r, double a, double b, double w) {
  // permutations of barycentric (a, b, b); reference coords (xi,eta) from
  // barycentric (l0,l1,l2) with xi=l1, eta=l2
  r.push_back({b, b, w});
  r.push_back({a, b, w});
  r.push_back({b, a, w});
}

std::vector<TriQuadPoint> make_triangle_rule(int degree) {
  std::vector<TriQuadPoint> r;
  switch (degree) {
    case 0:
    case 1:
      r.push_back({1.0 / 3.0, 1.0 / 3.0, 0.5});
      return r;
    case 2:
      push_sym3(r, 2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0);
      return r;
    case 3:
    case 4: {
      // Strang-Fix 6-point, degree 4
      double a1 = 0.816847572980459, b1 = 0.091576213509771;
      double w1 = 0.109951743655322 / 2.0;
      double a2 = 0.108103018168070, b2 = 0.445948490915965;
      double w2 = 0.223381589678011 / 2.0;
      push_sym3(r, a1, b1, w1);
      push_sym3(r, a2, b2, w2);
      return r;
    }
    case 5: {
      // classical 7-point rule
      double s15 = std::sqrt(15.0);
      r.push_back({1.0 / 3.0, 1.0 / 3.0, 9.0 / 80.0});
      push_sym3(r, (9.0 + 2.0 * s15) / 21.0, (6.0 - s15) / 21.0,
                (155.0 - s15) / 2400.0);
      push_sym3(r, (9.0 - 2.0 * s15) / 21.0, (6.0 + s15) / 21.0,
                (155.0 + s15) / 2400.0);
      return r;
    }
    default:
      return conical_rule(degree);
  }
}

template <typename Rule, typename Maker>
const Rule& cached(std::map<int, Rule>& cache, std::mutex& m, int key,
                   Maker make) {
  std::lock_guard<std::mutex> lock(m);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, make(key)).first;
  return it->second;
}

}  // namespace

const std::vector<QuadPoint1D>& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  static std::map<int, std::vector<QuadPoint1D>> cache;
  static std::mutex m;
  return cached(cache, m, n, make_gauss_legendre);
}

const std::vector<QuadPoint1D>& gauss_jacobi10(int n) {
  if (n < 1) throw std::invalid_argument("gauss_jacobi10: n must be >= 1");
  static std::map<int, std::vector<QuadPoint1D>> cache;
  static std::mutex m;
  return cached(cache, m, n, make_gauss_jacobi10);
}

const std::vector<TriQuadPoint>& triangle_rule(int degree) {
  if (degree < 0) throw std::invalid_argument("triangle_rule: degree must be >= 0");
  static std::map<int, std::vector<TriQuadPoint>> cache;
  static std::mutex m;
  return cached(cache, m, degree, make_triangle_rule);
}

}  // namespace dpgbem
