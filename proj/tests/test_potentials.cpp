#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dpgbem/potentials.hpp"
#include "dpgbem/quadrature.hpp"
#include "oracles.hpp"

using namespace dpgbem;

namespace {

std::array<Eigen::Vector3d, 3> random_triangle(std::mt19937& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  while (true) {
    std::array<Eigen::Vector3d, 3> c;
    for (auto& p : c) p = Eigen::Vector3d(unif(rng), unif(rng), unif(rng));
    double area = 0.5 * (c[1] - c[0]).cross(c[2] - c[0]).norm();
    double dmax = std::max({(c[1] - c[0]).norm(), (c[2] - c[1]).norm(),
                            (c[0] - c[2]).norm()});
    if (area > 0.05 * dmax * dmax) return c;  // avoid extreme slivers
  }
}

Eigen::Vector3d point_on_triangle(const ElementGeometry& g, std::mt19937& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double xi = unif(rng), eta = unif(rng);
  if (xi + eta > 1.0) {
    xi = 1.0 - xi;
    eta = 1.0 - eta;
  }
  return g.map(xi, eta);
}

}  // namespace

TEST_CASE("analytic potential: far-field monopole and brute force") {
  std::mt19937 rng(11);
  QuadratureConfig cfg;
  for (int trial = 0; trial < 20; ++trial) {
    auto corners = random_triangle(rng);
    auto g = element_geometry(corners);
    Eigen::Vector3d centroid = (corners[0] + corners[1] + corners[2]) / 3.0;
    Eigen::Vector3d dir = Eigen::Vector3d::Random().normalized();
    double R = 100.0 * g.diameter;
    Eigen::Vector3d x = centroid + R * dir;

    double value = analytic_deg0(g, x);
    CHECK(value > 0.0);
    double monopole = g.area / (4.0 * M_PI * R);
    CHECK(std::abs(value - monopole) < 0.01 * monopole);

    double brute = oracle::integrate_triangle_smooth(
        [&](const Eigen::Vector3d& y) {
          return 1.0 / (4.0 * M_PI * (x - y).norm());
        },
        corners, 2);
    CHECK(value == doctest::Approx(brute).epsilon(1e-10));
  }
}

TEST_CASE("analytic potential against brute force at near and on-triangle targets") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    auto corners = random_triangle(rng);
    auto g = element_geometry(corners);

    std::vector<Eigen::Vector3d> targets;
    targets.push_back(point_on_triangle(g, rng));                  // on T
    targets.push_back(g.map(0.3, 0.3) + 0.37 * g.h * g.normal);    // near, off plane
    targets.push_back(g.map(1.4, -0.2));                           // in plane, outside
    targets.push_back(g.corner[0]);                                // vertex
    targets.push_back(0.5 * (g.corner[0] + g.corner[1]));          // edge midpoint
    for (const auto& x : targets) {
      double value = analytic_deg0(g, x);
      CHECK(value > 0.0);
      double brute = oracle::integrate_triangle(
          [&](const Eigen::Vector3d& y) {
            double r = (x - y).norm();
            return r == 0.0 ? 0.0 : 1.0 / (4.0 * M_PI * r);
          },
          corners, x);
      CHECK(value == doctest::Approx(brute).epsilon(2e-6));
    }
  }
}

TEST_CASE("duffy moments match the analytic oracle to 1e-7") {
  std::mt19937 rng(42);
  QuadratureConfig cfg;
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(1);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto corners = random_triangle(rng);
    auto g = element_geometry(corners);
    Eigen::Vector3d x;
    switch (trial % 4) {
      case 0:
        x = point_on_triangle(g, rng);  // on the triangle
        break;
      case 1: {  // near, slightly off the plane
        std::uniform_real_distribution<double> unif(0.02, 0.5);
        x = point_on_triangle(g, rng) + unif(rng) * g.h * g.normal;
        break;
      }
      case 2:  // in plane, outside
        x = g.map(1.3, 0.4);
        break;
      default: {  // moderate distance in a random direction
        std::uniform_real_distribution<double> unif(0.5, 6.0);
        x = g.map(0.25, 0.25) + unif(rng) * g.h * Eigen::Vector3d::Random().normalized();
        break;
      }
    }
    SingleLayerQuery q{g, 0, ones, x};
    double duffy = duffy_moment(q, cfg);
    double exact = analytic_deg0(g, x);
    CHECK(std::abs(duffy - exact) <= 1e-7 * std::abs(exact));
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("duffy: zero density, symmetry, monotone order convergence") {
  std::mt19937 rng(5);
  QuadratureConfig cfg;

  // zero density
  auto g0 = element_geometry({Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 0, 0),
                              Eigen::Vector3d(0, 1, 0)});
  SingleLayerQuery qz{g0, 2, Eigen::VectorXd::Zero(6), g0.map(0.3, 0.3)};
  CHECK(duffy_moment(qz, cfg) == 0.0);

  // mirror symmetry: isoceles source, targets mirrored across the symmetry
  // plane, symmetric quadratic density
  auto giso = element_geometry({Eigen::Vector3d(-1, 0, 0), Eigen::Vector3d(1, 0, 0),
                                Eigen::Vector3d(0, 2, 0)});
  // density symmetric under (x -> -x): nodes of P2 on the lattice map into
  // each other; build coefficients from a symmetric function
  const PolyBasis& p2 = PolyBasis::get(2);
  Eigen::VectorXd coeff(p2.dim());
  for (int i = 0; i < p2.dim(); ++i) {
    Eigen::Vector3d node = giso.map(p2.nodes()[i][0], p2.nodes()[i][1]);
    coeff[i] = 1.0 + node.x() * node.x() + 0.5 * node.y();
  }
  for (int trial = 0; trial < 10; ++trial) {
    std::uniform_real_distribution<double> unif(-1.5, 1.5);
    double px = unif(rng), py = unif(rng), pz = unif(rng);
    SingleLayerQuery qa{giso, 2, coeff, Eigen::Vector3d(px, py, pz)};
    SingleLayerQuery qb{giso, 2, coeff, Eigen::Vector3d(-px, py, pz)};
    double va = duffy_moment(qa, cfg);
    double vb = duffy_moment(qb, cfg);
    CHECK(va == doctest::Approx(vb).epsilon(1e-12));
  }

  // monotone convergence in Duffy order on singular queries
  std::mt19937 rng2(77);
  for (int trial = 0; trial < 10; ++trial) {
    auto corners = random_triangle(rng2);
    auto g = element_geometry(corners);
    Eigen::Vector3d x = point_on_triangle(g, rng2);
    double exact = analytic_deg0(g, x);
    SingleLayerQuery q{g, 0, Eigen::VectorXd::Ones(1), x};
    double prev_err = 1e300;
    for (int order : {2, 4, 6, 8}) {
      QuadratureConfig c = cfg;
      c.duffy_order = order;
      double err = std::abs(duffy_moment(q, c) - exact);
      CHECK(err <= prev_err * (1.0 + 1e-9) + 1e-16);
      prev_err = err;
    }
  }
}

TEST_CASE("higher-degree moments against brute force") {
  std::mt19937 rng(3);
  QuadratureConfig cfg;
  for (int trial = 0; trial < 6; ++trial) {
    auto corners = random_triangle(rng);
    auto g = element_geometry(corners);
    Eigen::Vector3d x = trial % 2 == 0 ? point_on_triangle(g, rng)
                                       : g.map(0.8, 0.8);  // outside, in plane
    int degree = 2;
    Eigen::VectorXd m = single_layer_moments(g, degree, x, cfg);
    const PolyBasis& basis = PolyBasis::get(degree);
    for (int k = 0; k < basis.dim(); k += 3) {
      double brute = oracle::integrate_triangle(
          [&](const Eigen::Vector3d& y) {
            double r = (x - y).norm();
            if (r == 0.0) return 0.0;
            Eigen::Vector2d rc = g.to_reference(y);
            return basis.values(rc)[k] / (4.0 * M_PI * r);
          },
          corners, x);
      CHECK(m[k] == doctest::Approx(brute).epsilon(5e-6));
    }
  }
}

TEST_CASE("edge potential entries: zero density, far-field bound, Stokes consistency") {
  QuadratureConfig cfg;
  auto source = element_geometry({Eigen::Vector3d(0, 0, 0),
                                  Eigen::Vector3d(1, 0, 0),
                                  Eigen::Vector3d(0, 1, 0)});

  // density 0 -> 0
  Eigen::Matrix3Xd zero(3, 6);
  zero.setZero();
  CHECK(edge_potential_entry(Eigen::Vector3d(3, 0, 0), Eigen::Vector3d(3, 1, 0),
                             +1, source, zero, cfg) == 0.0);

  // far-field kernel bound
  Eigen::Vector3d ea(20.0, 0.0, 0.0), eb(20.0, 1.0, 0.0);
  Eigen::Matrix3Xd density(3, 6);
  density.setZero();
  density.row(1).setConstant(1.0);  // constant unit density in e_y
  double entry = edge_potential_entry(ea, eb, +1, source, density, cfg);
  double R = 20.0;
  double bound = 1.0 * source.area * 1.0 / (4.0 * M_PI * (R - source.diameter));
  CHECK(std::abs(entry) <= bound * 1.05);

  // Stokes-type consistency: sum over the three edges of a disjoint target
  // triangle equals the direct surface integral of curl (V tau)
  auto target = element_geometry({Eigen::Vector3d(2.5, 0.2, 0.3),
                                  Eigen::Vector3d(3.5, 0.1, 0.4),
                                  Eigen::Vector3d(2.8, 1.1, 0.2)});
  const PolyBasis& p2 = PolyBasis::get(2);
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::Matrix3Xd dens(3, 6);
  for (int k = 0; k < 6; ++k)
    dens.col(k) = unif(rng) * source.t1 + unif(rng) * source.t2;

  double edge_sum = 0.0;
  for (int k = 0; k < 3; ++k) {
    Eigen::Vector3d a = target.corner[k];
    Eigen::Vector3d b = target.corner[(k + 1) % 3];
    edge_sum += edge_potential_entry(a, b, +1, source, dens, cfg);
  }

  // direct surface integral of curl(V tau): with tau = sum_k b_k c_k,
  // curl(V tau)(x) = -sum_k (n x c_k) . grad M_k(x) and
  // grad M_k(x) = integral of b_k(y) (y - x) / (4 pi r^3) dy (smooth here)
  auto curl_V_tau = [&](const Eigen::Vector3d& x) {
    double value = 0.0;
    for (int k = 0; k < 6; ++k) {
      Eigen::Vector3d gk;
      for (int c = 0; c < 3; ++c) {
        gk[c] = oracle::integrate_triangle_smooth(
            [&](const Eigen::Vector3d& y) {
              Eigen::Vector2d rc = source.to_reference(y);
              double bk = p2.values(rc)[k];
              double r = (x - y).norm();
              return bk * (y[c] - x[c]) / (4.0 * M_PI * r * r * r);
            },
            source.corner, 2);
      }
      value += -target.normal.cross(dens.col(k)).dot(gk);
    }
    return value;
  };
  double direct = oracle::integrate_triangle_smooth(curl_V_tau, target.corner, 1);
  CHECK(edge_sum == doctest::Approx(direct).epsilon(1e-6));
}

TEST_CASE("edge potential: wrong-sized density throws, oracle check near source") {
  QuadratureConfig cfg;
  auto source = element_geometry({Eigen::Vector3d(0, 0, 0),
                                  Eigen::Vector3d(1, 0, 0),
                                  Eigen::Vector3d(0, 1, 0)});
  Eigen::Matrix3Xd bad(3, 5);
  bad.setZero();
  CHECK_THROWS(edge_potential_entry(Eigen::Vector3d(1, 0, 0),
                                    Eigen::Vector3d(1, 1, 0), 1, source, bad, cfg));

  // nested rule vs independent brute force on a touching edge (shares the
  // vertex (1,0,0)): density constant e_x
  Eigen::Vector3d a(1, 0, 0), b(1.5, 0.5, 0);
  Eigen::Matrix3Xd dens(3, 1);
  dens.col(0) = Eigen::Vector3d::UnitX();
  double entry = edge_potential_entry(a, b, +1, source, dens, cfg);
  Eigen::Vector3d that = (b - a).normalized();
  double brute = oracle::integrate_segment(
      [&](const Eigen::Vector3d& x) {
        double m = oracle::integrate_triangle(
            [&](const Eigen::Vector3d& y) {
              double r = (x - y).norm();
              return r == 0.0 ? 0.0 : 1.0 / (4.0 * M_PI * r);
            },
            source.corner, x, 14);
        return that.dot(Eigen::Vector3d::UnitX()) * m;
      },
      a, b, 12);
  CHECK(entry == doctest::Approx(brute).epsilon(2e-5));
}

TEST_CASE("swapped-order edge integrals agree with the nested rule") {
  QuadratureConfig cfg;
  std::mt19937 rng(31);
  auto source = element_geometry({Eigen::Vector3d(0, 0, 0),
                                  Eigen::Vector3d(1, 0, 0),
                                  Eigen::Vector3d(0, 1, 0)});

  struct Case {
    Eigen::Vector3d a, b;
  };
  std::vector<Case> cases = {
      {Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 0, 0)},      // own edge
      {Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(2, 0.5, 0)},    // shared vertex
      {Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(2, 0, 0)},      // collinear touch
      {Eigen::Vector3d(0.2, -0.5, 0), Eigen::Vector3d(1.2, -0.6, 0)},  // near
      {Eigen::Vector3d(0.5, 0.5, 0.7), Eigen::Vector3d(1.0, 0.2, 0.9)},  // off-plane
      {Eigen::Vector3d(4, 1, 2), Eigen::Vector3d(5, 1, 2)},      // far
      {Eigen::Vector3d(0, 1, 0), Eigen::Vector3d(-0.3, 1.8, 0.4)},  // shared vertex 2
  };
  for (int degree : {0, 2}) {
    for (const auto& c : cases) {
      Eigen::VectorXd nested = edge_moment_integrals(c.a, c.b, source, degree, cfg);
      Eigen::VectorXd swapped =
          edge_moment_integrals_swapped(c.a, c.b, source, degree, cfg);
      double scale = nested.cwiseAbs().maxCoeff();
      REQUIRE(scale > 0.0);
      for (int k = 0; k < nested.size(); ++k)
        CHECK(std::abs(nested[k] - swapped[k]) <= 2e-7 * scale);
    }
  }
}

TEST_CASE("single layer field: zero, linearity, Galerkin symmetry, positivity") {
  // meshes and densities
  SurfaceMesh cube = dpgbem::build_cube_surface();
  QuadratureConfig cfg;
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);

  PiecewiseVectorDensity zero;
  zero.degree = 0;
  zero.coeff.assign(cube.num_triangles(), Eigen::Matrix3Xd::Zero(3, 1));
  Eigen::Vector3d fz =
      eval_single_layer_field(cube, zero, Eigen::Vector3d(0.1, 0.2, 3.0), cfg);
  CHECK(fz.norm() == 0.0);

  auto random_density = [&](auto& density) {
    density.degree = 0;
    density.coeff.clear();
    for (int t = 0; t < cube.num_triangles(); ++t) {
      auto g = element_geometry(cube, t);
      Eigen::Matrix3Xd c(3, 1);
      c.col(0) = unif(rng) * g.t1 + unif(rng) * g.t2;
      density.coeff.push_back(c);
    }
  };

  PiecewiseVectorDensity mu, nu;
  random_density(mu);
  random_density(nu);

  // linearity at a point
  Eigen::Vector3d x(0.3, -0.2, 1.0);
  PiecewiseVectorDensity combo;
  combo.degree = 0;
  for (int t = 0; t < cube.num_triangles(); ++t)
    combo.coeff.push_back(2.0 * mu.coeff[t] - 3.0 * nu.coeff[t]);
  Eigen::Vector3d f_combo = eval_single_layer_field(cube, combo, x, cfg);
  Eigen::Vector3d f_lin = 2.0 * eval_single_layer_field(cube, mu, x, cfg) -
                          3.0 * eval_single_layer_field(cube, nu, x, cfg);
  CHECK((f_combo - f_lin).norm() <= 1e-12 * f_lin.norm());

  // Galerkin symmetry and positivity by outer quadrature over the cube:
  // W(T,S) = integral over the target T of the source-S unit potential, with
  // the outer rule graded toward the target boundary where the potential of
  // a piecewise density loses smoothness
  int n = cube.num_triangles();
  Eigen::MatrixXd W(n, n);
  std::vector<ElementGeometry> geom;
  for (int t = 0; t < n; ++t) geom.push_back(element_geometry(cube, t));
  for (int t = 0; t < n; ++t)
    for (int s = 0; s < n; ++s)
      W(t, s) = oracle::integrate_triangle_edge_graded(
          [&](const Eigen::Vector3d& xq) { return analytic_deg0(geom[s], xq); },
          geom[t].corner);

  auto pairing = [&](const PiecewiseVectorDensity& d1,
                     const PiecewiseVectorDensity& d2) {
    double sum = 0.0;
    for (int t = 0; t < n; ++t)
      for (int s = 0; s < n; ++s)
        sum += d2.coeff[t].col(0).dot(d1.coeff[s].col(0)) * W(t, s);
    return sum;
  };

  double ab = pairing(mu, nu);
  double ba = pairing(nu, mu);
  CHECK(std::abs(ab - ba) <= 1e-6 * std::max(std::abs(ab), std::abs(ba)));
  double aa = pairing(mu, mu);
  CHECK(aa > 0.0);
}
