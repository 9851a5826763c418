#include "dpgbem/potentials.hpp"

#include <cmath>

#include "dpgbem/quadrature.hpp"

namespace dpgbem {

namespace {

constexpr double kFourPi = 4.0 * M_PI;

}  // namespace

double point_triangle_distance(const ElementGeometry& g,
                               const Eigen::Vector3d& p) {
  // Ericson's closest-point-on-triangle construction.
  const Eigen::Vector3d& a = g.corner[0];
  const Eigen::Vector3d& b = g.corner[1];
  const Eigen::Vector3d& c = g.corner[2];
  Eigen::Vector3d ab = b - a, ac = c - a, ap = p - a;
  double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0 && d2 <= 0) return (p - a).norm();
  Eigen::Vector3d bp = p - b;
  double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0 && d4 <= d3) return (p - b).norm();
  double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) {
    double v = d1 / (d1 - d3);
    return (p - (a + v * ab)).norm();
  }
  Eigen::Vector3d cp = p - c;
  double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0 && d5 <= d6) return (p - c).norm();
  double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) {
    double w = d2 / (d2 - d6);
    return (p - (a + w * ac)).norm();
  }
  double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) {
    double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return (p - (b + w * (c - b))).norm();
  }
  double denom = 1.0 / (va + vb + vc);
  double v = vb * denom, w = vc * denom;
  return (p - (a + v * ab + w * ac)).norm();
}

double analytic_deg0(const std::array<Eigen::Vector3d, 3>& corners,
                     const Eigen::Vector3d& x) {
  Eigen::Vector3d e01 = corners[1] - corners[0];
  Eigen::Vector3d e02 = corners[2] - corners[0];
  Eigen::Vector3d n = e01.cross(e02);
  double nn = n.norm();
  double scale = std::max({e01.norm(), e02.norm(), (corners[2] - corners[1]).norm()});
  if (!(nn > 1e-14 * scale * scale))
    throw std::runtime_error("analytic_deg0: degenerate triangle");
  n /= nn;

  double z = (x - corners[0]).dot(n);
  Eigen::Vector3d rho = x - z * n;
  double az = std::abs(z);
  const double eps = 1e-14 * scale;

  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    const Eigen::Vector3d& A = corners[i];
    const Eigen::Vector3d& B = corners[(i + 1) % 3];
    Eigen::Vector3d tv = B - A;
    double len = tv.norm();
    Eigen::Vector3d that = tv / len;
    Eigen::Vector3d mhat = that.cross(n);  // outward in-plane edge normal

    double d = (A - rho).dot(mhat);
    double lm = (A - rho).dot(that);
    double lp = (B - rho).dot(that);
    double Rm = (x - A).norm();
    double Rp = (x - B).norm();

    if (std::abs(d) < eps && az < eps) continue;  // edge term vanishes in the limit

    // stable evaluation of log((lp+Rp)/(lm+Rm)): l+R cancels for l < 0, but
    // (l+R)(R-l) equals the squared distance to the edge line
    double logterm;
    if (lm >= 0.0) {
      logterm = std::log((lp + Rp) / (lm + Rm));
    } else if (lp <= 0.0) {
      logterm = std::log((Rm - lm) / (Rp - lp));
    } else {
      double dline2 = (A - x).cross(that).squaredNorm();
      logterm = std::log((lp + Rp) * (Rm - lm) / dline2);
    }
    sum += d * logterm;

    if (az > eps && std::abs(d) > eps) {
      sum += az * (std::atan2(az * lp, d * Rp) - std::atan2(az * lm, d * Rm) -
                   std::atan2(lp, d) + std::atan2(lm, d));
    }
  }
  double value = sum / kFourPi;
  if (!std::isfinite(value))
    throw QuadratureDiagnostic("analytic_deg0: non-finite value", value);
  return value;
}

double analytic_deg0(const ElementGeometry& geom, const Eigen::Vector3d& x) {
  return analytic_deg0(geom.corner, x);
}

namespace {

// Panels on [0,1] graded dyadically toward an interior point vstar from both
// sides; resolves an angular near-kink of relative width `ratio`.
std::vector<std::pair<double, double>> panels_graded_interior(double vstar,
                                                              double ratio,
                                                              int max_depth) {
  std::vector<std::pair<double, double>> panels;
  int depth = std::clamp(
      (int)std::ceil(std::log2(1.0 / std::max(ratio, 1e-14))), 1, max_depth);
  auto side = [&](double from, double to) {
    double span = to - from;
    double prev = 0.0;
    for (int j = depth; j >= 0; --j) {
      double next = std::ldexp(1.0, -j);
      panels.emplace_back(from + span * prev, from + span * next);
      prev = next;
    }
  };
  if (vstar > 1e-12) side(vstar, 0.0);
  if (vstar < 1.0 - 1e-12) side(vstar, 1.0);
  return panels;
}

// Duffy-transformed integration over the sub-triangle (q0, r1, r2) in
// reference coordinates, with the 1/r singularity at q0. Accumulates the
// per-basis moments.
void duffy_subtriangle(const ElementGeometry& g, const PolyBasis& basis,
                       const Eigen::Vector3d& x, const Eigen::Vector2d& q0,
                       const Eigen::Vector2d& r1, const Eigen::Vector2d& r2,
                       double z, const QuadratureConfig& cfg,
                       Eigen::VectorXd& out) {
  double s2 = (r1 - q0).x() * (r2 - q0).y() - (r1 - q0).y() * (r2 - q0).x();
  if (std::abs(s2) < 1e-14) return;  // degenerate sliver

  Eigen::Vector3d xp = x - z * g.normal;
  Eigen::Vector3d P1 = g.map(r1.x(), r1.y());
  Eigen::Vector3d P2 = g.map(r2.x(), r2.y());
  Eigen::Vector3d W0 = P1 - xp;
  Eigen::Vector3d W1 = P2 - P1;

  // The angular factor 1/|W(v)| peaks sharply where the far edge passes
  // closest to the singular point: grade the v-panels toward that spot.
  std::vector<std::pair<double, double>> vpanels = {{0.0, 1.0}};
  double w11 = W1.squaredNorm();
  if (w11 > 0) {
    double vstar = std::clamp(-W0.dot(W1) / w11, 0.0, 1.0);
    double wmin = (W0 + vstar * W1).norm();
    double ratio = std::sqrt(wmin * wmin + z * z) / std::sqrt(w11);
    if (ratio < 0.5)
      vpanels = panels_graded_interior(vstar, ratio, cfg.max_depth);
  }

  // u-panels: dyadic toward u = 0 when the target sits slightly off-plane,
  // to resolve the sqrt(u^2 |W|^2 + z^2) transition.
  std::vector<double> ubreaks;
  double az = std::abs(z);
  double wscale = std::sqrt(std::max(W0.squaredNorm(), (W0 + W1).squaredNorm()));
  if (az > 0 && wscale > 0 && az < 0.5 * wscale) {
    int depth = std::min(cfg.max_depth,
                         std::max(2, (int)std::ceil(std::log2(wscale / az))));
    ubreaks.push_back(0.0);
    for (int j = depth; j >= 1; --j) ubreaks.push_back(std::ldexp(1.0, -j));
    ubreaks.push_back(1.0);
  } else {
    ubreaks = {0.0, 1.0};
  }

  const auto& gl = gauss_legendre(cfg.duffy_order);
  double sign = s2 > 0 ? 1.0 : -1.0;
  double jac_const = std::abs(s2) * 2.0 * g.area / kFourPi;

  std::vector<double> bvals(basis.dim());
  for (size_t up = 0; up + 1 < ubreaks.size(); ++up) {
    double u0 = ubreaks[up], du = ubreaks[up + 1] - ubreaks[up];
    for (const auto& qu : gl) {
      double u = u0 + du * qu.x;
      double wu = du * qu.w;
      for (const auto& [v0, v1] : vpanels) {
        double dv = v1 - v0;
        for (const auto& qv : gl) {
          double v = v0 + dv * qv.x;
          double wv = std::abs(dv) * qv.w;
          Eigen::Vector3d Wv = W0 + v * W1;
          double r = std::sqrt(z * z + u * u * Wv.squaredNorm());
          if (r == 0.0) continue;
          Eigen::Vector2d y = q0 + u * ((r1 - q0) + v * (r2 - r1));
          basis.values_into(y.x(), y.y(), bvals.data());
          double w = sign * jac_const * wu * wv * u / r;
          for (int k = 0; k < basis.dim(); ++k) out[k] += w * bvals[k];
        }
      }
    }
  }
}

}  // namespace

Eigen::VectorXd single_layer_moments(const ElementGeometry& geom, int degree,
                                     const Eigen::Vector3d& x,
                                     const QuadratureConfig& cfg) {
  cfg.check();
  if (degree < 0 || degree > 4)
    throw std::invalid_argument("single_layer_moments: unsupported degree");
  const PolyBasis& basis = PolyBasis::get(degree);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(basis.dim());

  double dist = point_triangle_distance(geom, x);
  if (dist > cfg.near_threshold * geom.h) {
    const auto& rule = triangle_rule(cfg.far_order);
    double jac = 2.0 * geom.area / kFourPi;
    for (const auto& q : rule) {
      Eigen::Vector3d y = geom.map(q.xi, q.eta);
      double r = (x - y).norm();
      out += (q.w * jac / r) * basis.values(Eigen::Vector2d(q.xi, q.eta));
    }
    return out;
  }

  double z = (x - geom.corner[0]).dot(geom.normal);
  Eigen::Vector2d q0 = geom.to_reference(x - z * geom.normal);
  static const Eigen::Vector2d ref[3] = {Eigen::Vector2d(0, 0),
                                         Eigen::Vector2d(1, 0),
                                         Eigen::Vector2d(0, 1)};
  for (int k = 0; k < 3; ++k)
    duffy_subtriangle(geom, basis, x, q0, ref[k], ref[(k + 1) % 3], z, cfg, out);

  for (int k = 0; k < basis.dim(); ++k)
    if (!std::isfinite(out[k]))
      throw QuadratureDiagnostic("single_layer_moments: non-finite moment", out[k]);
  return out;
}

double duffy_moment(const SingleLayerQuery& q, const QuadratureConfig& cfg) {
  if (q.density_coeff.size() != PolyBasis::get(q.degree).dim())
    throw std::invalid_argument("duffy_moment: coefficient size mismatch");
  return single_layer_moments(q.source, q.degree, q.target, cfg)
      .dot(q.density_coeff);
}

namespace {

void append_graded(std::vector<std::pair<double, double>>& panels, double from,
                   double to, int depth) {
  // dyadic panels on [from,to] accumulating toward `from`
  double span = to - from;
  std::vector<double> breaks;
  breaks.push_back(0.0);
  for (int j = depth; j >= 0; --j) breaks.push_back(std::ldexp(1.0, -j));
  for (size_t i = 0; i + 1 < breaks.size(); ++i)
    panels.emplace_back(from + span * breaks[i], from + span * breaks[i + 1]);
}

double segment_point_distance(const Eigen::Vector3d& a,
                              const Eigen::Vector3d& b,
                              const Eigen::Vector3d& p) {
  Eigen::Vector3d ab = b - a;
  double t = ab.squaredNorm() > 0 ? (p - a).dot(ab) / ab.squaredNorm() : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

// Closest parameters (s on [a0,a1], t on [b0,b1]) between two segments.
std::pair<double, double> segment_segment_closest(const Eigen::Vector3d& a0,
                                                  const Eigen::Vector3d& a1,
                                                  const Eigen::Vector3d& b0,
                                                  const Eigen::Vector3d& b1) {
  Eigen::Vector3d d1 = a1 - a0, d2 = b1 - b0, r = a0 - b0;
  double A = d1.squaredNorm(), E = d2.squaredNorm(), F = d2.dot(r);
  double s = 0.0, t = 0.0;
  if (A <= 1e-30 && E <= 1e-30) return {0.0, 0.0};
  if (A <= 1e-30) {
    t = std::clamp(F / E, 0.0, 1.0);
  } else {
    double C = d1.dot(r);
    if (E <= 1e-30) {
      s = std::clamp(-C / A, 0.0, 1.0);
    } else {
      double B = d1.dot(d2);
      double den = A * E - B * B;
      s = den > 1e-30 * A * E ? std::clamp((B * F - C * E) / den, 0.0, 1.0) : 0.0;
      t = (B * s + F) / E;
      if (t < 0) {
        t = 0;
        s = std::clamp(-C / A, 0.0, 1.0);
      } else if (t > 1) {
        t = 1;
        s = std::clamp((B - C) / A, 0.0, 1.0);
      }
    }
  }
  return {s, t};
}

}  // namespace

double segment_triangle_distance(const Eigen::Vector3d& a,
                                 const Eigen::Vector3d& b,
                                 const ElementGeometry& geom) {
  double d = std::min(point_triangle_distance(geom, a),
                      point_triangle_distance(geom, b));
  for (int k = 0; k < 3; ++k) {
    auto [s, t] = segment_segment_closest(a, b, geom.corner[k],
                                          geom.corner[(k + 1) % 3]);
    Eigen::Vector3d pa = a + s * (b - a);
    Eigen::Vector3d pb = geom.corner[k] + t * (geom.corner[(k + 1) % 3] - geom.corner[k]);
    d = std::min(d, (pa - pb).norm());
  }
  // Piercing: the segment crosses the triangle plane at an interior point.
  double za = (a - geom.corner[0]).dot(geom.normal);
  double zb = (b - geom.corner[0]).dot(geom.normal);
  if (za * zb < 0) {
    double t = za / (za - zb);
    Eigen::Vector3d p = a + t * (b - a);
    if (point_triangle_distance(geom, p) < 1e-12 * geom.diameter) return 0.0;
  }
  return d;
}

double segment_potential(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                         const Eigen::Vector3d& y) {
  Eigen::Vector3d tv = b - a;
  double len = tv.norm();
  Eigen::Vector3d that = tv / len;
  double lm = (a - y).dot(that);
  double lp = (b - y).dot(that);
  double Rm = (y - a).norm();
  double Rp = (y - b).norm();
  double v;
  if (lm >= 0.0) {
    v = std::log((lp + Rp) / (lm + Rm));
  } else if (lp <= 0.0) {
    v = std::log((Rm - lm) / (Rp - lp));
  } else {
    double dline2 = (a - y).cross(that).squaredNorm();
    v = std::log((lp + Rp) * (Rm - lm) / dline2);
  }
  if (!std::isfinite(v))
    throw QuadratureDiagnostic("segment_potential: evaluation on the segment", v);
  return v / kFourPi;
}

namespace {

// breakpoints 0 < 2^-depth < ... < 1/2 < 1 as (lo,hi) panels on [0,1]
std::vector<std::pair<double, double>> dyadic_panels(int depth) {
  std::vector<std::pair<double, double>> p;
  append_graded(p, 0.0, 1.0, depth);
  return p;
}

// panels in w for the substitution u = exp(w), u in (0,1]
std::vector<std::pair<double, double>> exp_panels(double wmin, double width) {
  std::vector<std::pair<double, double>> p;
  double w = wmin;
  while (w < 0.0) {
    double w1 = std::min(0.0, w + width);
    p.emplace_back(w, w1);
    w = w1;
  }
  return p;
}

// Swapped-order integration over one signed reference sub-triangle
// (q0, r1, r2) of the source, with the segment potential as the kernel
// factor. `touching` selects the exp substitution in the radial direction.
void swapped_subtriangle(const ElementGeometry& g, const PolyBasis& basis,
                         const Eigen::Vector3d& ea, const Eigen::Vector3d& eb,
                         const Eigen::Vector2d& q0, const Eigen::Vector2d& r1,
                         const Eigen::Vector2d& r2, bool touching, double d0,
                         Eigen::VectorXd& out) {
  double s2 = (r1 - q0).x() * (r2 - q0).y() - (r1 - q0).y() * (r2 - q0).x();
  if (std::abs(s2) < 1e-14) return;

  Eigen::Vector3d Y0 = g.map(q0.x(), q0.y());
  Eigen::Vector3d P1 = g.map(r1.x(), r1.y());
  Eigen::Vector3d P2 = g.map(r2.x(), r2.y());

  // Grade the v-panels toward the point where the far edge of the
  // sub-triangle passes closest to the segment.
  std::vector<std::pair<double, double>> vpanels = {{0.0, 1.0}};
  {
    auto [vs, ts] = segment_segment_closest(P1, P2, ea, eb);
    (void)ts;
    Eigen::Vector3d pa = P1 + vs * (P2 - P1);
    double dmin = segment_point_distance(ea, eb, pa);
    double span = (P2 - P1).norm();
    if (span > 0 && dmin < 0.5 * span)
      vpanels = panels_graded_interior(vs, dmin / span, 16);
  }

  std::vector<std::pair<double, double>> upanels;
  bool expsub = touching;
  if (expsub) {
    upanels = exp_panels(-34.0, 2.0);
  } else {
    double scale = std::max({(P1 - Y0).norm(), (P2 - Y0).norm(), 1e-300});
    int depth = std::clamp((int)std::ceil(std::log2(scale / std::max(d0, 1e-14 * scale))),
                           1, 20);
    upanels = dyadic_panels(depth);
  }

  const auto& glu = gauss_legendre(8);
  const auto& glv = gauss_legendre(12);
  double sign = s2 > 0 ? 1.0 : -1.0;
  double jac_const = std::abs(s2) * 2.0 * g.area;

  std::vector<double> bvals(basis.dim());
  for (const auto& [u0, u1] : upanels) {
    for (const auto& qu : glu) {
      double u, wu;
      if (expsub) {
        double w = u0 + (u1 - u0) * qu.x;
        u = std::exp(w);
        wu = (u1 - u0) * qu.w * u;  // du = e^w dw
      } else {
        u = u0 + (u1 - u0) * qu.x;
        wu = (u1 - u0) * qu.w;
      }
      for (const auto& [v0, v1] : vpanels) {
        double dv = v1 - v0;
        for (const auto& qv : glv) {
          double v = v0 + dv * qv.x;
          Eigen::Vector2d y = q0 + u * ((r1 - q0) + v * (r2 - r1));
          Eigen::Vector3d yw = Y0 + u * ((P1 - Y0) + v * (P2 - P1));
          double phi = segment_potential(ea, eb, yw);
          basis.values_into(y.x(), y.y(), bvals.data());
          double w = sign * jac_const * wu * std::abs(dv) * qv.w * u * phi;
          for (int k = 0; k < basis.dim(); ++k) out[k] += w * bvals[k];
        }
      }
    }
  }
}

}  // namespace

Eigen::VectorXd edge_moment_integrals_swapped(const Eigen::Vector3d& a,
                                              const Eigen::Vector3d& b,
                                              const ElementGeometry& source,
                                              int degree,
                                              const QuadratureConfig& cfg) {
  cfg.check();
  const PolyBasis& basis = PolyBasis::get(degree);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(basis.dim());
  double len = (b - a).norm();
  double scale = std::max(len, source.diameter);

  // Shared-edge detection: both segment endpoints coincide with corners.
  int ca = -1, cb = -1;
  for (int k = 0; k < 3; ++k) {
    if ((a - source.corner[k]).norm() < 1e-12 * scale) ca = k;
    if ((b - source.corner[k]).norm() < 1e-12 * scale) cb = k;
  }

  static const Eigen::Vector2d ref[3] = {Eigen::Vector2d(0, 0),
                                         Eigen::Vector2d(1, 0),
                                         Eigen::Vector2d(0, 1)};

  if (ca >= 0 && cb >= 0 && ca != cb) {
    // The segment is an edge of the source: tensor rule, log-resolving
    // exp-substituted transverse direction, endpoint-graded axis.
    int cc = 3 - ca - cb;
    Eigen::Vector2d A = ref[ca], B = ref[cb], C = ref[cc];
    std::vector<std::pair<double, double>> spanels;
    int sdepth = std::max(cfg.max_depth, 14);
    append_graded(spanels, 0.0, 0.5, sdepth);
    append_graded(spanels, 1.0, 0.5, sdepth);
    auto tpanels = exp_panels(-34.0, 2.0);
    const auto& gl = gauss_legendre(8);

    std::vector<double> bvals(basis.dim());
    double jac_const = 2.0 * source.area;
    for (const auto& [s0, s1] : spanels) {
      for (const auto& qs : gl) {
        double s = s0 + (s1 - s0) * qs.x;
        double ws = std::abs(s1 - s0) * qs.w;
        Eigen::Vector2d base = A + s * (B - A);
        for (const auto& [w0, w1] : tpanels) {
          for (const auto& qt : gl) {
            double w = w0 + (w1 - w0) * qt.x;
            double t = std::exp(w);
            double wt = (w1 - w0) * qt.w * t;
            Eigen::Vector2d y = (1.0 - t) * base + t * C;
            Eigen::Vector3d yw = source.map(y.x(), y.y());
            double phi = segment_potential(a, b, yw);
            basis.values_into(y.x(), y.y(), bvals.data());
            double wq = jac_const * ws * wt * (1.0 - t) * phi;
            for (int k = 0; k < basis.dim(); ++k) out[k] += wq * bvals[k];
          }
        }
      }
    }
    return out;
  }

  double dist = segment_triangle_distance(a, b, source);
  if (dist > 1.0 * scale || dist > cfg.near_threshold * source.h) {
    const auto& rule = triangle_rule(cfg.far_order);
    double jac = 2.0 * source.area;
    for (const auto& q : rule) {
      Eigen::Vector3d y = source.map(q.xi, q.eta);
      out += (q.w * jac * segment_potential(a, b, y)) *
             basis.values(Eigen::Vector2d(q.xi, q.eta));
    }
    return out;
  }
  if (dist > 0.3 * scale) {
    const auto& rule = triangle_rule(cfg.far_order + 6);
    double jac = 2.0 * source.area;
    for (const auto& q : rule) {
      Eigen::Vector3d y = source.map(q.xi, q.eta);
      out += (q.w * jac * segment_potential(a, b, y)) *
             basis.values(Eigen::Vector2d(q.xi, q.eta));
    }
    return out;
  }

  // Near or touching at a point: split the source at the closest point and
  // integrate radially from it.
  double best = std::numeric_limits<double>::infinity();
  Eigen::Vector3d y0 = source.corner[0];
  for (int k = 0; k < 3; ++k) {
    auto [s, t] = segment_segment_closest(a, b, source.corner[k],
                                          source.corner[(k + 1) % 3]);
    Eigen::Vector3d pa = a + s * (b - a);
    Eigen::Vector3d pb =
        source.corner[k] + t * (source.corner[(k + 1) % 3] - source.corner[k]);
    if ((pa - pb).norm() < best) {
      best = (pa - pb).norm();
      y0 = pb;
    }
  }
  for (int s = 0; s <= 6; ++s) {
    Eigen::Vector3d p = a + (s / 6.0) * (b - a);
    double z = (p - source.corner[0]).dot(source.normal);
    Eigen::Vector3d proj = p - z * source.normal;
    if (point_triangle_distance(source, proj) < 1e-12 * scale &&
        (p - proj).norm() < best) {
      best = (p - proj).norm();
      y0 = proj;
    }
  }

  bool touching = dist < 1e-9 * scale;
  Eigen::Vector2d q0 = source.to_reference(y0);
  for (int k = 0; k < 3; ++k)
    swapped_subtriangle(source, basis, a, b, q0, ref[k], ref[(k + 1) % 3],
                        touching, dist, out);

  for (int k = 0; k < basis.dim(); ++k)
    if (!std::isfinite(out[k]))
      throw QuadratureDiagnostic("edge_moment_integrals_swapped: non-finite", out[k]);
  return out;
}

Eigen::VectorXd edge_moment_integrals(const Eigen::Vector3d& a,
                                      const Eigen::Vector3d& b,
                                      const ElementGeometry& source, int degree,
                                      const QuadratureConfig& cfg) {
  cfg.check();
  const PolyBasis& basis = PolyBasis::get(degree);
  double length = (b - a).norm();
  double scale = std::max(length, source.diameter);

  double da = point_triangle_distance(source, a);
  double db = point_triangle_distance(source, b);
  double dmin = std::min(da, db);
  for (int s = 1; s <= 5; ++s)
    dmin = std::min(dmin, point_triangle_distance(
                              source, a + (s / 6.0) * (b - a)));

  bool a_on = da < 1e-12 * scale;
  bool b_on = db < 1e-12 * scale;

  std::vector<std::pair<double, double>> panels;
  if (dmin > 2.0 * scale) {
    panels.emplace_back(0.0, 1.0);
  } else if (!a_on && !b_on) {
    int n = dmin > 0.5 * scale ? 2 : 4;
    for (int i = 0; i < n; ++i)
      panels.emplace_back(double(i) / n, double(i + 1) / n);
  } else {
    int depth = cfg.max_depth;
    if (a_on && b_on) {
      append_graded(panels, 0.0, 0.5, depth);
      append_graded(panels, 1.0, 0.5, depth);
    } else if (a_on) {
      append_graded(panels, 0.0, 0.5, depth);
      panels.emplace_back(0.5, 0.75);
      panels.emplace_back(0.75, 1.0);
    } else {
      append_graded(panels, 1.0, 0.5, depth);
      panels.emplace_back(0.25, 0.5);
      panels.emplace_back(0.0, 0.25);
    }
  }

  const auto& gl = gauss_legendre(cfg.edge_order);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(basis.dim());
  for (const auto& [t0, t1] : panels) {
    double dt = t1 - t0;
    for (const auto& q : gl) {
      Eigen::Vector3d x = a + (t0 + dt * q.x) * (b - a);
      out += (std::abs(dt) * q.w * length) *
             single_layer_moments(source, degree, x, cfg);
    }
  }
  for (int k = 0; k < basis.dim(); ++k)
    if (!std::isfinite(out[k]))
      throw QuadratureDiagnostic("edge_moment_integrals: non-finite", out[k]);
  return out;
}

double edge_potential_entry(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                            int sign, const ElementGeometry& source,
                            const Eigen::Matrix3Xd& density_world,
                            const QuadratureConfig& cfg) {
  int dim = static_cast<int>(density_world.cols());
  int degree = -1;
  for (int d = 0; d <= 4; ++d)
    if (PolyBasis::get(d).dim() == dim) degree = d;
  if (degree < 0)
    throw std::invalid_argument("edge_potential_entry: bad density size");

  Eigen::Vector3d that = (b - a).normalized();
  Eigen::VectorXd moments = edge_moment_integrals(a, b, source, degree, cfg);
  double value = 0.0;
  for (int k = 0; k < dim; ++k)
    value += that.dot(density_world.col(k)) * moments[k];
  return sign * value;
}

Eigen::Vector3d eval_single_layer_field(const SurfaceMesh& mesh,
                                        const PiecewiseVectorDensity& density,
                                        const Eigen::Vector3d& x,
                                        const QuadratureConfig& cfg) {
  Eigen::Vector3d out = Eigen::Vector3d::Zero();
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Eigen::Matrix3Xd& c = density.coeff[t];
    if (c.cols() == 0 || c.cwiseAbs().maxCoeff() == 0.0) continue;
    ElementGeometry g = element_geometry(mesh, t);
    if (density.degree == 0) {
      out += analytic_deg0(g, x) * c.col(0);
    } else {
      Eigen::VectorXd m = single_layer_moments(g, density.degree, x, cfg);
      out += c * m;
    }
  }
  return out;
}

double eval_single_layer_scalar(const SurfaceMesh& mesh,
                                const PiecewiseScalarDensity& density,
                                const Eigen::Vector3d& x,
                                const QuadratureConfig& cfg) {
  double out = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Eigen::VectorXd& c = density.coeff[t];
    if (c.size() == 0 || c.cwiseAbs().maxCoeff() == 0.0) continue;
    ElementGeometry g = element_geometry(mesh, t);
    if (density.degree == 0) {
      out += analytic_deg0(g, x) * c[0];
    } else {
      out += single_layer_moments(g, density.degree, x, cfg).dot(c);
    }
  }
  return out;
}

}  // namespace dpgbem
