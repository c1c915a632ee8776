#include "vortopo/topology.hpp"

#include <algorithm>
#include <cmath>

#include "vortopo/errors.hpp"

namespace vortopo {

const char* to_string(TopologyClass c) {
  switch (c) {
    case TopologyClass::OpenOutside: return "OpenOutside";
    case TopologyClass::AxisDegenerate: return "AxisDegenerate";
    case TopologyClass::Toroidal: return "Toroidal";
    case TopologyClass::InnerSeparatrix: return "InnerSeparatrix";
    case TopologyClass::SimplyConnected: return "SimplyConnected";
    case TopologyClass::AboveMaximum: return "AboveMaximum";
    case TopologyClass::RegimeOutOfRange: return "RegimeOutOfRange";
  }
  return "?";
}

double alpha_critical(const VortexParams& vp, double k) {
  if (!(k > 0.0)) throw ConfigError("alpha_critical: k must be positive");
  const double ratio2 = (vp.z_s * vp.z_s) / (vp.r_s * vp.r_s);
  return 1.0 / (k * vp.z_s * std::sqrt(1.0 + 2.0 * ratio2));
}

namespace {

void require_below_critical(const VortexParams& vp,
                            const PerturbationParams& pp) {
  // alpha exactly at alpha_c is already out of range.
  if (pp.alpha >= alpha_critical(vp, pp.k))
    throw RegimeOutOfRangeError("alpha >= alpha_c: disconnected regime");
}

}  // namespace

SeparatrixData separatrix_data(const VortexParams& vp,
                               const PerturbationParams& pp) {
  require_below_critical(vp, pp);
  const double ak = pp.alpha * pp.k;
  const double rs = vp.r_s;
  const double disc = rs * std::sqrt(ak * ak * rs * rs + 8.0);
  SeparatrixData s;
  s.y_plus = (-ak * rs * rs + disc) / 4.0;
  s.y_minus = (-ak * rs * rs - disc) / 4.0;
  s.psi_minus = eval_psi(vp, pp, Point3{0.0, s.y_plus, 0.0});
  s.psi_plus = eval_psi(vp, pp, Point3{0.0, s.y_minus, 0.0});
  const DimensionlessParams d = nondimensionalize(vp, pp);
  const double sj = std::sqrt(d.J);
  s.outer.center = {0.0, -ak * (rs * rs + vp.z_s * vp.z_s) / 3.0, 0.0};
  s.outer.semi_x = rs * sj;
  s.outer.semi_y = rs * sj;
  s.outer.semi_z = vp.z_s * sj;
  return s;
}

CriticalSet critical_set(const VortexParams& vp, const PerturbationParams& pp) {
  require_below_critical(vp, pp);
  const DimensionlessParams d = nondimensionalize(vp, pp);
  const double at = d.alpha_tilde;
  CriticalSet c;
  c.circle_center = {0.0, -at * vp.r_s / 4.0, 0.0};
  c.circle_radius = vp.r_s * std::sqrt(0.5 + at * at / 16.0);
  const double ratio = at / d.alpha_tilde_c;
  const double zt = std::sqrt(1.0 - ratio * ratio);
  const double y_l = at * d.m * vp.r_s;  // = alpha k zs^2
  c.axial_points = {Point3{0.0, y_l, vp.z_s * zt},
                    Point3{0.0, y_l, -vp.z_s * zt}};
  return c;
}

TopologyClass classify(double psi_value, const VortexParams& vp,
                       const PerturbationParams& pp) {
  if (pp.alpha >= alpha_critical(vp, pp.k))
    return TopologyClass::RegimeOutOfRange;
  const SeparatrixData s = separatrix_data(vp, pp);
  if (psi_value < 0.0) return TopologyClass::OpenOutside;
  if (psi_value == 0.0) return TopologyClass::AxisDegenerate;
  if (psi_value < s.psi_minus) return TopologyClass::Toroidal;
  if (psi_value == s.psi_minus) return TopologyClass::InnerSeparatrix;
  if (psi_value < s.psi_plus) return TopologyClass::SimplyConnected;
  return TopologyClass::AboveMaximum;
}

namespace {

// Roots of the monic cubic l^3 + a l^2 + b l + c via the general Cardano
// formula in complex arithmetic.
std::array<std::complex<double>, 3> solve_cubic(double a, double b, double c) {
  using cd = std::complex<double>;
  const cd d0 = a * a - 3.0 * b;
  const cd d1 = 2.0 * a * a * a - 9.0 * a * b + 27.0 * c;
  cd inner = std::sqrt(d1 * d1 - 4.0 * d0 * d0 * d0);
  cd big = (d1 + inner) / 2.0;
  if (std::abs(big) < std::abs((d1 - inner) / 2.0)) big = (d1 - inner) / 2.0;
  cd C = std::pow(big, 1.0 / 3.0);
  std::array<cd, 3> roots;
  if (std::abs(C) == 0.0) {
    roots.fill(cd(-a / 3.0, 0.0));
    return roots;
  }
  const cd xi(-0.5, std::sqrt(3.0) / 2.0);
  cd w = C;
  for (int k = 0; k < 3; ++k) {
    roots[k] = -(a + w + d0 / w) / 3.0;
    w *= xi;
  }
  return roots;
}

}  // namespace

LinearizationResult linearize_at_critical(const Point3& p,
                                          const VortexParams& vp,
                                          const PerturbationParams& pp) {
  const Vec3 b = eval_total(vp, pp, p);
  if (b.norm() > 1e-10 * vp.B0)
    throw NotCriticalError("linearize_at_critical: |B| above tolerance");
  const DimensionlessParams d = nondimensionalize(vp, pp);
  const Point3 pt = to_dimensionless(vp, p);
  const double sm = std::sqrt(d.m);
  const double at = d.alpha_tilde;

  LinearizationResult res;
  res.matrix = {{{0.0, 0.0, pt.x / sm},
                 {0.0, 0.0, (pt.y - at * d.m) / sm},
                 {-4.0 * pt.x, -4.0 * pt.y - at, 0.0}}};
  res.f_value = 2.0 - (1.0 + 4.0 * d.m) * at * pt.y - at * at * d.m;

  // Characteristic cubic from the matrix entries.
  const auto& M = res.matrix;
  const double tr = M[0][0] + M[1][1] + M[2][2];
  const double m2 = (M[0][0] * M[1][1] - M[0][1] * M[1][0]) +
                    (M[0][0] * M[2][2] - M[0][2] * M[2][0]) +
                    (M[1][1] * M[2][2] - M[1][2] * M[2][1]);
  const double det =
      M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
      M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
      M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
  auto roots = solve_cubic(-tr, m2, -det);
  // Zero eigenvalue first, then by descending imaginary part.
  std::sort(roots.begin(), roots.end(),
            [](const std::complex<double>& u, const std::complex<double>& w) {
              const double au = std::abs(u), aw = std::abs(w);
              if (au != aw) return au < aw;
              return u.imag() > w.imag();
            });
  std::sort(roots.begin() + 1, roots.end(),
            [](const std::complex<double>& u, const std::complex<double>& w) {
              return u.imag() > w.imag();
            });
  res.eigenvalues = roots;

  // Cross-check against the closed-form secular pair.
  const double omega2 = res.f_value / sm;
  if (omega2 > 0.0) {
    const double omega = std::sqrt(omega2);
    const double mismatch =
        std::abs(res.eigenvalues[1] - std::complex<double>(0.0, omega)) +
        std::abs(res.eigenvalues[2] - std::complex<double>(0.0, -omega));
    if (mismatch > 1e-8 * (1.0 + omega))
      throw NumericError(
          "linearize_at_critical: eigen-solve disagrees with secular form");
  }
  return res;
}

Box outer_separatrix_box(const VortexParams& vp, const PerturbationParams& pp,
                         double inflate) {
  const SeparatrixData s = separatrix_data(vp, pp);
  const double fx = s.outer.semi_x * (1.0 + inflate);
  const double fy = s.outer.semi_y * (1.0 + inflate);
  const double fz = s.outer.semi_z * (1.0 + inflate);
  const Point3 c = s.outer.center;
  return Box{{c.x - fx, c.y - fy, c.z - fz}, {c.x + fx, c.y + fy, c.z + fz}};
}

MaxSampleResult psi_maximum_check(const VortexParams& vp,
                                  const PerturbationParams& pp,
                                  std::uint64_t n_samples) {
  if (n_samples < 1) throw ConfigError("psi_maximum_check: n_samples >= 1");
  return max_psi_sample(vp, pp, outer_separatrix_box(vp, pp, 0.0), n_samples);
}

double simply_connected_fraction(const VortexParams& vp,
                                 const PerturbationParams& pp) {
  require_below_critical(vp, pp);
  if (pp.alpha == 0.0) return 0.0;  // psi_minus == psi_plus
  const SeparatrixData s = separatrix_data(vp, pp);
  return 1.0 - s.psi_minus / s.psi_plus;
}

ValidityBounds model_validity_bounds(const VortexParams& vp,
                                     const PerturbationParams& pp,
                                     double sigma) {
  if (!(sigma > 0.0)) throw ConfigError("model_validity_bounds: sigma > 0");
  ValidityBounds v;
  v.sigma_min = std::min({sigma, vp.r_s, vp.z_s});
  v.r_min = std::min(vp.r_s, vp.z_s);
  v.r_max = std::max(vp.r_s, vp.z_s);
  const double ratio = v.r_min / v.r_max;
  v.alpha_safe = (v.sigma_min / vp.r_s) * ratio * ratio;
  v.alpha_max = v.alpha_safe / (pp.k * v.r_max);
  v.regime = pp.alpha <= v.alpha_safe ? 0 : (pp.alpha < v.alpha_max ? 1 : 2);
  return v;
}

Point3 critical_circle_point_at_psi(const VortexParams& vp,
                                    const PerturbationParams& pp,
                                    double psi_target) {
  const SeparatrixData s = separatrix_data(vp, pp);
  if (!(psi_target > s.psi_minus) || !(psi_target < s.psi_plus))
    throw ConfigError(
        "critical_circle_point_at_psi: psi_target outside (psi_minus, psi_plus)");
  const DimensionlessParams d = nondimensionalize(vp, pp);
  const double at = d.alpha_tilde;
  const double target = psi_to_dimensionless(vp, psi_target);

  // On the circle x^2 = 1/2 - at*y/2 - y^2, z = 0; psi decreases
  // monotonically in y from psi_plus at y_minus to psi_minus at y_plus.
  auto psi_on_circle = [&](double y) {
    const double x2 = 0.5 - at * y / 2.0 - y * y;
    const double u2 = x2 + (y - at * d.m) * (y - at * d.m);
    const double vy = y + at * (1.0 + d.m) / 3.0;
    return u2 * (d.J - x2 - vy * vy);
  };
  double lo = s.y_minus / vp.r_s, hi = s.y_plus / vp.r_s;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (psi_on_circle(mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  const double y = 0.5 * (lo + hi);
  const double x2 = 0.5 - at * y / 2.0 - y * y;
  const double x = x2 > 0.0 ? std::sqrt(x2) : 0.0;
  return to_physical(vp, Point3{x, y, 0.0});
}

}  // namespace vortopo
