#ifndef VORTOPO_FIELD_HPP
#define VORTOPO_FIELD_HPP

#include <cmath>

#include "vortopo/errors.hpp"
#include "vortopo/geometry.hpp"

// Perturbed zero-helicity vortex field. The unperturbed part is the
// axisymmetric Soloviev / Hill's-vortex equilibrium
//   B0_vec = B0 * (r z / zs^2, 0, 1 - 2 r^2/rs^2 - z^2/zs^2)   (cylindrical)
// and the static odd-parity perturbation is
//   dB = -alpha B0 (k z cos(phi), -k z sin(phi), k r cos(phi)).
// In Cartesian components (x = r sin(phi), y = r cos(phi)) the perturbation
// collapses to dB = -alpha B0 k (0, z, y), and the total field in the
// dimensionless variables xt = x/rs, yt = y/rs, zt = z/zs is
//   Bt = (xt zt/sqrt(m), (yt - at m) zt/sqrt(m),
//         1 - 2(xt^2 + yt^2) - zt^2 - at yt),
// with at = alpha k rs and m = zs^2/rs^2. All evaluators below compute in
// dimensionless form and scale at the boundary, so physical and reduced
// results agree exactly.

namespace vortopo {

struct VortexParams {
  double B0;   // field strength scale (T)
  double r_s;  // radial separatrix scale (m)
  double z_s;  // axial separatrix scale (m)

  void validate() const {
    if (!(B0 > 0.0) || !(r_s > 0.0) || !(z_s > 0.0))
      throw ConfigError("VortexParams: B0, r_s, z_s must be positive");
  }
};

struct PerturbationParams {
  double alpha;  // dimensionless amplitude, >= 0
  double k;      // axial wavenumber (1/m), > 0

  void validate() const {
    if (!(alpha >= 0.0) || !(k > 0.0))
      throw ConfigError("PerturbationParams: need alpha >= 0 and k > 0");
  }
};

struct DimensionlessParams {
  double alpha_tilde;    // alpha * k * r_s
  double m;              // (z_s/r_s)^2
  double J;              // 1 - at^2 (m+1)(2m-1)/9
  double alpha_tilde_c;  // 1/sqrt(m(1+2m))
};

struct FluxLabel {
  double psi;     // modified flux (Wb)
  double varphi;  // shifted azimuth, [0, 2*pi)
};

struct PsiIntermediates {
  Vec3 u;  // (x, y - alpha k zs^2, 0)/rs, zero axial component
  Vec3 v;
  double J;
};

inline DimensionlessParams nondimensionalize(const VortexParams& vp,
                                              const PerturbationParams& pp) {
  DimensionlessParams d;
  d.alpha_tilde = pp.alpha * pp.k * vp.r_s;
  d.m = (vp.z_s * vp.z_s) / (vp.r_s * vp.r_s);
  d.J = 1.0 - d.alpha_tilde * d.alpha_tilde * (d.m + 1.0) * (2.0 * d.m - 1.0) / 9.0;
  d.alpha_tilde_c = 1.0 / std::sqrt(d.m * (1.0 + 2.0 * d.m));
  return d;
}

// Point and field conversions between physical and reduced units.
inline Point3 to_dimensionless(const VortexParams& vp, const Point3& p) {
  return {p.x / vp.r_s, p.y / vp.r_s, p.z / vp.z_s};
}
inline Point3 to_physical(const VortexParams& vp, const Point3& pt) {
  return {pt.x * vp.r_s, pt.y * vp.r_s, pt.z * vp.z_s};
}
inline Vec3 field_to_dimensionless(const VortexParams& vp, const Vec3& b) {
  return b / vp.B0;
}
inline Vec3 field_to_physical(const VortexParams& vp, const Vec3& bt) {
  return bt * vp.B0;
}
inline double psi_to_dimensionless(const VortexParams& vp, double psi) {
  return 2.0 * psi / (vp.B0 * vp.r_s * vp.r_s);
}
inline double psi_to_physical(const VortexParams& vp, double psi_tilde) {
  return 0.5 * vp.B0 * vp.r_s * vp.r_s * psi_tilde;
}

// Total field in reduced units at a reduced point.
inline Vec3 eval_total_reduced(const DimensionlessParams& d, const Point3& pt) {
  const double sm = std::sqrt(d.m);
  return {pt.x * pt.z / sm,
          (pt.y - d.alpha_tilde * d.m) * pt.z / sm,
          1.0 - 2.0 * (pt.x * pt.x + pt.y * pt.y) - pt.z * pt.z -
              d.alpha_tilde * pt.y};
}

// Reduced flux function psi_tilde = u^2 (J - v^2); built from squared terms
// only, so mirror symmetry in x and z is bit-exact.
inline double eval_psi_reduced(const DimensionlessParams& d, const Point3& pt) {
  const double ux = pt.x;
  const double uy = pt.y - d.alpha_tilde * d.m;
  const double u2 = ux * ux + uy * uy;
  const double vy = pt.y + d.alpha_tilde * (1.0 + d.m) / 3.0;
  const double v2 = pt.x * pt.x + vy * vy + pt.z * pt.z;
  return u2 * (d.J - v2);
}

inline Vec3 eval_unperturbed(const VortexParams& vp, const Point3& p) {
  const double br_over_r = vp.B0 * p.z / (vp.z_s * vp.z_s);  // B_r / r
  const double r2 = p.x * p.x + p.y * p.y;
  const double bz = vp.B0 * (1.0 - 2.0 * r2 / (vp.r_s * vp.r_s) -
                             p.z * p.z / (vp.z_s * vp.z_s));
  // r_hat = (sin(phi), cos(phi)) = (x, y)/r, so B_r r_hat = (x, y) * B_r/r.
  return {br_over_r * p.x, br_over_r * p.y, bz};
}

inline Vec3 eval_perturbation(const VortexParams& vp,
                              const PerturbationParams& pp, const Point3& p) {
  const double c = -pp.alpha * vp.B0 * pp.k;
  return {0.0, c * p.z, c * p.y};
}

inline Vec3 eval_total(const VortexParams& vp, const PerturbationParams& pp,
                       const Point3& p) {
  return eval_unperturbed(vp, p) + eval_perturbation(vp, pp, p);
}

inline PsiIntermediates eval_psi_parts(const VortexParams& vp,
                                       const PerturbationParams& pp,
                                       const Point3& p) {
  const DimensionlessParams d = nondimensionalize(vp, pp);
  const Point3 pt = to_dimensionless(vp, p);
  PsiIntermediates parts;
  parts.u = {pt.x, pt.y - d.alpha_tilde * d.m, 0.0};
  parts.v = {pt.x, pt.y + d.alpha_tilde * (1.0 + d.m) / 3.0, pt.z};
  parts.J = d.J;
  return parts;
}

inline double eval_psi(const VortexParams& vp, const PerturbationParams& pp,
                       const Point3& p) {
  const DimensionlessParams d = nondimensionalize(vp, pp);
  return psi_to_physical(vp, eval_psi_reduced(d, to_dimensionless(vp, p)));
}

// Points closer than this (relative to r_s) to the shifted axis line
// L = {x = 0, y = alpha k zs^2} count as on-axis; varphi is undefined there.
inline constexpr double kOnAxisTol = 1e-12;

// y coordinate of the line L, computed exactly as the reduced flux function
// sees it (alpha_tilde * m rescaled), so u vanishes bitwise on L.
inline double axis_line_y(const VortexParams& vp,
                          const PerturbationParams& pp) {
  const DimensionlessParams d = nondimensionalize(vp, pp);
  return d.alpha_tilde * d.m * vp.r_s;
}

inline double distance_to_axis_line(const VortexParams& vp,
                                    const PerturbationParams& pp,
                                    const Point3& p) {
  return std::hypot(p.x, p.y - axis_line_y(vp, pp));
}

inline double eval_varphi(const VortexParams& vp, const PerturbationParams& pp,
                          const Point3& p) {
  const double dy = p.y - axis_line_y(vp, pp);
  if (std::hypot(p.x, dy) <= kOnAxisTol * vp.r_s)
    throw OnAxisError("eval_varphi: point lies on the shifted axis line L");
  double a = std::atan2(p.x, dy);
  if (a < 0.0) a += kTwoPi;
  return a;
}

inline FluxLabel eval_label(const VortexParams& vp,
                            const PerturbationParams& pp, const Point3& p) {
  return {eval_psi(vp, pp, p), eval_varphi(vp, pp, p)};
}

// Central-difference gradient of psi, step h.
inline Vec3 grad_psi(const VortexParams& vp, const PerturbationParams& pp,
                     const Point3& p, double h) {
  auto f = [&](double x, double y, double z) {
    return eval_psi(vp, pp, Point3{x, y, z});
  };
  return {(f(p.x + h, p.y, p.z) - f(p.x - h, p.y, p.z)) / (2.0 * h),
          (f(p.x, p.y + h, p.z) - f(p.x, p.y - h, p.z)) / (2.0 * h),
          (f(p.x, p.y, p.z + h) - f(p.x, p.y, p.z - h)) / (2.0 * h)};
}

// Central-difference gradient of varphi with branch-cut-safe differences.
inline Vec3 grad_varphi(const VortexParams& vp, const PerturbationParams& pp,
                        const Point3& p, double h) {
  auto d = [&](Point3 a, Point3 b) {
    return angle_diff(eval_varphi(vp, pp, a), eval_varphi(vp, pp, b)) /
           (2.0 * h);
  };
  return {d({p.x + h, p.y, p.z}, {p.x - h, p.y, p.z}),
          d({p.x, p.y + h, p.z}, {p.x, p.y - h, p.z}),
          d({p.x, p.y, p.z + h}, {p.x, p.y, p.z - h})};
}

// Relative residual of the flux representation, gradients by central
// differences with step h = 1e-6 * r_s. With the x = r sin(phi) azimuth the
// (r, phi, z) triad is left-handed, so the identity reads
// B = grad(varphi) x grad(psi).
inline double flux_representation_residual(const VortexParams& vp,
                                           const PerturbationParams& pp,
                                           const Point3& p) {
  const double h = 1e-6 * vp.r_s;
  if (distance_to_axis_line(vp, pp, p) <= 2.0 * h)
    throw OnAxisError("flux_representation_residual: too close to line L");
  const Vec3 b = eval_total(vp, pp, p);
  const Vec3 rec = grad_varphi(vp, pp, p, h).cross(grad_psi(vp, pp, p, h));
  return (b - rec).norm() / b.norm();
}

// Central-difference divergence and curl of an arbitrary field functor.
template <typename Field>
double divergence_fd(const Field& f, const Point3& p, double h) {
  const Vec3 fx1 = f(Point3{p.x + h, p.y, p.z}), fx0 = f(Point3{p.x - h, p.y, p.z});
  const Vec3 fy1 = f(Point3{p.x, p.y + h, p.z}), fy0 = f(Point3{p.x, p.y - h, p.z});
  const Vec3 fz1 = f(Point3{p.x, p.y, p.z + h}), fz0 = f(Point3{p.x, p.y, p.z - h});
  return ((fx1.x - fx0.x) + (fy1.y - fy0.y) + (fz1.z - fz0.z)) / (2.0 * h);
}

template <typename Field>
Vec3 curl_fd(const Field& f, const Point3& p, double h) {
  const Vec3 fx1 = f(Point3{p.x + h, p.y, p.z}), fx0 = f(Point3{p.x - h, p.y, p.z});
  const Vec3 fy1 = f(Point3{p.x, p.y + h, p.z}), fy0 = f(Point3{p.x, p.y - h, p.z});
  const Vec3 fz1 = f(Point3{p.x, p.y, p.z + h}), fz0 = f(Point3{p.x, p.y, p.z - h});
  const double inv = 1.0 / (2.0 * h);
  return {(fy1.z - fy0.z) * inv - (fz1.y - fz0.y) * inv,
          (fz1.x - fz0.x) * inv - (fx1.z - fx0.z) * inv,
          (fx1.y - fx0.y) * inv - (fy1.x - fy0.x) * inv};
}

}  // namespace vortopo

#endif
