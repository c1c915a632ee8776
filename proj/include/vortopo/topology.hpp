#ifndef VORTOPO_TOPOLOGY_HPP
#define VORTOPO_TOPOLOGY_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "vortopo/field.hpp"
#include "vortopo/geometry.hpp"
#include "vortopo/kernels.hpp"

// Flux-surface topology of the perturbed vortex for 0 <= alpha < alpha_c:
// closed-form thresholds, the critical (field-null) sets, linearization of
// the flow at critical points, and the threshold classifier.

namespace vortopo {

struct Ellipsoid {
  Point3 center;
  double semi_x, semi_y, semi_z;
};

struct SeparatrixData {
  double y_minus, y_plus;      // axis crossings of the critical circle (m)
  double psi_minus, psi_plus;  // inner-separatrix level and flux maximum (Wb)
  Ellipsoid outer;             // outer separatrix v^2 = J
};

struct CriticalSet {
  Point3 circle_center;               // z = 0 null circle (O-points)
  double circle_radius;               // m
  std::array<Point3, 2> axial_points; // X-type nulls on the line L
};

enum class TopologyClass {
  OpenOutside,       // psi < 0
  AxisDegenerate,    // psi = 0
  Toroidal,          // 0 < psi < psi_minus
  InnerSeparatrix,   // psi = psi_minus
  SimplyConnected,   // psi_minus < psi < psi_plus
  AboveMaximum,      // psi >= psi_plus (no surface)
  RegimeOutOfRange,  // alpha >= alpha_c
};

const char* to_string(TopologyClass c);

struct LinearizationResult {
  std::array<std::array<double, 3>, 3> matrix;  // reduced-flow Jacobian
  std::array<std::complex<double>, 3> eigenvalues;
  double f_value;  // f(at, yt) = 2 - (1+4m) at yt - at^2 m
};

struct ValidityBounds {
  double sigma_min, r_min, r_max;  // lengths (m)
  double alpha_safe, alpha_max;    // dimensionless
  // 0: alpha <= alpha_safe, 1: between, 2: alpha >= alpha_max.
  int regime;
};

// Critical perturbation amplitude alpha_c = 1/(k zs sqrt(1 + 2 zs^2/rs^2)).
double alpha_critical(const VortexParams& vp, double k);

// Throws RegimeOutOfRangeError when alpha >= alpha_c.
SeparatrixData separatrix_data(const VortexParams& vp,
                               const PerturbationParams& pp);

CriticalSet critical_set(const VortexParams& vp, const PerturbationParams& pp);

// Total classification by exact comparison against computed thresholds.
TopologyClass classify(double psi_value, const VortexParams& vp,
                       const PerturbationParams& pp);

// Linearization of the reduced flow d(r)/ds = Bt(r) at a point of the z = 0
// critical circle. Eigenvalues come from a general 3x3 characteristic-cubic
// solve; the closed-form pair {0, +-i sqrt(f/sqrt(m))} is cross-checked
// against it internally.
LinearizationResult linearize_at_critical(const Point3& p,
                                          const VortexParams& vp,
                                          const PerturbationParams& pp);

// Max sampled psi over the bounding box of the outer separatrix using the
// deterministic quasi-random sampler.
MaxSampleResult psi_maximum_check(const VortexParams& vp,
                                  const PerturbationParams& pp,
                                  std::uint64_t n_samples);

// Fraction 1 - psi_minus/psi_plus of the compact flux range (0, psi_plus)
// occupied by simply connected surfaces.
double simply_connected_fraction(const VortexParams& vp,
                                 const PerturbationParams& pp);

ValidityBounds model_validity_bounds(const VortexParams& vp,
                                     const PerturbationParams& pp,
                                     double sigma);

// y coordinate of the point on the z=0 critical circle (x >= 0 half) whose
// flux equals psi_target, found by bisection; used to place linearization
// probes on surfaces with psi in (psi_minus, psi_plus).
Point3 critical_circle_point_at_psi(const VortexParams& vp,
                                    const PerturbationParams& pp,
                                    double psi_target);

// Axis-aligned box enclosing the outer separatrix, inflated by the given
// relative margin; shared by the sampler and the mesh extractor.
Box outer_separatrix_box(const VortexParams& vp, const PerturbationParams& pp,
                         double inflate = 0.05);

}  // namespace vortopo

#endif
