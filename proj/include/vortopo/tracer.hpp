#ifndef VORTOPO_TRACER_HPP
#define VORTOPO_TRACER_HPP

#include <vector>

#include "vortopo/field.hpp"
#include "vortopo/geometry.hpp"

// Field-line integration dr/ds = B/|B| with an embedded Dormand-Prince 5(4)
// pair. The normalized field makes arc length the parameter; raw B vanishes
// at nulls and distorts step control. (psi, varphi) are recorded at every
// accepted step as conservation diagnostics.

namespace vortopo {

struct TracerSettings {
  double rel_tol = 1e-10;
  double abs_tol;            // absolute position tolerance (m)
  double max_arc_length = 200.0;  // multiples of r_s
  double closure_eps = 1e-4;      // closure distance, fraction of r_s
  double escape_radius = 10.0;    // multiples of max(r_s, z_s)

  static TracerSettings defaults(const VortexParams& vp) {
    TracerSettings st;
    st.abs_tol = 1e-12 * vp.r_s;
    return st;
  }
  void validate() const;
};

enum class LineStatus { Closed, Open, Exhausted };

struct LineSample {
  double s;  // arc length from seed (m)
  Point3 p;
  Vec3 tangent;  // unit B direction
  double psi;
  double varphi;
};

struct FieldLine {
  std::vector<LineSample> samples;
  Point3 seed;
  LineStatus status;
  FluxLabel label;        // (psi, varphi) at the seed
  double psi_drift;       // max relative |psi - psi_seed| along the line
  double varphi_drift;    // max wrapped |varphi - varphi_seed| (rad)
  double loop_length;     // arc length at closure (Closed only)
  double closure_distance;       // |r_cross - seed| at closure (Closed only)
  double closure_tangent_angle;  // angle to seed tangent at closure (rad)
};

struct ClosureReport {
  bool closed;
  double loop_length;
  double min_distance_to_seed;
};

FieldLine trace(const Point3& seed, const VortexParams& vp,
                const PerturbationParams& pp, const TracerSettings& settings);

ClosureReport closure_report(const FieldLine& line);

// Max wrapped deviation of varphi from the seed plane (rad).
double planarity_check(const FieldLine& line);

// Seed with the requested flux value, located by bisection on the z = 0
// midplane: along +y beyond y_plus for toroidal targets, along -y between
// the critical circle and the line L for spherical targets.
Point3 seed_at_psi(double psi_target, const VortexParams& vp,
                   const PerturbationParams& pp);

// Batch sweep over seeds, OpenMP-parallel, plus the serial reference.
std::vector<FieldLine> trace_batch(const std::vector<Point3>& seeds,
                                   const VortexParams& vp,
                                   const PerturbationParams& pp,
                                   const TracerSettings& settings);
std::vector<FieldLine> trace_batch_serial(const std::vector<Point3>& seeds,
                                          const VortexParams& vp,
                                          const PerturbationParams& pp,
                                          const TracerSettings& settings);

}  // namespace vortopo

#endif
