#ifndef VORTOPO_ORBIT_HPP
#define VORTOPO_ORBIT_HPP

#include <cstdint>
#include <vector>

#include "vortopo/field.hpp"
#include "vortopo/geometry.hpp"

// Charged-particle orbits in the static total field, advanced by a Boris-type
// pusher whose velocity update is an exact rotation about the local B (no
// electric field), composed symmetrically so runs are time-reversible and
// kinetic energy is preserved to roundoff.

namespace vortopo {

inline constexpr double kSpeedOfLight = 299792458.0;

struct ParticleState {
  Point3 position;  // m
  Vec3 velocity;    // m/s
  double charge;    // C
  double mass;      // kg

  void validate() const;
};

struct OrbitConfig {
  double dt_tau = 0.01;       // timestep as fraction of tau_ce at the origin
  double duration_tau = 1e4;  // run length in multiples of tau_ce
  std::uint64_t decimation = 100;  // output stride
  double s_target = 800.0;         // sets initial speed via rho = 0.3 r_s / s

  void validate() const;
};

struct OrbitSample {
  double t;
  Point3 position;
  Vec3 velocity;
  double kinetic_energy;
  double mu;       // m v_perp^2 / (2 |B|)
  double s_local;  // 0.3 r_s / rho_local
  double varphi;
};

struct Trajectory {
  std::vector<OrbitSample> samples;
  double tau_ce;             // cyclotron period at the origin (s)
  double energy_drift;       // max relative KE deviation over the run
  std::uint64_t step_warnings;  // steps with dt > 0.05 tau_ce(local)
  bool speed_regime_warning;    // initial speed >= c/10
};

struct CrescentMetrics {
  double phi_coverage;                  // rad, measure of visited 1-deg bins
  std::uint64_t mu_violation_events;    // relative mu jumps > 20%
  std::uint64_t mu_violations_low_s;    // ... coinciding with s_local < 3
  std::uint64_t samples_low_s;          // samples with s_local < 3
  double r_min_seen, r_max_seen;        // cylindrical radius band (m)
};

// cyclotron period 2 pi m / (|q| B0).
double cyclotron_period(const ParticleState& st, const VortexParams& vp);

// Single Boris step with the supplied field sample: exact velocity rotation
// about b, then a drift by v*dt (leapfrog sense).
ParticleState boris_step(const ParticleState& st, const Vec3& b, double dt);

Trajectory run_orbit(const ParticleState& initial, const VortexParams& vp,
                     const PerturbationParams& pp, const OrbitConfig& config);

// Same loop run with a negated timestep; used for reversibility checks.
Trajectory run_orbit_reversed(const ParticleState& initial,
                              const VortexParams& vp,
                              const PerturbationParams& pp,
                              const OrbitConfig& config);

CrescentMetrics crescent_metrics(const Trajectory& traj);

// Initial state with isotropically sampled velocity direction (counter-based
// generator) and speed set from s_target.
ParticleState make_initial_state(const VortexParams& vp, const Point3& position,
                                 double s_target, double charge, double mass,
                                 std::uint64_t seed);

}  // namespace vortopo

#endif
