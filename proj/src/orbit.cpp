#include "vortopo/orbit.hpp"

#include <algorithm>
#include <cmath>

#include "vortopo/errors.hpp"
#include "vortopo/rng.hpp"

namespace vortopo {

void ParticleState::validate() const {
  if (!(mass > 0.0)) throw ConfigError("ParticleState: mass must be positive");
  if (!(velocity.norm() < 0.5 * kSpeedOfLight))
    throw ConfigError("ParticleState: speed too close to c for a "
                      "non-relativistic pusher");
}

void OrbitConfig::validate() const {
  if (!(dt_tau > 0.0) || dt_tau > 0.05)
    throw ConfigError("OrbitConfig: need 0 < dt <= 0.05 tau_ce");
  if (!(duration_tau >= 1.0))
    throw ConfigError("OrbitConfig: duration must be >= 1 tau_ce");
  if (decimation < 1) throw ConfigError("OrbitConfig: decimation >= 1");
  if (!(s_target > 0.0)) throw ConfigError("OrbitConfig: s_target > 0");
}

double cyclotron_period(const ParticleState& st, const VortexParams& vp) {
  return kTwoPi * st.mass / (std::abs(st.charge) * vp.B0);
}

namespace {

// Exact rotation of v about the local field direction by the gyro angle
// -(q/m)|B| dt (Rodrigues form); |v| is preserved to roundoff.
inline Vec3 rotate_about_b(const Vec3& v, const Vec3& b, double q_over_m,
                           double dt) {
  const double bn = b.norm();
  if (bn == 0.0) return v;
  const Vec3 axis = b / bn;
  const double theta = -q_over_m * bn * dt;
  const double c = std::cos(theta), s = std::sin(theta);
  return v * c + axis.cross(v) * s + axis * (axis.dot(v) * (1.0 - c));
}

}  // namespace

ParticleState boris_step(const ParticleState& st, const Vec3& b, double dt) {
  ParticleState out = st;
  out.velocity = rotate_about_b(st.velocity, b, st.charge / st.mass, dt);
  out.position = st.position + out.velocity * dt;
  return out;
}

namespace {

Trajectory run_loop(const ParticleState& initial, const VortexParams& vp,
                    const PerturbationParams& pp, const OrbitConfig& config,
                    double dt_sign) {
  initial.validate();
  config.validate();

  Trajectory traj;
  traj.tau_ce = cyclotron_period(initial, vp);
  traj.energy_drift = 0.0;
  traj.step_warnings = 0;
  traj.speed_regime_warning =
      initial.velocity.norm() >= 0.1 * kSpeedOfLight;

  const double dt = dt_sign * config.dt_tau * traj.tau_ce;
  const std::uint64_t n_steps = static_cast<std::uint64_t>(
      std::llround(config.duration_tau / config.dt_tau));
  const double q_over_m = initial.charge / initial.mass;
  const double ke0 = 0.5 * initial.mass * initial.velocity.norm2();
  const double omega_warn = 0.05 * kTwoPi / std::abs(dt);  // local gyro cap

  auto record = [&](double t, const Point3& x, const Vec3& v) {
    const Vec3 b = eval_total(vp, pp, x);
    const double bn = b.norm();
    OrbitSample smp;
    smp.t = t;
    smp.position = x;
    smp.velocity = v;
    smp.kinetic_energy = 0.5 * initial.mass * v.norm2();
    const double vpar = bn > 0.0 ? v.dot(b) / bn : 0.0;
    const double vperp2 = std::max(0.0, v.norm2() - vpar * vpar);
    smp.mu = bn > 0.0 ? initial.mass * vperp2 / (2.0 * bn) : 0.0;
    const double rho_l =
        bn > 0.0 ? initial.mass * std::sqrt(vperp2) / (std::abs(initial.charge) * bn)
                 : 0.0;
    smp.s_local = rho_l > 0.0 ? 0.3 * vp.r_s / rho_l : 0.0;
    double var = 0.0;
    try {
      var = eval_varphi(vp, pp, x);
    } catch (const OnAxisError&) {
      var = 0.0;
    }
    smp.varphi = var;
    traj.samples.push_back(smp);
    traj.energy_drift = std::max(
        traj.energy_drift, std::abs(smp.kinetic_energy - ke0) / ke0);
  };

  Point3 x = initial.position;
  Vec3 v = initial.velocity;
  record(0.0, x, v);

  // Symmetric composition: half rotation, drift, half rotation, with the
  // endpoint field evaluation reused by the next step.
  Vec3 b = eval_total(vp, pp, x);
  for (std::uint64_t n = 0; n < n_steps; ++n) {
    if (std::abs(q_over_m) * b.norm() > omega_warn) ++traj.step_warnings;
    v = rotate_about_b(v, b, q_over_m, 0.5 * dt);
    x = x + v * dt;
    b = eval_total(vp, pp, x);
    v = rotate_about_b(v, b, q_over_m, 0.5 * dt);
    if ((n + 1) % config.decimation == 0 || n + 1 == n_steps)
      record(double(n + 1) * std::abs(dt) * dt_sign, x, v);
  }
  return traj;
}

}  // namespace

Trajectory run_orbit(const ParticleState& initial, const VortexParams& vp,
                     const PerturbationParams& pp, const OrbitConfig& config) {
  return run_loop(initial, vp, pp, config, 1.0);
}

Trajectory run_orbit_reversed(const ParticleState& initial,
                              const VortexParams& vp,
                              const PerturbationParams& pp,
                              const OrbitConfig& config) {
  return run_loop(initial, vp, pp, config, -1.0);
}

CrescentMetrics crescent_metrics(const Trajectory& traj) {
  CrescentMetrics m{};
  if (traj.samples.empty())
    throw EmptyDataError("crescent_metrics: empty trajectory");
  bool bins[360] = {};
  m.r_min_seen = 1e300;
  m.r_max_seen = 0.0;
  for (const auto& smp : traj.samples) {
    const int bin = std::min(
        359, static_cast<int>(std::floor(smp.varphi / kTwoPi * 360.0)));
    bins[std::max(0, bin)] = true;
    const double r = smp.position.r();
    m.r_min_seen = std::min(m.r_min_seen, r);
    m.r_max_seen = std::max(m.r_max_seen, r);
    if (smp.s_local < 3.0) ++m.samples_low_s;
  }
  int visited = 0;
  for (const bool v : bins) visited += v ? 1 : 0;
  m.phi_coverage = visited * (kTwoPi / 360.0);

  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    const double mu0 = traj.samples[i - 1].mu, mu1 = traj.samples[i].mu;
    const double ref = std::max({mu0, mu1, 1e-300});
    if (std::abs(mu1 - mu0) / ref > 0.2) {
      ++m.mu_violation_events;
      if (traj.samples[i].s_local < 3.0 || traj.samples[i - 1].s_local < 3.0)
        ++m.mu_violations_low_s;
    }
  }
  return m;
}

ParticleState make_initial_state(const VortexParams& vp, const Point3& position,
                                 double s_target, double charge, double mass,
                                 std::uint64_t seed) {
  const double rho = 0.3 * vp.r_s / s_target;
  const double speed = rho * std::abs(charge) * vp.B0 / mass;
  const double u1 = uniform01(seed, 101, 0);
  const double u2 = uniform01(seed, 101, 1);
  const double cz = 1.0 - 2.0 * u1;
  const double sz = std::sqrt(std::max(0.0, 1.0 - cz * cz));
  const double ang = kTwoPi * u2;
  ParticleState st;
  st.position = position;
  st.velocity = Vec3{sz * std::cos(ang), sz * std::sin(ang), cz} * speed;
  st.charge = charge;
  st.mass = mass;
  return st;
}

}  // namespace vortopo
