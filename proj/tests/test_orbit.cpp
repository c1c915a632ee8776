#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "vortopo/errors.hpp"
#include "vortopo/orbit.hpp"
#include "vortopo/topology.hpp"

using namespace vortopo;

namespace {

constexpr double kElectronCharge = -1.602176634e-19;
constexpr double kElectronMass = 9.1093837015e-31;

// Fig.-3-scale configuration: electron in a 5 T vortex with rs = 25 cm,
// zs = 75 cm, alpha = 0.1, k = pi I / zs at I = 0.1.
const VortexParams kFrcVortex{5.0, 0.25, 0.75};
const double kFrcK = kTwoPi / 2.0 * 0.1 / 0.75;
const PerturbationParams kFrcPert{0.1, kFrcK};
const PerturbationParams kFrcOff{0.0, kFrcK};

}  // namespace

TEST_CASE("single Boris step primitives") {
  ParticleState st;
  st.charge = kElectronCharge;
  st.mass = kElectronMass;

  SUBCASE("zero field is ballistic drift") {
    st.position = {0.0, 0.0, 0.0};
    st.velocity = {1e6, -2e6, 5e5};
    const ParticleState out = boris_step(st, {0.0, 0.0, 0.0}, 1e-9);
    CHECK(out.velocity.x == st.velocity.x);
    CHECK(out.position.x == doctest::Approx(1e6 * 1e-9).epsilon(1e-14));
    CHECK(out.position.y == doctest::Approx(-2e6 * 1e-9).epsilon(1e-14));
  }

  SUBCASE("velocity parallel to B is unchanged") {
    st.position = {0.0, 0.0, 0.0};
    st.velocity = {0.0, 0.0, 3e6};
    const ParticleState out = boris_step(st, {0.0, 0.0, 5.0}, 1e-10);
    CHECK(out.velocity.x == doctest::Approx(0.0));
    CHECK(out.velocity.y == doctest::Approx(0.0));
    CHECK(out.velocity.z == doctest::Approx(3e6).epsilon(1e-15));
  }

  SUBCASE("uniform-field gyration") {
    st.position = {0.0, 0.0, 0.0};
    const double v = 8.2e7;
    st.velocity = {0.0, v, 0.0};
    const double b0 = 5.0;
    const double tau = cyclotron_period(st, kFrcVortex);
    const double dt = 0.01 * tau;
    const double rho = kElectronMass * v / (std::abs(kElectronCharge) * b0);

    double xmin = 0.0, xmax = 0.0;
    double max_speed_dev = 0.0, max_vperp_dev = 0.0;
    ParticleState s = st;
    for (int i = 0; i < 100; ++i) {  // one period
      s = boris_step(s, {0.0, 0.0, b0}, dt);
      xmin = std::min(xmin, s.position.x);
      xmax = std::max(xmax, s.position.x);
      max_speed_dev =
          std::max(max_speed_dev, std::abs(s.velocity.norm() - v) / v);
      const double vperp = std::hypot(s.velocity.x, s.velocity.y);
      max_vperp_dev = std::max(max_vperp_dev, std::abs(vperp - v) / v);
    }
    // Speed and v_perp are rotation-exact, so the gyro-radius m v_perp/(qB)
    // measured along the run matches the analytic value essentially to
    // roundoff (well under 1e-6).
    CHECK(max_speed_dev < 1e-13);
    CHECK(max_vperp_dev < 1e-13);
    // The discrete positions trace a circle with the known O(dt^2) radius
    // bias, so the geometric extent agrees only to ~1e-3.
    CHECK(std::abs((xmax - xmin) / 2.0 - rho) / rho < 1e-3);
    // Back near the start after one full period.
    CHECK((s.position - st.position).norm() < 1e-2 * rho);
  }
}

TEST_CASE("energy conservation over a long run") {
  const ParticleState init = make_initial_state(
      kFrcVortex, {0.0, -0.15, 0.0}, 800.0, kElectronCharge, kElectronMass, 1);
  OrbitConfig oc;
  oc.dt_tau = 0.01;
  oc.duration_tau = 1000.0;  // 1e5 steps
  oc.decimation = 50;
  const Trajectory traj = run_orbit(init, kFrcVortex, kFrcPert, oc);
  CHECK(traj.energy_drift < 1e-9);
  CHECK(traj.speed_regime_warning);  // 0.27c with these parameters
}

TEST_CASE("time reversibility") {
  const ParticleState init = make_initial_state(
      kFrcVortex, {0.0, -0.15, 0.0}, 800.0, kElectronCharge, kElectronMass, 3);
  OrbitConfig oc;
  oc.dt_tau = 0.01;
  oc.duration_tau = 100.0;
  oc.decimation = 1u << 20;  // keep only the endpoint
  const Trajectory fwd = run_orbit(init, kFrcVortex, kFrcPert, oc);
  ParticleState end = init;
  end.position = fwd.samples.back().position;
  end.velocity = fwd.samples.back().velocity;
  const Trajectory bwd = run_orbit_reversed(end, kFrcVortex, kFrcPert, oc);
  const double scale = 0.3 * kFrcVortex.r_s;
  CHECK((bwd.samples.back().position - init.position).norm() / scale < 1e-8);
  CHECK((bwd.samples.back().velocity - init.velocity).norm() /
            init.velocity.norm() <
        1e-8);
}

TEST_CASE("second-order timestep convergence") {
  const ParticleState init = make_initial_state(
      kFrcVortex, {0.0, -0.15, 0.0}, 800.0, kElectronCharge, kElectronMass, 1);
  auto endpoint = [&](double dt_tau) {
    OrbitConfig oc;
    oc.dt_tau = dt_tau;
    oc.duration_tau = 50.0;
    oc.decimation = 1u << 20;
    return run_orbit(init, kFrcVortex, kFrcPert, oc).samples.back().position;
  };
  const Point3 ref = endpoint(0.0025);  // dt/8 reference
  const double e1 = (endpoint(0.02) - ref).norm();
  const double e2 = (endpoint(0.01) - ref).norm();
  CHECK(e1 / e2 > 3.0);
  CHECK(e1 / e2 < 5.5);
}

TEST_CASE("determinism of decimated output") {
  const ParticleState init = make_initial_state(
      kFrcVortex, {0.0, -0.16, 0.0}, 800.0, kElectronCharge, kElectronMass, 9);
  OrbitConfig oc;
  oc.dt_tau = 0.01;
  oc.duration_tau = 200.0;
  oc.decimation = 100;
  const Trajectory a = run_orbit(init, kFrcVortex, kFrcPert, oc);
  const Trajectory b = run_orbit(init, kFrcVortex, kFrcPert, oc);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].position.x == b.samples[i].position.x);
    CHECK(a.samples[i].velocity.z == b.samples[i].velocity.z);
    CHECK(a.samples[i].mu == b.samples[i].mu);
  }
}

TEST_CASE("axisymmetric canonical angular momentum") {
  // With x = r sin(phi) the vector potential is A = -psi grad(phi), so the
  // conserved quantity is p_phi = m r v_phi - q psi.
  const ParticleState init = make_initial_state(
      kFrcVortex, {0.0, -0.15, 0.0}, 800.0, kElectronCharge, kElectronMass, 1);
  OrbitConfig oc;
  oc.dt_tau = 0.01;
  oc.duration_tau = 1000.0;
  oc.decimation = 100;
  const Trajectory traj = run_orbit(init, kFrcVortex, kFrcOff, oc);
  double p0 = 0.0, dev = 0.0;
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const auto& s = traj.samples[i];
    const double r = s.position.r();
    const double sphi = s.position.x / r, cphi = s.position.y / r;
    const double vphi = s.velocity.x * cphi - s.velocity.y * sphi;
    const double pphi = kElectronMass * r * vphi -
                        kElectronCharge * eval_psi(kFrcVortex, kFrcOff, s.position);
    if (i == 0) p0 = pphi;
    dev = std::max(dev, std::abs(pphi - p0) / std::abs(p0));
  }
  CHECK(dev < 1e-6);
}

TEST_CASE("crescent confinement vs axisymmetric control") {
  // Magnetized electron on a simply-connected flux region; desk-scale run.
  const ParticleState init = make_initial_state(
      kFrcVortex, {0.0, -0.15, 0.0}, 800.0, kElectronCharge, kElectronMass, 7);
  const double psi = eval_psi(kFrcVortex, kFrcPert, init.position);
  const SeparatrixData sd = separatrix_data(kFrcVortex, kFrcPert);
  CHECK(psi > sd.psi_minus);
  CHECK(psi < sd.psi_plus);

  OrbitConfig oc;
  oc.dt_tau = 0.01;
  oc.duration_tau = 1e4;
  oc.decimation = 100;
  const CrescentMetrics trapped =
      crescent_metrics(run_orbit(init, kFrcVortex, kFrcPert, oc));
  const CrescentMetrics control =
      crescent_metrics(run_orbit(init, kFrcVortex, kFrcOff, oc));
  CHECK(trapped.phi_coverage < kTwoPi);
  CHECK(control.phi_coverage > trapped.phi_coverage);
  CHECK(trapped.r_min_seen > 0.0);
  CHECK(trapped.r_max_seen < kFrcVortex.r_s);
}

TEST_CASE("mu violations cluster at low local s") {
  // Electron seeded next to the O-point null ring, where s_l drops below 3.
  const ParticleState init =
      make_initial_state(kFrcVortex, {0.0, -0.178, 0.0}, 800.0,
                         kElectronCharge, kElectronMass, 12345);
  OrbitConfig oc;
  oc.dt_tau = 0.01;
  oc.duration_tau = 1e4;
  oc.decimation = 100;
  const Trajectory traj = run_orbit(init, kFrcVortex, kFrcPert, oc);
  const CrescentMetrics m = crescent_metrics(traj);
  CHECK(m.samples_low_s > 0);
  CHECK(m.mu_violation_events > 0);
  const double frac_at_events =
      double(m.mu_violations_low_s) / double(m.mu_violation_events);
  const double frac_overall =
      double(m.samples_low_s) / double(traj.samples.size());
  CHECK(frac_at_events > 2.0 * frac_overall);
}

TEST_CASE("local timestep warnings where the field is strong") {
  ParticleState st;
  st.position = {0.0, -0.3, 0.0};  // |B| ~ 1.9 B0 outside the vortex core
  st.velocity = {0.0, 0.0, 1e6};
  st.charge = kElectronCharge;
  st.mass = kElectronMass;
  OrbitConfig oc;
  oc.dt_tau = 0.05;
  oc.duration_tau = 1.0;
  oc.decimation = 10;
  const Trajectory traj = run_orbit(st, kFrcVortex, kFrcOff, oc);
  CHECK(traj.step_warnings > 0);
}

TEST_CASE("configuration and state validation") {
  OrbitConfig bad;
  bad.dt_tau = 0.2;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad.dt_tau = 0.01;
  bad.duration_tau = 0.1;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  ParticleState st;
  st.position = {0, 0, 0};
  st.velocity = {2e8, 0, 0};  // 0.67c
  st.charge = kElectronCharge;
  st.mass = kElectronMass;
  CHECK_THROWS_AS(st.validate(), ConfigError);
  st.velocity = {1e7, 0, 0};
  st.mass = -1.0;
  CHECK_THROWS_AS(st.validate(), ConfigError);

  const ParticleState ok = make_initial_state(
      kFrcVortex, {0.0, -0.15, 0.0}, 800.0, kElectronCharge, kElectronMass, 1);
  const double expected_speed = 0.3 * kFrcVortex.r_s / 800.0 *
                                std::abs(kElectronCharge) * kFrcVortex.B0 /
                                kElectronMass;
  CHECK(ok.velocity.norm() == doctest::Approx(expected_speed).epsilon(1e-12));

  Trajectory empty;
  CHECK_THROWS_AS(crescent_metrics(empty), EmptyDataError);
}
