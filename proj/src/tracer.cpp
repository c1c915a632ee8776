#include "vortopo/tracer.hpp"

#include <algorithm>
#include <cmath>

#include "vortopo/errors.hpp"
#include "vortopo/topology.hpp"

namespace vortopo {

void TracerSettings::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || !(max_arc_length > 0.0) ||
      !(closure_eps > 0.0) || !(escape_radius > 0.0))
    throw ConfigError("TracerSettings: all fields must be positive");
  if (!(closure_eps < 0.1))
    throw ConfigError("TracerSettings: closure_eps must be < 0.1");
}

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187,
                 kA53 = 64448.0 / 6561, kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33,
                 kA63 = 46732.0 / 5247, kA64 = 49.0 / 176,
                 kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192,
                 kB5 = -2187.0 / 6784, kB6 = 11.0 / 84;
constexpr double kE1 = kB1 - 5179.0 / 57600, kE3 = kB3 - 7571.0 / 16695,
                 kE4 = kB4 - 393.0 / 640, kE5 = kB5 + 92097.0 / 339200,
                 kE6 = kB6 - 187.0 / 2100, kE7 = -1.0 / 40;

struct StepResult {
  Point3 next;
  Vec3 k7;  // derivative at the endpoint (FSAL)
  double error;
};

// One DP5(4) trial step for dr/ds = t_hat(r); error is the max-norm of the
// embedded difference scaled by (abs_tol + rel_tol * |r|).
template <typename Rhs>
StepResult dp54_step(const Rhs& rhs, const Point3& r, const Vec3& k1, double h,
                     double abs_tol, double rel_tol) {
  const Vec3 k2 = rhs(r + h * (kA21 * k1));
  const Vec3 k3 = rhs(r + h * (kA31 * k1 + kA32 * k2));
  const Vec3 k4 = rhs(r + h * (kA41 * k1 + kA42 * k2 + kA43 * k3));
  const Vec3 k5 = rhs(r + h * (kA51 * k1 + kA52 * k2 + kA53 * k3 + kA54 * k4));
  const Vec3 k6 = rhs(r + h * (kA61 * k1 + kA62 * k2 + kA63 * k3 + kA64 * k4 +
                               kA65 * k5));
  const Vec3 inc = kB1 * k1 + kB3 * k3 + kB4 * k4 + kB5 * k5 + kB6 * k6;
  StepResult out;
  out.next = r + h * inc;
  out.k7 = rhs(out.next);
  const Vec3 ev = h * (kE1 * k1 + kE3 * k3 + kE4 * k4 + kE5 * k5 + kE6 * k6 +
                       kE7 * out.k7);
  const double scale =
      abs_tol + rel_tol * std::max({std::abs(out.next.x), std::abs(out.next.y),
                                    std::abs(out.next.z)});
  out.error =
      std::max({std::abs(ev.x), std::abs(ev.y), std::abs(ev.z)}) / scale;
  return out;
}

}  // namespace

FieldLine trace(const Point3& seed, const VortexParams& vp,
                const PerturbationParams& pp, const TracerSettings& settings) {
  settings.validate();
  if (distance_to_axis_line(vp, pp, seed) <= kOnAxisTol * vp.r_s)
    throw SeedOnAxisError("trace: seed on the shifted axis line L");
  const Vec3 b_seed = eval_total(vp, pp, seed);
  if (b_seed.norm() <= 1e-10 * vp.B0)
    throw SeedAtCriticalError("trace: |B(seed)| below critical tolerance");

  const DimensionlessParams dp = nondimensionalize(vp, pp);
  auto rhs = [&](const Point3& r) {
    const Vec3 b = eval_total(vp, pp, r);
    const double n = b.norm();
    // Unit tangent; near a null the direction is ill-defined but the
    // adaptive controller rejects steps through it.
    return n > 0.0 ? b / n : Vec3{0.0, 0.0, 0.0};
  };
  auto label_at = [&](const Point3& r) {
    const double psi =
        psi_to_physical(vp, eval_psi_reduced(dp, to_dimensionless(vp, r)));
    return FluxLabel{psi, eval_varphi(vp, pp, r)};
  };

  FieldLine line;
  line.seed = seed;
  line.label = label_at(seed);
  line.psi_drift = 0.0;
  line.varphi_drift = 0.0;
  line.loop_length = 0.0;
  line.closure_distance = 0.0;
  line.closure_tangent_angle = 0.0;
  line.status = LineStatus::Exhausted;

  const Vec3 t0 = rhs(seed);
  const double r_esc = settings.escape_radius * std::max(vp.r_s, vp.z_s);
  const double s_max = settings.max_arc_length * vp.r_s;
  const double close_r = settings.closure_eps * vp.r_s;
  const double capture_r = std::max(0.15 * vp.r_s, 4.0 * close_r);
  const double psi_floor = 1e-3 * vp.B0 * vp.r_s * vp.r_s;
  const double h_min = 1e-12 * vp.r_s;
  const double h_max = 0.1 * vp.r_s;
  const double cos5deg = std::cos(5.0 * kTwoPi / 360.0);

  auto push_sample = [&](double s, const Point3& p, const Vec3& t) {
    const FluxLabel lb = label_at(p);
    line.samples.push_back({s, p, t, lb.psi, lb.varphi});
    line.psi_drift = std::max(
        line.psi_drift, std::abs(lb.psi - line.label.psi) /
                            std::max(std::abs(line.label.psi), psi_floor));
    line.varphi_drift = std::max(
        line.varphi_drift, std::abs(angle_diff(lb.varphi, line.label.varphi)));
  };

  Point3 r = seed;
  Vec3 k1 = t0;
  double s = 0.0;
  double h = 1e-3 * vp.r_s;
  // Signed offset from the plane through the seed normal to the initial
  // tangent; a closed loop re-crosses it upward right at the seed.
  double g_prev = 0.0;
  push_sample(0.0, r, k1);

  while (s < s_max) {
    h = std::min(h, h_max);
    StepResult st =
        dp54_step(rhs, r, k1, h, settings.abs_tol, settings.rel_tol);
    int rejects = 0;
    while (st.error > 1.0) {
      h *= std::max(0.2, 0.9 * std::pow(st.error, -0.2));
      if (h < h_min || ++rejects > 60)
        throw StepFailureError("trace: step size underflow (near a null?)");
      st = dp54_step(rhs, r, k1, h, settings.abs_tol, settings.rel_tol);
    }

    const Point3 r_new = st.next;
    const double g_new = (r_new - seed).dot(t0);
    const double d_prev = (r - seed).norm();
    const double d_new = (r_new - seed).norm();

    if (g_prev < 0.0 && g_new >= 0.0 && std::min(d_prev, d_new) < capture_r) {
      // Upward crossing of the seed plane near the seed: localize it by
      // bisection on the sub-step length.
      double lo = 0.0, hi = h;
      Point3 rc = r_new;
      for (int it = 0; it < 80 && hi - lo > 1e-15 * vp.r_s; ++it) {
        const double mid = 0.5 * (lo + hi);
        const StepResult sub =
            dp54_step(rhs, r, k1, mid, settings.abs_tol, settings.rel_tol);
        if ((sub.next - seed).dot(t0) < 0.0)
          lo = mid;
        else {
          hi = mid;
          rc = sub.next;
        }
      }
      const double d_cross = (rc - seed).norm();
      const Vec3 tc = rhs(rc);
      const double align = tc.dot(t0);
      if (d_cross < close_r && align > cos5deg) {
        const double s_cross = s + 0.5 * (lo + hi);
        push_sample(s_cross, rc, tc);
        line.status = LineStatus::Closed;
        line.loop_length = s_cross;
        line.closure_distance = d_cross;
        line.closure_tangent_angle = std::acos(std::min(1.0, align));
        return line;
      }
    }

    r = r_new;
    k1 = st.k7;
    s += h;
    g_prev = g_new;
    push_sample(s, r, k1);

    if (std::sqrt(r.x * r.x + r.y * r.y + r.z * r.z) > r_esc) {
      line.status = LineStatus::Open;
      return line;
    }
    h *= std::min(
        5.0, std::max(0.2, 0.9 * std::pow(std::max(st.error, 1e-10), -0.2)));
  }
  line.status = LineStatus::Exhausted;
  return line;
}

ClosureReport closure_report(const FieldLine& line) {
  ClosureReport rep;
  rep.closed = line.status == LineStatus::Closed;
  rep.loop_length = rep.closed ? line.loop_length : 0.0;
  // Minimum approach to the seed after the line has departed: ignore the
  // initial segment up to the first time the distance exceeds 10% of the
  // farthest excursion.
  double d_far = 0.0;
  for (const auto& smp : line.samples)
    d_far = std::max(d_far, (smp.p - line.seed).norm());
  const double depart = 0.1 * d_far;
  bool departed = false;
  double min_d = d_far;
  for (const auto& smp : line.samples) {
    const double d = (smp.p - line.seed).norm();
    if (!departed) {
      if (d > depart) departed = true;
      continue;
    }
    min_d = std::min(min_d, d);
  }
  if (rep.closed) min_d = std::min(min_d, line.closure_distance);
  rep.min_distance_to_seed = min_d;
  return rep;
}

double planarity_check(const FieldLine& line) { return line.varphi_drift; }

Point3 seed_at_psi(double psi_target, const VortexParams& vp,
                   const PerturbationParams& pp) {
  const SeparatrixData sd = separatrix_data(vp, pp);
  if (!(psi_target > 0.0) || !(psi_target < sd.psi_plus))
    throw ConfigError("seed_at_psi: need 0 < psi_target < psi_plus");
  auto psi_on_y = [&](double y) {
    return eval_psi(vp, pp, Point3{0.0, y, 0.0});
  };
  // psi decreases along both bisection segments.
  double lo, hi;
  if (psi_target < sd.psi_minus) {
    // Toroidal: +y ray from the O-ring out to the outer separatrix.
    lo = sd.y_plus;
    hi = sd.outer.center.y + sd.outer.semi_y;
  } else {
    // Spherical: from the critical circle's -y crossing toward the line L.
    lo = sd.y_minus;
    hi = axis_line_y(vp, pp) - 1e-6 * vp.r_s;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (psi_on_y(mid) > psi_target)
      lo = mid;
    else
      hi = mid;
  }
  return {0.0, 0.5 * (lo + hi), 0.0};
}

std::vector<FieldLine> trace_batch_serial(const std::vector<Point3>& seeds,
                                          const VortexParams& vp,
                                          const PerturbationParams& pp,
                                          const TracerSettings& settings) {
  std::vector<FieldLine> out(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i)
    out[i] = trace(seeds[i], vp, pp, settings);
  return out;
}

std::vector<FieldLine> trace_batch(const std::vector<Point3>& seeds,
                                   const VortexParams& vp,
                                   const PerturbationParams& pp,
                                   const TracerSettings& settings) {
  std::vector<FieldLine> out(seeds.size());
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < static_cast<long long>(seeds.size()); ++i)
    out[i] = trace(seeds[i], vp, pp, settings);
  return out;
}

}  // namespace vortopo
