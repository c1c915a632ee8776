#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "vortopo/errors.hpp"
#include "vortopo/topology.hpp"

using namespace vortopo;

namespace {

const VortexParams kFig1Vortex{2.0, 1.0, 1.0};
const PerturbationParams kFig1Pert{0.2, 0.25};

constexpr double kFig1PsiMinus = 0.19510547023884134;
constexpr double kFig1PsiPlus = 0.31301184746949199;
constexpr double kFig1YPlus = 0.69471725799078178;
constexpr double kFig1YMinus = -0.71971725799078178;

}  // namespace

TEST_CASE("critical amplitude") {
  CHECK(alpha_critical(kFig1Vortex, 0.25) ==
        doctest::Approx(2.3094010767585031).epsilon(1e-14));

  // FRC-scale parameters with k = pi I / z_s, I = 0.1.
  const VortexParams frc{5.0, 0.25, 0.75};
  const double k = kTwoPi / 2.0 * 0.1 / 0.75;
  CHECK(alpha_critical(frc, k) == doctest::Approx(0.73025296137109326).epsilon(1e-13));
  CHECK(std::abs(alpha_critical(frc, k) - 0.73) < 1e-2);

  // alpha_c decreases monotonically as z_s grows at fixed k.
  double prev = 1e300;
  for (double zs = 0.5; zs < 40.0; zs *= 2.0) {
    const double ac = alpha_critical({1.0, 1.0, zs}, 0.25);
    CHECK(ac < prev);
    prev = ac;
  }
}

TEST_CASE("separatrix thresholds") {
  const SeparatrixData sd = separatrix_data(kFig1Vortex, kFig1Pert);
  CHECK(sd.y_plus == doctest::Approx(kFig1YPlus).epsilon(1e-14));
  CHECK(sd.y_minus == doctest::Approx(kFig1YMinus).epsilon(1e-14));
  CHECK(sd.psi_minus == doctest::Approx(kFig1PsiMinus).epsilon(1e-12));
  CHECK(sd.psi_plus == doctest::Approx(kFig1PsiPlus).epsilon(1e-12));
  CHECK(std::abs(sd.psi_minus - 0.195) < 1e-3);
  CHECK(std::abs(sd.psi_plus - 0.313) < 1e-3);
  // The two figure levels land in the expected bands.
  CHECK(0.165 < sd.psi_minus);
  CHECK(0.23 > sd.psi_minus);
  CHECK(0.23 < sd.psi_plus);

  // Unperturbed degenerate case.
  const PerturbationParams off{0.0, 0.25};
  const SeparatrixData sd0 = separatrix_data(kFig1Vortex, off);
  CHECK(sd0.y_plus == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(sd0.y_minus == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(sd0.psi_minus == doctest::Approx(2.0 / 8.0).epsilon(1e-14));
  CHECK(sd0.psi_minus == sd0.psi_plus);

  CHECK_THROWS_AS(separatrix_data(kFig1Vortex, PerturbationParams{3.0, 0.25}),
                  RegimeOutOfRangeError);
  const double ac = alpha_critical(kFig1Vortex, 0.25);
  CHECK_THROWS_AS(separatrix_data(kFig1Vortex, PerturbationParams{ac, 0.25}),
                  RegimeOutOfRangeError);

  // Threshold ordering across the regime.
  for (int i = 1; i < 40; ++i) {
    const PerturbationParams p{ac * i / 40.0, 0.25};
    const SeparatrixData s = separatrix_data(kFig1Vortex, p);
    CHECK(s.psi_minus > 0.0);
    CHECK(s.psi_minus < s.psi_plus);
  }
}

TEST_CASE("critical set is a field null set") {
  const PerturbationParams off{0.0, 0.25};
  const CriticalSet c0 = critical_set(kFig1Vortex, off);
  CHECK(c0.circle_center.y == 0.0);
  CHECK(c0.circle_radius == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(c0.axial_points[0].z == doctest::Approx(1.0));
  CHECK(c0.axial_points[1].z == doctest::Approx(-1.0));

  const CriticalSet c = critical_set(kFig1Vortex, kFig1Pert);
  const DimensionlessParams d = nondimensionalize(kFig1Vortex, kFig1Pert);
  for (int i = 0; i < 64; ++i) {
    const double t = kTwoPi * i / 64.0;
    const Point3 p{c.circle_center.x + c.circle_radius * std::sin(t),
                   c.circle_center.y + c.circle_radius * std::cos(t), 0.0};
    CHECK(eval_total(kFig1Vortex, kFig1Pert, p).norm() <
          1e-12 * kFig1Vortex.B0);
    // Containment: strictly inside the outer separatrix.
    const PsiIntermediates parts = eval_psi_parts(kFig1Vortex, kFig1Pert, p);
    CHECK(parts.v.norm2() < d.J);
  }
  for (const Point3& p : c.axial_points) {
    CHECK(eval_total(kFig1Vortex, kFig1Pert, p).norm() <
          1e-12 * kFig1Vortex.B0);
    const PsiIntermediates parts = eval_psi_parts(kFig1Vortex, kFig1Pert, p);
    CHECK(std::abs(parts.v.norm2() - d.J) < 1e-10);
  }

  // Phase-transition onset: axial nulls sink to the midplane.
  const double ac = alpha_critical(kFig1Vortex, 0.25);
  const CriticalSet cnear =
      critical_set(kFig1Vortex, PerturbationParams{0.9999 * ac, 0.25});
  CHECK(std::abs(cnear.axial_points[0].z) < 0.02);
}

TEST_CASE("threshold classification") {
  CHECK(classify(0.165, kFig1Vortex, kFig1Pert) == TopologyClass::Toroidal);
  CHECK(classify(0.23, kFig1Vortex, kFig1Pert) == TopologyClass::SimplyConnected);
  CHECK(classify(-0.1, kFig1Vortex, kFig1Pert) == TopologyClass::OpenOutside);
  CHECK(classify(0.0, kFig1Vortex, kFig1Pert) == TopologyClass::AxisDegenerate);

  const SeparatrixData sd = separatrix_data(kFig1Vortex, kFig1Pert);
  CHECK(classify(sd.psi_minus, kFig1Vortex, kFig1Pert) ==
        TopologyClass::InnerSeparatrix);
  CHECK(classify(sd.psi_plus, kFig1Vortex, kFig1Pert) ==
        TopologyClass::AboveMaximum);
  CHECK(classify(0.5, kFig1Vortex, PerturbationParams{5.0, 0.25}) ==
        TopologyClass::RegimeOutOfRange);

  // Monotone class sequence along increasing psi.
  const TopologyClass order[] = {
      TopologyClass::OpenOutside,   TopologyClass::AxisDegenerate,
      TopologyClass::Toroidal,      TopologyClass::InnerSeparatrix,
      TopologyClass::SimplyConnected, TopologyClass::AboveMaximum};
  const double values[] = {-0.05,         0.0,        0.5 * sd.psi_minus,
                           sd.psi_minus, 0.23,        sd.psi_plus + 0.01};
  for (int i = 0; i < 6; ++i)
    CHECK(classify(values[i], kFig1Vortex, kFig1Pert) == order[i]);
}

TEST_CASE("linearization at critical points") {
  // alpha = 0, y = 1/sqrt(2): f = 2, eigenvalues {0, +-i sqrt(2)}.
  const PerturbationParams off{0.0, 0.25};
  const LinearizationResult r0 = linearize_at_critical(
      {0.0, 1.0 / std::sqrt(2.0), 0.0}, kFig1Vortex, off);
  CHECK(r0.f_value == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(std::abs(r0.eigenvalues[0]) < 1e-12);
  CHECK(r0.eigenvalues[1].imag() ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(r0.eigenvalues[2].imag() ==
        doctest::Approx(-std::sqrt(2.0)).epsilon(1e-12));

  // Half-critical amplitude, probes on surfaces between the separatrices.
  const double ac = alpha_critical(kFig1Vortex, 0.25);
  const PerturbationParams mid{0.5 * ac, 0.25};
  const SeparatrixData sd = separatrix_data(kFig1Vortex, mid);
  for (const double f : {0.25, 0.5, 0.75}) {
    const double psi = sd.psi_minus + f * (sd.psi_plus - sd.psi_minus);
    const Point3 p = critical_circle_point_at_psi(kFig1Vortex, mid, psi);
    CHECK(eval_psi(kFig1Vortex, mid, p) == doctest::Approx(psi).epsilon(1e-9));
    CHECK(eval_total(kFig1Vortex, mid, p).norm() < 1e-12 * kFig1Vortex.B0);
    const LinearizationResult res = linearize_at_critical(p, kFig1Vortex, mid);
    CHECK(res.f_value > 0.0);
    CHECK(std::abs(res.eigenvalues[1].real()) < 1e-10);
    CHECK(std::abs(res.eigenvalues[2].real()) < 1e-10);
    const double omega = std::sqrt(res.f_value / 1.0);
    CHECK(res.eigenvalues[1].imag() == doctest::Approx(omega).epsilon(1e-8));
    // Both intersection points (+-x) are nulls: index +1 each, chi = 2.
    const Point3 p2{-p.x, p.y, p.z};
    CHECK(eval_total(kFig1Vortex, mid, p2).norm() < 1e-12 * kFig1Vortex.B0);
  }

  CHECK_THROWS_AS(
      linearize_at_critical({0.1, 0.1, 0.1}, kFig1Vortex, kFig1Pert),
      NotCriticalError);
}

TEST_CASE("f positive over the validity region") {
  for (const double m : {0.25, 1.0, 4.0}) {
    const double atc = 1.0 / std::sqrt(m * (1.0 + 2.0 * m));
    for (int i = 1; i <= 100; ++i) {
      const double at = atc * i / 101.0;
      const double disc = std::sqrt(at * at + 8.0);
      const double ylo = (-at - disc) / 4.0, yhi = (-at + disc) / 4.0;
      for (int j = 0; j <= 100; ++j) {
        const double y = ylo + (yhi - ylo) * j / 100.0;
        const double f = 2.0 - (1.0 + 4.0 * m) * at * y - at * at * m;
        CHECK(f > 0.0);
      }
    }
  }
}

TEST_CASE("sampled flux maximum") {
  const MaxSampleResult res = psi_maximum_check(kFig1Vortex, kFig1Pert, 200000);
  const SeparatrixData sd = separatrix_data(kFig1Vortex, kFig1Pert);
  CHECK(res.max_value <= sd.psi_plus * (1.0 + 1e-9));
  CHECK(res.max_value > 0.99 * sd.psi_plus);
  const Vec3 off = res.argmax - Point3{0.0, sd.y_minus, 0.0};
  CHECK(off.norm() < 0.15 * kFig1Vortex.r_s);

  const PerturbationParams unp{0.0, 0.25};
  const MaxSampleResult res0 = psi_maximum_check(kFig1Vortex, unp, 200000);
  CHECK(res0.max_value <= kFig1Vortex.B0 / 8.0 * (1.0 + 1e-9));
  CHECK(res0.max_value > kFig1Vortex.B0 / 8.0 * (1.0 - 1e-3));
}

TEST_CASE("simply connected fraction") {
  const double atc = 1.0 / std::sqrt(3.0);
  const double ac = alpha_critical(kFig1Vortex, 0.25);
  CHECK(simply_connected_fraction(kFig1Vortex,
                                  PerturbationParams{0.2 * ac, 0.25}) ==
        doctest::Approx(0.668772677046).epsilon(1e-9));
  CHECK(simply_connected_fraction(kFig1Vortex,
                                  PerturbationParams{0.4 * ac, 0.25}) ==
        doctest::Approx(0.901564778557).epsilon(1e-9));
  // Paper-quoted levels.
  CHECK(std::abs(simply_connected_fraction(
                     kFig1Vortex, PerturbationParams{0.2 * ac, 0.25}) -
                 0.67) < 0.02);
  CHECK(std::abs(simply_connected_fraction(
                     kFig1Vortex, PerturbationParams{0.4 * ac, 0.25}) -
                 0.90) < 0.02);
  // And the quoted reduced amplitudes.
  CHECK(std::abs(0.2 * ac * 0.25 * kFig1Vortex.r_s - 0.11) < 0.01);
  CHECK(std::abs(0.4 * ac * 0.25 * kFig1Vortex.r_s - 0.23) < 0.01);
  CHECK(0.2 * atc == doctest::Approx(0.2 * ac * 0.25).epsilon(1e-13));

  CHECK(simply_connected_fraction(kFig1Vortex,
                                  PerturbationParams{1e-6 * ac, 0.25}) < 1e-2);

  // Strictly increasing in alpha on a 50-point grid.
  double prev = -1.0;
  for (int i = 1; i <= 50; ++i) {
    const double f = simply_connected_fraction(
        kFig1Vortex, PerturbationParams{ac * i / 51.0, 0.25});
    CHECK(f > prev);
    prev = f;
  }
  CHECK_THROWS_AS(simply_connected_fraction(kFig1Vortex,
                                            PerturbationParams{ac, 0.25}),
                  RegimeOutOfRangeError);
}

TEST_CASE("model validity bounds") {
  const ValidityBounds v1 =
      model_validity_bounds(kFig1Vortex, kFig1Pert, 0.1);
  CHECK(v1.sigma_min == doctest::Approx(0.1));
  CHECK(v1.alpha_safe == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(v1.alpha_max == doctest::Approx(0.4).epsilon(1e-14));

  const ValidityBounds v2 = model_validity_bounds(kFig1Vortex, kFig1Pert, 5.0);
  CHECK(v2.sigma_min == doctest::Approx(1.0));
  CHECK(v2.alpha_safe == doctest::Approx(1.0).epsilon(1e-14));

  const VortexParams frc{5.0, 0.25, 0.75};
  const ValidityBounds v3 =
      model_validity_bounds(frc, PerturbationParams{0.01, 0.42}, 0.05);
  CHECK(v3.sigma_min == doctest::Approx(0.05));
  CHECK(v3.r_min == doctest::Approx(0.25));
  CHECK(v3.r_max == doctest::Approx(0.75));
  CHECK(v3.alpha_safe == doctest::Approx(0.022222222222222222).epsilon(1e-13));
  CHECK(v3.regime == 0);  // alpha = 0.01 < alpha_safe
}
