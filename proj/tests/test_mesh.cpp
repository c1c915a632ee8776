#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "vortopo/errors.hpp"
#include "vortopo/mesh.hpp"

using namespace vortopo;

namespace {

const VortexParams kFig1Vortex{2.0, 1.0, 1.0};
const PerturbationParams kFig1Pert{0.2, 0.25};

TriMesh octahedron() {
  TriMesh m;
  m.vertices = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  m.triangles = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
                 {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
  return m;
}

TriMesh torus_grid(int nu, int nv) {
  TriMesh m;
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nv; ++j) {
      const double u = kTwoPi * i / nu, v = kTwoPi * j / nv;
      const double r = 2.0 + 0.5 * std::cos(v);
      m.vertices.push_back({r * std::cos(u), r * std::sin(u), 0.5 * std::sin(v)});
    }
  auto idx = [&](int i, int j) {
    return std::uint32_t(((i + nu) % nu) * nv + (j + nv) % nv);
  };
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nv; ++j) {
      m.triangles.push_back({idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)});
      m.triangles.push_back({idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)});
    }
  return m;
}

}  // namespace

TEST_CASE("euler characteristic of known polyhedra") {
  CHECK(euler_characteristic(octahedron()) == 2);
  CHECK(euler_characteristic(torus_grid(16, 16)) == 0);
  CHECK(is_watertight(octahedron()));

  TriMesh broken = octahedron();
  broken.triangles.pop_back();
  CHECK_FALSE(is_watertight(broken));
  CHECK_THROWS_AS(euler_characteristic(broken), NotWatertightError);
}

TEST_CASE("extracted figure surfaces") {
  const TriMesh torus = extract_surface(0.165, kFig1Vortex, kFig1Pert, 128);
  CHECK(is_watertight(torus));
  CHECK(euler_characteristic(torus) == 0);

  // No degenerate triangles: distinct indices and nonzero area.
  std::size_t degenerate = 0;
  for (const auto& t : torus.triangles) {
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) ++degenerate;
    const Vec3 n = (torus.vertices[t[1]] - torus.vertices[t[0]])
                       .cross(torus.vertices[t[2]] - torus.vertices[t[0]]);
    if (n.norm() == 0.0) ++degenerate;
  }
  CHECK(degenerate == 0);

  const TriMesh sphere = extract_surface(0.23, kFig1Vortex, kFig1Pert, 128);
  CHECK(is_watertight(sphere));
  CHECK(euler_characteristic(sphere) == 2);

  // Unperturbed: every compact level is a torus of revolution.
  const PerturbationParams off{0.0, 0.25};
  for (const double psi : {0.05, 0.12, 0.22}) {
    const TriMesh m = extract_surface(psi, kFig1Vortex, off, 128);
    CHECK(is_watertight(m));
    CHECK(euler_characteristic(m) == 0);
  }
}

TEST_CASE("chi flips across the inner separatrix") {
  const SeparatrixData sd = separatrix_data(kFig1Vortex, kFig1Pert);
  const TriMesh below =
      extract_surface(0.95 * sd.psi_minus, kFig1Vortex, kFig1Pert, 128);
  const TriMesh above =
      extract_surface(1.05 * sd.psi_minus, kFig1Vortex, kFig1Pert, 128);
  CHECK(euler_characteristic(below) == 0);
  CHECK(euler_characteristic(above) == 2);
}

TEST_CASE("mesh classification agrees with thresholds") {
  const SeparatrixData sd = separatrix_data(kFig1Vortex, kFig1Pert);
  for (const double f : {0.1, 0.35, 0.55, 0.8, 0.95}) {
    const double psi = f * sd.psi_plus;
    if (std::abs(psi - sd.psi_minus) < 0.02 * sd.psi_plus) continue;
    const SurfaceReport rep = classify_by_mesh(psi, kFig1Vortex, kFig1Pert, 96);
    CHECK(rep.watertight);
    CHECK(rep.class_from_chi == classify(psi, kFig1Vortex, kFig1Pert));
    CHECK((rep.chi == 0 || rep.chi == 2));
    CHECK(rep.genus == (rep.chi == 0 ? 1 : 0));
  }
}

TEST_CASE("shrink-to-point limit near the flux maximum") {
  const SeparatrixData sd = separatrix_data(kFig1Vortex, kFig1Pert);
  const TriMesh tiny =
      extract_surface(0.99 * sd.psi_plus, kFig1Vortex, kFig1Pert, 256);
  CHECK(is_watertight(tiny));
  CHECK(euler_characteristic(tiny) == 2);
  // Small sphere around (0, y_minus, 0).
  Vec3 centroid{0, 0, 0};
  for (const auto& v : tiny.vertices) centroid += Vec3{v.x, v.y, v.z};
  centroid = centroid / double(tiny.vertex_count());
  CHECK(std::abs(centroid.x) < 0.05);
  CHECK(std::abs(centroid.y - sd.y_minus) < 0.1);
  CHECK(std::abs(centroid.z) < 0.05);
}

TEST_CASE("vertex containment per class") {
  const SeparatrixData sd = separatrix_data(kFig1Vortex, kFig1Pert);
  const DimensionlessParams d = nondimensionalize(kFig1Vortex, kFig1Pert);

  const double psi_t = 0.5 * sd.psi_minus;
  const TriMesh torus = extract_surface(psi_t, kFig1Vortex, kFig1Pert, 128);
  for (const auto& v : torus.vertices) {
    const PsiIntermediates parts = eval_psi_parts(kFig1Vortex, kFig1Pert, v);
    CHECK(parts.v.norm2() < d.J);  // strictly inside the outer separatrix
    CHECK(eval_psi(kFig1Vortex, kFig1Pert, v) < sd.psi_minus + 0.02 * sd.psi_plus);
  }

  const double psi_s = 0.5 * (sd.psi_minus + sd.psi_plus);
  const TriMesh sphere = extract_surface(psi_s, kFig1Vortex, kFig1Pert, 128);
  for (const auto& v : sphere.vertices)
    CHECK(eval_psi(kFig1Vortex, kFig1Pert, v) > sd.psi_minus - 0.02 * sd.psi_plus);
}

TEST_CASE("critical points sit on spherical surfaces only") {
  const SeparatrixData sd = separatrix_data(kFig1Vortex, kFig1Pert);
  // Spherical surfaces intersect exactly the two O-ring points.
  for (const double f : {0.5, 0.7}) {
    const double psi = sd.psi_minus + f * (sd.psi_plus - sd.psi_minus);
    const TriMesh mesh = extract_surface(psi, kFig1Vortex, kFig1Pert, 320);
    CHECK(euler_characteristic(mesh) == 2);
    const Point3 cp = critical_circle_point_at_psi(kFig1Vortex, kFig1Pert, psi);
    const Point3 cm{-cp.x, cp.y, cp.z};
    CHECK(distance_to_mesh(mesh, cp) < 1e-3 * kFig1Vortex.r_s);
    CHECK(distance_to_mesh(mesh, cm) < 1e-3 * kFig1Vortex.r_s);
  }
  // Toroidal surfaces stay clear of the whole critical set.
  const TriMesh torus =
      extract_surface(0.5 * sd.psi_minus, kFig1Vortex, kFig1Pert, 128);
  CHECK(euler_characteristic(torus) == 0);
  const CriticalSet cs = critical_set(kFig1Vortex, kFig1Pert);
  for (int i = 0; i < 64; ++i) {
    const double t = kTwoPi * i / 64.0;
    const Point3 p{cs.circle_center.x + cs.circle_radius * std::sin(t),
                   cs.circle_center.y + cs.circle_radius * std::cos(t), 0.0};
    CHECK(distance_to_mesh(torus, p) > 1e-3 * kFig1Vortex.r_s);
  }
  for (const auto& p : cs.axial_points)
    CHECK(distance_to_mesh(torus, p) > 1e-3 * kFig1Vortex.r_s);
}

TEST_CASE("extraction error cases") {
  CHECK_THROWS_AS(extract_surface(-0.1, kFig1Vortex, kFig1Pert, 128),
                  NotCompactError);
  CHECK_THROWS_AS(extract_surface(0.5, kFig1Vortex, kFig1Pert, 128),
                  NotCompactError);  // above psi_plus
  const SeparatrixData sd = separatrix_data(kFig1Vortex, kFig1Pert);
  CHECK_THROWS_AS(
      extract_surface(sd.psi_minus + 1e-7, kFig1Vortex, kFig1Pert, 128),
      SeparatrixTooCloseError);
  CHECK_THROWS_AS(extract_surface(0.165, kFig1Vortex, kFig1Pert, 32),
                  ConfigError);
}

TEST_CASE("grid fill kernels agree bitwise") {
  const GridSpec grid = mesh_grid_spec(kFig1Vortex, kFig1Pert, 48);
  const auto serial = fill_psi_grid_serial(kFig1Vortex, kFig1Pert, grid);
  const auto parallel = fill_psi_grid(kFig1Vortex, kFig1Pert, grid);
  REQUIRE(serial.size() == parallel.size());
  CHECK(serial == parallel);
}
