#ifndef VORTOPO_MESH_HPP
#define VORTOPO_MESH_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "vortopo/field.hpp"
#include "vortopo/geometry.hpp"
#include "vortopo/kernels.hpp"
#include "vortopo/topology.hpp"

// Flux-surface extraction on a regular grid split into six tetrahedra per
// cell (Freudenthal decomposition). Tetrahedral marching has no ambiguous
// sign cases, and cut vertices are keyed by their lattice edge, so every
// compact level set comes out watertight. The Euler characteristic of the
// mesh is the independent topology oracle (0 torus, 2 sphere).

namespace vortopo {

struct TriMesh {
  std::vector<Point3> vertices;
  std::vector<std::array<std::uint32_t, 3>> triangles;

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t triangle_count() const { return triangles.size(); }
};

struct SurfaceReport {
  double psi_target;
  int chi;         // V - E + F
  int genus;       // (2 - chi)/2 for closed orientable surfaces
  bool watertight;
  TopologyClass class_from_chi;
  std::size_t vertex_count;
  std::size_t triangle_count;
};

// Extraction grid per the mesh design: [-1.3 rs, 1.3 rs]^2 x [-1.3 zs, 1.3 zs]
// shifted by the separatrix center offset alpha k (rs^2 + zs^2)/3 in -y.
GridSpec mesh_grid_spec(const VortexParams& vp, const PerturbationParams& pp,
                        int resolution);

// Isosurface of precomputed grid values; keeps only components whose
// centroid falls inside core_box.
TriMesh extract_surface_from_grid(double psi_target, const GridSpec& grid,
                                  const std::vector<double>& values,
                                  const Box& core_box);

// Full extraction: fills the grid (parallel kernel), marches, filters.
// Throws NotCompactError (psi_target <= 0 or >= psi_plus) and
// SeparatrixTooCloseError (|psi_target - psi_minus| inside the grid band).
TriMesh extract_surface(double psi_target, const VortexParams& vp,
                        const PerturbationParams& pp, int resolution);

// V - E + F with E from unique undirected edges; throws NotWatertightError
// unless every edge is shared by exactly two triangles.
int euler_characteristic(const TriMesh& mesh);

bool is_watertight(const TriMesh& mesh);

SurfaceReport classify_by_mesh(double psi_target, const VortexParams& vp,
                               const PerturbationParams& pp, int resolution);

// Distance from a point to the closest mesh triangle.
double distance_to_mesh(const TriMesh& mesh, const Point3& p);

}  // namespace vortopo

#endif
