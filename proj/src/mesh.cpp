#include "vortopo/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "vortopo/errors.hpp"

namespace vortopo {

GridSpec mesh_grid_spec(const VortexParams& vp, const PerturbationParams& pp,
                        int resolution) {
  const double shift = pp.alpha * pp.k * (vp.r_s * vp.r_s + vp.z_s * vp.z_s) / 3.0;
  GridSpec g;
  g.box.lo = {-1.3 * vp.r_s, -shift - 1.3 * vp.r_s, -1.3 * vp.z_s};
  g.box.hi = {1.3 * vp.r_s, -shift + 1.3 * vp.r_s, 1.3 * vp.z_s};
  g.nx = g.ny = g.nz = resolution;
  return g;
}

namespace {

// Corner offsets within a cell, indexed bitwise (bit0:x, bit1:y, bit2:z).
constexpr int kCorner[8][3] = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0},
                               {0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}};

// Freudenthal decomposition: six tetrahedra around the main diagonal
// corner 0 -> corner 7, one per axis permutation. All cells use the same
// decomposition, so shared faces carry matching diagonals.
constexpr int kTets[6][4] = {{0, 1, 3, 7}, {0, 3, 2, 7}, {0, 2, 6, 7},
                             {0, 6, 4, 7}, {0, 4, 5, 7}, {0, 5, 1, 7}};

struct MeshBuilder {
  const GridSpec& grid;
  const std::vector<double>& values;
  double iso;
  std::unordered_map<std::uint64_t, std::uint32_t> edge_vertex;
  std::vector<Point3> vertices;
  std::vector<std::array<std::uint32_t, 3>> triangles;

  std::uint64_t point_id(int i, int j, int k) const {
    return (std::uint64_t(k) * (grid.ny + 1) + j) * (grid.nx + 1) + i;
  }

  std::uint32_t cut_vertex(std::uint64_t ida, std::uint64_t idb,
                           const Point3& pa, const Point3& pb, double va,
                           double vb) {
    const std::uint64_t key =
        ida < idb ? (ida << 32 | idb) : (idb << 32 | ida);
    auto it = edge_vertex.find(key);
    if (it != edge_vertex.end()) return it->second;
    const double denom = vb - va;
    const double t = denom != 0.0 ? (iso - va) / denom : 0.5;
    const Point3 p{pa.x + (pb.x - pa.x) * t, pa.y + (pb.y - pa.y) * t,
                   pa.z + (pb.z - pa.z) * t};
    const std::uint32_t idx = static_cast<std::uint32_t>(vertices.size());
    vertices.push_back(p);
    edge_vertex.emplace(key, idx);
    return idx;
  }

  // Emits a triangle oriented so its normal points away from the inside
  // (v > iso) region, i.e. toward decreasing psi.
  void emit(std::uint32_t a, std::uint32_t b, std::uint32_t c,
            const Point3& inside) {
    if (a == b || b == c || a == c) return;
    const Point3 &pa = vertices[a], &pb = vertices[b], &pc = vertices[c];
    const Vec3 n = (pb - pa).cross(pc - pa);
    const Vec3 to_inside{inside.x - (pa.x + pb.x + pc.x) / 3.0,
                         inside.y - (pa.y + pb.y + pc.y) / 3.0,
                         inside.z - (pa.z + pb.z + pc.z) / 3.0};
    if (n.dot(to_inside) > 0.0)
      triangles.push_back({a, c, b});
    else
      triangles.push_back({a, b, c});
  }

  // Marches one tetrahedron given global corner ids, positions and values.
  void do_tet(const std::uint64_t id[4], const Point3 p[4], const double v[4]) {
    int mask = 0;
    for (int c = 0; c < 4; ++c)
      if (v[c] > iso) mask |= 1 << c;
    if (mask == 0 || mask == 15) return;

    auto cut = [&](int a, int b) {
      return cut_vertex(id[a], id[b], p[a], p[b], v[a], v[b]);
    };
    int inside[4], n_in = 0, outside[4], n_out = 0;
    for (int c = 0; c < 4; ++c)
      (v[c] > iso ? inside[n_in++] : outside[n_out++]) = c;

    if (n_in == 1) {
      const int s = inside[0];
      emit(cut(s, outside[0]), cut(s, outside[1]), cut(s, outside[2]), p[s]);
    } else if (n_in == 3) {
      const int s = outside[0];
      emit(cut(s, inside[0]), cut(s, inside[1]), cut(s, inside[2]),
           p[inside[0]]);
    } else {
      // Two in, two out: the four cut points form a quad whose cyclic order
      // is i0o0, i0o1, i1o1, i1o0 (consecutive pairs share a tet face).
      const int i0 = inside[0], i1 = inside[1], o0 = outside[0],
                o1 = outside[1];
      const auto a = cut(i0, o0), b = cut(i0, o1), c = cut(i1, o1),
                 d = cut(i1, o0);
      emit(a, b, c, p[i0]);
      emit(a, c, d, p[i0]);
    }
  }

  void run() {
    for (int k = 0; k < grid.nz; ++k)
      for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
          double cv[8];
          std::uint64_t cid[8];
          Point3 cp[8];
          bool any_in = false, any_out = false;
          for (int c = 0; c < 8; ++c) {
            const int ci = i + kCorner[c][0], cj = j + kCorner[c][1],
                      ck = k + kCorner[c][2];
            cid[c] = point_id(ci, cj, ck);
            cv[c] = values[cid[c]];
            (cv[c] > iso ? any_in : any_out) = true;
          }
          if (!any_in || !any_out) continue;
          for (int c = 0; c < 8; ++c) cp[c] = grid.point(i + kCorner[c][0], j + kCorner[c][1], k + kCorner[c][2]);
          for (const auto& tet : kTets) {
            const std::uint64_t id[4] = {cid[tet[0]], cid[tet[1]], cid[tet[2]],
                                         cid[tet[3]]};
            const Point3 p[4] = {cp[tet[0]], cp[tet[1]], cp[tet[2]],
                                 cp[tet[3]]};
            const double v[4] = {cv[tet[0]], cv[tet[1]], cv[tet[2]],
                                 cv[tet[3]]};
            do_tet(id, p, v);
          }
        }
  }
};

// Union-find over triangle indices connected by shared edges.
struct DisjointSet {
  std::vector<std::uint32_t> parent;
  explicit DisjointSet(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0u);
  }
  std::uint32_t find(std::uint32_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(std::uint32_t a, std::uint32_t b) { parent[find(a)] = find(b); }
};

TriMesh filter_components(TriMesh mesh, const Box& core_box) {
  if (mesh.triangles.empty()) return mesh;
  DisjointSet ds(mesh.triangles.size());
  std::unordered_map<std::uint64_t, std::uint32_t> edge_owner;
  edge_owner.reserve(mesh.triangles.size() * 2);
  for (std::uint32_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int e = 0; e < 3; ++e) {
      const std::uint64_t a = tri[e], b = tri[(e + 1) % 3];
      const std::uint64_t key = a < b ? (a << 32 | b) : (b << 32 | a);
      auto [it, inserted] = edge_owner.emplace(key, t);
      if (!inserted) ds.unite(t, it->second);
    }
  }
  // Component centroids (area-unweighted vertex mean is enough here).
  std::unordered_map<std::uint32_t, Vec3> centroid;
  std::unordered_map<std::uint32_t, std::size_t> count;
  for (std::uint32_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto root = ds.find(t);
    Vec3& c = centroid[root];
    for (const auto vi : mesh.triangles[t]) {
      c += Vec3{mesh.vertices[vi].x, mesh.vertices[vi].y, mesh.vertices[vi].z};
    }
    count[root] += 3;
  }
  auto inside_core = [&](const Vec3& c) {
    return c.x >= core_box.lo.x && c.x <= core_box.hi.x &&
           c.y >= core_box.lo.y && c.y <= core_box.hi.y &&
           c.z >= core_box.lo.z && c.z <= core_box.hi.z;
  };
  std::unordered_map<std::uint32_t, bool> keep;
  for (const auto& [root, c] : centroid)
    keep[root] = inside_core(c / double(count[root]));

  TriMesh out;
  std::vector<std::int64_t> remap(mesh.vertices.size(), -1);
  for (std::uint32_t t = 0; t < mesh.triangles.size(); ++t) {
    if (!keep[ds.find(t)]) continue;
    std::array<std::uint32_t, 3> tri;
    for (int e = 0; e < 3; ++e) {
      const auto vi = mesh.triangles[t][e];
      if (remap[vi] < 0) {
        remap[vi] = static_cast<std::int64_t>(out.vertices.size());
        out.vertices.push_back(mesh.vertices[vi]);
      }
      tri[e] = static_cast<std::uint32_t>(remap[vi]);
    }
    out.triangles.push_back(tri);
  }
  return out;
}

}  // namespace

TriMesh extract_surface_from_grid(double psi_target, const GridSpec& grid,
                                  const std::vector<double>& values,
                                  const Box& core_box) {
  MeshBuilder mb{grid, values, psi_target, {}, {}, {}};
  mb.edge_vertex.reserve(1 << 16);
  mb.run();
  TriMesh mesh;
  mesh.vertices = std::move(mb.vertices);
  mesh.triangles = std::move(mb.triangles);
  return filter_components(std::move(mesh), core_box);
}

TriMesh extract_surface(double psi_target, const VortexParams& vp,
                        const PerturbationParams& pp, int resolution) {
  if (resolution < 64)
    throw ConfigError("extract_surface: grid_resolution must be >= 64");
  if (!(psi_target > 0.0))
    throw NotCompactError("extract_surface: psi_target must be positive");
  const SeparatrixData sd = separatrix_data(vp, pp);
  if (psi_target >= sd.psi_plus)
    throw NotCompactError(
        "extract_surface: psi_target at or above the flux maximum");
  const GridSpec grid = mesh_grid_spec(vp, pp, resolution);
  const double h_rel = std::max({grid.box.extent().x / grid.nx,
                                 grid.box.extent().y / grid.ny,
                                 grid.box.extent().z / grid.nz}) /
                       vp.r_s;
  const double band = 8.0 * h_rel * h_rel * sd.psi_plus;
  if (std::abs(psi_target - sd.psi_minus) < band)
    throw SeparatrixTooCloseError(
        "extract_surface: psi_target within the grid band around psi_minus");
  const std::vector<double> values = fill_psi_grid(vp, pp, grid);
  return extract_surface_from_grid(psi_target, grid, values,
                                   outer_separatrix_box(vp, pp, 0.05));
}

bool is_watertight(const TriMesh& mesh) {
  if (mesh.triangles.empty()) return false;
  std::unordered_map<std::uint64_t, int> edges;
  edges.reserve(mesh.triangles.size() * 2);
  for (const auto& tri : mesh.triangles)
    for (int e = 0; e < 3; ++e) {
      const std::uint64_t a = tri[e], b = tri[(e + 1) % 3];
      edges[a < b ? (a << 32 | b) : (b << 32 | a)] += 1;
    }
  for (const auto& [key, n] : edges)
    if (n != 2) return false;
  return true;
}

int euler_characteristic(const TriMesh& mesh) {
  std::unordered_map<std::uint64_t, int> edges;
  edges.reserve(mesh.triangles.size() * 2);
  for (const auto& tri : mesh.triangles)
    for (int e = 0; e < 3; ++e) {
      const std::uint64_t a = tri[e], b = tri[(e + 1) % 3];
      edges[a < b ? (a << 32 | b) : (b << 32 | a)] += 1;
    }
  for (const auto& [key, n] : edges)
    if (n != 2)
      throw NotWatertightError(
          "euler_characteristic: edge not shared by exactly two triangles");
  return static_cast<int>(mesh.vertices.size()) -
         static_cast<int>(edges.size()) +
         static_cast<int>(mesh.triangles.size());
}

SurfaceReport classify_by_mesh(double psi_target, const VortexParams& vp,
                               const PerturbationParams& pp, int resolution) {
  const TriMesh mesh = extract_surface(psi_target, vp, pp, resolution);
  SurfaceReport rep;
  rep.psi_target = psi_target;
  rep.watertight = is_watertight(mesh);
  rep.chi = euler_characteristic(mesh);
  rep.genus = (2 - rep.chi) / 2;
  rep.vertex_count = mesh.vertex_count();
  rep.triangle_count = mesh.triangle_count();
  if (rep.chi == 0)
    rep.class_from_chi = TopologyClass::Toroidal;
  else if (rep.chi == 2)
    rep.class_from_chi = TopologyClass::SimplyConnected;
  else
    throw NumericError("classify_by_mesh: unexpected Euler characteristic");
  return rep;
}

double distance_to_mesh(const TriMesh& mesh, const Point3& p) {
  auto dist_tri = [&](const Point3& a, const Point3& b, const Point3& c) {
    // Standard point-triangle distance via barycentric clamping.
    const Vec3 ab = b - a, ac = c - a, ap = p - a;
    const double d1 = ab.dot(ap), d2 = ac.dot(ap);
    if (d1 <= 0.0 && d2 <= 0.0) return ap.norm();
    const Vec3 bp = p - b;
    const double d3 = ab.dot(bp), d4 = ac.dot(bp);
    if (d3 >= 0.0 && d4 <= d3) return bp.norm();
    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
      const double t = d1 / (d1 - d3);
      return (ap - t * ab).norm();
    }
    const Vec3 cp = p - c;
    const double d5 = ab.dot(cp), d6 = ac.dot(cp);
    if (d6 >= 0.0 && d5 <= d6) return cp.norm();
    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
      const double t = d2 / (d2 - d6);
      return (ap - t * ac).norm();
    }
    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
      const double t = (d4 - d3) / ((d4 - d3) + (d5 - d6));
      const Vec3 bc = c - b;
      return (bp - t * bc).norm();
    }
    const double denom = 1.0 / (va + vb + vc);
    const double v = vb * denom, w = vc * denom;
    const Vec3 q = v * ab + w * ac;
    return (ap - q).norm();
  };
  double best = 1e300;
  for (const auto& tri : mesh.triangles)
    best = std::min(best, dist_tri(mesh.vertices[tri[0]],
                                   mesh.vertices[tri[1]],
                                   mesh.vertices[tri[2]]));
  return best;
}

}  // namespace vortopo
