#include "vortopo/kernels.hpp"

#include "vortopo/rng.hpp"

namespace vortopo {

namespace {

inline double psi_at(const VortexParams& vp, const DimensionlessParams& d,
                     const Point3& p) {
  const Point3 pt{p.x / vp.r_s, p.y / vp.r_s, p.z / vp.z_s};
  return 0.5 * vp.B0 * vp.r_s * vp.r_s * eval_psi_reduced(d, pt);
}

}  // namespace

std::vector<double> fill_psi_grid_serial(const VortexParams& vp,
                                         const PerturbationParams& pp,
                                         const GridSpec& grid) {
  const DimensionlessParams d = nondimensionalize(vp, pp);
  std::vector<double> values(grid.point_count());
  for (int k = 0; k <= grid.nz; ++k)
    for (int j = 0; j <= grid.ny; ++j)
      for (int i = 0; i <= grid.nx; ++i)
        values[grid.point_index(i, j, k)] = psi_at(vp, d, grid.point(i, j, k));
  return values;
}

std::vector<double> fill_psi_grid(const VortexParams& vp,
                                  const PerturbationParams& pp,
                                  const GridSpec& grid) {
  const DimensionlessParams d = nondimensionalize(vp, pp);
  std::vector<double> values(grid.point_count());
  // Parallel over z-slabs; each iteration writes a disjoint slice.
#pragma omp parallel for schedule(static)
  for (int k = 0; k <= grid.nz; ++k)
    for (int j = 0; j <= grid.ny; ++j)
      for (int i = 0; i <= grid.nx; ++i)
        values[grid.point_index(i, j, k)] = psi_at(vp, d, grid.point(i, j, k));
  return values;
}

namespace {

inline Point3 box_point(const Box& box, std::uint64_t index) {
  double u[3];
  R3Sequence::point(index, u);
  const Vec3 e = box.extent();
  return {box.lo.x + e.x * u[0], box.lo.y + e.y * u[1], box.lo.z + e.z * u[2]};
}

}  // namespace

MaxSampleResult max_psi_sample_serial(const VortexParams& vp,
                                      const PerturbationParams& pp,
                                      const Box& box,
                                      std::uint64_t n_samples) {
  const DimensionlessParams d = nondimensionalize(vp, pp);
  MaxSampleResult best{-1e300, {}, 0};
  for (std::uint64_t i = 0; i < n_samples; ++i) {
    const Point3 p = box_point(box, i);
    const double v = psi_at(vp, d, p);
    if (v > best.max_value) best = {v, p, i};
  }
  return best;
}

MaxSampleResult max_psi_sample(const VortexParams& vp,
                               const PerturbationParams& pp, const Box& box,
                               std::uint64_t n_samples) {
  const DimensionlessParams d = nondimensionalize(vp, pp);
  constexpr std::uint64_t kBlock = 1u << 16;
  const std::uint64_t n_blocks = (n_samples + kBlock - 1) / kBlock;
  std::vector<MaxSampleResult> block_best(n_blocks, {-1e300, {}, 0});
#pragma omp parallel for schedule(static)
  for (long long b = 0; b < static_cast<long long>(n_blocks); ++b) {
    const std::uint64_t begin = static_cast<std::uint64_t>(b) * kBlock;
    const std::uint64_t end = begin + kBlock < n_samples ? begin + kBlock : n_samples;
    MaxSampleResult best{-1e300, {}, 0};
    for (std::uint64_t i = begin; i < end; ++i) {
      const Point3 p = box_point(box, i);
      const double v = psi_at(vp, d, p);
      if (v > best.max_value) best = {v, p, i};
    }
    block_best[b] = best;
  }
  // Final reduction in block order; ties resolved by lowest sample index.
  MaxSampleResult best{-1e300, {}, 0};
  for (const auto& cand : block_best)
    if (cand.max_value > best.max_value ||
        (cand.max_value == best.max_value && cand.argmax_index < best.argmax_index))
      best = cand;
  return best;
}

}  // namespace vortopo
