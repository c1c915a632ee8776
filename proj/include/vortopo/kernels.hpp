#ifndef VORTOPO_KERNELS_HPP
#define VORTOPO_KERNELS_HPP

#include <cstdint>
#include <vector>

#include "vortopo/field.hpp"
#include "vortopo/geometry.hpp"

// Data-parallel kernels with OpenMP, each with a serial reference
// implementation kept for testing. Both variants are bit-identical by
// construction: grid fills write disjoint elements and the sampler reduces
// per-block maxima (max is exact), so thread count never changes results.

namespace vortopo {

struct Box {
  Point3 lo, hi;
  Vec3 extent() const { return hi - lo; }
};

struct GridSpec {
  Box box;
  int nx = 0, ny = 0, nz = 0;  // cell counts; (n+1) points per axis

  std::size_t point_count() const {
    return std::size_t(nx + 1) * std::size_t(ny + 1) * std::size_t(nz + 1);
  }
  std::size_t point_index(int i, int j, int k) const {
    return (std::size_t(k) * (ny + 1) + j) * (nx + 1) + i;
  }
  Point3 point(int i, int j, int k) const {
    const Vec3 e = box.extent();
    return {box.lo.x + e.x * (double(i) / nx),
            box.lo.y + e.y * (double(j) / ny),
            box.lo.z + e.z * (double(k) / nz)};
  }
};

// Fills grid point values of the reduced flux function rescaled to physical
// units (values[idx] = psi at grid point, Wb).
std::vector<double> fill_psi_grid(const VortexParams& vp,
                                  const PerturbationParams& pp,
                                  const GridSpec& grid);
std::vector<double> fill_psi_grid_serial(const VortexParams& vp,
                                         const PerturbationParams& pp,
                                         const GridSpec& grid);

struct MaxSampleResult {
  double max_value;
  Point3 argmax;
  std::uint64_t argmax_index;
};

// Quasi-random (R-sequence) sampling of psi over a box: returns the maximum
// sampled value and its location. Deterministic regardless of thread count.
MaxSampleResult max_psi_sample(const VortexParams& vp,
                               const PerturbationParams& pp, const Box& box,
                               std::uint64_t n_samples);
MaxSampleResult max_psi_sample_serial(const VortexParams& vp,
                                      const PerturbationParams& pp,
                                      const Box& box, std::uint64_t n_samples);

}  // namespace vortopo

#endif
