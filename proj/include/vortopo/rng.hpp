#ifndef VORTOPO_RNG_HPP
#define VORTOPO_RNG_HPP

#include <cstdint>

// Counter-based random numbers: sample i of stream s under seed is a pure
// function of (seed, s, i), so parallel loops produce the same values no
// matter how iterations are scheduled.

namespace vortopo {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream,
                                  std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(stream ^ splitmix64(index)));
}

// Uniform double in [0, 1).
inline double uniform01(std::uint64_t seed, std::uint64_t stream,
                        std::uint64_t index) {
  return static_cast<double>(counter_hash(seed, stream, index) >> 11) *
         0x1.0p-53;
}

// R-sequence (additive recurrence with the plastic constant): low-discrepancy
// 3D points, indexable like a counter-based generator.
struct R3Sequence {
  // 1/phi3^j for the plastic constant phi3 ~ 1.2207440846.
  static constexpr double a1 = 0.8191725133961645;
  static constexpr double a2 = 0.6710436067037893;
  static constexpr double a3 = 0.5497004779019703;

  static double frac(double v) { return v - static_cast<double>(static_cast<long long>(v)); }

  static void point(std::uint64_t index, double out[3]) {
    const double n = static_cast<double>(index + 1);
    out[0] = frac(0.5 + a1 * n);
    out[1] = frac(0.5 + a2 * n);
    out[2] = frac(0.5 + a3 * n);
  }
};

}  // namespace vortopo

#endif
