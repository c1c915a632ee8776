#ifndef VORTOPO_PERTURB_HPP
#define VORTOPO_PERTURB_HPP

#include <complex>
#include <vector>

#include "vortopo/field.hpp"
#include "vortopo/geometry.hpp"

// General vacuum perturbations from azimuthal/axial mode spectra. Each mode
// (n, k) with complex weight a contributes the real (phasor) part of the
// modified-Bessel solution of the vacuum condition:
//   dB_z   = -g B0 cos(n phi) I_n(kr)        Re[a e^{ikz}]
//   dB_r   = -g B0 cos(n phi) I_n'(kr)       Re[-i a e^{ikz}]
//   dB_phi =  g B0 sin(n phi) n I_n(kr)/(kr) Re[-i a e^{ikz}]
// with g = 1 for n = 0 and g = 2 for n >= 1 (the +-n pair). Under this
// convention Re(a) is the z-odd (closure-preserving) part and Im(a) the
// z-even part of an n = 1 mode, and a single small-k odd mode reproduces the
// canonical perturbation -alpha B0 k (0, z, y) with alpha k = a k.
// Integrals over k are trapezoid sums on the sample grid; a single-sample
// mode acts as a point mass of weight one.

namespace vortopo {

struct SpectrumSample {
  double k;                 // axial wavenumber, > 0
  std::complex<double> weight;  // alpha_n(k)
};

struct SpectrumMode {
  int n;  // azimuthal mode number, >= 0
  std::vector<SpectrumSample> samples;  // ascending in k
};

struct PerturbationSpectrum {
  std::vector<SpectrumMode> modes;

  void validate() const;
  const SpectrumMode* find_mode(int n) const;
};

struct ParitySplit {
  std::vector<double> k;        // n = 1 sample grid
  std::vector<double> even;     // alpha_plus(k)  = Im alpha_1(k)
  std::vector<double> odd;      // alpha_minus(k) = Re alpha_1(k)
  bool closure_preserving;      // ||alpha_plus|| < 1e-12 ||alpha_1||
};

struct RescaleResult {
  double mu;  // (i/2) integral of alpha_0(k) k dk, required real
  double nu;  // integral of alpha_0(k) dk, required real
  VortexParams new_params;
  double z_shift;  // mu * zs^2 (m)
  std::vector<SpectrumSample> adjusted_alpha1;
};

struct LongwaveReduction {
  double alpha_avg;  // integral of alpha_minus dk
  double k_avg;      // first k-moment / alpha_avg
  PerturbationParams effective;
};

// Modified Bessel function of the first kind, n in [0, 20], x >= 0;
// ascending series below x = 15, normalized downward recurrence above.
double bessel_In(int n, double x);

// Trapezoid weights for a sample grid (single sample -> weight 1).
std::vector<double> trapezoid_weights(const std::vector<double>& k);

// Synthesized perturbation field at p, in teslas for the given B0.
Vec3 synthesize(const PerturbationSpectrum& spectrum, const Point3& p,
                double B0);

// Splits the n = 1 mode into even/odd parity; throws NoN1ModeError.
ParitySplit parity_split(const PerturbationSpectrum& spectrum);

// Absorbs n = 0 content into rescaled vortex parameters and a z shift;
// throws NuTooLargeError when nu >= 1 and NumericError when mu or nu come
// out complex (non-real field).
RescaleResult absorb_n0(const PerturbationSpectrum& spectrum,
                        const VortexParams& params);

// Reduces odd n = 1 content to canonical perturbation parameters.
LongwaveReduction longwave_reduce(const ParitySplit& split);

// Mode numbers n >= 2 present in the spectrum (beyond the long-wave
// analysis; synthesized but never reduced).
std::vector<int> beyond_longwave(const PerturbationSpectrum& spectrum);

}  // namespace vortopo

#endif
