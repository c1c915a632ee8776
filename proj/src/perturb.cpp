#include "vortopo/perturb.hpp"

#include <algorithm>
#include <cmath>

#include "vortopo/errors.hpp"

namespace vortopo {

void PerturbationSpectrum::validate() const {
  for (const auto& mode : modes) {
    if (mode.n < 0 || mode.n > 20)
      throw OutOfRangeError("spectrum: mode number must be in [0, 20]");
    double prev = 0.0;
    for (const auto& s : mode.samples) {
      if (!(s.k > 0.0))
        throw OutOfRangeError("spectrum: sample wavenumbers must be positive");
      if (s.k <= prev)
        throw OutOfRangeError("spectrum: sample grid must be ascending in k");
      prev = s.k;
    }
  }
}

const SpectrumMode* PerturbationSpectrum::find_mode(int n) const {
  for (const auto& mode : modes)
    if (mode.n == n) return &mode;
  return nullptr;
}

double bessel_In(int n, double x) {
  if (n < 0 || n > 20)
    throw OutOfRangeError("bessel_In: order must be in [0, 20]");
  if (!(x >= 0.0)) throw OutOfRangeError("bessel_In: x must be >= 0");
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;

  auto series = [](int nn, double xx) {
    // All terms positive: no cancellation at any x.
    const double half = xx / 2.0;
    double term = 1.0;
    for (int i = 1; i <= nn; ++i) term *= half / i;
    double sum = term;
    const double h2 = half * half;
    for (int m = 1; m < 400; ++m) {
      term *= h2 / (double(m) * (m + nn));
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return sum;
  };

  if (x < 15.0 || n == 0) return series(n, x);

  // Downward (Miller) recurrence normalized against the series I_0.
  const int start = std::max(n, static_cast<int>(x)) + 30;
  double ip1 = 0.0, i0 = 1.0, target = 0.0;
  for (int m = start; m > 0; --m) {
    const double im1 = ip1 + (2.0 * m / x) * i0;
    ip1 = i0;
    i0 = im1;
    if (m == n) target = ip1;
    if (std::abs(i0) > 1e200) {
      i0 *= 1e-200;
      ip1 *= 1e-200;
      target *= 1e-200;
    }
  }
  return target * (series(0, x) / i0);
}

namespace {

// d/dx I_n(x); I_0' = I_1.
double bessel_In_prime(int n, double x) {
  if (n == 0) return bessel_In(1, x);
  if (x == 0.0) return n == 1 ? 0.5 : 0.0;
  return 0.5 * (bessel_In(n - 1, x) + bessel_In(n + 1, x));
}

// I_n(x)/x with the x -> 0 limit.
double bessel_In_over_x(int n, double x) {
  if (x == 0.0) return n == 1 ? 0.5 : 0.0;
  return bessel_In(n, x) / x;
}

}  // namespace

std::vector<double> trapezoid_weights(const std::vector<double>& k) {
  const std::size_t n = k.size();
  std::vector<double> w(n, 1.0);
  if (n < 2) return w;  // single sample acts as a point mass
  w[0] = (k[1] - k[0]) / 2.0;
  for (std::size_t j = 1; j + 1 < n; ++j) w[j] = (k[j + 1] - k[j - 1]) / 2.0;
  w[n - 1] = (k[n - 1] - k[n - 2]) / 2.0;
  return w;
}

Vec3 synthesize(const PerturbationSpectrum& spectrum, const Point3& p,
                double B0) {
  spectrum.validate();
  bool any = false;
  for (const auto& mode : spectrum.modes) any = any || !mode.samples.empty();
  if (!any) throw EmptySpectrumError("synthesize: spectrum has no samples");

  const double r = p.r();
  // phi is arbitrary at r = 0; the assembled Cartesian vector does not
  // depend on it there.
  const double sphi = r > 0.0 ? p.x / r : 0.0;
  const double cphi = r > 0.0 ? p.y / r : 1.0;

  double b_r = 0.0, b_phi = 0.0, b_z = 0.0;
  for (const auto& mode : spectrum.modes) {
    if (mode.samples.empty()) continue;
    const double g = mode.n == 0 ? 1.0 : 2.0;
    double cn = 1.0, sn = 0.0;
    if (mode.n >= 1) {
      const double nphi = mode.n * std::atan2(p.x, p.y);
      cn = std::cos(nphi);
      sn = std::sin(nphi);
    }
    std::vector<double> grid(mode.samples.size());
    for (std::size_t j = 0; j < grid.size(); ++j) grid[j] = mode.samples[j].k;
    const std::vector<double> w = trapezoid_weights(grid);
    for (std::size_t j = 0; j < mode.samples.size(); ++j) {
      const double k = mode.samples[j].k;
      const std::complex<double> a = mode.samples[j].weight * w[j];
      const double ck = std::cos(k * p.z), sk = std::sin(k * p.z);
      const double re_p = a.real() * ck - a.imag() * sk;   // Re[a e^{ikz}]
      const double re_q = a.imag() * ck + a.real() * sk;   // Re[-i a e^{ikz}]
      const double x = k * r;
      b_z += -g * B0 * cn * bessel_In(mode.n, x) * re_p;
      b_r += -g * B0 * cn * bessel_In_prime(mode.n, x) * re_q;
      if (mode.n >= 1)
        b_phi += g * B0 * sn * mode.n * bessel_In_over_x(mode.n, x) * re_q;
    }
  }
  return {b_r * sphi + b_phi * cphi, b_r * cphi - b_phi * sphi, b_z};
}

ParitySplit parity_split(const PerturbationSpectrum& spectrum) {
  spectrum.validate();
  const SpectrumMode* m1 = spectrum.find_mode(1);
  if (m1 == nullptr || m1->samples.empty())
    throw NoN1ModeError("parity_split: spectrum has no n = 1 mode");
  ParitySplit split;
  split.k.reserve(m1->samples.size());
  double norm_even = 0.0, norm_all = 0.0;
  for (const auto& s : m1->samples) {
    split.k.push_back(s.k);
    split.odd.push_back(s.weight.real());
    split.even.push_back(s.weight.imag());
    norm_even += s.weight.imag() * s.weight.imag();
    norm_all += std::norm(s.weight);
  }
  split.closure_preserving =
      std::sqrt(norm_even) < 1e-12 * std::sqrt(norm_all);
  return split;
}

RescaleResult absorb_n0(const PerturbationSpectrum& spectrum,
                        const VortexParams& params) {
  spectrum.validate();
  RescaleResult res;
  res.mu = 0.0;
  res.nu = 0.0;
  res.new_params = params;
  res.z_shift = 0.0;

  const SpectrumMode* m0 = spectrum.find_mode(0);
  if (m0 != nullptr && !m0->samples.empty()) {
    std::vector<double> grid(m0->samples.size());
    for (std::size_t j = 0; j < grid.size(); ++j) grid[j] = m0->samples[j].k;
    const std::vector<double> w = trapezoid_weights(grid);
    std::complex<double> nu_c = 0.0, mu_c = 0.0;
    double abs0 = 0.0, abs1 = 0.0;  // absolute moments set the residue scale
    for (std::size_t j = 0; j < m0->samples.size(); ++j) {
      nu_c += w[j] * m0->samples[j].weight;
      mu_c += w[j] * m0->samples[j].weight * m0->samples[j].k;
      abs0 += w[j] * std::abs(m0->samples[j].weight);
      abs1 += w[j] * std::abs(m0->samples[j].weight) * m0->samples[j].k;
    }
    mu_c *= std::complex<double>(0.0, 0.5);  // (i/2) * first k-moment
    if (std::abs(nu_c.imag()) > 1e-10 * std::max(abs0, 1e-30) ||
        std::abs(mu_c.imag()) > 1e-10 * std::max(0.5 * abs1, 1e-30))
      throw NumericError(
          "absorb_n0: mu or nu has an imaginary residue; the n = 0 content "
          "would synthesize a complex field");
    res.nu = nu_c.real();
    res.mu = mu_c.real();
  }
  if (res.nu >= 1.0)
    throw NuTooLargeError("absorb_n0: nu >= 1, rescaling undefined");

  const double f = 1.0 - res.nu;
  res.new_params.B0 = params.B0 * f;
  res.new_params.r_s = params.r_s * std::sqrt(f);
  res.new_params.z_s = params.z_s * std::sqrt(f);
  res.z_shift = res.mu * params.z_s * params.z_s;

  const SpectrumMode* m1 = spectrum.find_mode(1);
  if (m1 != nullptr) {
    res.adjusted_alpha1.reserve(m1->samples.size());
    for (const auto& s : m1->samples) {
      const std::complex<double> phase =
          std::exp(std::complex<double>(0.0, -s.k * res.z_shift));
      res.adjusted_alpha1.push_back({s.k, s.weight * phase / f});
    }
  }
  return res;
}

LongwaveReduction longwave_reduce(const ParitySplit& split) {
  const std::vector<double> w = trapezoid_weights(split.k);
  double a_avg = 0.0, ak_avg = 0.0;
  for (std::size_t j = 0; j < split.k.size(); ++j) {
    a_avg += w[j] * split.odd[j];
    ak_avg += w[j] * split.odd[j] * split.k[j];
  }
  if (a_avg == 0.0)
    throw ZeroMeanSpectrumError("longwave_reduce: <alpha> vanishes");
  LongwaveReduction red;
  red.alpha_avg = a_avg;
  red.k_avg = ak_avg / a_avg;
  red.effective = {a_avg, red.k_avg};
  red.effective.validate();
  return red;
}

std::vector<int> beyond_longwave(const PerturbationSpectrum& spectrum) {
  std::vector<int> out;
  for (const auto& mode : spectrum.modes)
    if (mode.n >= 2 && !mode.samples.empty()) out.push_back(mode.n);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace vortopo
