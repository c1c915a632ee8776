// Benchmark comparing the OpenMP kernels against their serial reference
// implementations. Also asserts both produce identical results, since the
// kernels are designed to be schedule-independent.

#include <chrono>
#include <cstdio>
#include <vector>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "vortopo/kernels.hpp"
#include "vortopo/mesh.hpp"
#include "vortopo/topology.hpp"
#include "vortopo/tracer.hpp"

using namespace vortopo;

namespace {

template <typename F>
double time_best_of(int reps, const F& f) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto start = std::chrono::steady_clock::now();
    f();
    const auto stop = std::chrono::steady_clock::now();
    best = std::min(best,
                    std::chrono::duration<double>(stop - start).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs OpenMP kernel benchmark"};
  int resolution = 192;
  std::uint64_t samples = 2'000'000;
  int n_seeds = 24;
  int reps = 3;
  app.add_option("--resolution", resolution, "grid cells per axis");
  app.add_option("--samples", samples, "sampler draws");
  app.add_option("--seeds", n_seeds, "field lines in the batch");
  app.add_option("--reps", reps, "repetitions (best-of)");
  CLI11_PARSE(app, argc, argv);

  const VortexParams vp{2.0, 1.0, 1.0};
  const PerturbationParams pp{0.2, 0.25};

  int threads = 1;
#ifdef _OPENMP
#pragma omp parallel
  {
#pragma omp single
    threads = omp_get_num_threads();
  }
#endif
  std::printf("threads: %d\n", threads);
  std::printf("%-28s %12s %12s %8s\n", "kernel", "serial (s)", "openmp (s)",
              "speedup");

  {
    GridSpec grid = mesh_grid_spec(vp, pp, resolution);
    std::vector<double> a, b;
    const double ts = time_best_of(reps, [&] { a = fill_psi_grid_serial(vp, pp, grid); });
    const double tp = time_best_of(reps, [&] { b = fill_psi_grid(vp, pp, grid); });
    if (a != b) {
      std::fprintf(stderr, "fill_psi_grid: serial/openmp mismatch\n");
      return 1;
    }
    std::printf("%-28s %12.4f %12.4f %8.2f\n", "fill_psi_grid", ts, tp, ts / tp);
  }
  {
    const Box box = outer_separatrix_box(vp, pp, 0.0);
    MaxSampleResult a{}, b{};
    const double ts =
        time_best_of(reps, [&] { a = max_psi_sample_serial(vp, pp, box, samples); });
    const double tp =
        time_best_of(reps, [&] { b = max_psi_sample(vp, pp, box, samples); });
    if (a.max_value != b.max_value || a.argmax_index != b.argmax_index) {
      std::fprintf(stderr, "max_psi_sample: serial/openmp mismatch\n");
      return 1;
    }
    std::printf("%-28s %12.4f %12.4f %8.2f\n", "max_psi_sample", ts, tp, ts / tp);
  }
  {
    const SeparatrixData sd = separatrix_data(vp, pp);
    std::vector<Point3> seeds;
    for (int i = 0; i < n_seeds; ++i) {
      const double f = 0.05 + 0.9 * double(i) / std::max(1, n_seeds - 1);
      double psi = f * sd.psi_plus;
      if (std::abs(psi - sd.psi_minus) < 0.03 * sd.psi_plus)
        psi += 0.05 * sd.psi_plus;
      seeds.push_back(seed_at_psi(std::min(psi, 0.99 * sd.psi_plus), vp, pp));
    }
    const TracerSettings st = TracerSettings::defaults(vp);
    std::vector<FieldLine> a, b;
    const double ts =
        time_best_of(reps, [&] { a = trace_batch_serial(seeds, vp, pp, st); });
    const double tp = time_best_of(reps, [&] { b = trace_batch(seeds, vp, pp, st); });
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i].samples.size() != b[i].samples.size() ||
          a[i].psi_drift != b[i].psi_drift) {
        std::fprintf(stderr, "trace_batch: serial/openmp mismatch\n");
        return 1;
      }
    std::printf("%-28s %12.4f %12.4f %8.2f\n", "trace_batch", ts, tp, ts / tp);
  }
  return 0;
}
