// Compares the serial reference kernels against their OpenMP versions and
// checks that the outputs stay bit-identical while timing both.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "envstat/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = Clock::now();
    f();
    const auto t1 = Clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
  std::printf("%-22s %10.2f ms %10.2f ms %8.2fx   %s\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms, identical ? "bit-identical" : "MISMATCH");
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (OpenMP disabled)\n");
#endif
  std::printf("%-22s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

  std::mt19937_64 rng(12345);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const int dim_s = 224, dim_e = 224;
  Eigen::VectorXcd amps(static_cast<Eigen::Index>(dim_s) * dim_e);
  for (Eigen::Index i = 0; i < amps.size(); ++i)
    amps[i] = std::complex<double>(gauss(rng), gauss(rng));
  amps /= amps.norm();

  {
    Eigen::MatrixXcd serial, parallel;
    const double ts = best_of(3, [&] {
      serial = envstat::kernels::reduce_density_serial(amps, dim_s, dim_e, envstat::Side::System);
    });
    const double tp = best_of(3, [&] {
      parallel =
          envstat::kernels::reduce_density_parallel(amps, dim_s, dim_e, envstat::Side::System);
    });
    report("reduce_density", ts, tp, (serial - parallel).cwiseAbs().maxCoeff() == 0.0);
  }

  {
    Eigen::MatrixXcd u(dim_s, dim_s);
    for (int i = 0; i < dim_s; ++i)
      for (int j = 0; j < dim_s; ++j) u(i, j) = std::complex<double>(gauss(rng), gauss(rng));
    Eigen::VectorXcd serial, parallel;
    const double ts = best_of(3, [&] {
      serial = envstat::kernels::apply_side_serial(amps, u, dim_s, dim_e, envstat::Side::System);
    });
    const double tp = best_of(3, [&] {
      parallel =
          envstat::kernels::apply_side_parallel(amps, u, dim_s, dim_e, envstat::Side::System);
    });
    report("apply_side", ts, tp, (serial - parallel).cwiseAbs().maxCoeff() == 0.0);
  }

  {
    const std::vector<std::int64_t> state_energy{0, 1, 1, 2};
    const int n_units = 12;  // 4^12 = 16.7M assignments
    std::vector<std::uint64_t> serial, parallel;
    const double ts =
        best_of(3, [&] { serial = envstat::kernels::energy_histogram_serial(state_energy, n_units); });
    const double tp = best_of(
        3, [&] { parallel = envstat::kernels::energy_histogram_parallel(state_energy, n_units); });
    report("energy_histogram", ts, tp, serial == parallel);
  }

  return 0;
}
