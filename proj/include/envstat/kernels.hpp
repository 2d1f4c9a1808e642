#pragma once

#include <Eigen/Core>
#include <complex>
#include <cstdint>
#include <vector>

namespace envstat {

enum class Side { System, Environment };

// Hot inner loops, each in a serial reference version and an OpenMP version.
// The parallel versions split work across independent output elements and
// keep every per-element summation order identical to the serial code, so
// the two variants produce bit-identical results. The serial versions are
// the reference used by the tests and the benchmark.
namespace kernels {

// Reduced density matrix of one side of a bipartite amplitude vector laid
// out as amps[i*dimE + j]. Diagonal-dominant sums use compensated
// accumulation so the trace stays tight at large dimensions.
Eigen::MatrixXcd reduce_density_serial(const Eigen::VectorXcd& amps, int dim_s, int dim_e,
                                       Side keep);
Eigen::MatrixXcd reduce_density_parallel(const Eigen::VectorXcd& amps, int dim_s, int dim_e,
                                         Side keep);

// (u ⊗ I) or (I ⊗ u) applied to the amplitude vector.
Eigen::VectorXcd apply_side_serial(const Eigen::VectorXcd& amps, const Eigen::MatrixXcd& u,
                                   int dim_s, int dim_e, Side side);
Eigen::VectorXcd apply_side_parallel(const Eigen::VectorXcd& amps, const Eigen::MatrixXcd& u,
                                     int dim_s, int dim_e, Side side);

// Histogram of total energy over every assignment of n_units units to the
// given single-unit states: state_energy holds one non-negative integer
// energy per single-unit basis state. Bin t counts assignments whose
// energies sum to t; the result has n_units*max(state_energy)+1 bins.
// The enumeration walks an odometer with incremental energy updates; the
// caller guards the total count state_energy.size()^n_units.
std::vector<std::uint64_t> energy_histogram_serial(const std::vector<std::int64_t>& state_energy,
                                                   int n_units);
std::vector<std::uint64_t> energy_histogram_parallel(const std::vector<std::int64_t>& state_energy,
                                                     int n_units);

// Dispatch helpers: pick the parallel variant when the work is large enough
// to amortize thread startup.
Eigen::MatrixXcd reduce_density(const Eigen::VectorXcd& amps, int dim_s, int dim_e, Side keep);
Eigen::VectorXcd apply_side(const Eigen::VectorXcd& amps, const Eigen::MatrixXcd& u, int dim_s,
                            int dim_e, Side side);
std::vector<std::uint64_t> energy_histogram(const std::vector<std::int64_t>& state_energy,
                                            int n_units);

}  // namespace kernels
}  // namespace envstat
