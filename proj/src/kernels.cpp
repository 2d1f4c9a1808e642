#include "envstat/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace envstat::kernels {

namespace {

// Kahan accumulator, real and imaginary compensated independently.
struct Compensated {
  double re = 0.0, im = 0.0;
  double cre = 0.0, cim = 0.0;
  void add(double xr, double xi) {
    const double yr = xr - cre;
    const double tr = re + yr;
    cre = (tr - re) - yr;
    re = tr;
    const double yi = xi - cim;
    const double ti = im + yi;
    cim = (ti - im) - yi;
    im = ti;
  }
  std::complex<double> value() const { return {re, im}; }
};

// Single entry of the reduced density matrix; the j-loop order here defines
// the arithmetic for both the serial and the parallel variant.
std::complex<double> density_entry(const Eigen::VectorXcd& amps, int dim_s, int dim_e, Side keep,
                                   std::int64_t r, std::int64_t c) {
  Compensated acc;
  if (keep == Side::System) {
    const std::complex<double>* a = amps.data() + r * dim_e;
    const std::complex<double>* b = amps.data() + c * dim_e;
    for (int j = 0; j < dim_e; ++j) {
      const double ar = a[j].real(), ai = a[j].imag();
      const double br = b[j].real(), bi = b[j].imag();
      acc.add(ar * br + ai * bi, ai * br - ar * bi);
    }
  } else {
    const std::complex<double>* base = amps.data();
    for (int i = 0; i < dim_s; ++i) {
      const std::complex<double> a = base[i * dim_e + r];
      const std::complex<double> b = base[i * dim_e + c];
      acc.add(a.real() * b.real() + a.imag() * b.imag(),
              a.imag() * b.real() - a.real() * b.imag());
    }
  }
  return acc.value();
}

std::complex<double> apply_entry(const Eigen::VectorXcd& amps, const Eigen::MatrixXcd& u,
                                 int dim_e, Side side, std::int64_t i, std::int64_t j) {
  std::complex<double> sum = 0.0;
  if (side == Side::System) {
    const int n = static_cast<int>(u.rows());
    for (int k = 0; k < n; ++k) sum += u(i, k) * amps[static_cast<std::int64_t>(k) * dim_e + j];
  } else {
    const int n = static_cast<int>(u.rows());
    for (int k = 0; k < n; ++k) sum += u(j, k) * amps[i * dim_e + k];
  }
  return sum;
}

std::uint64_t pow_u64(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// Odometer walk over `count` consecutive assignments starting from the
// current digits/energy; digit[0] is the fastest axis.
void walk_assignments(const std::vector<std::int64_t>& state_energy, std::vector<int>& digit,
                      std::int64_t energy, std::uint64_t count, std::vector<std::uint64_t>& hist) {
  const int s = static_cast<int>(state_energy.size());
  const int n = static_cast<int>(digit.size());
  for (std::uint64_t step = 0; step < count; ++step) {
    ++hist[static_cast<std::size_t>(energy)];
    int k = 0;
    while (k < n && digit[k] == s - 1) {
      energy += state_energy[0] - state_energy[s - 1];
      digit[k] = 0;
      ++k;
    }
    if (k == n) break;
    energy -= state_energy[digit[k]];
    ++digit[k];
    energy += state_energy[digit[k]];
  }
}

void decode_start(std::uint64_t index, int s, std::vector<int>& digit, std::int64_t& energy,
                  const std::vector<std::int64_t>& state_energy) {
  energy = 0;
  for (std::size_t k = 0; k < digit.size(); ++k) {
    digit[k] = static_cast<int>(index % s);
    index /= s;
    energy += state_energy[digit[k]];
  }
}

}  // namespace

Eigen::MatrixXcd reduce_density_serial(const Eigen::VectorXcd& amps, int dim_s, int dim_e,
                                       Side keep) {
  const int dim = keep == Side::System ? dim_s : dim_e;
  Eigen::MatrixXcd rho(dim, dim);
  for (std::int64_t r = 0; r < dim; ++r)
    for (std::int64_t c = 0; c < dim; ++c) rho(r, c) = density_entry(amps, dim_s, dim_e, keep, r, c);
  return rho;
}

Eigen::MatrixXcd reduce_density_parallel(const Eigen::VectorXcd& amps, int dim_s, int dim_e,
                                         Side keep) {
#ifndef _OPENMP
  return reduce_density_serial(amps, dim_s, dim_e, keep);
#else
  const int dim = keep == Side::System ? dim_s : dim_e;
  Eigen::MatrixXcd rho(dim, dim);
#pragma omp parallel for collapse(2) schedule(static)
  for (std::int64_t r = 0; r < dim; ++r)
    for (std::int64_t c = 0; c < dim; ++c) rho(r, c) = density_entry(amps, dim_s, dim_e, keep, r, c);
  return rho;
#endif
}

Eigen::VectorXcd apply_side_serial(const Eigen::VectorXcd& amps, const Eigen::MatrixXcd& u,
                                   int dim_s, int dim_e, Side side) {
  Eigen::VectorXcd out(amps.size());
  for (std::int64_t i = 0; i < dim_s; ++i)
    for (std::int64_t j = 0; j < dim_e; ++j)
      out[i * dim_e + j] = apply_entry(amps, u, dim_e, side, i, j);
  return out;
}

Eigen::VectorXcd apply_side_parallel(const Eigen::VectorXcd& amps, const Eigen::MatrixXcd& u,
                                     int dim_s, int dim_e, Side side) {
#ifndef _OPENMP
  return apply_side_serial(amps, u, dim_s, dim_e, side);
#else
  Eigen::VectorXcd out(amps.size());
#pragma omp parallel for collapse(2) schedule(static)
  for (std::int64_t i = 0; i < dim_s; ++i)
    for (std::int64_t j = 0; j < dim_e; ++j)
      out[i * dim_e + j] = apply_entry(amps, u, dim_e, side, i, j);
  return out;
#endif
}

std::vector<std::uint64_t> energy_histogram_serial(const std::vector<std::int64_t>& state_energy,
                                                   int n_units) {
  const int s = static_cast<int>(state_energy.size());
  const std::int64_t max_e = *std::max_element(state_energy.begin(), state_energy.end());
  std::vector<std::uint64_t> hist(static_cast<std::size_t>(n_units) * max_e + 1, 0);
  std::vector<int> digit(n_units, 0);
  const std::int64_t start_energy = state_energy[0] * n_units;
  walk_assignments(state_energy, digit, start_energy, pow_u64(s, n_units), hist);
  return hist;
}

std::vector<std::uint64_t> energy_histogram_parallel(const std::vector<std::int64_t>& state_energy,
                                                     int n_units) {
#ifndef _OPENMP
  return energy_histogram_serial(state_energy, n_units);
#else
  const int s = static_cast<int>(state_energy.size());
  const std::int64_t max_e = *std::max_element(state_energy.begin(), state_energy.end());
  const std::size_t bins = static_cast<std::size_t>(n_units) * max_e + 1;
  const std::uint64_t total = pow_u64(s, n_units);
  std::vector<std::uint64_t> hist(bins, 0);
#pragma omp parallel
  {
    const int nt = omp_get_num_threads();
    const int tid = omp_get_thread_num();
    const std::uint64_t lo =
        static_cast<std::uint64_t>(static_cast<unsigned __int128>(total) * tid / nt);
    const std::uint64_t hi =
        static_cast<std::uint64_t>(static_cast<unsigned __int128>(total) * (tid + 1) / nt);
    if (hi > lo) {
      std::vector<std::uint64_t> local(bins, 0);
      std::vector<int> digit(n_units, 0);
      std::int64_t energy = 0;
      decode_start(lo, s, digit, energy, state_energy);
      walk_assignments(state_energy, digit, energy, hi - lo, local);
#pragma omp critical
      for (std::size_t b = 0; b < bins; ++b) hist[b] += local[b];
    }
  }
  return hist;
#endif
}

Eigen::MatrixXcd reduce_density(const Eigen::VectorXcd& amps, int dim_s, int dim_e, Side keep) {
  const std::int64_t out_dim = keep == Side::System ? dim_s : dim_e;
  if (static_cast<std::int64_t>(amps.size()) * out_dim >= (std::int64_t{1} << 21))
    return reduce_density_parallel(amps, dim_s, dim_e, keep);
  return reduce_density_serial(amps, dim_s, dim_e, keep);
}

Eigen::VectorXcd apply_side(const Eigen::VectorXcd& amps, const Eigen::MatrixXcd& u, int dim_s,
                            int dim_e, Side side) {
  if (static_cast<std::int64_t>(amps.size()) * u.rows() >= (std::int64_t{1} << 21))
    return apply_side_parallel(amps, u, dim_s, dim_e, side);
  return apply_side_serial(amps, u, dim_s, dim_e, side);
}

std::vector<std::uint64_t> energy_histogram(const std::vector<std::int64_t>& state_energy,
                                            int n_units) {
  double log_total = n_units * std::log2(static_cast<double>(state_energy.size()));
  if (log_total >= 22.0) return energy_histogram_parallel(state_energy, n_units);
  return energy_histogram_serial(state_energy, n_units);
}

}  // namespace envstat::kernels
