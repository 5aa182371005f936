#include "fbs/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "fbs/errors.hpp"

namespace fbs::fft {

namespace {

// One ESTIMATE plan per (rank, N, sign), created on scratch buffers and
// replayed on caller arrays via the new-array interface. FFTW_UNALIGNED
// keeps that legal for arbitrary vector allocations.
class PlanCache {
 public:
  fftw_plan get(int rank, int N, int sign) {
    std::scoped_lock lock(mu_);
    auto key = std::make_tuple(rank, N, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;

    std::size_t size = 1;
    for (int d = 0; d < rank; ++d) size *= static_cast<std::size_t>(N);
    std::vector<std::complex<double>> a(size), b(size);
    std::vector<int> dims(static_cast<std::size_t>(rank), N);
    fftw_plan plan = fftw_plan_dft(
        rank, dims.data(), reinterpret_cast<fftw_complex*>(a.data()),
        reinterpret_cast<fftw_complex*>(b.data()), sign,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan) throw IoError("fftw_plan_dft failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mu_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

void to_physical(const SpectralGrid& grid,
                 std::span<const std::complex<double>> coeffs,
                 std::span<std::complex<double>> phys) {
  if (coeffs.size() != grid.size() || phys.size() != grid.size())
    throw PreconditionError("to_physical: buffer size mismatch");
  fftw_plan plan = cache().get(grid.dim(), grid.modes_per_dim(), FFTW_BACKWARD);
  fftw_execute_dft(
      plan,
      reinterpret_cast<fftw_complex*>(
          const_cast<std::complex<double>*>(coeffs.data())),
      reinterpret_cast<fftw_complex*>(phys.data()));
}

void to_spectral(const SpectralGrid& grid,
                 std::span<const std::complex<double>> phys,
                 std::span<std::complex<double>> coeffs) {
  if (coeffs.size() != grid.size() || phys.size() != grid.size())
    throw PreconditionError("to_spectral: buffer size mismatch");
  fftw_plan plan = cache().get(grid.dim(), grid.modes_per_dim(), FFTW_FORWARD);
  fftw_execute_dft(
      plan,
      reinterpret_cast<fftw_complex*>(
          const_cast<std::complex<double>*>(phys.data())),
      reinterpret_cast<fftw_complex*>(coeffs.data()));
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (auto& c : coeffs) c *= scale;
}

}  // namespace fbs::fft
