#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <memory>
#include <vector>

namespace fbs {

inline constexpr int kMaxDim = 8;

// Periodic box discretization [0,L]^n with N modes per dimension.
//
// Mode ordering is the usual FFT layout, row-major over dimensions with the
// last dimension contiguous. Per dimension the index i in [0,N) carries the
// integer wavenumber k = i for i < N/2 and k = i - N otherwise, so k ranges
// over [-N/2, N/2). The physical wavenumber is xi = (2*pi/L) * k.
//
// Nyquist convention: the lattice is reflection-symmetric k -> -k modulo N,
// under which k = -N/2 is its own mirror. All band-limited operations in
// this library stay strictly below the Nyquist row, so the asymmetry never
// carries data.
class SpectralGrid {
 public:
  SpectralGrid(int dim, int modes_per_dim, double box_length);

  int dim() const { return dim_; }
  int modes_per_dim() const { return modes_; }
  double box_length() const { return length_; }
  std::size_t size() const { return size_; }

  // 2*pi/L, the physical wavenumber of the first mode.
  double xi_unit() const;
  // L^n, the Parseval volume factor.
  double volume() const;

  // Integer wavenumber component d of lattice point idx.
  int wavenumber(std::size_t idx, int d) const;
  std::array<int, kMaxDim> wavevector(std::size_t idx) const;
  // Lattice index of an integer wavevector (components wrapped mod N).
  std::size_t index_of(const std::array<int, kMaxDim>& k) const;
  // Index of -k (mod N reflection).
  std::size_t mirror_index(std::size_t idx) const;

  // |k|^2 as a double, zero exactly at the zero mode.
  double ksq(std::size_t idx) const { return ksq_[idx]; }
  const std::vector<double>& ksq() const { return ksq_; }

  // 2/3-rule cutoff: modes with any |k_d| > N/3 are aliased garbage after a
  // quadratic product and get zeroed. Integer threshold floor(N/3).
  int dealias_limit() const { return modes_ / 3; }
  bool in_dealias_band(std::size_t idx) const;

  // Cached (|k|^2)^e with the zero mode pinned to 0; shared across fields.
  // Not synchronized: the library runs field operations on one thread.
  std::shared_ptr<const std::vector<double>> ksq_power(double e) const;

  bool same_as(const SpectralGrid& other) const;

 private:
  int dim_;
  int modes_;
  double length_;
  std::size_t size_;
  std::vector<double> ksq_;
  mutable std::map<double, std::shared_ptr<const std::vector<double>>>
      pow_cache_;
};

using GridPtr = std::shared_ptr<const SpectralGrid>;

// Validates and builds a grid: n >= 2, N even and >= 4, L > 0. n = 4 is
// capped at N <= 12 and the total mode count at 2^24 to keep memory sane.
GridPtr make_grid(int n, int N, double L);

void require_same_grid(const SpectralGrid& a, const SpectralGrid& b,
                       const char* where);

}  // namespace fbs
