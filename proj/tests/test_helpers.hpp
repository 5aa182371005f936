#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <vector>

#include "fbs/field.hpp"
#include "fbs/grid.hpp"

namespace fbs::test {

inline std::array<int, kMaxDim> kvec(int a, int b = 0, int c = 0, int d = 0) {
  std::array<int, kMaxDim> k{};
  k[0] = a;
  k[1] = b;
  k[2] = c;
  k[3] = d;
  return k;
}

// Sparse-mode product oracle: exact convolution of the nonzero modes of f
// and g on the infinite lattice, then truncation to the grid band. O(m^2)
// over the nonzero modes; independent of the FFT path it checks.
inline ScalarField convolve_oracle(const ScalarField& f,
                                   const ScalarField& g) {
  const auto& grid = *f.grid;
  const int n = grid.dim();
  std::vector<std::pair<std::array<int, kMaxDim>, Complex>> fm, gm;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    if (std::abs(f.coeffs[idx]) != 0.0)
      fm.emplace_back(grid.wavevector(idx), f.coeffs[idx]);
    if (std::abs(g.coeffs[idx]) != 0.0)
      gm.emplace_back(grid.wavevector(idx), g.coeffs[idx]);
  }
  ScalarField out(f.grid, f.real_valued && g.real_valued);
  const int limit = grid.dealias_limit();
  for (const auto& [ka, ca] : fm) {
    for (const auto& [kb, cb] : gm) {
      std::array<int, kMaxDim> k{};
      bool in_band = true;
      for (int d = 0; d < n; ++d) {
        k[static_cast<std::size_t>(d)] = ka[static_cast<std::size_t>(d)] +
                                         kb[static_cast<std::size_t>(d)];
        if (std::abs(k[static_cast<std::size_t>(d)]) > limit) in_band = false;
      }
      if (!in_band) continue;  // true product mode lies outside the kept band
      out.coeffs[grid.index_of(k)] += ca * cb;
    }
  }
  return out;
}

inline double rel_err(double got, double expected) {
  const double scale = std::max(std::abs(expected), 1e-300);
  return std::abs(got - expected) / scale;
}

}  // namespace fbs::test
