#include "fbs/advection.hpp"

#include <vector>

#include "fbs/errors.hpp"
#include "fbs/fft.hpp"

namespace fbs {

namespace {

using CVec = std::vector<Complex>;

void mask_coeffs(const SpectralGrid& g, CVec& c) {
  for (std::size_t idx = 0; idx < c.size(); ++idx)
    if (!g.in_dealias_band(idx)) c[idx] = Complex(0.0, 0.0);
}

// Masked coefficients -> collocation values, real part only. Inputs are
// Hermitian up to rounding, so dropping the imaginary dust keeps the
// products exactly real.
std::vector<double> phys_real(const SpectralGrid& g, const CVec& coeffs) {
  CVec masked = coeffs;
  mask_coeffs(g, masked);
  CVec phys(g.size());
  fft::to_physical(g, masked, phys);
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = phys[i].real();
  return out;
}

// Spectral derivative along d of the masked coefficients.
CVec masked_derivative(const SpectralGrid& g, const CVec& coeffs, int d) {
  CVec out(g.size());
  const double xi = g.xi_unit();
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (!g.in_dealias_band(idx)) {
      out[idx] = Complex(0.0, 0.0);
      continue;
    }
    out[idx] = Complex(0.0, xi * g.wavenumber(idx, d)) * coeffs[idx];
  }
  return out;
}

ScalarField spectral_of_real(const SpectralGrid& g, GridPtr grid,
                             const std::vector<double>& values) {
  CVec phys(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) phys[i] = Complex(values[i], 0.0);
  ScalarField out(std::move(grid), true);
  fft::to_spectral(g, phys, out.coeffs);
  mask_coeffs(g, out.coeffs);
  return out;
}

void require_real(const ScalarField& f, const char* where) {
  if (!f.real_valued)
    throw PreconditionError(std::string(where) +
                            ": requires a real-valued field");
}

void require_real(const VectorField& u, const char* where) {
  if (!u.real_valued())
    throw PreconditionError(std::string(where) +
                            ": requires a real-valued field");
}

std::vector<std::vector<double>> velocity_phys(const VectorField& u) {
  const auto& g = *u.grid();
  std::vector<std::vector<double>> up;
  up.reserve(u.comp.size());
  for (const auto& c : u.comp) up.push_back(phys_real(g, c.coeffs));
  return up;
}

ScalarField advect_with_velocity_phys(
    const VectorField& u, const std::vector<std::vector<double>>& up,
    const ScalarField& f) {
  const auto& g = *u.grid();
  std::vector<double> acc(g.size(), 0.0);
  CVec phys(g.size());
  for (int d = 0; d < g.dim(); ++d) {
    CVec dfd = masked_derivative(g, f.coeffs, d);
    fft::to_physical(g, dfd, phys);
    const auto& ud = up[static_cast<std::size_t>(d)];
    for (std::size_t i = 0; i < g.size(); ++i) acc[i] += ud[i] * phys[i].real();
  }
  return spectral_of_real(g, u.grid(), acc);
}

}  // namespace

void dealias(ScalarField& f) { mask_coeffs(*f.grid, f.coeffs); }

void dealias(VectorField& u) {
  for (auto& c : u.comp) dealias(c);
}

ScalarField dealiased_product(const ScalarField& f, const ScalarField& g) {
  require_same_grid(*f.grid, *g.grid, "dealiased_product");
  require_real(f, "dealiased_product");
  require_real(g, "dealiased_product");
  const auto& gr = *f.grid;
  auto fp = phys_real(gr, f.coeffs);
  auto gp = phys_real(gr, g.coeffs);
  for (std::size_t i = 0; i < fp.size(); ++i) fp[i] *= gp[i];
  return spectral_of_real(gr, f.grid, fp);
}

ScalarField advect(const VectorField& u, const ScalarField& f) {
  require_same_grid(*u.grid(), *f.grid, "advect");
  require_real(u, "advect");
  require_real(f, "advect");
  return advect_with_velocity_phys(u, velocity_phys(u), f);
}

VectorField advect_vec(const VectorField& u, const VectorField& v) {
  require_same_grid(*u.grid(), *v.grid(), "advect_vec");
  require_real(u, "advect_vec");
  require_real(v, "advect_vec");
  auto up = velocity_phys(u);
  VectorField out(u.grid(), true);
  for (std::size_t j = 0; j < v.comp.size(); ++j)
    out.comp[j] = advect_with_velocity_phys(u, up, v.comp[j]);
  return out;
}

ScalarField advect_divergence_form(const VectorField& u,
                                   const ScalarField& f) {
  require_same_grid(*u.grid(), *f.grid, "advect_divergence_form");
  require_real(u, "advect_divergence_form");
  require_real(f, "advect_divergence_form");
  const auto& g = *u.grid();
  auto fp = phys_real(g, f.coeffs);
  ScalarField out(u.grid(), true);
  const double xi = g.xi_unit();
  for (int d = 0; d < g.dim(); ++d) {
    auto ud = phys_real(g, u.comp[static_cast<std::size_t>(d)].coeffs);
    for (std::size_t i = 0; i < g.size(); ++i) ud[i] *= fp[i];
    ScalarField prod = spectral_of_real(g, u.grid(), ud);
    for (std::size_t idx = 0; idx < g.size(); ++idx)
      out.coeffs[idx] +=
          Complex(0.0, xi * g.wavenumber(idx, d)) * prod.coeffs[idx];
  }
  return out;
}

AdvectionPair advect_pair(const VectorField& u, const VectorField& v,
                          const ScalarField& f) {
  require_same_grid(*u.grid(), *v.grid(), "advect_pair");
  require_same_grid(*u.grid(), *f.grid, "advect_pair");
  require_real(u, "advect_pair");
  require_real(v, "advect_pair");
  require_real(f, "advect_pair");
  auto up = velocity_phys(u);
  AdvectionPair out{VectorField(u.grid(), true),
                    ScalarField(u.grid(), true)};
  for (std::size_t j = 0; j < v.comp.size(); ++j)
    out.momentum.comp[j] = advect_with_velocity_phys(u, up, v.comp[j]);
  out.temperature = advect_with_velocity_phys(u, up, f);
  return out;
}

}  // namespace fbs
