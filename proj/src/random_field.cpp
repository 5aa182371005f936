#include "fbs/random_field.hpp"

#include <cmath>
#include <numbers>

#include "fbs/errors.hpp"
#include "fbs/projection.hpp"

namespace fbs {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t seed_stream(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed ^ (0x8e9c1f3d2a6b4075ULL + stream * 0xd1342543de82ef95ULL);
  return splitmix64(s);
}

double uniform01(std::uint64_t& state) {
  return (static_cast<double>(splitmix64(state) >> 11) + 1.0) * 0x1p-53;
}

SpectrumSpec SpectrumSpec::flat(double q_min, double q_max, NormSpec target,
                                double value) {
  SpectrumSpec s;
  s.q_min = q_min;
  s.q_max = q_max;
  s.profile = Profile::Flat;
  s.target = target;
  s.target_value = value;
  return s;
}

SpectrumSpec SpectrumSpec::gaussian(double q_min, double q_max, double center,
                                    double width, NormSpec target,
                                    double value) {
  SpectrumSpec s;
  s.q_min = q_min;
  s.q_max = q_max;
  s.profile = Profile::Gaussian;
  s.center = center;
  s.width = width;
  s.target = target;
  s.target_value = value;
  return s;
}

namespace {

double profile_amplitude(const SpectrumSpec& spec, double q) {
  if (spec.profile == SpectrumSpec::Profile::Flat) return 1.0;
  const double d = (q - spec.center) / spec.width;
  return std::exp(-0.5 * d * d);
}

// Complex standard normal keyed by (stream, integer wavevector): identical
// realizations on every grid containing the mode.
Complex mode_normal(std::uint64_t stream, const SpectralGrid& g,
                    std::size_t idx) {
  std::uint64_t key = stream;
  for (int d = 0; d < g.dim(); ++d) {
    std::uint64_t comp =
        static_cast<std::uint64_t>(static_cast<std::int64_t>(g.wavenumber(idx, d)) + 0x10000);
    key = splitmix64(key) ^ (comp * 0x9e3779b97f4a7c15ULL);
  }
  std::uint64_t state = key;
  const double u1 = uniform01(state);
  const double u2 = uniform01(state);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  return Complex(r * std::cos(phi), r * std::sin(phi)) / std::numbers::sqrt2;
}

ScalarField raw_band_field(GridPtr grid, const SpectrumSpec& spec,
                           std::uint64_t stream) {
  const auto& g = *grid;
  if (!(spec.q_min <= spec.q_max))
    throw PreconditionError("random_field: empty band (q_min > q_max)");
  const double cutoff = g.xi_unit() * g.dealias_limit();
  if (spec.q_max > cutoff * (1.0 + 1e-12))
    throw PreconditionError(
        "random_field: band exceeds the dealias cutoff N/3");
  ScalarField f(grid, true);
  bool hit = false;
  for (std::size_t idx = 1; idx < g.size(); ++idx) {
    const double q = g.xi_unit() * std::sqrt(g.ksq(idx));
    if (q < spec.q_min || q > spec.q_max) continue;
    const std::size_t mirror = g.mirror_index(idx);
    if (mirror < idx) continue;  // mirror already assigned
    const double amp = profile_amplitude(spec, q);
    const Complex z = amp * mode_normal(stream, g, idx);
    if (mirror == idx) {
      f.coeffs[idx] = Complex(z.real(), 0.0);
    } else {
      f.coeffs[idx] = z;
      f.coeffs[mirror] = std::conj(z);
    }
    hit = true;
  }
  if (!hit) throw PreconditionError("random_field: empty band on this grid");
  return f;
}

}  // namespace

ScalarField random_field(GridPtr grid, const SpectrumSpec& spec,
                         std::uint64_t seed) {
  ScalarField f = raw_band_field(grid, spec, seed_stream(seed, 0));
  const double current = norm_of(f, spec.target);
  if (current <= 0.0)
    throw PreconditionError("random_field: unreachable target (zero profile)");
  f *= spec.target_value / current;
  return f;
}

VectorField random_solenoidal(GridPtr grid, const SpectrumSpec& spec,
                              std::uint64_t seed) {
  VectorField u(grid, true);
  for (int d = 0; d < grid->dim(); ++d)
    u.comp[static_cast<std::size_t>(d)] = raw_band_field(
        grid, spec, seed_stream(seed, 1 + static_cast<std::uint64_t>(d)));
  VectorField p = leray_project(u);
  const double current = norm_of(p, spec.target);
  if (current <= 0.0)
    throw PreconditionError(
        "random_solenoidal: unreachable target (projection annihilated the band)");
  p *= spec.target_value / current;
  return p;
}

}  // namespace fbs
