#pragma once

#include <cstdint>

#include "fbs/field.hpp"
#include "fbs/norms.hpp"

namespace fbs {

// Band-limited random field recipe: radial amplitude profile on the shell
// q_min <= |xi| <= q_max (physical wavenumber units), rescaled afterwards so
// that norm_of(field, target) == target_value.
//
// Realizations are keyed per integer wavevector, so the same (seed, spec)
// produces the same coefficients on every grid that contains the band; this
// is what makes refinement studies compare like with like.
struct SpectrumSpec {
  enum class Profile { Flat, Gaussian };

  double q_min = 0.0;
  double q_max = 0.0;
  Profile profile = Profile::Flat;
  double center = 0.0;  // Gaussian only
  double width = 1.0;   // Gaussian only
  NormSpec target = NormSpec::hdot(0.0);
  double target_value = 1.0;

  static SpectrumSpec flat(double q_min, double q_max, NormSpec target,
                           double value);
  static SpectrumSpec gaussian(double q_min, double q_max, double center,
                               double width, NormSpec target, double value);
};

// Hermitian-symmetric, mean-free, band-limited, bitwise deterministic in
// (seed, grid, spec). Throws on an empty band or an unreachable target.
ScalarField random_field(GridPtr grid, const SpectrumSpec& spec,
                         std::uint64_t seed);

// Same, post-composed with the Helmholtz projection and rescaled, so the
// divergence check passes at 1e-12 and the norm target is exact.
VectorField random_solenoidal(GridPtr grid, const SpectrumSpec& spec,
                              std::uint64_t seed);

// SplitMix64 step; the library's only RNG primitive (fully portable).
std::uint64_t splitmix64(std::uint64_t& state);
// Hash-combined stream key for (seed, stream) sub-generators.
std::uint64_t seed_stream(std::uint64_t seed, std::uint64_t stream);
// Deterministic uniform in (0,1].
double uniform01(std::uint64_t& state);

}  // namespace fbs
