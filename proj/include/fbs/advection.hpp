#pragma once

#include "fbs/field.hpp"

namespace fbs {

// Zeroes every mode with any |k_d| > N/3 in place (2/3-rule mask).
void dealias(ScalarField& f);
void dealias(VectorField& u);

// Pointwise product computed on the collocation grid with the 2/3 mask
// applied to both inputs and the output. For inputs already inside the
// band the retained modes are the exact convolution (alias-free).
// Requires real-valued inputs on a shared grid.
ScalarField dealiased_product(const ScalarField& f, const ScalarField& g);

// u . grad f, pseudo-spectral: differentiate f spectrally, multiply in
// physical space, transform back, mask. Real-valued result.
ScalarField advect(const VectorField& u, const ScalarField& f);

// Componentwise variant (u . grad v)_j = sum_d u_d d_d v_j.
VectorField advect_vec(const VectorField& u, const VectorField& v);

// div(f u) = sum_d d_d (f u_d), the divergence-form advection used by the
// UF2/UF3 audits; equals u . grad f when u is solenoidal.
ScalarField advect_divergence_form(const VectorField& u, const ScalarField& f);

// u . grad v and u . grad f in one pass, sharing the physical-space
// transforms of u; the per-node workhorse of the coupled system.
struct AdvectionPair {
  VectorField momentum;     // u . grad v
  ScalarField temperature;  // u . grad f
};
AdvectionPair advect_pair(const VectorField& u, const VectorField& v,
                          const ScalarField& f);

}  // namespace fbs
