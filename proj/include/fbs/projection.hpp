#pragma once

#include "fbs/field.hpp"

namespace fbs {

// Helmholtz projection onto divergence-free fields, per mode
//   (Pu)_k = u_hat_k - k (k . u_hat_k) / |k|^2,
// zero mode passed through unchanged. Output carries the solenoidal flag.
VectorField leray_project(const VectorField& u);

// Complementary gradient part Qu = u - Pu, per mode k (k . u_hat_k)/|k|^2,
// zero mode 0. Both projections are assembled from the same per-mode
// quotient, so Pu + Qu reproduces u to machine rounding.
VectorField gradient_part(const VectorField& u);

// Spectral gradient of a scalar, component d multiplies by i xi_d.
VectorField gradient(const ScalarField& f);

// Spectral divergence sum_d i xi_d u_hat_d.
ScalarField divergence(const VectorField& u);

}  // namespace fbs
