#pragma once

#include "fbs/field.hpp"

namespace fbs {

// Norm selector: homogeneous Sobolev index s (any real) or Lebesgue
// exponent p in [1, inf).
struct NormSpec {
  enum class Kind { Hdot, Lebesgue };
  Kind kind;
  double index;

  static NormSpec hdot(double s) { return {Kind::Hdot, s}; }
  static NormSpec lebesgue(double p);
};

// Lambda^s f = F^{-1} |xi|^s F f with the zero mode annihilated (homogeneous
// convention; this is the documented behavior, not an error).
ScalarField lambda_power(const ScalarField& f, double s);
VectorField lambda_power(const VectorField& u, double s);

// ||f||_{Hdot^s}^2 = L^n sum_{k != 0} |xi_k|^{2s} |f_hat_k|^2.
double hdot_norm_sq(const ScalarField& f, double s);
double hdot_norm_sq(const VectorField& u, double s);
double hdot_norm(const ScalarField& f, double s);
double hdot_norm(const VectorField& u, double s);

// Hdot^s inner product (real part), zero mode excluded.
double hdot_inner(const VectorField& a, const VectorField& b, double s);

// L^2 pairing L^n Re sum_k f_hat conj(g_hat), zero mode included.
double l2_inner(const ScalarField& f, const ScalarField& g);

// Collocation quadrature (sum_j |f(x_j)|^p (L/N)^n)^{1/p}. Exact for p = 2
// on band-limited data, quadrature-accurate otherwise. Requires a
// real-valued field and 1 <= p < inf.
double lp_norm(const ScalarField& f, double p);

double norm_of(const ScalarField& f, const NormSpec& spec);
double norm_of(const VectorField& u, const NormSpec& spec);

}  // namespace fbs
