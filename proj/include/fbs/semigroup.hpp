#pragma once

#include <vector>

#include "fbs/field.hpp"
#include "fbs/norms.hpp"
#include "fbs/trajectory.hpp"

namespace fbs {

// e^{-t(-Lap)^alpha} f: per-mode multiplication by exp(-t |xi|^{2 alpha}),
// zero mode times 1. Requires t >= 0, alpha > 0.
ScalarField heat_flow(const ScalarField& f, double t, double alpha);
VectorField heat_flow(const VectorField& u, double t, double alpha);

// t^{gamma/alpha} ||(-Lap)^gamma e^{-t(-Lap)^alpha} f||_{Hdot^s} / ||f||_{Hdot^s}.
// Bounded by sup_{y>=0} y^{gamma/alpha} e^{-y} = c^c e^{-c}, c = gamma/alpha.
double smoothing_ratio(const ScalarField& f, double t, double alpha,
                       double gamma, double s);

// The exact per-mode supremum (gamma/alpha)^(gamma/alpha) e^{-gamma/alpha}.
double smoothing_bound(double alpha, double gamma);

// A^{iy} with A = (-Lap)^alpha: unit-modulus multiplier |xi|^{2 alpha i y},
// zero mode annihilated. Preserves every Hdot^s norm exactly.
ScalarField imaginary_power(const ScalarField& f, double y, double alpha);

// Exponential-integrator weights phi0(z) = e^-z, phi1(z) = (1-e^-z)/z,
// phi2(z) = (e^-z - 1 + z)/z^2 at z = dt |xi_k|^{2 alpha}. Small-z branch
// switches to a 4-term Taylor series below z = 1e-4 (phi2 cancels there).
struct PhiWeights {
  std::vector<double> phi0;
  std::vector<double> phi1;
  std::vector<double> phi2;

  static PhiWeights build(const SpectralGrid& grid, double dt, double alpha);
};

// Scalar versions usable as oracles.
double phi1_scalar(double z);
double phi2_scalar(double z);

// w(t) = int_0^t e^{-(t-tau)(-Lap)^alpha} f(tau) dtau discretized per mode
// with the forcing taken piecewise linear in time and integrated exactly
// against the kernel:
//   w_{m+1} = phi0 w_m + dt [(phi1 - phi2) f_m + phi2 f_{m+1}].
// w(0) = 0; the forcing is stored on the result so dt w evaluates through
// the equation. Requires M >= 2 nodes of forcing.
template <class FieldT>
Trajectory<FieldT> duhamel(Trajectory<FieldT> forcing, double alpha);

// (||dt w||_{L2(0,T;Hdot^s)} + ||w||_{L2(0,T;Hdot^{s+2alpha})}) / ||f||_{L2(0,T;Hdot^s)}
// for w = duhamel(f). Spectral calculus bounds it by 3 uniformly in T.
// Throws on zero forcing.
template <class FieldT>
double max_regularity_ratio(const Trajectory<FieldT>& forcing, double alpha,
                            double s);

// Integral characterization of ||a||_{Hdot^{s+alpha}}^2 via the semigroup:
// returns 2 int_0^inf ||(-Lap)^alpha e^{-t(-Lap)^alpha} a||_{Hdot^s}^2 dt,
// evaluated per mode in closed form. With the prefactor 2 this equals
// hdot_norm(a, s+alpha)^2; the raw integral is also exposed for the
// prefactor regression test.
double char_integral(const ScalarField& a, double alpha, double s);
double char_integral_raw(const ScalarField& a, double alpha, double s);

// Heat-flow snapshots of initial data a on [0,T] with M steps; forcing 0.
ScalarTrajectory free_solution(const ScalarField& a, double alpha, double T,
                               int M);
VectorTrajectory free_solution(const VectorField& a, double alpha, double T,
                               int M);

// sup_t ||a_L||_{Hdot^{s+alpha}} + ||a_L||_{L2(0,inf;Hdot^{s+2alpha})}
// + ||dt a_L||_{L2(0,inf;Hdot^s)} with the infinite-time integrals done per
// mode in closed form (never truncated quadrature). Equals
// (1 + sqrt(2)) ||a||_{Hdot^{s+alpha}} identically; bounded by 3 ||a||.
struct FreeSolutionFunctional {
  double sup_term;
  double l2_high_term;
  double l2_dt_term;
  double total;
};
FreeSolutionFunctional free_solution_functional(const ScalarField& a,
                                                double alpha, double s);
FreeSolutionFunctional free_solution_functional(const VectorField& a,
                                                double alpha, double s);

}  // namespace fbs
