#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fbs/field.hpp"
#include "fbs/semigroup.hpp"
#include "fbs/trajectory.hpp"

namespace fbs {

// FiniteHorizon: solutions on [0,T], theta measured in the Y_T indices
//   (s0-alpha, s0, s0-2alpha), data smallness weighted by 2 k1 sqrt(T).
// GlobalScaling: the large-T regime with the scale-critical theta indices
//   (s0-2alpha, s0-alpha, s0-3alpha) and T-independent weight 2 k1.
enum class SolverMode { FiniteHorizon, GlobalScaling };

std::string to_string(SolverMode mode);

// All physical and numerical parameters. mu = nu = kappa = 1 throughout.
struct SolverConfig {
  int n = 3;
  double alpha = 1.0;
  double T = 1.0;
  int N = 32;
  double L;
  int M = 128;
  double picard_tol = 1e-9;
  int picard_max_iters = 40;
  SolverMode mode = SolverMode::FiniteHorizon;

  SolverConfig();

  double s0() const { return 1.0 + 0.5 * n - 2.0 * alpha; }

  // Theorem preconditions: FiniteHorizon needs 1/2 < alpha < (2+n)/4,
  // GlobalScaling needs 1/2 < alpha < 1/3 + n/6; n >= 3 for the solver.
  void validate() const;

  NormTriple x_indices() const;
  NormTriple y_indices() const;
  // Sobolev index of the theta initial data (the Y peak index).
  double theta_data_index() const;
  // Weight of the theta norm in the product metric: 2 k1 sqrt(T) for the
  // finite horizon, 2 k1 in the global-scaling regime.
  double theta_weight(double k1) const;

  GridPtr make_solver_grid() const;
};

// Empirical operator-norm constants of the three Duhamel maps.
struct MapConstants {
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
};

// Corpus samples with a right-hand side below this are skipped (0/0 guard).
inline constexpr double kConstantsRhsFloor = 1e-30;

// Trajectory corpus recipe for estimate_constants.
struct ConstantsCorpusSpec {
  std::vector<std::uint64_t> seeds;  // >= 50 trajectories for production use
  int M = 32;                        // time steps for corpus trajectories
};

struct BoussinesqState {
  VectorTrajectory u;
  ScalarTrajectory theta;
  VectorTrajectory grad_pi;
};

struct FixedPointReport {
  MapConstants constants;
  double K0 = 0.0;
  std::optional<double> lambda1;
  // "ok" | "inconclusive" (discriminant marginally negative, measurement
  // noise) | "exceeded" (smallness condition failed outright).
  std::string threshold_status = "ok";
  std::vector<double> distances;            // successive iterate distances
  std::vector<double> contraction_factors;  // d_{j+1}/d_j
  bool converged = false;
  bool diverged = false;
  int iterations = 0;
  double residual = 0.0;  // weighted mild-equation residual of the output
  double final_u_norm = 0.0;
  double final_theta_norm = 0.0;  // unweighted Y norm
  double bound_check = 0.0;       // (||u|| + w ||theta||) / (12 * data norm)
  double u0_norm = 0.0;
  double theta0_norm = 0.0;
  double momentum_residual = 0.0;  // max-node Hdot^{s0-alpha} residual
};

// X_T / Y_T norm functionals; throws on a trajectory tagged with a
// different index triple.
double xt_norm(const VectorTrajectory& u, const SolverConfig& cfg);
double yt_norm(const ScalarTrajectory& theta, const SolverConfig& cfg);

// L(theta) = int_0^t e^{-(t-tau)A} P(theta e_n) dtau.
VectorTrajectory map_L(const ScalarTrajectory& theta, const SolverConfig& cfg);
// Phi(u,v) = -int_0^t e^{-(t-tau)A} P(u . grad v) dtau.
VectorTrajectory map_Phi(const VectorTrajectory& u, const VectorTrajectory& v,
                         const SolverConfig& cfg);
// Psi(u,theta) = -int_0^t e^{-(t-tau)A} u . grad theta dtau.
ScalarTrajectory map_Psi(const VectorTrajectory& u,
                         const ScalarTrajectory& theta,
                         const SolverConfig& cfg);

// Picard iteration of the mild equations
//   u = u_L + L(theta) + Phi(u,u),  theta = theta_L + Psi(u,theta)
// from (u_L, theta_L), stopping when the weighted X_T x Y_T distance of
// successive iterates drops below picard_tol. Non-convergence and blow-up
// are reported, not thrown. u0 must be solenoidal and mean-free, theta0
// mean-free.
std::pair<BoussinesqState, FixedPointReport> picard_solve(
    const VectorField& u0, const ScalarField& theta0, const SolverConfig& cfg,
    const MapConstants& constants);

// Independent ETD2 time marcher for the same system (nonlinearity refreshed
// each step, predictor-corrector). Throws BlowUpError when the norm exceeds
// 1e6 x initial.
BoussinesqState etd_march(const VectorField& u0, const ScalarField& theta0,
                          const SolverConfig& cfg);

// Runs etd_march at M and 2M and returns the state at M together with the
// step-halving Richardson error estimate max_m (||du||_{s0} + ||dtheta||_y)/3.
std::pair<BoussinesqState, double> etd_march_with_richardson(
    const VectorField& u0, const ScalarField& theta0, const SolverConfig& cfg);

// Operator-norm constants measured as corpus maxima:
//   k1 = max ||L(theta)||_X / (sqrt(T) max_t ||theta||_{s0-alpha})   (FH)
//        max ||L(theta)||_X / ||theta||_Y                            (GS)
//   k2 = max ||Phi(u,v)||_X / (||u||_X ||v||_X)
//   k3 = max ||Psi(u,theta)||_Y / (||u||_X ||theta||_Y).
MapConstants estimate_constants(const SolverConfig& cfg,
                                const ConstantsCorpusSpec& corpus);

// grad pi = Q(theta e_n - u . grad u), node by node.
VectorTrajectory recover_pressure(const BoussinesqState& state,
                                  const SolverConfig& cfg);

// max over nodes of || dt u + A u + u.grad u + grad pi - theta e_n ||_{s0-alpha}.
double momentum_residual(const BoussinesqState& state, const SolverConfig& cfg);

// Weighted mild-equation residual of a state:
//   ||u - (u_L + L(theta) + Phi(u,u))||_X + w ||theta - (theta_L + Psi)||_Y.
double mild_residual(const BoussinesqState& state, const SolverConfig& cfg,
                     double k1);

struct ScalingReport {
  double lambda = 1.0;
  double u_norm_before = 0.0, u_norm_after = 0.0;
  double theta_norm_before = 0.0, theta_norm_after = 0.0;
  double u_invariance_error = 0.0;      // relative, at s0
  double theta_invariance_error = 0.0;  // relative, at s0 - 2 alpha
  double noncritical_factor = 0.0;      // measured at s0 + 1/2
  double noncritical_expected = 0.0;    // lambda^{1/2}
  double residual_before = 0.0;
  double residual_after = 0.0;
  double residual_ratio = 1.0;
};

// Reinterprets the state on the box L/lambda with amplitudes scaled by
// lambda^{2 alpha - 1} (u) and lambda^{4 alpha - 1} (theta) and the time
// grid by lambda^{-2 alpha}, then re-measures criticality and the mild
// residual (in the scale-invariant index triples). lambda must be 1, 2 or 4.
ScalingReport scaling_check(const BoussinesqState& state, double lambda,
                            const SolverConfig& cfg);

struct UniquenessReport {
  double window_t0 = 0.0;   // largest prefix time with coefficient <= 1/2
  int window_nodes = 0;     // nodes inside the window
  double delta_u = 0.0;     // ||delta u||_{X_{t0}}
  double delta_theta = 0.0; // ||delta theta||_{Y_{t0}}
  double budget = 0.0;
  bool within_budget = false;
  std::vector<double> coefficient;       // Groenwall coefficient per node
  std::vector<double> u2_tail_sq;        // ||u2||^2_{L2(0,t_m;s0+alpha)}
};

// Difference estimate of the uniqueness proof on two states from the same
// data: finds the initial window where
//   k2 ||u2||_{L2(0,t;s0+alpha)} + k3 ||theta2||_{L2(0,t;s0)}
//   + c_interp ||u1||_X^{1-eps/alpha} ||u1||_{L2(0,t;s0+alpha)}^{eps/alpha}
// stays <= 1/2 and checks the difference norms against the supplied budget.
UniquenessReport uniqueness_probe(const BoussinesqState& a,
                                  const BoussinesqState& b,
                                  const SolverConfig& cfg,
                                  const MapConstants& constants, double eps,
                                  double c_interp, double budget);

}  // namespace fbs
