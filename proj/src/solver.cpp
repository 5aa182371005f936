#include "fbs/solver.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fbs/advection.hpp"
#include "fbs/errors.hpp"
#include "fbs/projection.hpp"
#include "fbs/random_field.hpp"

namespace fbs {

std::string to_string(SolverMode mode) {
  return mode == SolverMode::FiniteHorizon ? "finite_horizon"
                                           : "global_scaling";
}

SolverConfig::SolverConfig() : L(2.0 * std::numbers::pi) {}

void SolverConfig::validate() const {
  if (n < 3)
    throw PreconditionError(
        "SolverConfig: the solver needs n >= 3 (n = 2 grids are for unit "
        "tests of the spectral layer only)");
  if (N < 4 || N % 2 != 0)
    throw PreconditionError("SolverConfig: N must be even and >= 4");
  if (!(L > 0.0)) throw PreconditionError("SolverConfig: L must be positive");
  if (!(T > 0.0)) throw PreconditionError("SolverConfig: T must be positive");
  if (M < 2) throw PreconditionError("SolverConfig: M must be >= 2");
  if (!(picard_tol > 0.0))
    throw PreconditionError("SolverConfig: picard_tol must be positive");
  if (picard_max_iters < 1)
    throw PreconditionError("SolverConfig: picard_max_iters must be >= 1");
  if (mode == SolverMode::FiniteHorizon) {
    if (!(alpha > 0.5 && alpha < (2.0 + n) / 4.0)) {
      std::ostringstream os;
      os << "SolverConfig: FiniteHorizon requires 1/2 < alpha < (2+n)/4; got "
            "alpha = "
         << alpha << " with (2+n)/4 = " << (2.0 + n) / 4.0;
      throw PreconditionError(os.str());
    }
  } else {
    if (!(alpha > 0.5 && alpha < 1.0 / 3.0 + n / 6.0)) {
      std::ostringstream os;
      os << "SolverConfig: GlobalScaling requires 1/2 < alpha < 1/3 + n/6; "
            "got alpha = "
         << alpha << " with 1/3 + n/6 = " << 1.0 / 3.0 + n / 6.0;
      throw PreconditionError(os.str());
    }
  }
}

NormTriple SolverConfig::x_indices() const {
  const double s = s0();
  return {s, s + alpha, s - alpha};
}

NormTriple SolverConfig::y_indices() const {
  const double s = s0();
  if (mode == SolverMode::FiniteHorizon)
    return {s - alpha, s, s - 2.0 * alpha};
  return {s - 2.0 * alpha, s - alpha, s - 3.0 * alpha};
}

double SolverConfig::theta_data_index() const { return y_indices().peak; }

double SolverConfig::theta_weight(double k1) const {
  return mode == SolverMode::FiniteHorizon ? 2.0 * k1 * std::sqrt(T)
                                           : 2.0 * k1;
}

GridPtr SolverConfig::make_solver_grid() const { return make_grid(n, N, L); }

namespace {

void check_initial_data(const VectorField& u0, const ScalarField& theta0,
                        const SolverConfig& cfg) {
  GridPtr grid = cfg.make_solver_grid();
  require_same_grid(*u0.grid(), *grid, "picard_solve");
  require_same_grid(*theta0.grid, *grid, "picard_solve");
  if (!u0.solenoidal || u0.divergence_ratio() > 1e-10)
    throw PreconditionError("initial velocity must be solenoidal");
  const double u_scale = u0.max_abs();
  for (const auto& c : u0.comp)
    if (std::abs(c.zero_mode()) > 1e-13 * std::max(u_scale, 1e-300))
      throw PreconditionError("initial velocity must be mean-free");
  if (std::abs(theta0.zero_mode()) >
      1e-13 * std::max(theta0.max_abs(), 1e-300))
    throw PreconditionError("initial temperature must be mean-free");
}

void check_indices(const std::optional<NormTriple>& tagged,
                   const NormTriple& expected, const char* what) {
  if (tagged && !(*tagged == expected))
    throw PreconditionError(std::string(what) +
                            ": trajectory carries a different norm index "
                            "triple than the config demands");
}

// P and Q of the same field from one per-mode quotient.
void helmholtz_split(const VectorField& f, VectorField& p, VectorField& q) {
  q = gradient_part(f);
  p = f;
  p -= q;
  p.set_real_valued(f.real_valued());
  p.solenoidal = true;
}

// out = phi0 .* x + c * phi1 .* y, the exponential-Euler predictor.
void etd_predict(const PhiWeights& w, const ScalarField& x, double c,
                 const ScalarField& y, ScalarField& out) {
  for (std::size_t i = 0; i < x.coeffs.size(); ++i)
    out.coeffs[i] = w.phi0[i] * x.coeffs[i] + c * w.phi1[i] * y.coeffs[i];
  out.real_valued = x.real_valued && y.real_valued;
}

// out = a + c * phi2 .* (y1 - y0), the ETD2RK corrector.
void etd_correct(const PhiWeights& w, const ScalarField& a, double c,
                 const ScalarField& y0, const ScalarField& y1,
                 ScalarField& out) {
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    out.coeffs[i] = a.coeffs[i] + c * w.phi2[i] * (y1.coeffs[i] - y0.coeffs[i]);
  out.real_valued = a.real_valued && y0.real_valued && y1.real_valued;
}

void etd_predict(const PhiWeights& w, const VectorField& x, double c,
                 const VectorField& y, VectorField& out) {
  for (std::size_t d = 0; d < x.comp.size(); ++d)
    etd_predict(w, x.comp[d], c, y.comp[d], out.comp[d]);
  out.solenoidal = x.solenoidal && y.solenoidal;
}

void etd_correct(const PhiWeights& w, const VectorField& a, double c,
                 const VectorField& y0, const VectorField& y1,
                 VectorField& out) {
  for (std::size_t d = 0; d < a.comp.size(); ++d)
    etd_correct(w, a.comp[d], c, y0.comp[d], y1.comp[d], out.comp[d]);
  out.solenoidal = a.solenoidal && y0.solenoidal && y1.solenoidal;
}

struct NodeForcing {
  VectorField momentum;     // P(theta e_n - u.grad u)
  ScalarField temperature;  // -u.grad theta
  VectorField pressure;     // Q(theta e_n - u.grad u)
};

NodeForcing coupled_forcing(const VectorField& u, const ScalarField& theta) {
  const int axis = u.grid()->dim() - 1;
  AdvectionPair pair = advect_pair(u, u, theta);
  VectorField f = embed_along_axis(theta, axis);
  f -= pair.momentum;
  NodeForcing out{VectorField(u.grid(), true), ScalarField(u.grid(), true),
                  VectorField(u.grid(), true)};
  helmholtz_split(f, out.momentum, out.pressure);
  out.temperature = pair.temperature;
  out.temperature *= -1.0;
  return out;
}

}  // namespace

double xt_norm(const VectorTrajectory& u, const SolverConfig& cfg) {
  check_indices(u.indices, cfg.x_indices(), "xt_norm");
  return space_time_norm(u, cfg.x_indices());
}

double yt_norm(const ScalarTrajectory& theta, const SolverConfig& cfg) {
  check_indices(theta.indices, cfg.y_indices(), "yt_norm");
  return space_time_norm(theta, cfg.y_indices());
}

VectorTrajectory map_L(const ScalarTrajectory& theta, const SolverConfig& cfg) {
  const int axis = cfg.n - 1;
  VectorTrajectory forcing;
  forcing.horizon = theta.horizon;
  forcing.alpha = cfg.alpha;
  forcing.states.clear();
  forcing.forcing.reserve(theta.states.size());
  for (const auto& th : theta.states)
    forcing.forcing.push_back(leray_project(embed_along_axis(th, axis)));
  forcing.states.resize(theta.states.size(),
                        VectorField::zero(theta.states[0].grid));
  VectorTrajectory out = duhamel(std::move(forcing), cfg.alpha);
  out.indices = cfg.x_indices();
  return out;
}

VectorTrajectory map_Phi(const VectorTrajectory& u, const VectorTrajectory& v,
                         const SolverConfig& cfg) {
  if (u.states.size() != v.states.size() || u.horizon != v.horizon)
    throw PreconditionError("map_Phi: time grid mismatch");
  for (const auto& um : u.states)
    if (!um.solenoidal)
      throw PreconditionError("map_Phi: u must be solenoidal at every node");
  VectorTrajectory forcing;
  forcing.horizon = u.horizon;
  forcing.alpha = cfg.alpha;
  forcing.forcing.reserve(u.states.size());
  for (std::size_t m = 0; m < u.states.size(); ++m) {
    VectorField nl = leray_project(advect_vec(u.states[m], v.states[m]));
    nl *= -1.0;
    forcing.forcing.push_back(std::move(nl));
  }
  forcing.states.resize(u.states.size(), VectorField::zero(u.states[0].grid()));
  VectorTrajectory out = duhamel(std::move(forcing), cfg.alpha);
  out.indices = cfg.x_indices();
  return out;
}

ScalarTrajectory map_Psi(const VectorTrajectory& u,
                         const ScalarTrajectory& theta,
                         const SolverConfig& cfg) {
  if (u.states.size() != theta.states.size() || u.horizon != theta.horizon)
    throw PreconditionError("map_Psi: time grid mismatch");
  ScalarTrajectory forcing;
  forcing.horizon = u.horizon;
  forcing.alpha = cfg.alpha;
  forcing.forcing.reserve(u.states.size());
  for (std::size_t m = 0; m < u.states.size(); ++m) {
    ScalarField nl = advect(u.states[m], theta.states[m]);
    nl *= -1.0;
    forcing.forcing.push_back(std::move(nl));
  }
  forcing.states.resize(theta.states.size(),
                        ScalarField::zero(theta.states[0].grid));
  ScalarTrajectory out = duhamel(std::move(forcing), cfg.alpha);
  out.indices = cfg.y_indices();
  return out;
}

std::pair<BoussinesqState, FixedPointReport> picard_solve(
    const VectorField& u0, const ScalarField& theta0, const SolverConfig& cfg,
    const MapConstants& constants) {
  cfg.validate();
  check_initial_data(u0, theta0, cfg);

  const NormTriple xi = cfg.x_indices();
  const NormTriple yi = cfg.y_indices();
  const double w_theta = cfg.theta_weight(constants.k1);
  const double ksum = constants.k2 + constants.k3;

  FixedPointReport report;
  report.constants = constants;
  report.u0_norm = hdot_norm(u0, cfg.s0());
  report.theta0_norm = hdot_norm(theta0, cfg.theta_data_index());

  VectorTrajectory u_L = free_solution(u0, cfg.alpha, cfg.T, cfg.M);
  u_L.indices = xi;
  ScalarTrajectory theta_L = free_solution(theta0, cfg.alpha, cfg.T, cfg.M);
  theta_L.indices = yi;

  report.K0 = space_time_norm(u_L, xi) + w_theta * space_time_norm(theta_L, yi);
  const double disc = 1.0 - 16.0 * report.K0 * ksum;
  if (disc >= 0.0) {
    report.lambda1 = ksum > 0.0
                         ? (1.0 - std::sqrt(disc)) / (4.0 * ksum)
                         : 2.0 * report.K0;  // linear root when k2+k3 = 0
    report.threshold_status = "ok";
  } else if (disc > -1e-10) {
    report.threshold_status = "inconclusive";
  } else {
    report.threshold_status = "exceeded";
  }

  VectorTrajectory u_cur = u_L;
  ScalarTrajectory theta_cur = theta_L;
  const std::size_t nodes = u_L.states.size();
  const double guard_scale = std::max(report.K0, 1.0);

  for (int iter = 1; iter <= cfg.picard_max_iters; ++iter) {
    VectorTrajectory g;
    g.horizon = cfg.T;
    g.alpha = cfg.alpha;
    ScalarTrajectory h;
    h.horizon = cfg.T;
    h.alpha = cfg.alpha;
    g.forcing.reserve(nodes);
    h.forcing.reserve(nodes);
    for (std::size_t m = 0; m < nodes; ++m) {
      NodeForcing f = coupled_forcing(u_cur.states[m], theta_cur.states[m]);
      g.forcing.push_back(std::move(f.momentum));
      h.forcing.push_back(std::move(f.temperature));
    }
    g.states.resize(nodes, VectorField::zero(u0.grid()));
    h.states.resize(nodes, ScalarField::zero(theta0.grid));

    VectorTrajectory u_next = trajectory_sum(u_L, duhamel(std::move(g), cfg.alpha));
    u_next.indices = xi;
    ScalarTrajectory theta_next =
        trajectory_sum(theta_L, duhamel(std::move(h), cfg.alpha));
    theta_next.indices = yi;

    const double du = space_time_norm(trajectory_difference(u_next, u_cur), xi);
    const double dth =
        space_time_norm(trajectory_difference(theta_next, theta_cur), yi);
    const double dist = du + w_theta * dth;

    report.iterations = iter;
    if (!std::isfinite(dist) || dist > 1e8 * guard_scale) {
      report.diverged = true;
      report.distances.push_back(dist);
      u_cur = std::move(u_next);
      theta_cur = std::move(theta_next);
      break;
    }
    if (!report.distances.empty() && report.distances.back() > 0.0)
      report.contraction_factors.push_back(dist / report.distances.back());
    report.distances.push_back(dist);

    u_cur = std::move(u_next);
    theta_cur = std::move(theta_next);
    if (dist < cfg.picard_tol) {
      report.converged = true;
      break;
    }
  }

  // Finishing pass: mild residual, momentum residual and pressure recovery
  // share one sweep of nonlinearity evaluations over the final iterate.
  BoussinesqState state{std::move(u_cur), std::move(theta_cur), {}};
  state.grad_pi.horizon = cfg.T;
  state.grad_pi.alpha = cfg.alpha;
  state.grad_pi.states.reserve(nodes);

  if (!report.diverged) {
    VectorTrajectory g_star;
    g_star.horizon = cfg.T;
    g_star.alpha = cfg.alpha;
    ScalarTrajectory h_star;
    h_star.horizon = cfg.T;
    h_star.alpha = cfg.alpha;
    double mom_res = 0.0;
    const int axis = cfg.n - 1;
    for (std::size_t m = 0; m < nodes; ++m) {
      NodeForcing f = coupled_forcing(state.u.states[m], state.theta.states[m]);
      // dt u + A u + u.grad u + grad pi - theta e_n, dt through the equation
      VectorField residual =
          state.u.time_derivative(static_cast<int>(m));
      residual += lambda_power(state.u.states[m], 2.0 * cfg.alpha);
      residual += advect_vec(state.u.states[m], state.u.states[m]);
      residual += f.pressure;
      residual -= embed_along_axis(state.theta.states[m], axis);
      mom_res = std::max(mom_res, hdot_norm(residual, cfg.s0() - cfg.alpha));
      state.grad_pi.states.push_back(std::move(f.pressure));
      g_star.forcing.push_back(std::move(f.momentum));
      h_star.forcing.push_back(std::move(f.temperature));
    }
    report.momentum_residual = mom_res;
    g_star.states.resize(nodes, VectorField::zero(u0.grid()));
    h_star.states.resize(nodes, ScalarField::zero(theta0.grid));
    VectorTrajectory u_fix =
        trajectory_sum(u_L, duhamel(std::move(g_star), cfg.alpha));
    ScalarTrajectory theta_fix =
        trajectory_sum(theta_L, duhamel(std::move(h_star), cfg.alpha));
    const double res_u =
        space_time_norm(trajectory_difference(u_fix, state.u), xi);
    const double res_th =
        space_time_norm(trajectory_difference(theta_fix, state.theta), yi);
    report.residual = res_u + w_theta * res_th;

    report.final_u_norm = space_time_norm(state.u, xi);
    report.final_theta_norm = space_time_norm(state.theta, yi);
    const double data_norm = report.u0_norm + w_theta * report.theta0_norm;
    report.bound_check =
        data_norm > 0.0
            ? (report.final_u_norm + w_theta * report.final_theta_norm) /
                  (12.0 * data_norm)
            : 0.0;
  }

  return {std::move(state), std::move(report)};
}

BoussinesqState etd_march(const VectorField& u0, const ScalarField& theta0,
                          const SolverConfig& cfg) {
  cfg.validate();
  check_initial_data(u0, theta0, cfg);
  GridPtr grid = u0.grid();
  const double dt = cfg.T / cfg.M;
  const PhiWeights w = PhiWeights::build(*grid, dt, cfg.alpha);

  BoussinesqState state;
  state.u.horizon = cfg.T;
  state.u.alpha = cfg.alpha;
  state.u.indices = cfg.x_indices();
  state.theta.horizon = cfg.T;
  state.theta.alpha = cfg.alpha;
  state.theta.indices = cfg.y_indices();
  state.grad_pi.horizon = cfg.T;
  state.grad_pi.alpha = cfg.alpha;

  state.u.states.reserve(static_cast<std::size_t>(cfg.M) + 1);
  state.u.forcing.reserve(static_cast<std::size_t>(cfg.M) + 1);
  state.theta.states.reserve(static_cast<std::size_t>(cfg.M) + 1);
  state.theta.forcing.reserve(static_cast<std::size_t>(cfg.M) + 1);
  state.grad_pi.states.reserve(static_cast<std::size_t>(cfg.M) + 1);
  state.u.states.push_back(u0);
  state.theta.states.push_back(theta0);

  const double initial_norm =
      hdot_norm(u0, cfg.s0()) + hdot_norm(theta0, cfg.theta_data_index());
  const double guard = 1e6 * std::max(initial_norm, 1e-300);

  for (int m = 0; m < cfg.M; ++m) {
    const VectorField& um = state.u.states.back();
    const ScalarField& thm = state.theta.states.back();
    NodeForcing fm = coupled_forcing(um, thm);

    VectorField au(grid, true);
    ScalarField ath(grid, true);
    etd_predict(w, um, dt, fm.momentum, au);
    etd_predict(w, thm, dt, fm.temperature, ath);

    NodeForcing fa = coupled_forcing(au, ath);
    VectorField u_next(grid, true);
    ScalarField th_next(grid, true);
    etd_correct(w, au, dt, fm.momentum, fa.momentum, u_next);
    etd_correct(w, ath, dt, fm.temperature, fa.temperature, th_next);

    state.u.forcing.push_back(std::move(fm.momentum));
    state.theta.forcing.push_back(std::move(fm.temperature));
    state.grad_pi.states.push_back(std::move(fm.pressure));

    const double norm_now = hdot_norm(u_next, cfg.s0()) +
                            hdot_norm(th_next, cfg.theta_data_index());
    if (!std::isfinite(norm_now) || norm_now > guard) {
      std::ostringstream os;
      os << "etd_march: blow-up detected at t = " << dt * (m + 1)
         << " (norm " << norm_now << " exceeds 1e6 x initial " << initial_norm
         << ")";
      throw BlowUpError(os.str(), dt * (m + 1), norm_now);
    }
    state.u.states.push_back(std::move(u_next));
    state.theta.states.push_back(std::move(th_next));
  }

  // trailing node: forcing and pressure from the final state
  NodeForcing fM =
      coupled_forcing(state.u.states.back(), state.theta.states.back());
  state.u.forcing.push_back(std::move(fM.momentum));
  state.theta.forcing.push_back(std::move(fM.temperature));
  state.grad_pi.states.push_back(std::move(fM.pressure));
  return state;
}

std::pair<BoussinesqState, double> etd_march_with_richardson(
    const VectorField& u0, const ScalarField& theta0, const SolverConfig& cfg) {
  BoussinesqState coarse = etd_march(u0, theta0, cfg);
  SolverConfig fine_cfg = cfg;
  fine_cfg.M = 2 * cfg.M;
  BoussinesqState fine = etd_march(u0, theta0, fine_cfg);
  double err = 0.0;
  for (int m = 0; m <= cfg.M; ++m) {
    VectorField du = coarse.u.states[static_cast<std::size_t>(m)];
    du -= fine.u.states[static_cast<std::size_t>(2 * m)];
    ScalarField dth = coarse.theta.states[static_cast<std::size_t>(m)];
    dth -= fine.theta.states[static_cast<std::size_t>(2 * m)];
    err = std::max(err, hdot_norm(du, cfg.s0()) +
                            hdot_norm(dth, cfg.theta_data_index()));
  }
  return {std::move(coarse), err / 3.0};
}

namespace {

SpectrumSpec constants_band(const SpectralGrid& grid, std::uint64_t seed,
                            double norm_index) {
  const double xi = grid.xi_unit();
  const int cap = std::min(grid.dealias_limit(), 5);
  const int which = static_cast<int>(seed % 3);
  double lo = 1.0, hi = 3.0, center = 2.0, width = 1.0;
  if (which == 1) {
    lo = 2.0;
    hi = cap;
    center = 0.5 * (lo + hi);
  } else if (which == 2) {
    lo = 1.0;
    hi = cap;
    center = 2.5;
    width = 2.0;
  }
  return SpectrumSpec::gaussian(lo * xi, hi * xi, center * xi, width * xi,
                                NormSpec::hdot(norm_index), 1.0);
}

// Corpus trajectories alternate free decay with Duhamel responses to
// piecewise-linear random forcing, which is the family the fixed-point
// iterates live in.
ScalarTrajectory corpus_scalar_trajectory(GridPtr grid,
                                          const SolverConfig& cfg, int M,
                                          std::uint64_t seed) {
  const NormTriple yi = cfg.y_indices();
  if (seed % 2 == 0) {
    ScalarField a =
        random_field(grid, constants_band(*grid, seed, yi.peak), seed);
    ScalarTrajectory out = free_solution(a, cfg.alpha, cfg.T, M);
    out.indices = yi;
    return out;
  }
  ScalarField base =
      random_field(grid, constants_band(*grid, seed, yi.peak), seed);
  ScalarTrajectory forcing;
  forcing.horizon = cfg.T;
  forcing.alpha = cfg.alpha;
  forcing.forcing.reserve(static_cast<std::size_t>(M) + 1);
  for (int m = 0; m <= M; ++m) {
    std::uint64_t stream = seed_stream(seed, 1000 + static_cast<std::uint64_t>(m));
    ScalarField node = base;
    node *= 2.0 * uniform01(stream) - 1.0;
    forcing.forcing.push_back(std::move(node));
  }
  forcing.states.resize(static_cast<std::size_t>(M) + 1,
                        ScalarField::zero(grid));
  ScalarTrajectory out = duhamel(std::move(forcing), cfg.alpha);
  out.indices = yi;
  return out;
}

VectorTrajectory corpus_vector_trajectory(GridPtr grid,
                                          const SolverConfig& cfg, int M,
                                          std::uint64_t seed) {
  const NormTriple xi = cfg.x_indices();
  if (seed % 2 == 0) {
    VectorField a =
        random_solenoidal(grid, constants_band(*grid, seed, xi.peak), seed);
    VectorTrajectory out = free_solution(a, cfg.alpha, cfg.T, M);
    out.indices = xi;
    return out;
  }
  VectorField base =
      random_solenoidal(grid, constants_band(*grid, seed, xi.peak), seed);
  VectorTrajectory forcing;
  forcing.horizon = cfg.T;
  forcing.alpha = cfg.alpha;
  forcing.forcing.reserve(static_cast<std::size_t>(M) + 1);
  for (int m = 0; m <= M; ++m) {
    std::uint64_t stream = seed_stream(seed, 2000 + static_cast<std::uint64_t>(m));
    VectorField node = base;
    node *= 2.0 * uniform01(stream) - 1.0;
    forcing.forcing.push_back(std::move(node));
  }
  forcing.states.resize(static_cast<std::size_t>(M) + 1,
                        VectorField::zero(grid));
  VectorTrajectory out = duhamel(std::move(forcing), cfg.alpha);
  out.indices = xi;
  return out;
}

}  // namespace

MapConstants estimate_constants(const SolverConfig& cfg,
                                const ConstantsCorpusSpec& corpus) {
  cfg.validate();
  if (corpus.seeds.empty())
    throw PreconditionError("estimate_constants: empty corpus");
  GridPtr grid = cfg.make_solver_grid();
  SolverConfig scfg = cfg;
  scfg.M = corpus.M;

  const NormTriple xi = cfg.x_indices();
  const NormTriple yi = cfg.y_indices();
  MapConstants k;
  bool any = false;

  for (std::uint64_t seed : corpus.seeds) {
    ScalarTrajectory theta =
        corpus_scalar_trajectory(grid, scfg, corpus.M, seed);
    VectorTrajectory u =
        corpus_vector_trajectory(grid, scfg, corpus.M, seed_stream(seed, 7));
    VectorTrajectory v =
        corpus_vector_trajectory(grid, scfg, corpus.M, seed_stream(seed, 8));

    const double theta_y = space_time_norm(theta, yi);
    const double u_x = space_time_norm(u, xi);
    const double v_x = space_time_norm(v, xi);

    double theta_peak = 0.0;
    for (const auto& th : theta.states)
      theta_peak = std::max(theta_peak, hdot_norm(th, cfg.s0() - cfg.alpha));

    const double denom_l = cfg.mode == SolverMode::FiniteHorizon
                               ? std::sqrt(cfg.T) * theta_peak
                               : theta_y;
    if (denom_l > kConstantsRhsFloor) {
      k.k1 = std::max(k.k1, space_time_norm(map_L(theta, scfg), xi) / denom_l);
      any = true;
    }
    if (u_x * v_x > kConstantsRhsFloor) {
      k.k2 = std::max(
          k.k2, space_time_norm(map_Phi(u, v, scfg), xi) / (u_x * v_x));
      any = true;
    }
    if (u_x * theta_y > kConstantsRhsFloor) {
      k.k3 = std::max(k.k3, space_time_norm(map_Psi(u, theta, scfg), yi) /
                                (u_x * theta_y));
      any = true;
    }
  }
  if (!any || k.k1 <= 0.0 || k.k2 <= 0.0 || k.k3 <= 0.0)
    throw PreconditionError(
        "estimate_constants: degenerate corpus (all right-hand sides "
        "vanished)");
  return k;
}

VectorTrajectory recover_pressure(const BoussinesqState& state,
                                  const SolverConfig& cfg) {
  const int axis = cfg.n - 1;
  VectorTrajectory out;
  out.horizon = state.u.horizon;
  out.alpha = cfg.alpha;
  out.states.reserve(state.u.states.size());
  for (std::size_t m = 0; m < state.u.states.size(); ++m) {
    VectorField f = embed_along_axis(state.theta.states[m], axis);
    f -= advect_vec(state.u.states[m], state.u.states[m]);
    out.states.push_back(gradient_part(f));
  }
  return out;
}

double momentum_residual(const BoussinesqState& state,
                         const SolverConfig& cfg) {
  const int axis = cfg.n - 1;
  double res = 0.0;
  for (std::size_t m = 0; m < state.u.states.size(); ++m) {
    VectorField r = state.u.time_derivative(static_cast<int>(m));
    r += lambda_power(state.u.states[m], 2.0 * cfg.alpha);
    r += advect_vec(state.u.states[m], state.u.states[m]);
    r += state.grad_pi.states[m];
    r -= embed_along_axis(state.theta.states[m], axis);
    res = std::max(res, hdot_norm(r, cfg.s0() - cfg.alpha));
  }
  return res;
}

namespace {

// ||u - (u_L + L + Phi)||_{xi-triple} + w ||theta - (theta_L + Psi)||_{yi-triple}.
double mild_residual_impl(const VectorTrajectory& u,
                          const ScalarTrajectory& theta,
                          const SolverConfig& cfg, double w_theta,
                          const NormTriple& xi, const NormTriple& yi) {
  const std::size_t nodes = u.states.size();
  const int M = static_cast<int>(nodes) - 1;

  VectorTrajectory u_L = free_solution(u.states[0], cfg.alpha, u.horizon, M);
  ScalarTrajectory theta_L =
      free_solution(theta.states[0], cfg.alpha, u.horizon, M);

  VectorTrajectory g;
  g.horizon = u.horizon;
  g.alpha = cfg.alpha;
  ScalarTrajectory h;
  h.horizon = u.horizon;
  h.alpha = cfg.alpha;
  for (std::size_t m = 0; m < nodes; ++m) {
    NodeForcing f = coupled_forcing(u.states[m], theta.states[m]);
    g.forcing.push_back(std::move(f.momentum));
    h.forcing.push_back(std::move(f.temperature));
  }
  g.states.resize(nodes, VectorField::zero(u.states[0].grid()));
  h.states.resize(nodes, ScalarField::zero(theta.states[0].grid));

  VectorTrajectory u_fix = trajectory_sum(u_L, duhamel(std::move(g), cfg.alpha));
  ScalarTrajectory theta_fix =
      trajectory_sum(theta_L, duhamel(std::move(h), cfg.alpha));
  const double res_u = space_time_norm(trajectory_difference(u_fix, u), xi);
  const double res_th =
      space_time_norm(trajectory_difference(theta_fix, theta), yi);
  return res_u + w_theta * res_th;
}

void rebind_and_scale(ScalarField& f, GridPtr grid, double factor) {
  f.grid = grid;
  f *= factor;
}

void rebind_and_scale(VectorField& u, GridPtr grid, double factor) {
  for (auto& c : u.comp) rebind_and_scale(c, grid, factor);
}

template <class FieldT>
void scale_trajectory(Trajectory<FieldT>& traj, double state_factor,
                      double forcing_factor, GridPtr new_grid, double new_T) {
  traj.horizon = new_T;
  for (auto& s : traj.states) rebind_and_scale(s, new_grid, state_factor);
  for (auto& f : traj.forcing) rebind_and_scale(f, new_grid, forcing_factor);
}

// Scale-invariant residual functional: X at (s0, +-alpha) for u and the
// critical couple triple (s0-2a, s0-a, s0-3a) for theta, unweighted sum.
double scaling_residual(const BoussinesqState& state, const SolverConfig& cfg) {
  const double s0 = cfg.s0();
  const double a = cfg.alpha;
  const NormTriple xi{s0, s0 + a, s0 - a};
  const NormTriple yi{s0 - 2.0 * a, s0 - a, s0 - 3.0 * a};
  return mild_residual_impl(state.u, state.theta, cfg, 1.0, xi, yi);
}

}  // namespace

double mild_residual(const BoussinesqState& state, const SolverConfig& cfg,
                     double k1) {
  return mild_residual_impl(state.u, state.theta, cfg, cfg.theta_weight(k1),
                            cfg.x_indices(), cfg.y_indices());
}

ScalingReport scaling_check(const BoussinesqState& state, double lambda,
                            const SolverConfig& cfg) {
  if (lambda != 1.0 && lambda != 2.0 && lambda != 4.0)
    throw PreconditionError(
        "scaling_check: lambda must be 1, 2 or 4 (grid-compatible powers)");
  ScalingReport rep;
  rep.lambda = lambda;

  const double s0 = cfg.s0();
  const double a = cfg.alpha;
  const VectorField& u0 = state.u.states[0];
  const ScalarField& th0 = state.theta.states[0];

  rep.u_norm_before = hdot_norm(u0, s0);
  rep.theta_norm_before = hdot_norm(th0, s0 - 2.0 * a);
  rep.residual_before = scaling_residual(state, cfg);

  GridPtr new_grid = make_grid(cfg.n, cfg.N, cfg.L / lambda);
  const double fu = std::pow(lambda, 2.0 * a - 1.0);
  const double fth = std::pow(lambda, 4.0 * a - 1.0);
  const double fg = std::pow(lambda, 4.0 * a - 1.0);
  const double fh = std::pow(lambda, 6.0 * a - 1.0);
  const double new_T = cfg.T / std::pow(lambda, 2.0 * a);

  BoussinesqState scaled{state.u, state.theta, state.grad_pi};
  scale_trajectory(scaled.u, fu, fg, new_grid, new_T);
  scale_trajectory(scaled.theta, fth, fh, new_grid, new_T);
  scale_trajectory(scaled.grad_pi, fg, fg, new_grid, new_T);

  SolverConfig new_cfg = cfg;
  new_cfg.L = cfg.L / lambda;
  new_cfg.T = new_T;

  const VectorField& su0 = scaled.u.states[0];
  const ScalarField& sth0 = scaled.theta.states[0];
  rep.u_norm_after = hdot_norm(su0, s0);
  rep.theta_norm_after = hdot_norm(sth0, s0 - 2.0 * a);
  rep.u_invariance_error =
      rep.u_norm_before > 0.0
          ? std::abs(rep.u_norm_after - rep.u_norm_before) / rep.u_norm_before
          : 0.0;
  rep.theta_invariance_error =
      rep.theta_norm_before > 0.0
          ? std::abs(rep.theta_norm_after - rep.theta_norm_before) /
                rep.theta_norm_before
          : 0.0;

  const double nc_before = hdot_norm(u0, s0 + 0.5);
  const double nc_after = hdot_norm(su0, s0 + 0.5);
  rep.noncritical_factor = nc_before > 0.0 ? nc_after / nc_before : 0.0;
  rep.noncritical_expected = std::sqrt(lambda);

  rep.residual_after = scaling_residual(scaled, new_cfg);
  rep.residual_ratio = rep.residual_before > 0.0
                           ? rep.residual_after / rep.residual_before
                           : (rep.residual_after == 0.0 ? 1.0 : HUGE_VAL);
  return rep;
}

UniquenessReport uniqueness_probe(const BoussinesqState& a,
                                  const BoussinesqState& b,
                                  const SolverConfig& cfg,
                                  const MapConstants& constants, double eps,
                                  double c_interp, double budget) {
  cfg.validate();
  if (!(eps >= 0.0 && eps < std::min(2.0 * cfg.alpha - 1.0, cfg.alpha)))
    throw PreconditionError(
        "uniqueness_probe: eps must satisfy 0 <= eps < min(2 alpha - 1, alpha)");
  if (!(budget > 0.0))
    throw PreconditionError("uniqueness_probe: budget must be positive");
  if (a.u.states.size() != b.u.states.size() || a.u.horizon != b.u.horizon)
    throw PreconditionError("uniqueness_probe: incompatible time grids");
  if (relative_l2_error(a.u.states[0], b.u.states[0]) > 1e-10 ||
      relative_l2_error(a.theta.states[0], b.theta.states[0]) > 1e-10)
    throw PreconditionError("uniqueness_probe: states from different data");

  const NormTriple xi = cfg.x_indices();
  const NormTriple yi = cfg.y_indices();
  const double s0 = cfg.s0();
  const int M = a.u.steps();
  const double dt = a.u.dt();

  VectorTrajectory du = trajectory_difference(a.u, b.u);
  du.indices = xi;
  ScalarTrajectory dth = trajectory_difference(a.theta, b.theta);
  dth.indices = yi;

  const double u1_x = space_time_norm(a.u, xi);
  const double r = eps / cfg.alpha;

  UniquenessReport rep;
  rep.budget = budget;
  rep.coefficient.assign(static_cast<std::size_t>(M) + 1, 0.0);
  rep.u2_tail_sq.assign(static_cast<std::size_t>(M) + 1, 0.0);

  double u2_sq = 0.0, th2_sq = 0.0, u1_sq = 0.0;
  double g_u2_prev = hdot_norm_sq(b.u.states[0], s0 + cfg.alpha);
  double g_th2_prev = hdot_norm_sq(b.theta.states[0], s0);
  double g_u1_prev = hdot_norm_sq(a.u.states[0], s0 + cfg.alpha);
  int window_m = 0;
  bool window_open = true;
  for (int m = 1; m <= M; ++m) {
    const double g_u2 = hdot_norm_sq(b.u.states[static_cast<std::size_t>(m)],
                                     s0 + cfg.alpha);
    const double g_th2 =
        hdot_norm_sq(b.theta.states[static_cast<std::size_t>(m)], s0);
    const double g_u1 = hdot_norm_sq(a.u.states[static_cast<std::size_t>(m)],
                                     s0 + cfg.alpha);
    u2_sq += 0.5 * dt * (g_u2_prev + g_u2);
    th2_sq += 0.5 * dt * (g_th2_prev + g_th2);
    u1_sq += 0.5 * dt * (g_u1_prev + g_u1);
    g_u2_prev = g_u2;
    g_th2_prev = g_th2;
    g_u1_prev = g_u1;

    const double coef = constants.k2 * std::sqrt(u2_sq) +
                        constants.k3 * std::sqrt(th2_sq) +
                        c_interp * std::pow(u1_x, 1.0 - r) *
                            std::pow(std::sqrt(u1_sq), r);
    rep.coefficient[static_cast<std::size_t>(m)] = coef;
    rep.u2_tail_sq[static_cast<std::size_t>(m)] = u2_sq;
    if (window_open && coef <= 0.5)
      window_m = m;
    else
      window_open = false;
  }

  rep.window_nodes = window_m;
  rep.window_t0 = window_m * dt;
  if (window_m >= 1) {
    rep.delta_u = space_time_norm(du, xi, window_m);
    rep.delta_theta = space_time_norm(dth, yi, window_m);
    rep.within_budget =
        rep.delta_u <= 2.0 * budget && rep.delta_theta <= 2.0 * budget;
  }
  return rep;
}

}  // namespace fbs
