#include "fbs/semigroup.hpp"

#include <cmath>
#include <numbers>

#include "fbs/errors.hpp"

namespace fbs {

namespace {

// e^{-t |xi|^{2 alpha}} per mode; zero mode times 1.
void apply_heat(const SpectralGrid& g, const std::vector<Complex>& in,
                std::vector<Complex>& out, double t, double alpha) {
  const double xi2a = std::pow(g.xi_unit(), 2.0 * alpha);
  const auto wp = g.ksq_power(alpha);
  const auto& w = *wp;
  for (std::size_t idx = 0; idx < in.size(); ++idx)
    out[idx] = in[idx] * std::exp(-t * xi2a * w[idx]);
}

}  // namespace

ScalarField heat_flow(const ScalarField& f, double t, double alpha) {
  if (t < 0.0) throw PreconditionError("heat_flow: t must be >= 0");
  if (!(alpha > 0.0)) throw PreconditionError("heat_flow: alpha must be > 0");
  ScalarField out(f.grid, f.real_valued);
  apply_heat(*f.grid, f.coeffs, out.coeffs, t, alpha);
  return out;
}

VectorField heat_flow(const VectorField& u, double t, double alpha) {
  VectorField out(u.grid(), u.real_valued());
  for (std::size_t d = 0; d < u.comp.size(); ++d)
    out.comp[d] = heat_flow(u.comp[d], t, alpha);
  out.solenoidal = u.solenoidal;
  return out;
}

double smoothing_bound(double alpha, double gamma) {
  if (!(alpha > 0.0) || gamma < 0.0)
    throw PreconditionError("smoothing_bound: needs alpha > 0, gamma >= 0");
  const double c = gamma / alpha;
  return c == 0.0 ? 1.0 : std::pow(c, c) * std::exp(-c);
}

double smoothing_ratio(const ScalarField& f, double t, double alpha,
                       double gamma, double s) {
  if (!(t > 0.0)) throw PreconditionError("smoothing_ratio: t must be > 0");
  if (gamma < 0.0)
    throw PreconditionError("smoothing_ratio: gamma must be >= 0");
  const auto& g = *f.grid;
  const auto wsp = g.ksq_power(s + 2.0 * gamma);
  const auto wap = g.ksq_power(alpha);
  const auto& ws = *wsp;
  const auto& wa = *wap;
  const double xi2a = std::pow(g.xi_unit(), 2.0 * alpha);
  double lhs_sq = 0.0;
  for (std::size_t idx = 0; idx < f.coeffs.size(); ++idx) {
    const double decay = std::exp(-2.0 * t * xi2a * wa[idx]);
    lhs_sq += ws[idx] * decay * std::norm(f.coeffs[idx]);
  }
  lhs_sq *= g.volume() * std::pow(g.xi_unit(), 2.0 * (s + 2.0 * gamma));
  const double denom = hdot_norm(f, s);
  if (denom == 0.0) return 0.0;
  return std::pow(t, gamma / alpha) * std::sqrt(lhs_sq) / denom;
}

ScalarField imaginary_power(const ScalarField& f, double y, double alpha) {
  ScalarField out(f.grid, f.real_valued && y == 0.0);
  const auto& g = *f.grid;
  const double xi2 = g.xi_unit() * g.xi_unit();
  for (std::size_t idx = 0; idx < f.coeffs.size(); ++idx) {
    if (g.ksq(idx) == 0.0) {
      out.coeffs[idx] = Complex(0.0, 0.0);
      continue;
    }
    // |xi|^{2 alpha i y} = exp(i alpha y log |xi|^2)
    const double angle = alpha * y * std::log(xi2 * g.ksq(idx));
    out.coeffs[idx] =
        f.coeffs[idx] * Complex(std::cos(angle), std::sin(angle));
  }
  return out;
}

double phi1_scalar(double z) {
  if (z < 1e-4)
    return 1.0 - z / 2.0 + z * z / 6.0 - z * z * z / 24.0;
  return -std::expm1(-z) / z;
}

double phi2_scalar(double z) {
  if (z < 1e-4)
    return 0.5 - z / 6.0 + z * z / 24.0 - z * z * z / 120.0;
  return (std::expm1(-z) + z) / (z * z);
}

PhiWeights PhiWeights::build(const SpectralGrid& grid, double dt,
                             double alpha) {
  if (!(dt > 0.0)) throw PreconditionError("PhiWeights: dt must be > 0");
  PhiWeights w;
  const std::size_t size = grid.size();
  w.phi0.resize(size);
  w.phi1.resize(size);
  w.phi2.resize(size);
  const double xi2a = std::pow(grid.xi_unit(), 2.0 * alpha);
  const auto wap = grid.ksq_power(alpha);
  const auto& wa = *wap;
  for (std::size_t idx = 0; idx < size; ++idx) {
    const double z = dt * xi2a * wa[idx];
    w.phi0[idx] = std::exp(-z);
    w.phi1[idx] = phi1_scalar(z);
    w.phi2[idx] = phi2_scalar(z);
  }
  return w;
}

namespace {

// One ETD2 trapezoidal step per mode on a scalar coefficient array.
void duhamel_step(const PhiWeights& w, double dt,
                  const std::vector<Complex>& wm,
                  const std::vector<Complex>& fm,
                  const std::vector<Complex>& fm1, std::vector<Complex>& out) {
  for (std::size_t i = 0; i < wm.size(); ++i)
    out[i] = w.phi0[i] * wm[i] +
             dt * ((w.phi1[i] - w.phi2[i]) * fm[i] + w.phi2[i] * fm1[i]);
}

void duhamel_step_field(const PhiWeights& w, double dt, const ScalarField& wm,
                        const ScalarField& fm, const ScalarField& fm1,
                        ScalarField& out) {
  duhamel_step(w, dt, wm.coeffs, fm.coeffs, fm1.coeffs, out.coeffs);
}

void duhamel_step_field(const PhiWeights& w, double dt, const VectorField& wm,
                        const VectorField& fm, const VectorField& fm1,
                        VectorField& out) {
  for (std::size_t d = 0; d < wm.comp.size(); ++d)
    duhamel_step(w, dt, wm.comp[d].coeffs, fm.comp[d].coeffs,
                 fm1.comp[d].coeffs, out.comp[d].coeffs);
  out.solenoidal = wm.solenoidal && fm.solenoidal && fm1.solenoidal;
  out.set_real_valued(wm.real_valued() && fm.real_valued() && fm1.real_valued());
}

GridPtr grid_of(const ScalarField& f) { return f.grid; }
GridPtr grid_of(const VectorField& u) { return u.grid(); }

}  // namespace

template <class FieldT>
Trajectory<FieldT> duhamel(Trajectory<FieldT> forcing, double alpha) {
  const int M = forcing.steps();
  if (M < 2) throw PreconditionError("duhamel: needs M >= 2 time steps");
  if (!forcing.has_forcing())
    throw PreconditionError("duhamel: trajectory must carry forcing nodes");
  Trajectory<FieldT> out;
  out.horizon = forcing.horizon;
  out.alpha = alpha;
  GridPtr grid = grid_of(forcing.forcing[0]);
  const PhiWeights w = PhiWeights::build(*grid, forcing.dt(), alpha);
  out.states.reserve(static_cast<std::size_t>(M) + 1);
  FieldT zero = forcing.forcing[0];
  zero *= 0.0;
  out.states.push_back(zero);
  for (int m = 0; m < M; ++m) {
    FieldT next = out.states.back();
    duhamel_step_field(w, forcing.dt(), out.states.back(),
                       forcing.forcing[static_cast<std::size_t>(m)],
                       forcing.forcing[static_cast<std::size_t>(m) + 1], next);
    out.states.push_back(std::move(next));
  }
  out.forcing = std::move(forcing.forcing);
  return out;
}

template Trajectory<ScalarField> duhamel(Trajectory<ScalarField>, double);
template Trajectory<VectorField> duhamel(Trajectory<VectorField>, double);

template <class FieldT>
FieldT Trajectory<FieldT>::time_derivative(int m) const {
  FieldT dw = lambda_power(states[static_cast<std::size_t>(m)], 2.0 * alpha);
  dw *= -1.0;
  if (has_forcing()) dw += forcing[static_cast<std::size_t>(m)];
  return dw;
}

template ScalarField Trajectory<ScalarField>::time_derivative(int) const;
template VectorField Trajectory<VectorField>::time_derivative(int) const;

template <class FieldT>
double space_time_norm(const Trajectory<FieldT>& traj, const NormTriple& idx,
                       int m_end) {
  const int M = traj.steps();
  if (m_end < 0) m_end = M;
  if (m_end < 1 || m_end > M)
    throw PreconditionError("space_time_norm: prefix end out of range");
  const double dt = traj.dt();
  double peak = 0.0, mid_sq = 0.0, low_sq = 0.0;
  for (int m = 0; m <= m_end; ++m) {
    const auto& wm = traj.states[static_cast<std::size_t>(m)];
    peak = std::max(peak, hdot_norm(wm, idx.peak));
    const double tw = trapezoid_weight(m, m_end);
    mid_sq += tw * dt * hdot_norm_sq(wm, idx.mid);
    low_sq += tw * dt * hdot_norm_sq(traj.time_derivative(m), idx.low);
  }
  return peak + std::sqrt(mid_sq) + std::sqrt(low_sq);
}

template double space_time_norm(const Trajectory<ScalarField>&,
                                const NormTriple&, int);
template double space_time_norm(const Trajectory<VectorField>&,
                                const NormTriple&, int);

template <class FieldT>
Trajectory<FieldT> trajectory_difference(const Trajectory<FieldT>& a,
                                         const Trajectory<FieldT>& b) {
  if (a.states.size() != b.states.size() || a.horizon != b.horizon)
    throw PreconditionError("trajectory_difference: incompatible time grids");
  Trajectory<FieldT> out;
  out.horizon = a.horizon;
  out.alpha = a.alpha;
  out.indices = a.indices;
  out.states.reserve(a.states.size());
  for (std::size_t m = 0; m < a.states.size(); ++m)
    out.states.push_back(a.states[m] - b.states[m]);
  if (a.has_forcing() || b.has_forcing()) {
    out.forcing.reserve(a.states.size());
    for (std::size_t m = 0; m < a.states.size(); ++m) {
      if (a.has_forcing() && b.has_forcing())
        out.forcing.push_back(a.forcing[m] - b.forcing[m]);
      else if (a.has_forcing())
        out.forcing.push_back(a.forcing[m]);
      else
        out.forcing.push_back(-1.0 * b.forcing[m]);
    }
  }
  return out;
}

template Trajectory<ScalarField> trajectory_difference(
    const Trajectory<ScalarField>&, const Trajectory<ScalarField>&);
template Trajectory<VectorField> trajectory_difference(
    const Trajectory<VectorField>&, const Trajectory<VectorField>&);

template <class FieldT>
Trajectory<FieldT> trajectory_sum(const Trajectory<FieldT>& a,
                                  const Trajectory<FieldT>& b) {
  if (a.states.size() != b.states.size() || a.horizon != b.horizon)
    throw PreconditionError("trajectory_sum: incompatible time grids");
  Trajectory<FieldT> out;
  out.horizon = a.horizon;
  out.alpha = a.alpha;
  out.indices = a.indices;
  out.states.reserve(a.states.size());
  for (std::size_t m = 0; m < a.states.size(); ++m)
    out.states.push_back(a.states[m] + b.states[m]);
  if (a.has_forcing() || b.has_forcing()) {
    out.forcing.reserve(a.states.size());
    for (std::size_t m = 0; m < a.states.size(); ++m) {
      if (a.has_forcing() && b.has_forcing())
        out.forcing.push_back(a.forcing[m] + b.forcing[m]);
      else if (a.has_forcing())
        out.forcing.push_back(a.forcing[m]);
      else
        out.forcing.push_back(b.forcing[m]);
    }
  }
  return out;
}

template Trajectory<ScalarField> trajectory_sum(const Trajectory<ScalarField>&,
                                                const Trajectory<ScalarField>&);
template Trajectory<VectorField> trajectory_sum(const Trajectory<VectorField>&,
                                                const Trajectory<VectorField>&);

template <class FieldT>
double max_regularity_ratio(const Trajectory<FieldT>& forcing, double alpha,
                            double s) {
  if (!forcing.has_forcing())
    throw PreconditionError("max_regularity_ratio: zero forcing");
  const int M = forcing.steps();
  const double dt = forcing.dt();
  double f_sq = 0.0;
  for (int m = 0; m <= M; ++m)
    f_sq += trapezoid_weight(m, M) * dt *
            hdot_norm_sq(forcing.forcing[static_cast<std::size_t>(m)], s);
  if (f_sq <= 0.0)
    throw PreconditionError("max_regularity_ratio: zero forcing");
  Trajectory<FieldT> w = duhamel(forcing, alpha);
  double dtw_sq = 0.0, aw_sq = 0.0;
  for (int m = 0; m <= M; ++m) {
    const double tw = trapezoid_weight(m, M);
    dtw_sq += tw * dt * hdot_norm_sq(w.time_derivative(m), s);
    aw_sq += tw * dt *
             hdot_norm_sq(w.states[static_cast<std::size_t>(m)], s + 2.0 * alpha);
  }
  return (std::sqrt(dtw_sq) + std::sqrt(aw_sq)) / std::sqrt(f_sq);
}

template double max_regularity_ratio(const Trajectory<ScalarField>&, double,
                                     double);
template double max_regularity_ratio(const Trajectory<VectorField>&, double,
                                     double);

double char_integral_raw(const ScalarField& a, double alpha, double s) {
  const auto& g = *a.grid;
  const auto whp = g.ksq_power(s + 2.0 * alpha);
  const auto wap = g.ksq_power(alpha);
  const auto& wh = *whp;
  const auto& wa = *wap;
  const double xi = g.xi_unit();
  // per mode: |xi|^{2s+4a} |a_k|^2 * int_0^inf e^{-2t|xi|^{2a}} dt
  //         = |xi|^{2(s+2a)} |a_k|^2 / (2 |xi|^{2a})
  double sum = 0.0;
  for (std::size_t idx = 0; idx < a.coeffs.size(); ++idx) {
    if (g.ksq(idx) == 0.0) continue;
    sum += wh[idx] / (2.0 * wa[idx]) * std::norm(a.coeffs[idx]);
  }
  return g.volume() * std::pow(xi, 2.0 * (s + alpha)) * sum;
}

double char_integral(const ScalarField& a, double alpha, double s) {
  return 2.0 * char_integral_raw(a, alpha, s);
}

ScalarTrajectory free_solution(const ScalarField& a, double alpha, double T,
                               int M) {
  if (M < 2) throw PreconditionError("free_solution: needs M >= 2");
  ScalarTrajectory out;
  out.horizon = T;
  out.alpha = alpha;
  out.states.reserve(static_cast<std::size_t>(M) + 1);
  for (int m = 0; m <= M; ++m)
    out.states.push_back(heat_flow(a, T * m / M, alpha));
  return out;
}

VectorTrajectory free_solution(const VectorField& a, double alpha, double T,
                               int M) {
  if (M < 2) throw PreconditionError("free_solution: needs M >= 2");
  VectorTrajectory out;
  out.horizon = T;
  out.alpha = alpha;
  out.states.reserve(static_cast<std::size_t>(M) + 1);
  for (int m = 0; m <= M; ++m)
    out.states.push_back(heat_flow(a, T * m / M, alpha));
  return out;
}

namespace {

// Per-mode closed forms of the two infinite-time integrals:
//   ||a_L||^2_{L2(0,inf;Hdot^{s+2a})} = sum |xi|^{2(s+2a)} |a_k|^2 / (2|xi|^{2a}),
//   ||dt a_L||^2_{L2(0,inf;Hdot^s)}  = sum |xi|^{2s} |xi|^{2a} |a_k|^2 / 2.
void accumulate_tail_integrals(const ScalarField& a, double alpha, double s,
                               double& high_sq, double& dt_sq) {
  const auto& g = *a.grid;
  const auto whp = g.ksq_power(s + 2.0 * alpha);
  const auto wap = g.ksq_power(alpha);
  const auto wsp = g.ksq_power(s);
  const auto& wh = *whp;
  const auto& wa = *wap;
  const auto& ws = *wsp;
  const double pref = g.volume() * std::pow(g.xi_unit(), 2.0 * (s + alpha));
  for (std::size_t idx = 0; idx < a.coeffs.size(); ++idx) {
    if (g.ksq(idx) == 0.0) continue;
    const double amp = std::norm(a.coeffs[idx]);
    high_sq += pref * wh[idx] / (2.0 * wa[idx]) * amp;
    dt_sq += pref * ws[idx] * wa[idx] / 2.0 * amp;
  }
}

}  // namespace

FreeSolutionFunctional free_solution_functional(const ScalarField& a,
                                                double alpha, double s) {
  FreeSolutionFunctional f{};
  f.sup_term = hdot_norm(a, s + alpha);  // attained at t = 0, pure decay after
  double high_sq = 0.0, dt_sq = 0.0;
  accumulate_tail_integrals(a, alpha, s, high_sq, dt_sq);
  f.l2_high_term = std::sqrt(high_sq);
  f.l2_dt_term = std::sqrt(dt_sq);
  f.total = f.sup_term + f.l2_high_term + f.l2_dt_term;
  return f;
}

FreeSolutionFunctional free_solution_functional(const VectorField& a,
                                                double alpha, double s) {
  FreeSolutionFunctional f{};
  f.sup_term = hdot_norm(a, s + alpha);
  double high_sq = 0.0, dt_sq = 0.0;
  for (const auto& c : a.comp) accumulate_tail_integrals(c, alpha, s, high_sq, dt_sq);
  f.l2_high_term = std::sqrt(high_sq);
  f.l2_dt_term = std::sqrt(dt_sq);
  f.total = f.sup_term + f.l2_high_term + f.l2_dt_term;
  return f;
}

}  // namespace fbs
