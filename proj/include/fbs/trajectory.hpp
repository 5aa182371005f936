#pragma once

#include <optional>
#include <vector>

#include "fbs/field.hpp"
#include "fbs/norms.hpp"

namespace fbs {

// Sobolev index triple for the mixed space-time norms:
//   max_t ||w||_{Hdot^peak} + ||w||_{L2(0,T;Hdot^mid)}
//   + ||dt w||_{L2(0,T;Hdot^low)}.
struct NormTriple {
  double peak;
  double mid;
  double low;

  bool operator==(const NormTriple& o) const {
    return peak == o.peak && mid == o.mid && low == o.low;
  }
};

// Time-indexed fields on the uniform grid t_m = m T / M, m = 0..M.
//
// `forcing` holds the right-hand side of dt w + (-Lap)^alpha w = f at the
// nodes; empty means f = 0. Time derivatives are always evaluated through
// this equation, never by finite differences, so time-quadrature error never
// contaminates the dt terms of the norms.
template <class FieldT>
struct Trajectory {
  double horizon = 0.0;
  double alpha = 1.0;
  std::vector<FieldT> states;
  std::vector<FieldT> forcing;  // empty => zero forcing
  std::optional<NormTriple> indices;

  int steps() const { return static_cast<int>(states.size()) - 1; }
  double dt() const { return horizon / steps(); }
  double time_at(int m) const { return horizon * m / steps(); }
  const FieldT& node(int m) const {
    return states[static_cast<std::size_t>(m)];
  }
  bool has_forcing() const { return !forcing.empty(); }

  // f(t_m) - (-Lap)^alpha w(t_m).
  FieldT time_derivative(int m) const;
};

using ScalarTrajectory = Trajectory<ScalarField>;
using VectorTrajectory = Trajectory<VectorField>;

// Trapezoid weight for node m on an (M+1)-node grid.
inline double trapezoid_weight(int m, int M) {
  return (m == 0 || m == M) ? 0.5 : 1.0;
}

// The X_T/Y_T-style functional described at NormTriple. m_end >= 1 restricts
// to the prefix [0, t_{m_end}]; -1 means the full horizon.
template <class FieldT>
double space_time_norm(const Trajectory<FieldT>& traj, const NormTriple& idx,
                       int m_end = -1);

// Node-wise difference; forcings subtract too (zero when absent on both).
template <class FieldT>
Trajectory<FieldT> trajectory_difference(const Trajectory<FieldT>& a,
                                         const Trajectory<FieldT>& b);

// Node-wise sum, used to assemble mild iterates.
template <class FieldT>
Trajectory<FieldT> trajectory_sum(const Trajectory<FieldT>& a,
                                  const Trajectory<FieldT>& b);

}  // namespace fbs
