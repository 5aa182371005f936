#pragma once

#include <complex>
#include <span>
#include <vector>

#include "fbs/grid.hpp"

namespace fbs {

using Complex = std::complex<double>;

// Scalar field stored as Fourier coefficients f_hat[k] with the convention
//   f(x) = sum_k f_hat[k] * exp(i xi_k . x),
// one coefficient per lattice point of the grid. `real_valued` records the
// Hermitian-symmetry contract f_hat[-k] = conj(f_hat[k]); operations that
// preserve it propagate the flag, operations that break it clear it.
class ScalarField {
 public:
  ScalarField(GridPtr grid, bool real_valued);

  GridPtr grid;
  std::vector<Complex> coeffs;
  bool real_valued;

  std::size_t size() const { return coeffs.size(); }

  // Sets f_hat at integer wavevector k and conj at -k (keeps realness).
  // If k is its own mirror the imaginary part is dropped.
  void set_hermitian_mode(const std::array<int, kMaxDim>& k, Complex value);
  // Sets a single coefficient without the mirror (clears real_valued).
  void set_mode(const std::array<int, kMaxDim>& k, Complex value);
  Complex mode(const std::array<int, kMaxDim>& k) const;

  void clear_zero_mode() { coeffs[0] = Complex(0.0, 0.0); }
  Complex zero_mode() const { return coeffs[0]; }

  double max_abs() const;
  // max_k |f_hat[-k] - conj(f_hat[k])|, a diagnostic for the realness flag.
  double hermitian_defect() const;

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double c);
  friend ScalarField operator+(ScalarField a, const ScalarField& b) {
    a += b;
    return a;
  }
  friend ScalarField operator-(ScalarField a, const ScalarField& b) {
    a -= b;
    return a;
  }
  friend ScalarField operator*(double c, ScalarField a) {
    a *= c;
    return a;
  }

  static ScalarField zero(GridPtr grid, bool real_valued = true);
};

// n component scalars sharing one grid. `solenoidal` records the discrete
// divergence-free contract max_k |xi_k . u_hat_k| <= 1e-12 max_k |u_hat_k|.
class VectorField {
 public:
  VectorField(GridPtr grid, bool real_valued);

  std::vector<ScalarField> comp;
  bool solenoidal = false;

  GridPtr grid() const { return comp.front().grid; }
  int dim() const { return static_cast<int>(comp.size()); }
  bool real_valued() const;
  void set_real_valued(bool v);

  double max_abs() const;
  // max_k |k . u_hat_k| / max_k |u_hat_k| (0 for the zero field).
  double divergence_ratio() const;

  VectorField& operator+=(const VectorField& other);
  VectorField& operator-=(const VectorField& other);
  VectorField& operator*=(double c);
  friend VectorField operator+(VectorField a, const VectorField& b) {
    a += b;
    return a;
  }
  friend VectorField operator-(VectorField a, const VectorField& b) {
    a -= b;
    return a;
  }
  friend VectorField operator*(double c, VectorField a) {
    a *= c;
    return a;
  }

  static VectorField zero(GridPtr grid, bool real_valued = true);
};

// Scalar field placed in component `axis` of a zero vector field: f * e_axis.
VectorField embed_along_axis(const ScalarField& f, int axis);

// l2 distance of coefficient vectors relative to the larger magnitude;
// the workhorse "equal to 1e-13 relative" comparator.
double relative_l2_error(const ScalarField& a, const ScalarField& b);
double relative_l2_error(const VectorField& a, const VectorField& b);

}  // namespace fbs
