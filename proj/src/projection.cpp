#include "fbs/projection.hpp"

#include "fbs/errors.hpp"

namespace fbs {

namespace {

// The shared per-mode gradient component k (k.u)/|k|^2; P and Q are both
// assembled from this expression so that Pu + Qu == u bitwise.
void gradient_component(const VectorField& u, VectorField& q) {
  const auto& g = *u.grid();
  const int n = g.dim();
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const double ksq = g.ksq(idx);
    if (ksq == 0.0) {
      for (int d = 0; d < n; ++d)
        q.comp[static_cast<std::size_t>(d)].coeffs[idx] = Complex(0.0, 0.0);
      continue;
    }
    Complex dot(0.0, 0.0);
    for (int d = 0; d < n; ++d)
      dot += static_cast<double>(g.wavenumber(idx, d)) *
             u.comp[static_cast<std::size_t>(d)].coeffs[idx];
    dot /= ksq;
    for (int d = 0; d < n; ++d)
      q.comp[static_cast<std::size_t>(d)].coeffs[idx] =
          static_cast<double>(g.wavenumber(idx, d)) * dot;
  }
}

}  // namespace

VectorField leray_project(const VectorField& u) {
  VectorField q(u.grid(), true);
  gradient_component(u, q);
  VectorField out = u;
  out -= q;
  out.set_real_valued(u.real_valued());
  out.solenoidal = true;
  return out;
}

VectorField gradient_part(const VectorField& u) {
  VectorField q(u.grid(), true);
  gradient_component(u, q);
  q.set_real_valued(u.real_valued());
  q.solenoidal = false;
  return q;
}

VectorField gradient(const ScalarField& f) {
  const auto& g = *f.grid;
  VectorField out(f.grid, f.real_valued);
  const double xi = g.xi_unit();
  for (int d = 0; d < g.dim(); ++d) {
    auto& c = out.comp[static_cast<std::size_t>(d)].coeffs;
    for (std::size_t idx = 0; idx < g.size(); ++idx)
      c[idx] = Complex(0.0, xi * g.wavenumber(idx, d)) * f.coeffs[idx];
  }
  return out;
}

ScalarField divergence(const VectorField& u) {
  const auto& g = *u.grid();
  ScalarField out(u.grid(), u.real_valued());
  const double xi = g.xi_unit();
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    Complex acc(0.0, 0.0);
    for (int d = 0; d < g.dim(); ++d)
      acc += Complex(0.0, xi * g.wavenumber(idx, d)) *
             u.comp[static_cast<std::size_t>(d)].coeffs[idx];
    out.coeffs[idx] = acc;
  }
  return out;
}

}  // namespace fbs
