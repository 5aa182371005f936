#include "fbs/norms.hpp"

#include <cmath>

#include "fbs/errors.hpp"
#include "fbs/fft.hpp"

namespace fbs {

NormSpec NormSpec::lebesgue(double p) {
  if (!(p >= 1.0) || !std::isfinite(p))
    throw PreconditionError("NormSpec: Lebesgue exponent must satisfy 1 <= p < inf");
  return {Kind::Lebesgue, p};
}

ScalarField lambda_power(const ScalarField& f, double s) {
  ScalarField out(f.grid, f.real_valued);
  if (s == 0.0) {
    out.coeffs = f.coeffs;
    out.clear_zero_mode();
    return out;
  }
  const auto w = f.grid->ksq_power(0.5 * s);
  const double pref = std::pow(f.grid->xi_unit(), s);
  const auto& ws = *w;
  for (std::size_t i = 0; i < f.coeffs.size(); ++i)
    out.coeffs[i] = f.coeffs[i] * (pref * ws[i]);
  out.clear_zero_mode();
  return out;
}

VectorField lambda_power(const VectorField& u, double s) {
  VectorField out(u.grid(), true);
  for (std::size_t d = 0; d < u.comp.size(); ++d)
    out.comp[d] = lambda_power(u.comp[d], s);
  // radial multipliers commute with the projection
  out.solenoidal = u.solenoidal;
  return out;
}

double hdot_norm_sq(const ScalarField& f, double s) {
  const auto w = f.grid->ksq_power(s);
  const auto& ws = *w;
  double sum = 0.0;
  for (std::size_t i = 0; i < f.coeffs.size(); ++i)
    sum += ws[i] * std::norm(f.coeffs[i]);
  const double pref =
      f.grid->volume() * std::pow(f.grid->xi_unit(), 2.0 * s);
  return pref * sum;
}

double hdot_norm_sq(const VectorField& u, double s) {
  double sum = 0.0;
  for (const auto& c : u.comp) sum += hdot_norm_sq(c, s);
  return sum;
}

double hdot_norm(const ScalarField& f, double s) {
  return std::sqrt(hdot_norm_sq(f, s));
}

double hdot_norm(const VectorField& u, double s) {
  return std::sqrt(hdot_norm_sq(u, s));
}

double hdot_inner(const VectorField& a, const VectorField& b, double s) {
  require_same_grid(*a.grid(), *b.grid(), "hdot_inner");
  const auto w = a.grid()->ksq_power(s);
  const auto& ws = *w;
  double sum = 0.0;
  for (std::size_t d = 0; d < a.comp.size(); ++d) {
    const auto& ca = a.comp[d].coeffs;
    const auto& cb = b.comp[d].coeffs;
    for (std::size_t i = 0; i < ca.size(); ++i)
      sum += ws[i] * (ca[i].real() * cb[i].real() + ca[i].imag() * cb[i].imag());
  }
  const double pref =
      a.grid()->volume() * std::pow(a.grid()->xi_unit(), 2.0 * s);
  return pref * sum;
}

double l2_inner(const ScalarField& f, const ScalarField& g) {
  require_same_grid(*f.grid, *g.grid, "l2_inner");
  double sum = 0.0;
  for (std::size_t i = 0; i < f.coeffs.size(); ++i)
    sum += f.coeffs[i].real() * g.coeffs[i].real() +
           f.coeffs[i].imag() * g.coeffs[i].imag();
  return f.grid->volume() * sum;
}

double lp_norm(const ScalarField& f, double p) {
  if (!f.real_valued)
    throw PreconditionError("lp_norm: field must be flagged real-valued");
  if (!(p >= 1.0) || !std::isfinite(p))
    throw PreconditionError("lp_norm: requires 1 <= p < inf");
  const auto& g = *f.grid;
  std::vector<Complex> phys(g.size());
  fft::to_physical(g, f.coeffs, phys);
  const double cell = g.volume() / static_cast<double>(g.size());
  double sum = 0.0;
  if (p == 2.0) {
    for (const auto& v : phys) sum += v.real() * v.real();
  } else {
    for (const auto& v : phys) sum += std::pow(std::abs(v.real()), p);
  }
  return std::pow(cell * sum, 1.0 / p);
}

double norm_of(const ScalarField& f, const NormSpec& spec) {
  return spec.kind == NormSpec::Kind::Hdot ? hdot_norm(f, spec.index)
                                           : lp_norm(f, spec.index);
}

double norm_of(const VectorField& u, const NormSpec& spec) {
  if (spec.kind == NormSpec::Kind::Hdot) return hdot_norm(u, spec.index);
  // vector Lebesgue convention: l2 combination of component L^p norms
  double sum_sq = 0.0;
  for (const auto& c : u.comp) {
    double x = lp_norm(c, spec.index);
    sum_sq += x * x;
  }
  return std::sqrt(sum_sq);
}

}  // namespace fbs
