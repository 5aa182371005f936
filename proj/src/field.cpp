#include "fbs/field.hpp"

#include <algorithm>
#include <cmath>

#include "fbs/errors.hpp"

namespace fbs {

ScalarField::ScalarField(GridPtr grid_in, bool real_valued_in)
    : grid(std::move(grid_in)), real_valued(real_valued_in) {
  if (!grid) throw PreconditionError("ScalarField: null grid");
  coeffs.assign(grid->size(), Complex(0.0, 0.0));
}

void ScalarField::set_hermitian_mode(const std::array<int, kMaxDim>& k,
                                     Complex value) {
  std::size_t idx = grid->index_of(k);
  std::size_t mirror = grid->mirror_index(idx);
  if (idx == mirror) {
    coeffs[idx] = Complex(value.real(), 0.0);
  } else {
    coeffs[idx] = value;
    coeffs[mirror] = std::conj(value);
  }
}

void ScalarField::set_mode(const std::array<int, kMaxDim>& k, Complex value) {
  coeffs[grid->index_of(k)] = value;
  real_valued = false;
}

Complex ScalarField::mode(const std::array<int, kMaxDim>& k) const {
  return coeffs[grid->index_of(k)];
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (const auto& c : coeffs) m = std::max(m, std::abs(c));
  return m;
}

double ScalarField::hermitian_defect() const {
  double defect = 0.0;
  for (std::size_t idx = 0; idx < coeffs.size(); ++idx) {
    std::size_t mirror = grid->mirror_index(idx);
    defect = std::max(defect, std::abs(coeffs[mirror] - std::conj(coeffs[idx])));
  }
  return defect;
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require_same_grid(*grid, *other.grid, "ScalarField::operator+=");
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += other.coeffs[i];
  real_valued = real_valued && other.real_valued;
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require_same_grid(*grid, *other.grid, "ScalarField::operator-=");
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] -= other.coeffs[i];
  real_valued = real_valued && other.real_valued;
  return *this;
}

ScalarField& ScalarField::operator*=(double c) {
  for (auto& v : coeffs) v *= c;
  return *this;
}

ScalarField ScalarField::zero(GridPtr grid, bool real_valued) {
  return ScalarField(std::move(grid), real_valued);
}

VectorField::VectorField(GridPtr grid, bool real_valued) {
  if (!grid) throw PreconditionError("VectorField: null grid");
  comp.reserve(static_cast<std::size_t>(grid->dim()));
  for (int d = 0; d < grid->dim(); ++d) comp.emplace_back(grid, real_valued);
}

bool VectorField::real_valued() const {
  for (const auto& c : comp)
    if (!c.real_valued) return false;
  return true;
}

void VectorField::set_real_valued(bool v) {
  for (auto& c : comp) c.real_valued = v;
}

double VectorField::max_abs() const {
  double m = 0.0;
  for (const auto& c : comp) m = std::max(m, c.max_abs());
  return m;
}

double VectorField::divergence_ratio() const {
  const auto& g = *grid();
  double max_div = 0.0;
  double max_amp = 0.0;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    Complex div(0.0, 0.0);
    double amp = 0.0;
    for (int d = 0; d < g.dim(); ++d) {
      const Complex c = comp[static_cast<std::size_t>(d)].coeffs[idx];
      div += static_cast<double>(g.wavenumber(idx, d)) * c;
      amp = std::max(amp, std::abs(c));
    }
    max_div = std::max(max_div, std::abs(div));
    max_amp = std::max(max_amp, amp);
  }
  return max_amp == 0.0 ? 0.0 : max_div / max_amp;
}

VectorField& VectorField::operator+=(const VectorField& other) {
  for (std::size_t d = 0; d < comp.size(); ++d) comp[d] += other.comp[d];
  solenoidal = solenoidal && other.solenoidal;
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& other) {
  for (std::size_t d = 0; d < comp.size(); ++d) comp[d] -= other.comp[d];
  solenoidal = solenoidal && other.solenoidal;
  return *this;
}

VectorField& VectorField::operator*=(double c) {
  for (auto& f : comp) f *= c;
  return *this;
}

VectorField VectorField::zero(GridPtr grid, bool real_valued) {
  return VectorField(std::move(grid), real_valued);
}

VectorField embed_along_axis(const ScalarField& f, int axis) {
  if (axis < 0 || axis >= f.grid->dim())
    throw PreconditionError("embed_along_axis: axis out of range");
  VectorField out(f.grid, f.real_valued);
  out.comp[static_cast<std::size_t>(axis)] = f;
  return out;
}

namespace {

double l2_abs(const std::vector<Complex>& v) {
  double s = 0.0;
  for (const auto& c : v) s += std::norm(c);
  return std::sqrt(s);
}

double l2_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

double relative_l2_error(const ScalarField& a, const ScalarField& b) {
  require_same_grid(*a.grid, *b.grid, "relative_l2_error");
  const double scale = std::max(l2_abs(a.coeffs), l2_abs(b.coeffs));
  const double diff = l2_diff(a.coeffs, b.coeffs);
  return scale == 0.0 ? diff : diff / scale;
}

double relative_l2_error(const VectorField& a, const VectorField& b) {
  double diff = 0.0, scale = 0.0;
  for (std::size_t d = 0; d < a.comp.size(); ++d) {
    require_same_grid(*a.comp[d].grid, *b.comp[d].grid, "relative_l2_error");
    double x = l2_diff(a.comp[d].coeffs, b.comp[d].coeffs);
    diff += x * x;
    double sa = l2_abs(a.comp[d].coeffs), sb = l2_abs(b.comp[d].coeffs);
    scale += std::max(sa, sb) * std::max(sa, sb);
  }
  diff = std::sqrt(diff);
  scale = std::sqrt(scale);
  return scale == 0.0 ? diff : diff / scale;
}

}  // namespace fbs
