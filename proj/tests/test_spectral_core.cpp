#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include "doctest.h"
#include "fbs/advection.hpp"
#include "fbs/errors.hpp"
#include "fbs/fft.hpp"
#include "fbs/norms.hpp"
#include "fbs/projection.hpp"
#include "fbs/random_field.hpp"
#include "fbs/snapshot.hpp"
#include "test_helpers.hpp"

using namespace fbs;
using namespace fbs::test;

namespace {

const double pi = std::numbers::pi;

SpectrumSpec unit_band(const SpectralGrid& g, double s = 0.0) {
  const double xi = g.xi_unit();
  return SpectrumSpec::gaussian(xi, 3.0 * xi, 2.0 * xi, xi, NormSpec::hdot(s),
                                1.0);
}

}  // namespace

TEST_CASE("make_grid validates its arguments") {
  CHECK_THROWS_AS(make_grid(1, 8, 2 * pi), PreconditionError);
  CHECK_THROWS_AS(make_grid(3, 15, 2 * pi), PreconditionError);
  CHECK_THROWS_AS(make_grid(3, 2, 2 * pi), PreconditionError);
  CHECK_THROWS_AS(make_grid(3, 16, 0.0), PreconditionError);
  CHECK_THROWS_AS(make_grid(3, 16, -1.0), PreconditionError);
  CHECK_THROWS_AS(make_grid(4, 16, 2 * pi), PreconditionError);
  CHECK_NOTHROW(make_grid(4, 12, 2 * pi));
}

TEST_CASE("grid lattice: ordering, range, symmetry, zero mode") {
  GridPtr g = make_grid(3, 16, 2 * pi);
  CHECK(g->size() == 16u * 16u * 16u);

  int kmin = 100, kmax = -100;
  std::size_t zero_count = 0;
  for (std::size_t idx = 0; idx < g->size(); ++idx) {
    for (int d = 0; d < 3; ++d) {
      kmin = std::min(kmin, g->wavenumber(idx, d));
      kmax = std::max(kmax, g->wavenumber(idx, d));
    }
    if (g->ksq(idx) == 0.0) ++zero_count;
    // the mirror of the mirror is the original
    CHECK(g->mirror_index(g->mirror_index(idx)) == idx);
  }
  CHECK(kmin == -8);
  CHECK(kmax == 7);
  CHECK(zero_count == 1);

  // smallest positive |xi| on a larger box
  GridPtr g2 = make_grid(3, 16, 4 * pi);
  double min_xi = 1e300;
  for (std::size_t idx = 1; idx < g2->size(); ++idx)
    min_xi = std::min(min_xi, g2->xi_unit() * std::sqrt(g2->ksq(idx)));
  CHECK(rel_err(min_xi, 0.5) < 1e-13);
}

TEST_CASE("fft round trip is the identity") {
  GridPtr g = make_grid(2, 12, 2 * pi);
  ScalarField f = random_field(g, unit_band(*g), 42);
  std::vector<Complex> phys(g->size()), back(g->size());
  fft::to_physical(*g, f.coeffs, phys);
  fft::to_spectral(*g, phys, back);
  double err = 0.0;
  for (std::size_t i = 0; i < back.size(); ++i)
    err = std::max(err, std::abs(back[i] - f.coeffs[i]));
  CHECK(err < 1e-14);
}

TEST_CASE("lambda_power: identity, single mode, composition") {
  GridPtr g = make_grid(3, 16, 2 * pi);

  SUBCASE("s = 0 is the identity on mean-free fields") {
    ScalarField f = random_field(g, unit_band(*g), 7);
    CHECK(relative_l2_error(lambda_power(f, 0.0), f) == 0.0);
  }

  SUBCASE("single mode |xi| = 2 gains 2^s") {
    ScalarField f(g, false);
    f.set_mode(kvec(0, 2, 0), Complex(1.0, 0.0));
    ScalarField out = lambda_power(f, 1.5);
    CHECK(rel_err(out.mode(kvec(0, 2, 0)).real(), std::pow(2.0, 1.5)) < 1e-14);
  }

  SUBCASE("multiplier algebra: composition adds exponents") {
    ScalarField f = random_field(g, unit_band(*g), 11);
    ScalarField two_step = lambda_power(lambda_power(f, 0.7), -0.3);
    ScalarField one_step = lambda_power(f, 0.4);
    CHECK(relative_l2_error(two_step, one_step) < 1e-13);
  }

  SUBCASE("zero mode is annihilated") {
    ScalarField f(g, true);
    f.set_hermitian_mode(kvec(0, 0, 0), Complex(3.0, 0.0));
    f.set_hermitian_mode(kvec(1, 0, 0), Complex(1.0, 0.5));
    ScalarField out = lambda_power(f, 0.0);
    CHECK(std::abs(out.zero_mode()) == 0.0);
  }
}

TEST_CASE("hdot_norm: zero field, single mode, shift identity") {
  GridPtr g = make_grid(3, 16, 2 * pi);

  CHECK(hdot_norm(ScalarField::zero(g), 0.7) == 0.0);

  SUBCASE("single mode: |c| q^s L^{n/2}") {
    ScalarField f(g, false);
    const Complex c(0.3, -0.4);  // |c| = 0.5
    f.set_mode(kvec(0, 0, 2), c);
    const double s = 1.25;
    const double expected = 0.5 * std::pow(2.0, s) * std::pow(2 * pi, 1.5);
    CHECK(rel_err(hdot_norm(f, s), expected) < 1e-13);
  }

  SUBCASE("norm shift identity against the per-mode oracle") {
    ScalarField f = random_field(g, unit_band(*g), 3);
    const double alpha = 0.8, s = -0.4;
    CHECK(rel_err(hdot_norm(f, s + 2 * alpha),
                  hdot_norm(lambda_power(f, 2 * alpha), s)) < 1e-13);
  }
}

TEST_CASE("lp_norm: closed-form cosine integrals and Parseval") {
  GridPtr g = make_grid(3, 16, 2 * pi);
  // f(x) = cos(x_1): coefficients 1/2 at +-e_1
  ScalarField f(g, true);
  f.set_hermitian_mode(kvec(1, 0, 0), Complex(0.5, 0.0));

  // int cos^2 = L^3 / 2; int cos^4 = (3/8) L^3
  const double expected_l2 = std::pow(2 * pi, 1.5) / std::numbers::sqrt2;
  const double expected_l4 = std::pow(0.375 * std::pow(2 * pi, 3.0), 0.25);
  CHECK(rel_err(lp_norm(f, 2.0), expected_l2) < 1e-12);
  CHECK(rel_err(lp_norm(f, 4.0), expected_l4) < 1e-12);
  CHECK(lp_norm(ScalarField::zero(g), 2.0) == 0.0);

  SUBCASE("p = 2 agrees with the coefficient-side Parseval value") {
    ScalarField h = random_field(g, unit_band(*g), 5);
    double sum = 0.0;
    for (const auto& c : h.coeffs) sum += std::norm(c);
    const double parseval = std::pow(2 * pi, 1.5) * std::sqrt(sum);
    CHECK(rel_err(lp_norm(h, 2.0), parseval) < 1e-12);
  }

  SUBCASE("rejects non-real fields and bad exponents") {
    ScalarField bad(g, false);
    bad.set_mode(kvec(1, 0, 0), Complex(1.0, 0.0));
    CHECK_THROWS_AS(lp_norm(bad, 2.0), PreconditionError);
    CHECK_THROWS_AS(lp_norm(f, 0.5), PreconditionError);
  }
}

TEST_CASE("leray projection calculus") {
  GridPtr g = make_grid(3, 16, 2 * pi);

  SUBCASE("hand-computed single mode: xi = (1,0,0), u = (1,1,0)") {
    VectorField u(g, false);
    u.comp[0].set_mode(kvec(1, 0, 0), Complex(1.0, 0.0));
    u.comp[1].set_mode(kvec(1, 0, 0), Complex(1.0, 0.0));
    for (auto& c : u.comp) c.real_valued = false;
    VectorField p = leray_project(u);
    CHECK(std::abs(p.comp[0].mode(kvec(1, 0, 0))) < 1e-15);
    CHECK(std::abs(p.comp[1].mode(kvec(1, 0, 0)) - Complex(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(p.comp[2].mode(kvec(1, 0, 0))) < 1e-15);
  }

  SUBCASE("P fixes solenoidal fields, annihilates gradients") {
    VectorField u = random_solenoidal(g, unit_band(*g), 17);
    CHECK(relative_l2_error(leray_project(u), u) < 1e-13);

    ScalarField phi = random_field(g, unit_band(*g), 19);
    VectorField grad_phi = gradient(phi);
    VectorField p = leray_project(grad_phi);
    CHECK(p.max_abs() < 1e-13 * grad_phi.max_abs());
    CHECK(relative_l2_error(gradient_part(grad_phi), grad_phi) < 1e-13);
  }

  SUBCASE("projection algebra on a random field") {
    VectorField u(g, true);
    for (int d = 0; d < 3; ++d)
      u.comp[static_cast<std::size_t>(d)] = random_field(
          g, unit_band(*g), 100 + static_cast<std::uint64_t>(d));
    VectorField p = leray_project(u);
    VectorField q = gradient_part(u);

    // P + Q = I (same per-mode quotient on both sides)
    VectorField sum = p;
    sum += q;
    CHECK(relative_l2_error(sum, u) < 1e-13);

    // P^2 = P, Q^2 = Q, PQ = 0, div P u = 0
    CHECK(relative_l2_error(leray_project(p), p) < 1e-13);
    CHECK(relative_l2_error(gradient_part(q), q) < 1e-13);
    CHECK(gradient_part(p).max_abs() < 1e-13 * u.max_abs());
    CHECK(leray_project(q).max_abs() < 1e-13 * u.max_abs());
    CHECK(p.divergence_ratio() < 1e-12);

    // orthogonality and norm contraction in a few Sobolev indices
    for (double s : {-1.0, 0.0, 0.5, 1.5}) {
      const double inner = hdot_inner(p, q, s);
      CHECK(std::abs(inner) <
            1e-12 * hdot_norm(p, s) * std::max(hdot_norm(q, s), 1e-300));
      CHECK(hdot_norm(p, s) <= hdot_norm(u, s) * (1 + 1e-13));
      CHECK(hdot_norm(q, s) <= hdot_norm(u, s) * (1 + 1e-13));
    }
  }
}

TEST_CASE("advection: hand derivative, skew symmetry, dealiasing") {
  GridPtr g = make_grid(3, 16, 2 * pi);

  SUBCASE("u = e_1 (zero-mode velocity), f = sin(x_1) gives cos(x_1)") {
    VectorField u(g, true);
    u.comp[0].set_hermitian_mode(kvec(0, 0, 0), Complex(1.0, 0.0));
    u.solenoidal = true;
    ScalarField f(g, true);
    // sin(x_1): coefficients -i/2 at +e_1, i/2 at -e_1
    f.set_hermitian_mode(kvec(1, 0, 0), Complex(0.0, -0.5));
    ScalarField out = advect(u, f);
    ScalarField expected(g, true);
    expected.set_hermitian_mode(kvec(1, 0, 0), Complex(0.5, 0.0));
    CHECK(relative_l2_error(out, expected) < 1e-13);
  }

  SUBCASE("u = 0 gives the zero field") {
    VectorField u(g, true);
    u.solenoidal = true;
    ScalarField f = random_field(g, unit_band(*g), 23);
    CHECK(advect(u, f).max_abs() == 0.0);
  }

  SUBCASE("dealiased advection is L2-skew against solenoidal velocity") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull}) {
      VectorField u = random_solenoidal(g, unit_band(*g), seed);
      ScalarField f = random_field(g, unit_band(*g), seed + 50);
      const double pairing = l2_inner(advect(u, f), f);
      const double scale =
          hdot_norm(u, 0.0) * lp_norm(f, 2.0) * lp_norm(f, 2.0);
      CHECK(std::abs(pairing) < 1e-10 * scale);
    }
  }

  SUBCASE("products agree with the sparse convolution oracle") {
    ScalarField f(g, true), h(g, true);
    f.set_hermitian_mode(kvec(1, 2, 0), Complex(0.7, 0.3));
    f.set_hermitian_mode(kvec(0, 1, 1), Complex(-0.2, 0.5));
    h.set_hermitian_mode(kvec(2, 0, -1), Complex(0.4, -0.6));
    h.set_hermitian_mode(kvec(1, 0, 0), Complex(1.1, 0.0));
    CHECK(relative_l2_error(dealiased_product(f, h), convolve_oracle(f, h)) <
          1e-13);
  }

  SUBCASE("output stays inside the 2/3 band") {
    VectorField u = random_solenoidal(g, unit_band(*g), 31);
    ScalarField f = random_field(g, unit_band(*g), 32);
    ScalarField out = advect(u, f);
    for (std::size_t idx = 0; idx < g->size(); ++idx)
      if (!g->in_dealias_band(idx)) CHECK(std::abs(out.coeffs[idx]) == 0.0);
  }

  SUBCASE("grid mismatch is rejected") {
    GridPtr g2 = make_grid(3, 12, 2 * pi);
    VectorField u = random_solenoidal(g, unit_band(*g), 33);
    ScalarField f = random_field(g2, unit_band(*g2), 34);
    CHECK_THROWS_AS(advect(u, f), PreconditionError);
  }
}

TEST_CASE("random fields: determinism, targets, solenoidality, errors") {
  GridPtr g = make_grid(3, 16, 2 * pi);
  const double xi = g->xi_unit();

  SUBCASE("norm target hit exactly and bitwise determinism") {
    SpectrumSpec spec = SpectrumSpec::gaussian(xi, 3 * xi, 2 * xi, xi,
                                               NormSpec::hdot(0.75), 0.01);
    ScalarField a = random_field(g, spec, 123);
    ScalarField b = random_field(g, spec, 123);
    CHECK(rel_err(hdot_norm(a, 0.75), 0.01) < 1e-12);
    CHECK(relative_l2_error(a, b) == 0.0);
    ScalarField c = random_field(g, spec, 124);
    CHECK(relative_l2_error(a, c) > 1e-3);
    CHECK(a.hermitian_defect() == 0.0);
    CHECK(std::abs(a.zero_mode()) == 0.0);
  }

  SUBCASE("solenoidal variant passes the divergence check") {
    SpectrumSpec spec = unit_band(*g, 0.5);
    VectorField u = random_solenoidal(g, spec, 9);
    CHECK(u.solenoidal);
    CHECK(u.divergence_ratio() < 1e-12);
    CHECK(rel_err(hdot_norm(u, 0.5), 1.0) < 1e-12);
  }

  SUBCASE("mode-keyed realizations match across resolutions") {
    GridPtr fine = make_grid(3, 32, 2 * pi);
    SpectrumSpec spec = unit_band(*g);
    ScalarField coarse_f = random_field(g, spec, 77);
    ScalarField fine_f = random_field(fine, spec, 77);
    // compare a few modes through the integer wavevector map
    for (auto k : {kvec(1, 0, 0), kvec(2, -1, 0), kvec(0, 1, 2)}) {
      CHECK(std::abs(coarse_f.mode(k) - fine_f.mode(k)) < 1e-13);
    }
  }

  SUBCASE("empty band and unreachable targets are rejected") {
    CHECK_THROWS_AS(
        random_field(g, SpectrumSpec::flat(50 * xi, 60 * xi,
                                           NormSpec::hdot(0.0), 1.0),
                     1),
        PreconditionError);
    CHECK_THROWS_AS(
        random_field(g, SpectrumSpec::flat(3 * xi, 2 * xi,
                                           NormSpec::hdot(0.0), 1.0),
                     1),
        PreconditionError);
  }
}

TEST_CASE("scaling criticality of the homogeneous norm") {
  // same coefficients reinterpreted on the box L/lambda with amplitudes
  // lambda^{2 alpha - 1}: invariant exactly at s0, off by lambda^{s - s0}
  const double alpha = 0.9;
  const int n = 3;
  const double s0 = 1.0 + 0.5 * n - 2.0 * alpha;
  const double lambda = 2.0;

  GridPtr g = make_grid(n, 16, 2 * pi);
  GridPtr shrunk = make_grid(n, 16, 2 * pi / lambda);
  ScalarField f = random_field(g, unit_band(*g), 55);
  ScalarField fs(shrunk, true);
  fs.coeffs = f.coeffs;
  fs *= std::pow(lambda, 2.0 * alpha - 1.0);

  CHECK(rel_err(hdot_norm(fs, s0), hdot_norm(f, s0)) < 1e-12);
  for (double s : {s0 + 0.5, s0 - 0.7}) {
    const double expected = std::pow(lambda, s - s0) * hdot_norm(f, s);
    CHECK(rel_err(hdot_norm(fs, s), expected) < 1e-12);
  }
}

TEST_CASE("snapshot io round trips") {
  GridPtr g = make_grid(2, 12, 2 * pi);
  const auto dir = std::filesystem::temp_directory_path();

  SUBCASE("scalar") {
    ScalarField f = random_field(g, unit_band(*g), 99);
    const auto path = dir / "fbs_test_scalar.fbsf";
    write_snapshot(path, f);
    ScalarField back = read_scalar_snapshot(path);
    CHECK(back.grid->same_as(*g));
    CHECK(back.real_valued == f.real_valued);
    CHECK(relative_l2_error(back, f) == 0.0);
    std::filesystem::remove(path);
  }

  SUBCASE("vector with flags") {
    VectorField u = random_solenoidal(g, unit_band(*g), 98);
    const auto path = dir / "fbs_test_vector.fbsf";
    write_snapshot(path, u);
    VectorField back = read_vector_snapshot(path);
    CHECK(back.solenoidal);
    CHECK(relative_l2_error(back, u) == 0.0);
    std::filesystem::remove(path);
  }

  SUBCASE("corrupted magic is rejected") {
    const auto path = dir / "fbs_test_bad.fbsf";
    {
      std::ofstream os(path, std::ios::binary);
      os << "not a snapshot";
    }
    CHECK_THROWS_AS(read_scalar_snapshot(path), IoError);
    std::filesystem::remove(path);
  }
}
