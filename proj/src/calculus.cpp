#include "fbs/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fbs/advection.hpp"
#include "fbs/corpus.hpp"
#include "fbs/errors.hpp"
#include "fbs/norms.hpp"

namespace fbs {

std::string to_string(InequalityId id) {
  switch (id) {
    case InequalityId::KPV: return "kpv";
    case InequalityId::Product: return "product";
    case InequalityId::UF1: return "uf1";
    case InequalityId::UF2: return "uf2";
    case InequalityId::UF3: return "uf3";
    case InequalityId::Embedding: return "embedding";
    case InequalityId::Interpolation: return "interpolation";
  }
  return "unknown";
}

CorpusSpec::CorpusSpec()
    : L(2.0 * std::numbers::pi),
      resolutions{16, 32},
      seeds(committed_seeds()) {}

SpectrumSpec corpus_band(const SpectralGrid& grid, int which) {
  const double xi = grid.xi_unit();
  // capped at the N = 16 dealias band so refinement sees the same field
  const int cap = std::min(grid.dealias_limit(), 5);
  if (cap < 2)
    throw PreconditionError("corpus_band: grid too coarse for the corpus");
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
                                NormSpec::hdot(0.0), 1.0);
}

ScalarField commutator(const ScalarField& f, const ScalarField& g, double s) {
  if (!(s > 0.0 && s < 1.0))
    throw PreconditionError(
        "commutator: requires 0 < s < 1 (the commutator estimate's regime)");
  require_same_grid(*f.grid, *g.grid, "commutator");
  ScalarField out = lambda_power(dealiased_product(f, g), s);
  out -= dealiased_product(lambda_power(f, s), g);
  out -= dealiased_product(f, lambda_power(g, s));
  return out;
}

namespace {

void check_close(double a, double b, const char* what) {
  if (std::abs(a - b) > 1e-12 * std::max({std::abs(a), std::abs(b), 1.0})) {
    std::ostringstream os;
    os << what << " (got " << a << ", needs " << b << ")";
    throw PreconditionError(os.str());
  }
}

// Runs `sample` over (resolution, seed), skipping RHS below the floor, and
// assembles max/median plus the per-resolution max list.
template <class SampleFn>
RatioReport run_audit(InequalityId id, const CorpusSpec& corpus,
                      std::map<std::string, double> exponents,
                      SampleFn sample) {
  if (corpus.resolutions.empty() || corpus.seeds.empty())
    throw PreconditionError("audit: corpus needs resolutions and seeds");
  for (std::size_t i = 1; i < corpus.resolutions.size(); ++i)
    if (corpus.resolutions[i] <= corpus.resolutions[i - 1])
      throw PreconditionError("audit: resolutions must be strictly increasing");

  RatioReport rep;
  rep.id = id;
  rep.exponents = std::move(exponents);
  std::vector<double> ratios;
  for (int N : corpus.resolutions) {
    GridPtr grid = make_grid(corpus.n, N, corpus.L);
    double res_max = 0.0;
    for (std::uint64_t seed : corpus.seeds) {
      auto [lhs, rhs] = sample(grid, seed);
      if (rhs < kAuditRhsFloor) continue;
      const double ratio = lhs / rhs;
      rep.samples.push_back({seed, N, lhs, rhs, ratio});
      ratios.push_back(ratio);
      res_max = std::max(res_max, ratio);
    }
    rep.resolutions.push_back(N);
    rep.per_resolution_max.push_back(res_max);
  }
  rep.sample_count = static_cast<int>(ratios.size());
  rep.max_ratio = ratios.empty() ? 0.0 : *std::max_element(ratios.begin(), ratios.end());
  std::sort(ratios.begin(), ratios.end());
  rep.median_ratio = ratios.empty() ? 0.0 : ratios[ratios.size() / 2];
  return rep;
}

ScalarField corpus_field(GridPtr grid, std::uint64_t seed,
                         std::uint64_t stream) {
  return random_field(grid, corpus_band(*grid, static_cast<int>(seed % 3)),
                      seed_stream(seed, stream));
}

VectorField corpus_solenoidal(GridPtr grid, std::uint64_t seed,
                              std::uint64_t stream) {
  return random_solenoidal(grid, corpus_band(*grid, static_cast<int>(seed % 3)),
                           seed_stream(seed, stream));
}

}  // namespace

RatioReport audit_kpv(const CorpusSpec& corpus, double s, double s1, double s2,
                      double p, double q, double r) {
  if (!(s > 0.0 && s < 1.0) || !(s1 > 0.0 && s1 < 1.0) ||
      !(s2 > 0.0 && s2 < 1.0))
    throw PreconditionError("audit_kpv: requires 0 < s, s1, s2 < 1");
  check_close(s1 + s2, 1.0, "audit_kpv: requires s1 + s2 = 1");
  if (!(p > 1.0) || !(q > 1.0) || !(r > 1.0))
    throw PreconditionError("audit_kpv: requires 1 < p, q, r < inf");
  check_close(1.0 / p, 1.0 / q + 1.0 / r,
              "audit_kpv: requires the Hoelder relation 1/p = 1/q + 1/r");

  return run_audit(
      InequalityId::KPV, corpus,
      {{"s", s}, {"s1", s1}, {"s2", s2}, {"p", p}, {"q", q}, {"r", r}},
      [&](GridPtr grid, std::uint64_t seed) {
        ScalarField f = corpus_field(grid, seed, 11);
        ScalarField g = corpus_field(grid, seed, 13);
        const double lhs = lp_norm(commutator(f, g, s), p);
        const double rhs =
            lp_norm(lambda_power(f, s1), q) * lp_norm(lambda_power(g, s2), r);
        return std::make_pair(lhs, rhs);
      });
}

RatioReport audit_product(const CorpusSpec& corpus, double s, double s1,
                          double s2) {
  const double half_n = 0.5 * corpus.n;
  if (!(std::abs(s) < half_n))
    throw PreconditionError("audit_product: requires |s| < n/2");
  const double lo = std::max(s, 0.0);
  if (!(s1 > lo && s1 < half_n && s2 > lo && s2 < half_n))
    throw PreconditionError(
        "audit_product: requires max(s,0) < s1, s2 < n/2");
  check_close(s1 + s2, s + half_n,
              "audit_product: requires s1 + s2 = s + n/2");

  return run_audit(InequalityId::Product, corpus,
                   {{"s", s}, {"s1", s1}, {"s2", s2}},
                   [&](GridPtr grid, std::uint64_t seed) {
                     ScalarField f = corpus_field(grid, seed, 11);
                     ScalarField g = corpus_field(grid, seed, 13);
                     const double lhs =
                         hdot_norm(dealiased_product(f, g), s);
                     const double rhs = hdot_norm(f, s1) * hdot_norm(g, s2);
                     return std::make_pair(lhs, rhs);
                   });
}

RatioReport audit_advection(const CorpusSpec& corpus, AdvectionVariant variant,
                            double alpha, double eps) {
  const int n = corpus.n;
  if (variant == AdvectionVariant::UF3) {
    if (!(alpha > 0.5 && alpha < 1.0 / 3.0 + n / 6.0)) {
      std::ostringstream os;
      os << "audit_advection: UF3 requires 1/2 < alpha < 1/3 + n/6 = "
         << 1.0 / 3.0 + n / 6.0 << " (got alpha = " << alpha << ")";
      throw PreconditionError(os.str());
    }
  } else {
    if (!(alpha > 0.5 && alpha < 0.5 + n / 4.0)) {
      std::ostringstream os;
      os << "audit_advection: requires 1/2 < alpha < 1/2 + n/4 = "
         << 0.5 + n / 4.0 << " (got alpha = " << alpha << ")";
      throw PreconditionError(os.str());
    }
  }
  if (!(eps >= 0.0 && eps < std::min(2.0 * alpha - 1.0, alpha)))
    throw PreconditionError(
        "audit_advection: requires 0 <= eps < min(2 alpha - 1, alpha)");

  const double s0 = 1.0 + 0.5 * n - 2.0 * alpha;
  InequalityId id = variant == AdvectionVariant::UF1   ? InequalityId::UF1
                    : variant == AdvectionVariant::UF2 ? InequalityId::UF2
                                                       : InequalityId::UF3;
  return run_audit(
      id, corpus, {{"alpha", alpha}, {"eps", eps}, {"s0", s0}},
      [&, variant](GridPtr grid, std::uint64_t seed) {
        VectorField u = corpus_solenoidal(grid, seed, 17);
        ScalarField f = corpus_field(grid, seed, 19);
        double lhs = 0.0, rhs = 0.0;
        switch (variant) {
          case AdvectionVariant::UF1:
            lhs = hdot_norm(advect(u, f), s0 - alpha);
            rhs = hdot_norm(u, s0 + eps) * hdot_norm(f, s0 + alpha - eps);
            break;
          case AdvectionVariant::UF2:
            lhs = hdot_norm(advect_divergence_form(u, f), s0 - 2.0 * alpha);
            rhs = hdot_norm(u, s0 + eps) * hdot_norm(f, s0 - eps);
            break;
          case AdvectionVariant::UF3:
            lhs = hdot_norm(advect_divergence_form(u, f), s0 - 3.0 * alpha);
            rhs = hdot_norm(u, s0 + eps) * hdot_norm(f, s0 - alpha - eps);
            break;
        }
        return std::make_pair(lhs, rhs);
      });
}

double embedding_exponent(int n, double s) {
  if (!(std::abs(s) < 0.5 * n))
    throw PreconditionError("embedding_exponent: requires |s| < n/2");
  return 2.0 * n / (n - 2.0 * s);
}

RatioReport audit_embedding(const CorpusSpec& corpus, double s) {
  const double p = embedding_exponent(corpus.n, s);
  return run_audit(InequalityId::Embedding, corpus, {{"s", s}, {"p", p}},
                   [&](GridPtr grid, std::uint64_t seed) {
                     ScalarField f = corpus_field(grid, seed, 11);
                     const double hs = hdot_norm(f, s);
                     const double lp = lp_norm(f, p);
                     // Hdot^s -> L^p for s >= 0, L^p -> Hdot^s for s < 0
                     return s >= 0.0 ? std::make_pair(lp, hs)
                                     : std::make_pair(hs, lp);
                   });
}

std::pair<double, double> check_interpolation(const ScalarField& f,
                                              double s_lo, double s_hi,
                                              double s_mid) {
  if (!(s_lo < s_mid && s_mid < s_hi))
    throw PreconditionError(
        "check_interpolation: requires s_lo < s_mid < s_hi");
  const double t = (s_mid - s_lo) / (s_hi - s_lo);
  const double lhs = hdot_norm(f, s_mid);
  const double rhs =
      std::pow(hdot_norm(f, s_lo), 1.0 - t) * std::pow(hdot_norm(f, s_hi), t);
  return {lhs, rhs};
}

}  // namespace fbs
