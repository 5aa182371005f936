#include "fbs/cli.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <set>

#include "fbs/advection.hpp"
#include "fbs/calculus.hpp"
#include "fbs/corpus.hpp"
#include "fbs/errors.hpp"
#include "fbs/projection.hpp"
#include "fbs/random_field.hpp"
#include "fbs/reports.hpp"
#include "fbs/semigroup.hpp"
#include "fbs/snapshot.hpp"
#include "fbs/solver.hpp"
#include "fbs/version.hpp"

namespace fbs::cli {

std::optional<Command> parse_command(std::string_view name) {
  if (name == "solve") return Command::Solve;
  if (name == "calculus-audit") return Command::CalculusAudit;
  if (name == "semigroup-audit") return Command::SemigroupAudit;
  if (name == "scaling-check") return Command::ScalingCheck;
  if (name == "constants") return Command::Constants;
  if (name == "uniqueness-probe") return Command::UniquenessProbe;
  return std::nullopt;
}

std::string to_string(Command c) {
  switch (c) {
    case Command::Solve: return "solve";
    case Command::CalculusAudit: return "calculus-audit";
    case Command::SemigroupAudit: return "semigroup-audit";
    case Command::ScalingCheck: return "scaling-check";
    case Command::Constants: return "constants";
    case Command::UniquenessProbe: return "uniqueness-probe";
  }
  return "unknown";
}

namespace {

// Strict object reader: every field must be consumed, unknown fields are
// config errors named by their full path.
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string ctx) : j_(j), ctx_(std::move(ctx)) {
    if (!j_.is_object())
      throw ConfigError(ctx_ + ": expected a JSON object");
  }

  const Json& at(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end())
      throw ConfigError(ctx_ + "." + key + ": missing required field");
    return *it;
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  double number(const std::string& key) {
    const Json& v = at(key);
    if (!v.is_number())
      throw ConfigError(ctx_ + "." + key + ": expected a number");
    return v.get<double>();
  }

  int integer(const std::string& key) {
    const Json& v = at(key);
    if (!v.is_number_integer())
      throw ConfigError(ctx_ + "." + key + ": expected an integer");
    return v.get<int>();
  }

  std::string text(const std::string& key) {
    const Json& v = at(key);
    if (!v.is_string())
      throw ConfigError(ctx_ + "." + key + ": expected a string");
    return v.get<std::string>();
  }

  bool boolean(const std::string& key) {
    const Json& v = at(key);
    if (!v.is_boolean())
      throw ConfigError(ctx_ + "." + key + ": expected a boolean");
    return v.get<bool>();
  }

  std::vector<double> number_list(const std::string& key) {
    const Json& v = at(key);
    if (!v.is_array())
      throw ConfigError(ctx_ + "." + key + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number())
        throw ConfigError(ctx_ + "." + key + ": expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::vector<int> integer_list(const std::string& key) {
    const Json& v = at(key);
    if (!v.is_array())
      throw ConfigError(ctx_ + "." + key + ": expected an array of integers");
    std::vector<int> out;
    for (const auto& e : v) {
      if (!e.is_number_integer())
        throw ConfigError(ctx_ + "." + key +
                          ": expected an array of integers");
      out.push_back(e.get<int>());
    }
    return out;
  }

  const std::string& context() const { return ctx_; }

  void done() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key()))
        throw ConfigError(ctx_ + "." + it.key() + ": unknown field");
  }

 private:
  const Json& j_;
  std::string ctx_;
  std::set<std::string> seen_;
};

SolverConfig read_solver_config(const Json& j, const std::string& ctx) {
  ObjectReader r(j, ctx);
  SolverConfig cfg;
  cfg.n = r.integer("n");
  cfg.alpha = r.number("alpha");
  cfg.T = r.number("T");
  cfg.N = r.integer("N");
  cfg.L = r.number("L");
  cfg.M = r.integer("M");
  cfg.picard_tol = r.number("picard_tol");
  cfg.picard_max_iters = r.integer("picard_max_iters");
  const std::string mode = r.text("mode");
  if (mode == "finite_horizon")
    cfg.mode = SolverMode::FiniteHorizon;
  else if (mode == "global_scaling")
    cfg.mode = SolverMode::GlobalScaling;
  else
    throw ConfigError(ctx + ".mode: expected \"finite_horizon\" or "
                            "\"global_scaling\", got \"" + mode + "\"");
  r.done();
  return cfg;
}

std::vector<std::uint64_t> effective_seeds(const ExperimentPlan& plan,
                                           int count) {
  if (!plan.seeds.empty()) return plan.seeds;
  return committed_seeds(count);
}

SpectrumSpec read_band(const Json& j, const std::string& ctx, NormSpec target,
                       double value) {
  ObjectReader r(j, ctx);
  const double q_min = r.number("q_min");
  const double q_max = r.number("q_max");
  const std::string profile = r.text("profile");
  SpectrumSpec spec;
  if (profile == "flat") {
    spec = SpectrumSpec::flat(q_min, q_max, target, value);
  } else if (profile == "gaussian") {
    spec = SpectrumSpec::gaussian(q_min, q_max, r.number("center"),
                                  r.number("width"), target, value);
  } else {
    throw ConfigError(ctx + ".profile: expected \"flat\" or \"gaussian\"");
  }
  r.done();
  return spec;
}

struct InitialData {
  VectorField u0;
  ScalarField theta0;
};

InitialData build_initial_data(const Json& j, const SolverConfig& cfg,
                               const MapConstants& constants,
                               const std::filesystem::path& config_dir) {
  ObjectReader r(j, "initial_data");
  const std::string kind = r.text("kind");
  if (kind == "files") {
    auto resolve = [&](const std::string& p) {
      std::filesystem::path path(p);
      return path.is_absolute() ? path : config_dir / path;
    };
    InitialData data{read_vector_snapshot(resolve(r.text("u"))),
                     read_scalar_snapshot(resolve(r.text("theta")))};
    r.done();
    return data;
  }
  if (kind != "random")
    throw ConfigError("initial_data.kind: expected \"random\" or \"files\"");

  const auto u_seed = static_cast<std::uint64_t>(r.integer("u_seed"));
  const auto theta_seed = static_cast<std::uint64_t>(r.integer("theta_seed"));

  double u_norm = 0.0, theta_norm = 0.0;
  {
    ObjectReader a(r.at("amplitude"), "initial_data.amplitude");
    const std::string akind = a.text("kind");
    if (akind == "absolute") {
      u_norm = a.number("u_norm");
      theta_norm = a.number("theta_norm");
    } else if (akind == "threshold_fraction") {
      const double fraction = a.number("fraction");
      const double ksum = constants.k2 + constants.k3;
      if (!(ksum > 0.0))
        throw PreconditionError(
            "initial_data.amplitude: threshold_fraction needs measured "
            "constants k2 + k3 > 0");
      const double budget = fraction / (96.0 * ksum);
      u_norm = 0.5 * budget;
      theta_norm = 0.5 * budget / cfg.theta_weight(constants.k1);
    } else {
      throw ConfigError(
          "initial_data.amplitude.kind: expected \"absolute\" or "
          "\"threshold_fraction\"");
    }
    a.done();
  }

  GridPtr grid = cfg.make_solver_grid();
  SpectrumSpec u_band = read_band(r.at("band"), "initial_data.band",
                                  NormSpec::hdot(cfg.s0()), u_norm);
  SpectrumSpec theta_band =
      read_band(r.at("band"), "initial_data.band",
                NormSpec::hdot(cfg.theta_data_index()), theta_norm);
  InitialData data{random_solenoidal(grid, u_band, u_seed),
                   random_field(grid, theta_band, theta_seed)};
  r.done();
  return data;
}

MapConstants resolve_constants(const Json& j, const SolverConfig& cfg,
                               const ExperimentPlan& plan) {
  ObjectReader r(j, "constants");
  if (r.has("k1")) {
    MapConstants k;
    k.k1 = r.number("k1");
    k.k2 = r.number("k2");
    k.k3 = r.number("k3");
    r.done();
    return k;
  }
  ObjectReader e(r.at("estimate"), "constants.estimate");
  ConstantsCorpusSpec corpus;
  corpus.seeds = effective_seeds(plan, e.integer("seed_count"));
  corpus.M = e.integer("M");
  e.done();
  r.done();
  return estimate_constants(cfg, corpus);
}

void write_manifest(const ExperimentPlan& plan, const std::string& config_text,
                    const std::vector<std::uint64_t>& seeds) {
  Json m;
  m["command"] = to_string(plan.command);
  m["version"] = kVersion;
  m["config_path"] = plan.config_path.string();
  m["config_sha256"] = sha256_hex(config_text);
  m["seeds"] = seeds;
  m["threads"] = plan.threads;
  m["float_format"] = "%.17g";
  write_text_file(plan.out_dir / "manifest.json", dump_json(m));
}

void log_line(const ExperimentPlan& plan, const std::string& line) {
  if (plan.verbosity > 0) std::cout << line << "\n";
}

// Per-node residual norms of both equations, dt through the stored forcing.
std::pair<std::vector<double>, std::vector<double>> node_residuals(
    const BoussinesqState& state, const SolverConfig& cfg) {
  const int axis = cfg.n - 1;
  const std::size_t nodes = state.u.states.size();
  std::vector<double> res_u(nodes), res_theta(nodes);
  for (std::size_t m = 0; m < nodes; ++m) {
    AdvectionPair nl = advect_pair(state.u.states[m], state.u.states[m],
                                   state.theta.states[m]);
    VectorField ru = state.u.time_derivative(static_cast<int>(m));
    ru += lambda_power(state.u.states[m], 2.0 * cfg.alpha);
    ru += nl.momentum;
    if (m < state.grad_pi.states.size()) ru += state.grad_pi.states[m];
    ru -= embed_along_axis(state.theta.states[m], axis);
    res_u[m] = hdot_norm(ru, cfg.s0() - cfg.alpha);

    ScalarField rt = state.theta.time_derivative(static_cast<int>(m));
    rt += lambda_power(state.theta.states[m], 2.0 * cfg.alpha);
    rt += nl.temperature;
    res_theta[m] = hdot_norm(rt, cfg.y_indices().low);
  }
  return {std::move(res_u), std::move(res_theta)};
}

void write_series_csv(const std::filesystem::path& path,
                      const BoussinesqState& state, const SolverConfig& cfg) {
  CsvWriter csv({"t", "u_hdot_s0", "u_hdot_s0_plus_alpha", "theta_hdot_peak",
                 "theta_hdot_mid", "residual_momentum", "residual_temperature"});
  auto [res_u, res_theta] = node_residuals(state, cfg);
  const NormTriple yi = cfg.y_indices();
  for (std::size_t m = 0; m < state.u.states.size(); ++m) {
    const double t = state.u.time_at(static_cast<int>(m));
    csv.add_row({CsvWriter::cell(t),
                 CsvWriter::cell(hdot_norm(state.u.states[m], cfg.s0())),
                 CsvWriter::cell(hdot_norm(state.u.states[m], cfg.s0() + cfg.alpha)),
                 CsvWriter::cell(hdot_norm(state.theta.states[m], yi.peak)),
                 CsvWriter::cell(hdot_norm(state.theta.states[m], yi.mid)),
                 CsvWriter::cell(res_u[m]), CsvWriter::cell(res_theta[m])});
  }
  csv.write(path);
}

double state_difference(const BoussinesqState& a, const BoussinesqState& b,
                        const SolverConfig& cfg) {
  double diff = 0.0;
  for (std::size_t m = 0; m < a.u.states.size(); ++m) {
    VectorField du = a.u.states[m];
    du -= b.u.states[m];
    ScalarField dth = a.theta.states[m];
    dth -= b.theta.states[m];
    diff = std::max(diff, hdot_norm(du, cfg.s0()) +
                              hdot_norm(dth, cfg.theta_data_index()));
  }
  return diff;
}

int run_solve(const ExperimentPlan& plan, const Json& config,
              const std::string& config_text) {
  ObjectReader r(config, "config");
  SolverConfig cfg = read_solver_config(r.at("solver"), "solver");
  cfg.validate();
  MapConstants constants = resolve_constants(r.at("constants"), cfg, plan);
  InitialData data = build_initial_data(r.at("initial_data"), cfg, constants,
                                        plan.config_path.parent_path());
  const bool cross_check = r.boolean("cross_check");
  r.done();

  log_line(plan, "solve: picard iteration on " + std::to_string(cfg.N) +
                     "^" + std::to_string(cfg.n) + " grid, M = " +
                     std::to_string(cfg.M));
  auto [state, report] = picard_solve(data.u0, data.theta0, cfg, constants);

  Json out;
  out["config"] = to_json(cfg);
  out["report"] = to_json(report);

  if (cross_check && report.converged) {
    auto [etd_state, richardson] =
        etd_march_with_richardson(data.u0, data.theta0, cfg);
    const double diff = state_difference(state, etd_state, cfg);
    const double tolerance = 10.0 * (cfg.picard_tol + richardson);
    Json cc;
    cc["richardson_estimate"] = richardson;
    cc["difference"] = diff;
    cc["tolerance"] = tolerance;
    cc["pass"] = diff <= tolerance;
    out["etd_cross_check"] = cc;
  }

  write_text_file(plan.out_dir / "report.json", dump_json(out));
  write_series_csv(plan.out_dir / "series.csv", state, cfg);
  if (!state.u.states.empty()) {
    write_snapshot(plan.out_dir / "u_final.fbsf", state.u.states.back());
    write_snapshot(plan.out_dir / "theta_final.fbsf",
                   state.theta.states.back());
    if (!state.grad_pi.states.empty())
      write_snapshot(plan.out_dir / "grad_pi_final.fbsf",
                     state.grad_pi.states.back());
  }
  write_manifest(plan, config_text, plan.seeds);
  log_line(plan, report.converged ? "solve: converged in " +
                                        std::to_string(report.iterations) +
                                        " iterations"
                                  : "solve: did NOT converge");
  return report.converged ? kExitOk : kExitNoConvergence;
}

int run_calculus_audit(const ExperimentPlan& plan, const Json& config,
                       const std::string& config_text) {
  ObjectReader r(config, "config");
  CorpusSpec corpus;
  {
    ObjectReader c(r.at("corpus"), "corpus");
    corpus.n = c.integer("n");
    corpus.L = c.number("L");
    corpus.resolutions = c.integer_list("resolutions");
    corpus.seeds = effective_seeds(plan, c.integer("seed_count"));
    c.done();
  }

  const Json& audits = r.at("audits");
  if (!audits.is_array())
    throw ConfigError("audits: expected an array of audit objects");
  r.done();

  Json summary = Json::array();
  CsvWriter csv(kAuditCsvHeader);
  for (std::size_t i = 0; i < audits.size(); ++i) {
    const std::string ctx = "audits[" + std::to_string(i) + "]";
    ObjectReader a(audits[i], ctx);
    const std::string id = a.text("inequality");
    RatioReport rep;
    if (id == "kpv") {
      rep = audit_kpv(corpus, a.number("s"), a.number("s1"), a.number("s2"),
                      a.number("p"), a.number("q"), a.number("r"));
    } else if (id == "product") {
      rep = audit_product(corpus, a.number("s"), a.number("s1"),
                          a.number("s2"));
    } else if (id == "uf1" || id == "uf2" || id == "uf3") {
      AdvectionVariant variant = id == "uf1"   ? AdvectionVariant::UF1
                                 : id == "uf2" ? AdvectionVariant::UF2
                                               : AdvectionVariant::UF3;
      rep = audit_advection(corpus, variant, a.number("alpha"),
                            a.number("eps"));
    } else if (id == "embedding") {
      rep = audit_embedding(corpus, a.number("s"));
    } else if (id == "interpolation") {
      const double s_lo = a.number("s_lo");
      const double s_mid = a.number("s_mid");
      const double s_hi = a.number("s_hi");
      rep.id = InequalityId::Interpolation;
      rep.exponents = {{"s_lo", s_lo}, {"s_mid", s_mid}, {"s_hi", s_hi}};
      std::vector<double> ratios;
      for (int N : corpus.resolutions) {
        GridPtr grid = make_grid(corpus.n, N, corpus.L);
        double res_max = 0.0;
        for (std::uint64_t seed : corpus.seeds) {
          ScalarField f = random_field(
              grid, corpus_band(*grid, static_cast<int>(seed % 3)),
              seed_stream(seed, 11));
          auto [lhs, rhs] = check_interpolation(f, s_lo, s_hi, s_mid);
          if (rhs < kAuditRhsFloor) continue;
          rep.samples.push_back({seed, N, lhs, rhs, lhs / rhs});
          ratios.push_back(lhs / rhs);
          res_max = std::max(res_max, lhs / rhs);
        }
        rep.resolutions.push_back(N);
        rep.per_resolution_max.push_back(res_max);
      }
      rep.sample_count = static_cast<int>(ratios.size());
      if (!ratios.empty()) {
        rep.max_ratio = *std::max_element(ratios.begin(), ratios.end());
        std::sort(ratios.begin(), ratios.end());
        rep.median_ratio = ratios[ratios.size() / 2];
      }
    } else {
      throw ConfigError(ctx + ".inequality: unknown inequality \"" + id +
                        "\"");
    }
    a.done();
    log_line(plan, "calculus-audit: " + id +
                       " max_ratio = " + format_double(rep.max_ratio));
    summary.push_back(to_json(rep));
    append_audit_csv_rows(csv, rep);
  }

  write_text_file(plan.out_dir / "summary.json", dump_json(summary));
  csv.write(plan.out_dir / "samples.csv");
  write_manifest(plan, config_text, corpus.seeds);
  return kExitOk;
}

ScalarTrajectory random_forcing_trajectory(GridPtr grid, double T, int M,
                                           double alpha, std::uint64_t seed) {
  ScalarField base = random_field(
      grid, corpus_band(*grid, static_cast<int>(seed % 3)), seed);
  ScalarTrajectory forcing;
  forcing.horizon = T;
  forcing.alpha = alpha;
  for (int m = 0; m <= M; ++m) {
    std::uint64_t stream = seed_stream(seed, 3000 + static_cast<std::uint64_t>(m));
    ScalarField node = base;
    node *= 2.0 * uniform01(stream) - 1.0;
    forcing.forcing.push_back(std::move(node));
  }
  forcing.states.resize(static_cast<std::size_t>(M) + 1,
                        ScalarField::zero(grid));
  return forcing;
}

int run_semigroup_audit(const ExperimentPlan& plan, const Json& config,
                        const std::string& config_text) {
  ObjectReader r(config, "config");
  GridPtr grid;
  {
    ObjectReader g(r.at("grid"), "grid");
    grid = make_grid(g.integer("n"), g.integer("N"), g.number("L"));
    g.done();
  }
  const double alpha = r.number("alpha");
  const double s = r.number("s");
  const int seed_count = r.integer("seed_count");
  std::vector<std::uint64_t> seeds = effective_seeds(plan, seed_count);

  Json summary;
  CsvWriter csv({"measurement", "parameter", "seed", "value", "bound"});

  {
    ObjectReader sm(r.at("smoothing"), "smoothing");
    const std::vector<double> cs = sm.number_list("gamma_over_alpha");
    const double t_min = sm.number("t_min");
    const double t_max = sm.number("t_max");
    const int t_points = sm.integer("t_points");
    sm.done();
    Json arr = Json::array();
    for (double c : cs) {
      const double gamma = c * alpha;
      const double bound = smoothing_bound(alpha, gamma);
      double sup = 0.0;
      for (std::uint64_t seed : seeds) {
        ScalarField f = random_field(
            grid, corpus_band(*grid, static_cast<int>(seed % 3)), seed);
        for (int i = 0; i < t_points; ++i) {
          const double t =
              t_min * std::pow(t_max / t_min,
                               static_cast<double>(i) / (t_points - 1));
          sup = std::max(sup, smoothing_ratio(f, t, alpha, gamma, s));
        }
      }
      Json e;
      e["gamma_over_alpha"] = c;
      e["sup_ratio"] = sup;
      e["bound"] = bound;
      e["pass"] = sup <= bound + 1e-6;
      arr.push_back(e);
      csv.add_row({"smoothing", format_double(c), "", format_double(sup),
                   format_double(bound)});
    }
    summary["smoothing"] = arr;
  }

  {
    ObjectReader mr(r.at("max_regularity"), "max_regularity");
    const std::vector<double> t_values = mr.number_list("T_values");
    const int M = mr.integer("M");
    const int mr_seeds = mr.integer("seed_count");
    mr.done();
    Json arr = Json::array();
    for (double T : t_values) {
      double worst = 0.0;
      for (int i = 0; i < mr_seeds; ++i) {
        const std::uint64_t seed = committed_seeds()[static_cast<std::size_t>(i) %
                                                     kCommittedSeeds.size()];
        ScalarTrajectory forcing =
            random_forcing_trajectory(grid, T, M, alpha, seed);
        worst = std::max(worst, max_regularity_ratio(forcing, alpha, s));
      }
      Json e;
      e["T"] = T;
      e["max_ratio"] = worst;
      e["bound"] = 3.0;
      arr.push_back(e);
      csv.add_row({"max_regularity", format_double(T), "",
                   format_double(worst), format_double(3.0)});
    }
    summary["max_regularity"] = arr;
  }

  {
    // integral characterization and the free-solution functional
    double worst_chint = 0.0, worst_alb = 0.0;
    for (std::uint64_t seed : seeds) {
      ScalarField a = random_field(
          grid, corpus_band(*grid, static_cast<int>(seed % 3)), seed);
      const double target = hdot_norm_sq(a, s + alpha);
      worst_chint = std::max(
          worst_chint, std::abs(char_integral(a, alpha, s) - target) / target);
      const double ratio =
          free_solution_functional(a, alpha, s).total / hdot_norm(a, s + alpha);
      worst_alb = std::max(worst_alb, ratio);
    }
    summary["char_integral_max_rel_error"] = worst_chint;
    summary["free_solution_max_ratio"] = worst_alb;
    summary["free_solution_bound"] = 3.0;
  }

  {
    ObjectReader dr(r.at("duhamel_rate"), "duhamel_rate");
    const double T = dr.number("T");
    std::vector<int> m_values = dr.integer_list("M_values");
    dr.done();
    if (m_values.size() < 3)
      throw PreconditionError(
          "duhamel_rate.M_values: need at least three refinement levels");
    // smooth forcing: errors between successive refinements, order from
    // consecutive error pairs
    ScalarField base1 = random_field(grid, corpus_band(*grid, 0), seeds[0]);
    ScalarField base2 = random_field(grid, corpus_band(*grid, 1), seeds[0] + 1);
    auto run_at = [&](int M) {
      ScalarTrajectory forcing;
      forcing.horizon = T;
      forcing.alpha = alpha;
      for (int m = 0; m <= M; ++m) {
        const double t = T * m / M;
        ScalarField node = base1;
        node *= std::cos(5.0 * t);
        ScalarField n2 = base2;
        n2 *= std::sin(3.0 * t + 1.0);
        node += n2;
        forcing.forcing.push_back(std::move(node));
      }
      forcing.states.resize(static_cast<std::size_t>(M) + 1,
                            ScalarField::zero(grid));
      return duhamel(std::move(forcing), alpha);
    };
    std::vector<double> errors;
    ScalarTrajectory prev = run_at(m_values[0]);
    for (std::size_t i = 1; i < m_values.size(); ++i) {
      if (m_values[i] != 2 * m_values[i - 1])
        throw PreconditionError("duhamel_rate.M_values: must double each step");
      ScalarTrajectory fine = run_at(m_values[i]);
      ScalarField diff = prev.states.back();
      diff -= fine.states.back();
      errors.push_back(hdot_norm(diff, s));
      prev = std::move(fine);
    }
    Json arr = Json::array();
    for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
      const double rate = std::log2(errors[i] / errors[i + 1]);
      Json e;
      e["M"] = m_values[i + 1];
      e["rate"] = rate;
      arr.push_back(e);
      csv.add_row({"duhamel_rate", CsvWriter::cell(m_values[i + 1]), "",
                   format_double(rate), format_double(2.0)});
    }
    summary["duhamel_rate"] = arr;
  }
  r.done();

  write_text_file(plan.out_dir / "summary.json", dump_json(summary));
  csv.write(plan.out_dir / "ratios.csv");
  write_manifest(plan, config_text, seeds);
  return kExitOk;
}

int run_constants(const ExperimentPlan& plan, const Json& config,
                  const std::string& config_text) {
  ObjectReader r(config, "config");
  SolverConfig cfg = read_solver_config(r.at("solver"), "solver");
  cfg.validate();
  ConstantsCorpusSpec corpus;
  {
    ObjectReader c(r.at("corpus"), "corpus");
    corpus.seeds = effective_seeds(plan, c.integer("seed_count"));
    corpus.M = c.integer("M");
    c.done();
  }
  std::vector<double> t_values;
  std::vector<int> n_values;
  {
    ObjectReader st(r.at("stability"), "stability");
    t_values = st.number_list("T_values");
    n_values = st.integer_list("N_values");
    st.done();
  }
  r.done();

  MapConstants base = estimate_constants(cfg, corpus);
  Json out;
  out["constants"] = to_json(base);
  CsvWriter csv({"parameter", "value", "k1", "k2", "k3"});
  csv.add_row({"base", "", format_double(base.k1), format_double(base.k2),
               format_double(base.k3)});

  Json t_arr = Json::array();
  for (double T : t_values) {
    SolverConfig c2 = cfg;
    c2.T = T;
    MapConstants k = estimate_constants(c2, corpus);
    Json e = to_json(k);
    e["T"] = T;
    t_arr.push_back(e);
    csv.add_row({"T", format_double(T), format_double(k.k1),
                 format_double(k.k2), format_double(k.k3)});
  }
  out["stability_T"] = t_arr;

  Json n_arr = Json::array();
  for (int N : n_values) {
    SolverConfig c2 = cfg;
    c2.N = N;
    MapConstants k = estimate_constants(c2, corpus);
    Json e = to_json(k);
    e["N"] = N;
    n_arr.push_back(e);
    csv.add_row({"N", CsvWriter::cell(N), format_double(k.k1),
                 format_double(k.k2), format_double(k.k3)});
  }
  out["stability_N"] = n_arr;

  write_text_file(plan.out_dir / "constants.json", dump_json(out));
  csv.write(plan.out_dir / "constants.csv");
  write_manifest(plan, config_text, corpus.seeds);
  return kExitOk;
}

int run_scaling_check(const ExperimentPlan& plan, const Json& config,
                      const std::string& config_text) {
  ObjectReader r(config, "config");
  SolverConfig cfg = read_solver_config(r.at("solver"), "solver");
  cfg.validate();
  MapConstants constants = resolve_constants(r.at("constants"), cfg, plan);
  InitialData data = build_initial_data(r.at("initial_data"), cfg, constants,
                                        plan.config_path.parent_path());
  const double lambda = r.number("lambda");
  r.done();

  auto [state, report] = picard_solve(data.u0, data.theta0, cfg, constants);
  Json out;
  out["config"] = to_json(cfg);
  out["report"] = to_json(report);
  int exit_code = kExitOk;
  if (report.converged) {
    ScalingReport scaling = scaling_check(state, lambda, cfg);
    out["scaling"] = to_json(scaling);
  } else {
    exit_code = kExitNoConvergence;
  }
  write_text_file(plan.out_dir / "scaling.json", dump_json(out));
  write_manifest(plan, config_text, plan.seeds);
  return exit_code;
}

int run_uniqueness_probe(const ExperimentPlan& plan, const Json& config,
                         const std::string& config_text) {
  ObjectReader r(config, "config");
  SolverConfig cfg = read_solver_config(r.at("solver"), "solver");
  cfg.validate();
  MapConstants constants = resolve_constants(r.at("constants"), cfg, plan);
  InitialData data = build_initial_data(r.at("initial_data"), cfg, constants,
                                        plan.config_path.parent_path());
  double eps = 0.0, budget_factor = 10.0, c_interp = 0.0;
  bool c_from_audit = false;
  {
    ObjectReader p(r.at("probe"), "probe");
    eps = p.number("eps");
    budget_factor = p.number("budget_factor");
    const Json& ci = p.at("c_interp");
    if (ci.is_string() && ci.get<std::string>() == "uf1_audit") {
      c_from_audit = true;
    } else if (ci.is_number()) {
      c_interp = ci.get<double>();
    } else {
      throw ConfigError("probe.c_interp: expected a number or \"uf1_audit\"");
    }
    p.done();
  }
  r.done();

  if (c_from_audit) {
    CorpusSpec corpus;
    corpus.n = cfg.n;
    corpus.L = cfg.L;
    corpus.resolutions = {std::min(cfg.N, 16)};
    corpus.seeds = committed_seeds(20);
    c_interp =
        audit_advection(corpus, AdvectionVariant::UF1, cfg.alpha, eps).max_ratio;
  }

  auto [state_p, report] = picard_solve(data.u0, data.theta0, cfg, constants);
  Json out;
  out["config"] = to_json(cfg);
  out["report"] = to_json(report);
  int exit_code = kExitOk;
  if (report.converged) {
    auto [state_e, richardson] =
        etd_march_with_richardson(data.u0, data.theta0, cfg);
    const double budget = budget_factor * (cfg.picard_tol + richardson);
    UniquenessReport probe = uniqueness_probe(state_p, state_e, cfg, constants,
                                              eps, c_interp, budget);
    out["richardson_estimate"] = richardson;
    out["c_interp"] = c_interp;
    out["probe"] = to_json(probe);
  } else {
    exit_code = kExitNoConvergence;
  }
  write_text_file(plan.out_dir / "uniqueness.json", dump_json(out));
  write_manifest(plan, config_text, plan.seeds);
  return exit_code;
}

}  // namespace

int run(const ExperimentPlan& plan) {
  try {
    std::error_code ec;
    std::filesystem::create_directories(plan.out_dir, ec);
    if (ec)
      throw IoError("cannot create output directory: " +
                    plan.out_dir.string());

    const std::string config_text = read_text_file(plan.config_path);
    Json config;
    try {
      config = Json::parse(config_text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }

    switch (plan.command) {
      case Command::Solve:
        return run_solve(plan, config, config_text);
      case Command::CalculusAudit:
        return run_calculus_audit(plan, config, config_text);
      case Command::SemigroupAudit:
        return run_semigroup_audit(plan, config, config_text);
      case Command::Constants:
        return run_constants(plan, config, config_text);
      case Command::ScalingCheck:
        return run_scaling_check(plan, config, config_text);
      case Command::UniquenessProbe:
        return run_uniqueness_probe(plan, config, config_text);
    }
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const BlowUpError& e) {
    std::cerr << "blow-up: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace fbs::cli
