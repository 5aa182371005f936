#include "fbs/reports.hpp"

#include "fbs/errors.hpp"

namespace fbs {

Json to_json(const MapConstants& k) {
  Json j;
  j["k1"] = k.k1;
  j["k2"] = k.k2;
  j["k3"] = k.k3;
  return j;
}

MapConstants map_constants_from_json(const Json& j) {
  MapConstants k;
  k.k1 = j.at("k1").get<double>();
  k.k2 = j.at("k2").get<double>();
  k.k3 = j.at("k3").get<double>();
  return k;
}

Json to_json(const SolverConfig& cfg) {
  Json j;
  j["n"] = cfg.n;
  j["alpha"] = cfg.alpha;
  j["T"] = cfg.T;
  j["N"] = cfg.N;
  j["L"] = cfg.L;
  j["M"] = cfg.M;
  j["picard_tol"] = cfg.picard_tol;
  j["picard_max_iters"] = cfg.picard_max_iters;
  j["mode"] = to_string(cfg.mode);
  return j;
}

SolverConfig solver_config_from_json(const Json& j) {
  SolverConfig cfg;
  cfg.n = j.at("n").get<int>();
  cfg.alpha = j.at("alpha").get<double>();
  cfg.T = j.at("T").get<double>();
  cfg.N = j.at("N").get<int>();
  cfg.L = j.at("L").get<double>();
  cfg.M = j.at("M").get<int>();
  cfg.picard_tol = j.at("picard_tol").get<double>();
  cfg.picard_max_iters = j.at("picard_max_iters").get<int>();
  const std::string mode = j.at("mode").get<std::string>();
  if (mode == "finite_horizon")
    cfg.mode = SolverMode::FiniteHorizon;
  else if (mode == "global_scaling")
    cfg.mode = SolverMode::GlobalScaling;
  else
    throw ConfigError("mode: expected \"finite_horizon\" or \"global_scaling\"");
  return cfg;
}

Json to_json(const FixedPointReport& rep) {
  Json j;
  j["constants"] = to_json(rep.constants);
  j["K0"] = rep.K0;
  if (rep.lambda1)
    j["lambda1"] = *rep.lambda1;
  else
    j["lambda1"] = nullptr;
  j["threshold_status"] = rep.threshold_status;
  j["converged"] = rep.converged;
  j["diverged"] = rep.diverged;
  j["iterations"] = rep.iterations;
  j["residual"] = rep.residual;
  j["final_u_norm"] = rep.final_u_norm;
  j["final_theta_norm"] = rep.final_theta_norm;
  j["bound_check"] = rep.bound_check;
  j["u0_norm"] = rep.u0_norm;
  j["theta0_norm"] = rep.theta0_norm;
  j["momentum_residual"] = rep.momentum_residual;
  j["distances"] = rep.distances;
  j["contraction_factors"] = rep.contraction_factors;
  return j;
}

FixedPointReport fixed_point_report_from_json(const Json& j) {
  FixedPointReport rep;
  rep.constants = map_constants_from_json(j.at("constants"));
  rep.K0 = j.at("K0").get<double>();
  if (!j.at("lambda1").is_null()) rep.lambda1 = j.at("lambda1").get<double>();
  rep.threshold_status = j.at("threshold_status").get<std::string>();
  rep.converged = j.at("converged").get<bool>();
  rep.diverged = j.at("diverged").get<bool>();
  rep.iterations = j.at("iterations").get<int>();
  rep.residual = j.at("residual").get<double>();
  rep.final_u_norm = j.at("final_u_norm").get<double>();
  rep.final_theta_norm = j.at("final_theta_norm").get<double>();
  rep.bound_check = j.at("bound_check").get<double>();
  rep.u0_norm = j.at("u0_norm").get<double>();
  rep.theta0_norm = j.at("theta0_norm").get<double>();
  rep.momentum_residual = j.at("momentum_residual").get<double>();
  rep.distances = j.at("distances").get<std::vector<double>>();
  rep.contraction_factors =
      j.at("contraction_factors").get<std::vector<double>>();
  return rep;
}

Json to_json(const RatioReport& rep) {
  Json j;
  j["inequality_id"] = to_string(rep.id);
  Json ex;
  for (const auto& [name, value] : rep.exponents) ex[name] = value;
  j["exponents"] = ex;
  j["sample_count"] = rep.sample_count;
  j["max_ratio"] = rep.max_ratio;
  j["median_ratio"] = rep.median_ratio;
  j["resolutions"] = rep.resolutions;
  j["per_resolution_max"] = rep.per_resolution_max;
  return j;
}

Json to_json(const ScalingReport& rep) {
  Json j;
  j["lambda"] = rep.lambda;
  j["u_norm_before"] = rep.u_norm_before;
  j["u_norm_after"] = rep.u_norm_after;
  j["u_invariance_error"] = rep.u_invariance_error;
  j["theta_norm_before"] = rep.theta_norm_before;
  j["theta_norm_after"] = rep.theta_norm_after;
  j["theta_invariance_error"] = rep.theta_invariance_error;
  j["noncritical_factor"] = rep.noncritical_factor;
  j["noncritical_expected"] = rep.noncritical_expected;
  j["residual_before"] = rep.residual_before;
  j["residual_after"] = rep.residual_after;
  j["residual_ratio"] = rep.residual_ratio;
  return j;
}

Json to_json(const UniquenessReport& rep) {
  Json j;
  j["window_t0"] = rep.window_t0;
  j["window_nodes"] = rep.window_nodes;
  j["delta_u"] = rep.delta_u;
  j["delta_theta"] = rep.delta_theta;
  j["budget"] = rep.budget;
  j["within_budget"] = rep.within_budget;
  j["coefficient"] = rep.coefficient;
  j["u2_tail_sq"] = rep.u2_tail_sq;
  return j;
}

const std::vector<std::string> kAuditCsvHeader = {
    "inequality_id", "resolution", "seed", "s",   "s1",  "s2",    "p",
    "q",             "r",          "alpha", "eps", "lhs", "rhs",   "ratio"};

void append_audit_csv_rows(CsvWriter& csv, const RatioReport& rep) {
  auto exponent_cell = [&](const char* name) -> std::string {
    auto it = rep.exponents.find(name);
    return it == rep.exponents.end() ? "" : format_double(it->second);
  };
  for (const auto& s : rep.samples) {
    csv.add_row({to_string(rep.id), CsvWriter::cell(s.resolution),
                 CsvWriter::cell(s.seed), exponent_cell("s"),
                 exponent_cell("s1"), exponent_cell("s2"), exponent_cell("p"),
                 exponent_cell("q"), exponent_cell("r"),
                 exponent_cell("alpha"), exponent_cell("eps"),
                 CsvWriter::cell(s.lhs), CsvWriter::cell(s.rhs),
                 CsvWriter::cell(s.ratio)});
  }
}

}  // namespace fbs
