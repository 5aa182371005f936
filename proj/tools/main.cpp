#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fbs/cli.hpp"
#include "fbs/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "fracboussinesq: pseudo-spectral solver and numerical audit harness "
      "for the Boussinesq system with fractional dissipation"};
  app.set_version_flag("--version", std::string(fbs::kVersion));
  app.require_subcommand(1);

  struct SubState {
    fbs::cli::ExperimentPlan plan;
  };
  std::vector<std::pair<CLI::App*, SubState*>> subs;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"solve", "Picard fixed-point solve with optional ETD cross-check"},
      {"calculus-audit", "commutator/product/advection/embedding inequality audits"},
      {"semigroup-audit", "semigroup smoothing, maximal regularity and Duhamel checks"},
      {"scaling-check", "critical-space scaling equivariance of a solved state"},
      {"constants", "measure the operator constants k1, k2, k3"},
      {"uniqueness-probe", "difference estimates on two solutions of one datum"}};

  for (const auto& [name, description] : commands) {
    CLI::App* sub = app.add_subcommand(name, description);
    auto* state = new SubState;
    state->plan.command = *fbs::cli::parse_command(name);
    sub->add_option("--config", state->plan.config_path,
                    "experiment configuration (JSON)")
        ->required();
    sub->add_option("--out", state->plan.out_dir, "output directory")
        ->required();
    sub->add_option("--seeds", state->plan.seeds,
                    "comma-separated seed list overriding the config corpus")
        ->delimiter(',');
    sub->add_option("--threads", state->plan.threads,
                    "worker threads (recorded in the manifest; field "
                    "operations run single-threaded for determinism)");
    sub->add_flag_function(
        "-q,--quiet", [state](std::int64_t) { state->plan.verbosity = 0; },
        "suppress progress output");
    subs.emplace_back(sub, state);
  }

  CLI11_PARSE(app, argc, argv);

  for (const auto& [sub, state] : subs)
    if (sub->parsed()) return fbs::cli::run(state->plan);
  return fbs::cli::kExitConfig;
}
