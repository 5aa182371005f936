#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fbs::cli {

enum class Command {
  Solve,
  CalculusAudit,
  SemigroupAudit,
  ScalingCheck,
  Constants,
  UniquenessProbe,
};

std::optional<Command> parse_command(std::string_view name);
std::string to_string(Command c);

struct ExperimentPlan {
  Command command;
  std::filesystem::path config_path;
  std::filesystem::path out_dir;
  std::vector<std::uint64_t> seeds;  // optional override of the config corpus
  int verbosity = 1;
  int threads = 1;  // recorded in the manifest; execution is single-threaded
};

// Exit codes: 0 success, 1 malformed config or I/O failure, 2 precondition
// violation, 3 non-convergence (artifacts still written).
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitPrecondition = 2;
inline constexpr int kExitNoConvergence = 3;

int run(const ExperimentPlan& plan);

}  // namespace fbs::cli
