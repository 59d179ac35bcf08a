#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "gyrochip/cli/config.hpp"

namespace gyrochip::cli {

struct CommandResult {
  std::vector<std::filesystem::path> outputs;
  nlohmann::json summary;  // key results for the stdout line
};

CommandResult cmd_guide(const RunConfig& config, const std::filesystem::path& out_dir);
CommandResult cmd_transfer(const RunConfig& config, const std::filesystem::path& out_dir);
CommandResult cmd_sensitivity(const RunConfig& config, const std::filesystem::path& out_dir);
CommandResult cmd_allan(const RunConfig& config, const std::filesystem::path& out_dir);
CommandResult cmd_mission(const RunConfig& config, const std::filesystem::path& out_dir);
CommandResult cmd_noise(const RunConfig& config, const std::filesystem::path& out_dir);

const std::vector<std::string>& command_names();
CommandResult run_command(std::string_view name, const RunConfig& config, const std::filesystem::path& out_dir);

// Hypotheses shared by every output: species and, when configured, the
// interferometer parameters.
nlohmann::json base_assumptions(const RunConfig& config);

enum ExitCode : int { exit_ok = 0, exit_config_error = 1, exit_domain_error = 2 };

// Whole command-line program; writes the one-line JSON summary to `out` and
// diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gyrochip::cli
