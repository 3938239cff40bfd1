#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "usng/models.hpp"

namespace usng::cli {

/// Every parameter a subcommand can consume. Serialized with all defaults
/// spelled out so a written config replays the run exactly.
struct ExperimentConfig {
  std::string command;
  ModelSpec model = PaFixed{};
  std::uint64_t n = 1000;
  std::vector<std::uint64_t> n_grid;
  std::uint64_t pairs = 1000;
  std::uint64_t replicas = 1;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  unsigned threads = 1;
  std::string family = "pa";
  double gamma = 0.6;
  double kappa = 1.0;
  double epsilon = 0.05;
  std::vector<std::uint64_t> thresholds;  // oracle: explicit ell sequence
  std::uint64_t max_sources = 0;
  std::uint64_t middle_pairs = 16;
  std::uint64_t cutoff = 0;  // 0: unbounded
  std::uint64_t k_top = 0;   // 0: default rule
  std::string input;
  std::string out;
  bool trace = false;
  bool timestamp = true;
};

nlohmann::json config_to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// Path of the replay config written beside an output.
std::string config_path_for(const std::string& out);

void cmd_generate(const ExperimentConfig& c, std::ostream& log);
void cmd_distances(const ExperimentConfig& c, std::ostream& log);
void cmd_bounds(const ExperimentConfig& c, std::ostream& log);
void cmd_scaling(const ExperimentConfig& c, std::ostream& log);
void cmd_oracle(const ExperimentConfig& c, std::ostream& log);
void cmd_degrees(const ExperimentConfig& c, std::ostream& log);

/// Dispatches on c.command.
void run_command(const ExperimentConfig& c, std::ostream& log);

/// Full command line: parses, runs, and maps failures to exit codes
/// (0 ok, 2 parameter, 3 I/O, 4 internal consistency).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace usng::cli
