#ifndef MEMBRANE_RUNNER_HPP
#define MEMBRANE_RUNNER_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Configuration-driven experiment runner: parses a JSON run configuration,
// executes one experiment kind, and writes CSV/JSON artifacts plus a summary.
// All stochastic choices derive from the configured seed; repeated runs with
// the same (config, seed) produce byte-identical artifacts.

namespace membrane {

struct SchemaError : std::runtime_error {
  std::string path;  // JSON field path, e.g. "model.p"
  SchemaError(std::string path_, const std::string &message)
      : std::runtime_error(path_ + ": " + message), path(std::move(path_)) {}
};

struct RunOptions {
  std::string out_dir = ".";
  std::optional<unsigned long long> seed_override;
  int threads = 1;  // recorded in the manifest; evaluation order is fixed
};

struct RunResult {
  int status = 0;  // 0 all assertions pass, 1 otherwise
  std::vector<std::string> artifacts;  // file names relative to out_dir
  std::string summary;                 // contents of summary.txt
};

// Throws SchemaError on invalid configurations (CLI exit status 2).
RunResult run_config_text(const std::string &json_text, const RunOptions &opt);
RunResult run_config_file(const std::string &config_path, const RunOptions &opt);

}  // namespace membrane

#endif  // MEMBRANE_RUNNER_HPP
