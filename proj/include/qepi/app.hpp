#pragma once

// Command implementations behind the `qepi` executable.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qepi/circuits.hpp"
#include "qepi/metrics.hpp"
#include "qepi/shots.hpp"

namespace qepi::app {

/// Exit statuses of the command-line tool.
enum ExitStatus : int {
  kExitOk = 0,
  kExitDegenerate = 1,
  kExitUsage = 2,
  kExitNumerical = 3,
};

int exit_status_for(const std::exception& error) noexcept;

inline constexpr const char* kOutDirEnv = "QEPI_OUT_DIR";

struct RunConfig {
  std::string dataset_path;
  ModelKind model = ModelKind::kQsvm;
  /// Unset means "match the dataset" for pre-encoded feature files, 2 for
  /// peptide files.
  std::optional<int> n_qubits;
  int depth = 2;
  int layers = 2;
  EntanglerKind entangler = EntanglerKind::kCzRing;
  ShotMode shots = ShotMode::exact();
  double C = 1.0;
  double tol = 1e-6;
  double learning_rate = 0.5;
  int max_epochs = 200;
  double error_shots = 4.0;
  double test_fraction = 0.3;
  std::optional<std::uint64_t> seed;
  std::filesystem::path output_dir;

  /// Echo written into reports. The output directory is left out so that
  /// reports do not depend on where they were written.
  nlohmann::ordered_json to_json() const;
  /// Overlay keys present in `j` onto this config.
  void merge_json(const nlohmann::json& j);
  static RunConfig from_json(const nlohmann::json& j);

  std::uint64_t require_seed() const;
};

/// Result of one `train` or `eval` command.
struct RunReport {
  std::string command;
  ModelKind model_kind = ModelKind::kQsvm;
  EvalReport eval;
  std::optional<double> train_accuracy;
  std::size_t n_train = 0;
  std::size_t n_evaluated = 0;
  RunConfig config;
  nlohmann::ordered_json artifacts = nlohmann::ordered_json::object();
  nlohmann::ordered_json solver = nlohmann::ordered_json::object();
  std::vector<std::string> warnings;

  nlohmann::ordered_json to_json() const;
  static RunReport from_json(const nlohmann::ordered_json& j);
};

std::string serialize_report(const RunReport& report);
RunReport parse_report(const std::string& text, const std::string& source);

/// Writes kernel.txt for the training split. Returns the dump path.
std::filesystem::path cmd_kernel(const RunConfig& config, std::ostream& log);

/// Train, evaluate on the held-out split, write model, report and side files.
RunReport cmd_train(const RunConfig& config, std::ostream& log);

/// Re-evaluate a persisted model on a dataset. Writes eval_report.json into
/// `output_dir` when it is non-empty.
RunReport cmd_eval(const std::filesystem::path& model_path,
                   const std::string& dataset_path,
                   const std::filesystem::path& output_dir, std::ostream& log);

/// Comparison table of every report under `run_dir` plus the published
/// reference rows. Returns the exit status.
int cmd_report(const std::filesystem::path& run_dir, std::ostream& out,
               std::ostream& err);

}  // namespace qepi::app
