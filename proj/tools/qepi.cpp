// qepi: epitope classification with simulated quantum kernels and VQCs.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "qepi/app.hpp"
#include "qepi/errors.hpp"

namespace {

struct RunFlags {
  std::string model;
  std::string data;
  std::string config_path;
  std::string shots;
  std::uint64_t seed = 0;
  int qubits = 0;
  int depth = 0;
  int layers = 0;
  std::string entangler;
  std::string c;
  double lr = 0.0;
  int epochs = 0;
  double error_shots = 0.0;
  double test_fraction = 0.0;
  std::string out;

  std::map<std::string, CLI::Option*> options;

  void attach(CLI::App& cmd) {
    options["model"] = cmd.add_option("--model", model, "qsvm or vqc (default qsvm)")
                           ->check(CLI::IsMember({"qsvm", "vqc"}));
    options["data"] = cmd.add_option("--data", data, "Dataset CSV (peptides or encoded features)");
    cmd.add_option("--config", config_path, "JSON config; flags override it");
    options["shots"] = cmd.add_option("--shots", shots, "exact or a shot count (default exact)");
    options["seed"] = cmd.add_option("--seed", seed, "Master seed (required here or in --config)");
    options["qubits"] = cmd.add_option("--qubits", qubits, "Qubits = encoded features");
    options["depth"] = cmd.add_option("--depth", depth, "Feature-map repetitions (default 2)");
    options["layers"] = cmd.add_option("--layers", layers, "VQC entangling layers (default 2)");
    options["entangler"] = cmd.add_option("--entangler", entangler, "cz_ring or swap_chain")
                               ->check(CLI::IsMember({"cz_ring", "swap_chain"}));
    options["c"] = cmd.add_option("--c", c, "Box constraint C, or inf (default 1)");
    options["lr"] = cmd.add_option("--lr", lr, "VQC learning rate (default 0.5)");
    options["epochs"] = cmd.add_option("--epochs", epochs, "VQC epochs (default 200)");
    options["error_shots"] =
        cmd.add_option("--error-shots", error_shots, "R of the VQC error model in exact mode");
    options["test_fraction"] =
        cmd.add_option("--test-fraction", test_fraction, "Held-out share (default 0.3)");
    options["out"] = cmd.add_option("--out", out, "Output directory (default $QEPI_OUT_DIR)");
  }

  bool given(const char* name) const { return options.at(name)->count() > 0; }

  /// defaults < config file < flags
  qepi::app::RunConfig resolve() const {
    qepi::app::RunConfig config;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw qepi::IoError("cannot open config " + config_path);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw qepi::ParseError(config_path + ": " + e.what());
      }
      config.merge_json(j);
    }
    nlohmann::json flags = nlohmann::json::object();
    if (given("model")) flags["model"] = model;
    if (given("data")) flags["data"] = data;
    if (given("shots")) flags["shots"] = shots;
    if (given("seed")) flags["seed"] = seed;
    if (given("qubits")) flags["qubits"] = qubits;
    if (given("depth")) flags["depth"] = depth;
    if (given("layers")) flags["layers"] = layers;
    if (given("entangler")) flags["entangler"] = entangler;
    if (given("c")) flags["c"] = c;
    if (given("lr")) flags["lr"] = lr;
    if (given("epochs")) flags["epochs"] = epochs;
    if (given("error_shots")) flags["error_shots"] = error_shots;
    if (given("test_fraction")) flags["test_fraction"] = test_fraction;
    if (given("out")) flags["out"] = out;
    config.merge_json(flags);
    return config;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum kernel and variational classifiers for epitope prediction"};
  app.require_subcommand(1);

  RunFlags kernel_flags;
  auto* kernel = app.add_subcommand("kernel", "Write the training-split kernel matrix");
  kernel_flags.attach(*kernel);

  RunFlags train_flags;
  auto* train = app.add_subcommand("train", "Train, evaluate on the held-out split, write a report");
  train_flags.attach(*train);

  std::string model_path;
  std::string eval_data;
  std::string eval_out;
  auto* eval = app.add_subcommand("eval", "Evaluate a saved model on a dataset");
  eval->add_option("model_path", model_path, "model.txt written by train")->required();
  eval->add_option("--data", eval_data, "Dataset CSV")->required();
  eval->add_option("--out", eval_out, "Directory for eval_report.json");

  std::string run_dir;
  auto* report = app.add_subcommand("report", "Tabulate every report under a directory");
  report->add_option("run_dir", run_dir, "Directory holding runs")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qepi::app::kExitUsage;
  }

  try {
    if (*kernel) {
      qepi::app::cmd_kernel(kernel_flags.resolve(), std::cout);
    } else if (*train) {
      qepi::app::cmd_train(train_flags.resolve(), std::cout);
    } else if (*eval) {
      qepi::app::cmd_eval(model_path, eval_data, eval_out, std::cout);
    } else if (*report) {
      return qepi::app::cmd_report(run_dir, std::cout, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return qepi::app::exit_status_for(e);
  }
  return qepi::app::kExitOk;
}
