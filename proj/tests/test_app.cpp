#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "qepi/app.hpp"
#include "qepi/errors.hpp"
#include "qepi/qkernel.hpp"

using namespace qepi;
using namespace qepi::app;
namespace fs = std::filesystem;

namespace {

const fs::path kData = QEPI_DATA_DIR;
const std::string kBin = QEPI_BIN;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

/// Fresh scratch directory per test case.
fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(QEPI_SCRATCH_DIR) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = kBin + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

RunConfig sample_config(ModelKind model, const fs::path& out) {
  RunConfig c;
  c.dataset_path = (kData / "sample_epitopes.csv").string();
  c.model = model;
  c.seed = 7;
  c.output_dir = out;
  return c;
}

RunConfig separable_config(ModelKind model, const fs::path& out) {
  RunConfig c = sample_config(model, out);
  c.dataset_path = (kData / "separable_2q.csv").string();
  return c;
}

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST_CASE("exit statuses by error kind") {
  CHECK(exit_status_for(SizeError("x")) == kExitDegenerate);
  CHECK(exit_status_for(DegenerateError("x")) == kExitDegenerate);
  CHECK(exit_status_for(NumericalError("x")) == kExitNumerical);
  CHECK(exit_status_for(ParseError("x")) == kExitUsage);
  CHECK(exit_status_for(ValidationError("x")) == kExitUsage);
  CHECK(exit_status_for(ConfigError("x")) == kExitUsage);
  CHECK(exit_status_for(IoError("x")) == kExitUsage);
  CHECK(exit_status_for(std::runtime_error("x")) == kExitNumerical);
}

TEST_CASE("config layering") {
  RunConfig c;
  CHECK_THROWS_AS(c.require_seed(), ValidationError);
  c.merge_json(nlohmann::json::parse(R"({"model":"vqc","epochs":3,"shots":512,"c":"inf","seed":4})"));
  CHECK(c.model == ModelKind::kVqc);
  CHECK(c.max_epochs == 3);
  CHECK(c.shots == ShotMode::shots(512));
  CHECK(std::isinf(c.C));
  CHECK(c.require_seed() == 4);
  c.merge_json(nlohmann::json::parse(R"({"epochs":1})"));
  CHECK(c.max_epochs == 1);
  CHECK(c.model == ModelKind::kVqc);
  CHECK_THROWS_AS(c.merge_json(nlohmann::json::parse(R"({"bogus":1})")), ValidationError);

  const RunConfig back = RunConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());
}

TEST_CASE("kernel command") {
  const fs::path dir = scratch("kernel");
  SUBCASE("exact diagonal") {
    std::ostringstream log;
    const fs::path dump = cmd_kernel(sample_config(ModelKind::kQsvm, dir / "exact"), log);
    std::ifstream in(dump);
    const Eigen::MatrixXd k = read_kernel_dump(in);
    CHECK(k.rows() == 70);
    for (Eigen::Index i = 0; i < k.rows(); ++i) CHECK(k(i, i) == 1.0);
    CHECK(log.str().find("t=70") != std::string::npos);
  }
  SUBCASE("shots mode is byte-identical") {
    RunConfig c = sample_config(ModelKind::kQsvm, dir / "s1");
    c.shots = ShotMode::shots(256);
    std::ostringstream log;
    const std::string a = slurp(cmd_kernel(c, log));
    c.output_dir = dir / "s2";
    CHECK(slurp(cmd_kernel(c, log)) == a);
  }
  SUBCASE("missing dataset") {
    RunConfig c = sample_config(ModelKind::kQsvm, dir / "missing");
    c.dataset_path = (dir / "nope.csv").string();
    std::ostringstream log;
    try {
      cmd_kernel(c, log);
      FAIL("expected an error");
    } catch (const std::exception& e) {
      CHECK(exit_status_for(e) == kExitUsage);
    }
    CHECK(run_cli("kernel --data " + (dir / "nope.csv").string() + " --seed 1 --out " +
                  (dir / "cli").string()) == 2);
  }
}

TEST_CASE("train command") {
  const fs::path dir = scratch("train");
  std::ostringstream log;
  SUBCASE("qsvm on the epitope sample") {
    const RunReport r = cmd_train(sample_config(ModelKind::kQsvm, dir / "q"), log);
    CHECK(r.eval.acc >= 0.0);
    CHECK(r.eval.acc <= 1.0);
    CHECK(r.eval.auc >= 0.0);
    CHECK(r.eval.auc <= 1.0);
    CHECK(r.eval.mcc >= -1.0);
    CHECK(r.eval.mcc <= 1.0);
    CHECK(r.n_train + r.n_evaluated == 100);
    for (const char* f : {"model.txt", "report.json", "kernel.txt", "timings.json"})
      CHECK(fs::exists(dir / "q" / f));
  }
  SUBCASE("one epoch leaves one loss entry") {
    RunConfig c = sample_config(ModelKind::kVqc, dir / "v");
    c.max_epochs = 1;
    cmd_train(c, log);
    CHECK(count_lines(slurp(dir / "v" / "loss_trace.txt")) == 1);
  }
  SUBCASE("same config, same bytes") {
    for (ModelKind kind : {ModelKind::kQsvm, ModelKind::kVqc}) {
      RunConfig c = sample_config(kind, dir / "d1");
      c.shots = ShotMode::shots(128);
      c.max_epochs = 5;
      cmd_train(c, log);
      c.output_dir = dir / "d2";
      cmd_train(c, log);
      for (const char* f : {"model.txt", "report.json", "train_split.csv", "test_split.csv"})
        CHECK(slurp(dir / "d1" / f) == slurp(dir / "d2" / f));
      if (kind == ModelKind::kQsvm) CHECK(slurp(dir / "d1" / "kernel.txt") == slurp(dir / "d2" / "kernel.txt"));
      else CHECK(slurp(dir / "d1" / "loss_trace.txt") == slurp(dir / "d2" / "loss_trace.txt"));
    }
  }
  SUBCASE("single-class data") {
    spit(dir / "one.csv", "sequence,label\nAAAA,1\nCCCC,1\nDDDD,1\nEEEE,1\nFFFF,1\n");
    RunConfig c = sample_config(ModelKind::kQsvm, dir / "one");
    c.dataset_path = (dir / "one.csv").string();
    CHECK_THROWS_AS(cmd_train(c, log), DegenerateError);
    CHECK(run_cli("train --data " + c.dataset_path + " --seed 1 --out " + (dir / "cli").string()) == 1);
  }
}

TEST_CASE("report serialization") {
  const fs::path dir = scratch("serial");
  std::ostringstream log;
  for (ModelKind kind : {ModelKind::kQsvm, ModelKind::kVqc}) {
    RunConfig c = sample_config(kind, dir);
    c.max_epochs = 3;
    const RunReport r = cmd_train(c, log);
    const std::string text = slurp(dir / "report.json");
    CHECK(text == serialize_report(r));
    const RunReport back = parse_report(text, "report.json");
    CHECK(serialize_report(back) == text);
    CHECK(back.eval.acc == r.eval.acc);
    CHECK(back.eval.confusion == r.eval.confusion);
    CHECK(back.config.to_json() == r.config.to_json());

    // The published rows travel with every report.
    const auto j = nlohmann::json::parse(text);
    bool found_qsvm = false;
    bool found_vqc = false;
    for (const auto& row : j.at("reference_rows")) {
      if (row.at("acc") == "70%" && row.at("auc") == "0.71" && row.at("mcc") == "0.42") found_qsvm = true;
      if (row.at("acc") == "73%" && row.at("auc") == "0.703" && row.at("mcc") == "0.148") found_vqc = true;
    }
    CHECK(found_qsvm);
    CHECK(found_vqc);
  }
  CHECK_THROWS_AS(parse_report("{\"format\": 1", "bad.json"), ParseError);
}

TEST_CASE("a report's config reproduces its run") {
  const fs::path dir = scratch("reproduce");
  std::ostringstream log;
  RunConfig c = separable_config(ModelKind::kVqc, dir / "first");
  c.max_epochs = 4;
  cmd_train(c, log);
  const std::string report = slurp(dir / "first" / "report.json");
  RunConfig again;
  again.merge_json(nlohmann::json::parse(report));
  again.output_dir = dir / "second";
  cmd_train(again, log);
  CHECK(slurp(dir / "second" / "report.json") == report);
  CHECK(slurp(dir / "second" / "model.txt") == slurp(dir / "first" / "model.txt"));
}

TEST_CASE("eval command") {
  const fs::path dir = scratch("eval");
  std::ostringstream log;
  for (ModelKind kind : {ModelKind::kQsvm, ModelKind::kVqc}) {
    const fs::path run = dir / to_string(kind);
    const RunReport trained = cmd_train(separable_config(kind, run), log);
    REQUIRE(trained.train_accuracy.has_value());
    const RunReport e = cmd_eval(run / "model.txt", (run / "train_split.csv").string(), run / "eval", log);
    CHECK(e.eval.acc >= *trained.train_accuracy - 1e-12);
    CHECK(e.n_evaluated == trained.n_train);
    CHECK(fs::exists(run / "eval" / "eval_report.json"));

    // Peptide model against the pre-encoded file and vice versa.
    CHECK_THROWS_AS(cmd_eval(run / "model.txt", (kData / "sample_epitopes.csv").string(), {}, log),
                    ValidationError);
  }
  // Three-feature data against a two-qubit model.
  spit(dir / "wide.csv", "x0,x1,x2,label\n0.1,0.2,0.3,1\n-0.1,0.2,0.3,-1\n");
  CHECK_THROWS_AS(cmd_eval(dir / "qsvm" / "model.txt", (dir / "wide.csv").string(), {}, log), ValidationError);
}

TEST_CASE("report command") {
  const fs::path dir = scratch("report");
  std::ostringstream log;
  std::ostringstream out;
  std::ostringstream err;

  SUBCASE("empty directory") {
    fs::create_directories(dir / "empty");
    CHECK(cmd_report(dir / "empty", out, err) == 1);
    CHECK(run_cli("report " + (dir / "empty").string()) == 1);
  }
  SUBCASE("one run") {
    cmd_train(sample_config(ModelKind::kQsvm, dir / "one" / "a"), log);
    CHECK(cmd_report(dir / "one", out, err) == 0);
    const std::string text = out.str();
    CHECK(text.find("qsvm train (seed 7, exact)") != std::string::npos);
    CHECK(text.find("QSVM (published)") != std::string::npos);
    CHECK(text.find("VQC (published)") != std::string::npos);
    std::size_t runs = 0;
    for (std::size_t p = text.find(" run "); p != std::string::npos; p = text.find(" run ", p + 1)) ++runs;
    CHECK(runs == 1);
  }
  SUBCASE("corrupt file is named and the rest still render") {
    cmd_train(sample_config(ModelKind::kQsvm, dir / "mixed" / "good"), log);
    fs::create_directories(dir / "mixed" / "bad");
    spit(dir / "mixed" / "bad" / "report.json", "{ not json");
    CHECK(cmd_report(dir / "mixed", out, err) == 2);
    CHECK(err.str().find("bad/report.json") != std::string::npos);
    CHECK(out.str().find("qsvm train (seed 7, exact)") != std::string::npos);
  }
  SUBCASE("same seed, same rows") {
    cmd_train(sample_config(ModelKind::kVqc, dir / "twin" / "a"), log);
    cmd_train(sample_config(ModelKind::kVqc, dir / "twin" / "b"), log);
    CHECK(cmd_report(dir / "twin", out, err) == 0);
    std::istringstream lines(out.str());
    std::vector<std::string> rows;
    for (std::string line; std::getline(lines, line);)
      if (line.find(" run ") != std::string::npos) rows.push_back(line);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == rows[1]);
  }
  SUBCASE("not a directory") { CHECK(cmd_report(dir / "missing", out, err) == 2); }
}

TEST_CASE("command-line surface") {
  const fs::path dir = scratch("cli");
  const std::string data = (kData / "separable_2q.csv").string();
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("") == 2);
  CHECK(run_cli("train --bogus") == 2);
  CHECK(run_cli("train --data " + data + " --out " + (dir / "noseed").string()) == 2);
  CHECK(run_cli("train --model svm --data " + data + " --seed 1") == 2);

  // Flags override the config file, which overrides defaults.
  spit(dir / "cfg.json", R"({"model":"vqc","epochs":3,"seed":11})");
  CHECK(run_cli("train --config " + (dir / "cfg.json").string() + " --data " + data + " --out " +
                (dir / "from_file").string()) == 0);
  CHECK(count_lines(slurp(dir / "from_file" / "loss_trace.txt")) == 3);
  CHECK(run_cli("train --config " + (dir / "cfg.json").string() + " --epochs 1 --data " + data +
                " --out " + (dir / "flag").string()) == 0);
  CHECK(count_lines(slurp(dir / "flag" / "loss_trace.txt")) == 1);
  CHECK(nlohmann::json::parse(slurp(dir / "flag" / "report.json")).at("config").at("seed") == 11);

  // QEPI_OUT_DIR picks the output directory when --out is absent.
  const std::string env_dir = (dir / "env").string();
  const std::string cmd = "QEPI_OUT_DIR=" + env_dir + " " + kBin + " train --data " + data +
                          " --seed 3 --epochs 1 --model vqc >/dev/null 2>&1";
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(fs::exists(fs::path(env_dir) / "report.json"));

  CHECK(run_cli("eval " + (dir / "flag" / "model.txt").string() + " --data " + data) == 0);
  CHECK(run_cli("report " + dir.string()) == 0);
}
