#include "qepi/app.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <variant>

#include "qepi/dualsvm.hpp"
#include "qepi/encode.hpp"
#include "qepi/errors.hpp"
#include "qepi/model_io.hpp"
#include "qepi/qkernel.hpp"
#include "qepi/rng.hpp"
#include "qepi/vqc.hpp"

namespace qepi::app {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr const char* kReportFormat = "qepitope-report/1";
constexpr std::uint64_t kSplitTag = 1;
constexpr std::uint64_t kPredictTag = 2;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string format_real(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

double parse_real_text(const std::string& text, const std::string& what) {
  if (text == "inf") return kHardMargin;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw ValidationError(what + ": expected a number, got '" + text + "'");
  }
  return v;
}

// --- input -----------------------------------------------------------------

enum class InputKind { kPeptides, kFeatures };

/// Header of the first data line decides between the two CSV layouts.
InputKind sniff_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset " + path.string());
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    if (line.rfind("x0", first) == first) return InputKind::kFeatures;
    return InputKind::kPeptides;
  }
  throw SizeError("dataset " + path.string() + " is empty");
}

struct Prepared {
  LabeledSet train;
  LabeledSet test;
  std::optional<EncodingSpec> encoding;
  Dataset train_records;
  Dataset test_records;
  FeatureMapSpec feature_map;
};

void require_two_classes(const std::vector<int>& y, const std::string& what) {
  const bool pos = std::find(y.begin(), y.end(), 1) != y.end();
  const bool neg = std::find(y.begin(), y.end(), -1) != y.end();
  if (!pos || !neg) throw DegenerateError(what + " contains a single class");
}

Prepared prepare(const RunConfig& config) {
  if (config.dataset_path.empty()) throw ValidationError("no dataset given (--data)");
  if (!(config.test_fraction > 0.0 && config.test_fraction < 1.0)) {
    throw ValidationError("test fraction must lie in (0, 1)");
  }
  const std::uint64_t split_seed = derive_seed(config.require_seed(), kSplitTag, 0);
  Prepared p;
  if (sniff_input(config.dataset_path) == InputKind::kFeatures) {
    const LabeledSet all = load_feature_set(config.dataset_path);
    if (all.size() == 0) throw SizeError("dataset " + config.dataset_path + " has no rows");
    const int dim = static_cast<int>(all.x.front().size());
    if (config.n_qubits && *config.n_qubits != dim) {
      throw ValidationError("dataset has " + std::to_string(dim) + " features but " +
                            std::to_string(*config.n_qubits) + " qubits were requested");
    }
    require_two_classes(all.y, "dataset");
    std::tie(p.train, p.test) = split(all, config.test_fraction, split_seed, true);
    p.feature_map = FeatureMapSpec::linear(dim, config.depth);
  } else {
    const Dataset all = load_dataset(config.dataset_path);
    if (all.size() == 0) throw SizeError("dataset " + config.dataset_path + " has no records");
    require_two_classes(all.labels(), "dataset");
    std::tie(p.train_records, p.test_records) =
        split(all, config.test_fraction, split_seed, true);
    const EncodingSpec spec =
        fit_normalization(p.train_records, EncodingSpec::defaults(config.n_qubits.value_or(2)));
    p.train = featurize(p.train_records, spec);
    p.test = featurize(p.test_records, spec);
    p.feature_map = FeatureMapSpec::linear(spec.n_features(), config.depth);
    p.encoding = spec;
  }
  if (config.depth < 1) throw ValidationError("feature map depth must be >= 1");
  require_two_classes(p.train.y, "training split");
  require_two_classes(p.test.y, "test split");
  return p;
}

fs::path resolve_output_dir(const RunConfig& config) {
  fs::path dir = config.output_dir;
  if (dir.empty()) {
    const char* env = std::getenv(kOutDirEnv);
    dir = (env && *env) ? fs::path(env) : fs::path("qepi_out");
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void write_split(const fs::path& path, const Prepared& p, bool train_side) {
  auto out = open_output(path);
  if (p.encoding) {
    write_dataset(out, train_side ? p.train_records : p.test_records);
  } else {
    write_feature_set(out, train_side ? p.train : p.test);
  }
}

// --- prediction ------------------------------------------------------------

struct Predictions {
  std::vector<int> labels;
  std::vector<double> scores;
};

Predictions predict_qsvm(const QSVMModel& model, const LabeledSet& data) {
  Predictions out;
  for (std::size_t k = 0; k < data.size(); ++k) {
    const double s = decision_score(model, data.x[k], derive_seed(model.seed, kPredictTag, k));
    out.scores.push_back(s);
    out.labels.push_back(sign_label(s));
  }
  return out;
}

Predictions predict_vqc(const VQCModel& model, const LabeledSet& data, const ShotMode& shots,
                        std::uint64_t seed) {
  Predictions out;
  for (std::size_t k = 0; k < data.size(); ++k) {
    // Ranking uses exact marginals; labels follow the configured readout.
    out.scores.push_back(forward(model, data.x[k], ShotMode::exact(), 0).p_plus);
    out.labels.push_back(predict(model, data.x[k], shots, derive_seed(seed, kPredictTag, k)));
  }
  return out;
}

double accuracy_of(const std::vector<int>& y, const Predictions& p) {
  return accuracy(confusion(y, p.labels));
}

ordered_json reference_json() {
  ordered_json rows = ordered_json::array();
  for (const auto& r : reference_rows()) {
    rows.push_back({{"method", r.method}, {"year", r.year}, {"acc", r.acc},
                    {"auc", r.auc}, {"mcc", r.mcc}});
  }
  return rows;
}

void write_report_file(const fs::path& path, const RunReport& report) {
  auto out = open_output(path);
  out << serialize_report(report);
}

void write_timings(const fs::path& path, const std::vector<std::pair<std::string, double>>& t) {
  ordered_json j = ordered_json::object();
  for (const auto& [name, secs] : t) j[name] = secs;
  auto out = open_output(path);
  out << j.dump(2) << '\n';
}

}  // namespace

int exit_status_for(const std::exception& error) noexcept {
  const auto* e = dynamic_cast<const Error*>(&error);
  if (!e) return kExitNumerical;
  switch (e->kind()) {
    case ErrorKind::kSize:
    case ErrorKind::kDegenerate:
      return kExitDegenerate;
    case ErrorKind::kNumerical:
      return kExitNumerical;
    default:
      return kExitUsage;
  }
}

// --- RunConfig -------------------------------------------------------------

ordered_json RunConfig::to_json() const {
  ordered_json j;
  j["data"] = dataset_path;
  j["model"] = to_string(model);
  j["qubits"] = n_qubits ? ordered_json(*n_qubits) : ordered_json(nullptr);
  j["depth"] = depth;
  j["layers"] = layers;
  j["entangler"] = to_string(entangler);
  j["shots"] = shots.is_exact() ? ordered_json("exact") : ordered_json(shots.shots());
  j["c"] = std::isinf(C) ? ordered_json("inf") : ordered_json(C);
  j["tol"] = tol;
  j["lr"] = learning_rate;
  j["epochs"] = max_epochs;
  j["error_shots"] = error_shots;
  j["test_fraction"] = test_fraction;
  j["seed"] = seed ? ordered_json(*seed) : ordered_json(nullptr);
  return j;
}

void RunConfig::merge_json(const nlohmann::json& input) {
  // A whole report is accepted too, so a run can be repeated from its report.
  const nlohmann::json& j = (input.is_object() && input.contains("config") &&
                             input.contains("format"))
                                ? input.at("config")
                                : input;
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "data") {
        dataset_path = v.get<std::string>();
      } else if (key == "model") {
        model = parse_model_kind(v.get<std::string>());
      } else if (key == "qubits") {
        n_qubits = v.is_null() ? std::nullopt : std::optional<int>(v.get<int>());
      } else if (key == "depth") {
        depth = v.get<int>();
      } else if (key == "layers") {
        layers = v.get<int>();
      } else if (key == "entangler") {
        entangler = parse_entangler(v.get<std::string>());
      } else if (key == "shots") {
        shots = v.is_string() ? ShotMode::parse(v.get<std::string>())
                              : ShotMode::shots(v.get<std::uint64_t>());
      } else if (key == "c") {
        C = v.is_string() ? parse_real_text(v.get<std::string>(), "c") : v.get<double>();
      } else if (key == "tol") {
        tol = v.get<double>();
      } else if (key == "lr") {
        learning_rate = v.get<double>();
      } else if (key == "epochs") {
        max_epochs = v.get<int>();
      } else if (key == "error_shots") {
        error_shots = v.get<double>();
      } else if (key == "test_fraction") {
        test_fraction = v.get<double>();
      } else if (key == "seed") {
        seed = v.is_null() ? std::nullopt : std::optional<std::uint64_t>(v.get<std::uint64_t>());
      } else if (key == "out") {
        output_dir = v.get<std::string>();
      } else {
        throw ValidationError("unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad config value: ") + e.what());
  } catch (const ParseError& e) {
    throw ValidationError(e.what());
  }
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig c;
  c.merge_json(j);
  return c;
}

std::uint64_t RunConfig::require_seed() const {
  if (!seed) throw ValidationError("a seed is required (--seed or \"seed\" in the config)");
  return *seed;
}

// --- RunReport -------------------------------------------------------------

ordered_json RunReport::to_json() const {
  ordered_json j;
  j["format"] = kReportFormat;
  j["command"] = command;
  j["model"] = to_string(model_kind);
  j["metrics"] = {{"acc", eval.acc}, {"auc", eval.auc}, {"mcc", eval.mcc}};
  j["confusion"] = {{"tp", eval.confusion.tp}, {"fp", eval.confusion.fp},
                    {"tn", eval.confusion.tn}, {"fn", eval.confusion.fn}};
  j["train_accuracy"] = train_accuracy ? ordered_json(*train_accuracy) : ordered_json(nullptr);
  j["n_train"] = n_train;
  j["n_evaluated"] = n_evaluated;
  j["config"] = config.to_json();
  j["solver"] = solver;
  j["warnings"] = warnings;
  j["artifacts"] = artifacts;
  j["reference_rows"] = reference_json();
  return j;
}

RunReport RunReport::from_json(const ordered_json& j) {
  RunReport r;
  try {
    if (j.at("format").get<std::string>() != kReportFormat) {
      throw ParseError("unsupported report format '" + j.at("format").get<std::string>() + "'");
    }
    r.command = j.at("command").get<std::string>();
    r.model_kind = parse_model_kind(j.at("model").get<std::string>());
    r.eval.model_kind = r.model_kind;
    const auto& m = j.at("metrics");
    r.eval.acc = m.at("acc").get<double>();
    r.eval.auc = m.at("auc").get<double>();
    r.eval.mcc = m.at("mcc").get<double>();
    const auto& c = j.at("confusion");
    r.eval.confusion = {c.at("tp").get<std::uint64_t>(), c.at("fp").get<std::uint64_t>(),
                        c.at("tn").get<std::uint64_t>(), c.at("fn").get<std::uint64_t>()};
    const auto& ta = j.at("train_accuracy");
    if (!ta.is_null()) r.train_accuracy = ta.get<double>();
    r.n_train = j.at("n_train").get<std::size_t>();
    r.n_evaluated = j.at("n_evaluated").get<std::size_t>();
    r.config = RunConfig::from_json(nlohmann::json::parse(j.at("config").dump()));
    r.solver = j.at("solver");
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    r.artifacts = j.at("artifacts");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed report: ") + e.what());
  } catch (const ValidationError& e) {
    throw ParseError(std::string("malformed report config: ") + e.what());
  }
  return r;
}

std::string serialize_report(const RunReport& report) {
  return report.to_json().dump(2) + "\n";
}

RunReport parse_report(const std::string& text, const std::string& source) {
  // Ordered so that free-form blocks keep their written key order.
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(source + ": " + e.what());
  }
  try {
    return RunReport::from_json(j);
  } catch (const ParseError& e) {
    throw ParseError(source + ": " + e.what());
  }
}

// --- commands --------------------------------------------------------------

fs::path cmd_kernel(const RunConfig& config, std::ostream& log) {
  const Prepared p = prepare(config);
  const fs::path dir = resolve_output_dir(config);
  const KernelMatrix k = kernel_matrix(p.train.x, p.feature_map, config.shots,
                                       config.require_seed());
  const fs::path path = dir / "kernel.txt";
  auto out = open_output(path);
  write_kernel_dump(out, k.values);
  log << "t=" << k.size() << " mode=" << k.mode.to_string() << '\n';
  return path;
}

RunReport cmd_train(const RunConfig& config, std::ostream& log) {
  const auto t0 = Clock::now();
  const std::uint64_t seed = config.require_seed();
  const Prepared p = prepare(config);
  const fs::path dir = resolve_output_dir(config);
  const double prepare_s = seconds_since(t0);

  RunReport report;
  report.command = "train";
  report.model_kind = config.model;
  report.config = config;
  report.n_train = p.train.size();
  report.n_evaluated = p.test.size();

  ModelFile file;
  file.encoding = p.encoding;
  Predictions on_train;
  Predictions on_test;

  const auto t1 = Clock::now();
  if (config.model == ModelKind::kQsvm) {
    const QSVMTraining trained =
        train_qsvm(p.train.x, p.train.y, p.feature_map, config.shots, config.C, config.tol, seed);
    {
      auto out = open_output(dir / "kernel.txt");
      write_kernel_dump(out, trained.kernel.values);
    }
    const auto& sol = trained.model.solution;
    report.solver = {{"objective", sol.objective},
                     {"bias", sol.bias},
                     {"iterations", sol.iterations},
                     {"converged", sol.converged},
                     {"support_vectors", trained.model.support_vectors.size()},
                     {"psd_repaired", trained.psd_repaired}};
    if (!sol.warning.empty()) report.warnings.push_back(sol.warning);
    if (trained.psd_repaired) {
      report.warnings.push_back("estimated kernel was not PSD; eigenvalues were clipped");
    }
    report.artifacts["kernel"] = "kernel.txt";
    on_train = predict_qsvm(trained.model, p.train);
    on_test = predict_qsvm(trained.model, p.test);
    file.body = StoredQsvm{trained.model, config.C, config.tol};
  } else {
    TrainConfig tc;
    tc.learning_rate = config.learning_rate;
    tc.max_epochs = config.max_epochs;
    tc.shots = config.shots;
    tc.seed = seed;
    tc.convergence_tol = config.tol;
    tc.error_shots = config.error_shots;
    const AnsatzSpec ansatz{p.feature_map.n_qubits, config.layers, config.entangler};
    const TrainResult trained = train(p.train, p.feature_map, ansatz, tc);
    {
      auto out = open_output(dir / "loss_trace.txt");
      for (std::size_t e = 0; e < trained.loss_trace.size(); ++e) {
        out << e + 1 << ' ' << format_real(trained.loss_trace[e], 12) << '\n';
      }
    }
    const double final_loss =
        trained.loss_trace.empty() ? trained.initial_loss : trained.loss_trace.back();
    report.solver = {{"initial_loss", trained.initial_loss},
                     {"final_loss", final_loss},
                     {"epochs", trained.loss_trace.size()},
                     {"converged", trained.converged}};
    if (!trained.converged) {
      report.warnings.push_back("gradient norm above tol after " +
                                std::to_string(trained.loss_trace.size()) + " epochs");
    }
    report.artifacts["loss_trace"] = "loss_trace.txt";
    on_train = predict_vqc(trained.model, p.train, config.shots, seed);
    on_test = predict_vqc(trained.model, p.test, config.shots, seed);
    file.body = StoredVqc{trained.model, config.shots, seed, config.error_shots};
  }
  const double train_s = seconds_since(t1);

  report.eval = evaluate(config.model, p.test.y, on_test.labels, on_test.scores);
  report.train_accuracy = accuracy_of(p.train.y, on_train);

  save_model(dir / "model.txt", file);
  write_split(dir / "train_split.csv", p, true);
  write_split(dir / "test_split.csv", p, false);
  report.artifacts["model"] = "model.txt";
  report.artifacts["train_split"] = "train_split.csv";
  report.artifacts["test_split"] = "test_split.csv";
  report.artifacts["timings"] = "timings.json";
  write_report_file(dir / "report.json", report);
  write_timings(dir / "timings.json",
                {{"prepare_s", prepare_s}, {"train_s", train_s}, {"total_s", seconds_since(t0)}});

  log << to_string(config.model) << ": acc=" << format_real(report.eval.acc, 4)
      << " auc=" << format_real(report.eval.auc, 4) << " mcc=" << format_real(report.eval.mcc, 4)
      << " (train acc " << format_real(*report.train_accuracy, 4) << ") -> "
      << (dir / "report.json").string() << '\n';
  return report;
}

RunReport cmd_eval(const fs::path& model_path, const std::string& dataset_path,
                   const fs::path& output_dir, std::ostream& log) {
  const auto t0 = Clock::now();
  const ModelFile file = load_model(model_path);
  if (dataset_path.empty()) throw ValidationError("no dataset given (--data)");
  const InputKind input = sniff_input(dataset_path);

  LabeledSet data;
  if (file.encoding) {
    if (input != InputKind::kPeptides) {
      throw ValidationError("model expects peptide sequences but " + dataset_path +
                            " holds encoded features");
    }
    data = featurize(load_dataset(dataset_path), *file.encoding);
  } else {
    if (input != InputKind::kFeatures) {
      throw ValidationError("model expects encoded features but " + dataset_path +
                            " holds peptide sequences");
    }
    data = load_feature_set(dataset_path);
  }
  if (data.size() == 0) throw SizeError("dataset " + dataset_path + " has no rows");

  RunReport report;
  report.command = "eval";
  report.model_kind = file.kind();
  report.config.dataset_path = dataset_path;
  report.config.model = file.kind();
  report.artifacts["model"] = model_path.filename().string();

  Predictions pred;
  FeatureMapSpec fm;
  if (const auto* q = std::get_if<StoredQsvm>(&file.body)) {
    fm = q->model.feature_map;
    report.config.shots = q->model.kernel_mode;
    report.config.seed = q->model.seed;
    report.config.C = q->C;
    report.config.tol = q->tol;
    report.n_train = q->model.support_vectors.size();
    report.solver = {{"support_vectors", q->model.support_vectors.size()}};
  } else {
    const auto& v = std::get<StoredVqc>(file.body);
    fm = v.model.feature_map;
    report.config.layers = v.model.ansatz.layers;
    report.config.entangler = v.model.ansatz.entangler;
    report.config.shots = v.shots;
    report.config.seed = v.seed;
    report.config.error_shots = v.error_shots;
    report.solver = {{"parameters", v.model.theta.size()}};
  }
  report.config.n_qubits = fm.n_qubits;
  report.config.depth = fm.depth;
  for (const auto& x : data.x) {
    if (x.size() != fm.n_qubits) {
      throw ValidationError("dataset has " + std::to_string(x.size()) +
                            " features but the model expects " + std::to_string(fm.n_qubits));
    }
  }

  if (const auto* q = std::get_if<StoredQsvm>(&file.body)) {
    pred = predict_qsvm(q->model, data);
  } else {
    const auto& v = std::get<StoredVqc>(file.body);
    pred = predict_vqc(v.model, data, v.shots, v.seed);
  }
  report.n_evaluated = data.size();
  require_two_classes(data.y, "evaluation data");
  report.eval = evaluate(file.kind(), data.y, pred.labels, pred.scores);

  if (!output_dir.empty()) {
    std::error_code ec;
    fs::create_directories(output_dir, ec);
    if (ec) throw IoError("cannot create output directory " + output_dir.string());
    report.artifacts["timings"] = "eval_timings.json";
    write_report_file(output_dir / "eval_report.json", report);
    write_timings(output_dir / "eval_timings.json", {{"total_s", seconds_since(t0)}});
  }
  log << to_string(file.kind()) << " eval on " << dataset_path
      << ": acc=" << format_real(report.eval.acc, 4) << " auc=" << format_real(report.eval.auc, 4)
      << " mcc=" << format_real(report.eval.mcc, 4) << '\n';
  return report;
}

int cmd_report(const fs::path& run_dir, std::ostream& out, std::ostream& err) {
  std::error_code ec;
  if (!fs::is_directory(run_dir, ec)) {
    err << "error: " << run_dir.string() << " is not a directory\n";
    return kExitUsage;
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(run_dir)) {
    if (!entry.is_regular_file()) continue;
    const auto name = entry.path().filename();
    if (name == "report.json" || name == "eval_report.json") files.push_back(entry.path());
  }
  if (files.empty()) {
    err << "error: no reports under " << run_dir.string() << '\n';
    return kExitDegenerate;
  }
  std::sort(files.begin(), files.end());

  struct Row {
    std::string method;
    std::string year;
    std::string acc;
    std::string auc;
    std::string mcc;
  };
  std::vector<Row> rows;
  std::vector<std::string> sources;
  bool failed = false;
  for (const auto& path : files) {
    std::ifstream in(path);
    std::stringstream text;
    text << in.rdbuf();
    try {
      const RunReport r = parse_report(text.str(), path.string());
      std::string method = to_string(r.model_kind) + " " + r.command + " (seed " +
                           (r.config.seed ? std::to_string(*r.config.seed) : "-") + ", " +
                           r.config.shots.to_string() + ")";
      char acc[32];
      std::snprintf(acc, sizeof acc, "%.1f%%", 100.0 * r.eval.acc);
      char auc[32];
      std::snprintf(auc, sizeof auc, "%.3f", r.eval.auc);
      char m[32];
      std::snprintf(m, sizeof m, "%.3f", r.eval.mcc);
      rows.push_back({method, "run", acc, auc, m});
      sources.push_back(fs::relative(path, run_dir).string());
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      failed = true;
    }
  }
  const std::size_t n_runs = rows.size();
  for (const auto& r : reference_rows()) {
    rows.push_back({std::string(r.method), std::to_string(r.year), std::string(r.acc),
                    std::string(r.auc), std::string(r.mcc)});
  }

  std::size_t width = 6;
  for (const auto& r : rows) width = std::max(width, r.method.size());
  auto line = [&](const Row& r) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%-*s  %-5s  %-8s  %-10s  %-8s", static_cast<int>(width),
                  r.method.c_str(), r.year.c_str(), r.acc.c_str(), r.auc.c_str(), r.mcc.c_str());
    std::string s = buf;
    s.erase(s.find_last_not_of(' ') + 1);
    out << s << '\n';
  };
  line({"Method", "Year", "ACC", "AUC", "MCC"});
  out << std::string(width + 41, '-') << '\n';
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (k == n_runs && n_runs > 0) out << std::string(width + 41, '-') << '\n';
    line(rows[k]);
  }
  if (!sources.empty()) {
    out << "\nruns:\n";
    for (const auto& s : sources) out << "  " << s << '\n';
  }
  return failed ? kExitUsage : kExitOk;
}

}  // namespace qepi::app
