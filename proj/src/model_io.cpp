#include "qepi/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace qepi {

namespace {

constexpr const char* kFormat = "qepitope-model/1";

std::string fmt(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

template <typename Range>
std::string join(const Range& values, int digits) {
  std::string out;
  for (const auto& v : values) {
    if (!out.empty()) out += ' ';
    out += fmt(static_cast<double>(v), digits);
  }
  return out;
}

std::string join_vector(const Eigen::VectorXd& v, int digits) {
  return join(std::vector<double>(v.data(), v.data() + v.size()), digits);
}

class KeyValues {
 public:
  KeyValues(std::istream& in, std::string source) : source_(std::move(source)) {
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
      ++number;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line.front() == '#') continue;
      const auto eq = line.find(" = ");
      if (eq == std::string::npos) {
        throw ParseError(source_ + ":" + std::to_string(number) + ": expected 'key = value'");
      }
      values_[line.substr(0, eq)] = line.substr(eq + 3);
    }
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  const std::string& text(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ParseError(source_ + ": missing key '" + key + "'");
    return it->second;
  }

  double real(const std::string& key) const {
    const auto v = reals(key);
    if (v.size() != 1) throw ParseError(source_ + ": key '" + key + "' expects one number");
    return v.front();
  }

  long long integer(const std::string& key) const {
    const double v = real(key);
    if (v != static_cast<double>(static_cast<long long>(v))) {
      throw ParseError(source_ + ": key '" + key + "' expects an integer");
    }
    return static_cast<long long>(v);
  }

  std::uint64_t unsigned_integer(const std::string& key) const {
    const std::string& s = text(key);
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) {
      throw ParseError(source_ + ": key '" + key + "' expects an unsigned integer");
    }
    return v;
  }

  std::vector<double> reals(const std::string& key) const {
    std::istringstream in(text(key));
    std::vector<double> out;
    std::string token;
    while (in >> token) {
      if (token == "inf") {
        out.push_back(std::numeric_limits<double>::infinity());
        continue;
      }
      char* end = nullptr;
      const double v = std::strtod(token.c_str(), &end);
      if (*end != '\0') throw ParseError(source_ + ": key '" + key + "': bad number '" + token + "'");
      out.push_back(v);
    }
    return out;
  }

  std::vector<std::string> words(const std::string& key) const {
    std::istringstream in(text(key));
    std::vector<std::string> out;
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
  }

  Eigen::VectorXd vector(const std::string& key, Eigen::Index expected) const {
    const auto v = reals(key);
    if (static_cast<Eigen::Index>(v.size()) != expected) {
      throw ParseError(source_ + ": key '" + key + "' has " + std::to_string(v.size()) +
                       " entries, expected " + std::to_string(expected));
    }
    return Eigen::Map<const Eigen::VectorXd>(v.data(), expected);
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::map<std::string, std::string> values_;
};

void write_feature_map(std::ostream& out, const FeatureMapSpec& fm) {
  out << "feature_map.n_qubits = " << fm.n_qubits << '\n';
  out << "feature_map.depth = " << fm.depth << '\n';
  out << "feature_map.pairs = ";
  for (std::size_t k = 0; k < fm.entangling_pairs.size(); ++k) {
    if (k) out << ' ';
    out << fm.entangling_pairs[k].first << '-' << fm.entangling_pairs[k].second;
  }
  out << '\n';
}

FeatureMapSpec read_feature_map(const KeyValues& kv) {
  FeatureMapSpec fm;
  fm.n_qubits = static_cast<int>(kv.integer("feature_map.n_qubits"));
  fm.depth = static_cast<int>(kv.integer("feature_map.depth"));
  for (const auto& w : kv.words("feature_map.pairs")) {
    int i = 0;
    int j = 0;
    char dash = 0;
    std::istringstream in(w);
    if (!(in >> i >> dash >> j) || dash != '-') {
      throw ParseError(kv.source() + ": bad entangling pair '" + w + "'");
    }
    fm.entangling_pairs.emplace_back(i, j);
  }
  if (fm.n_qubits < 1 || fm.n_qubits > kDefaultMaxQubits) {
    throw ParseError(kv.source() + ": feature_map.n_qubits out of range");
  }
  return fm;
}

}  // namespace

void write_model(std::ostream& out, const ModelFile& file) {
  out << "# qepitope trained classifier\n";
  out << "format = " << kFormat << '\n';
  out << "model = " << to_string(file.kind()) << '\n';
  if (file.encoding) {
    const auto& enc = *file.encoding;
    out << "encoding = peptide\n";
    out << "encoding.scales = ";
    for (std::size_t k = 0; k < enc.scales.size(); ++k) out << (k ? " " : "") << enc.scales[k].name;
    out << '\n';
    std::vector<double> means;
    std::vector<double> stds;
    for (const auto& n : enc.normalization) {
      means.push_back(n.mean);
      stds.push_back(n.std);
    }
    out << "encoding.mean = " << join(means, 17) << '\n';
    out << "encoding.std = " << join(stds, 17) << '\n';
  } else {
    out << "encoding = features\n";
  }

  if (const auto* q = std::get_if<StoredQsvm>(&file.body)) {
    const auto& m = q->model;
    write_feature_map(out, m.feature_map);
    out << "kernel_mode = " << m.kernel_mode.to_string() << '\n';
    out << "seed = " << m.seed << '\n';
    out << "C = " << fmt(q->C, 17) << '\n';
    out << "tol = " << fmt(q->tol, 17) << '\n';
    out << "bias = " << fmt(m.solution.bias, 17) << '\n';
    out << "objective = " << fmt(m.solution.objective, 17) << '\n';
    out << "converged = " << (m.solution.converged ? 1 : 0) << '\n';
    out << "support.count = " << m.support_vectors.size() << '\n';
    out << "support.alphas = " << join(m.support_alphas, 12) << '\n';
    out << "support.labels = " << join(m.labels, 1) << '\n';
    for (std::size_t k = 0; k < m.support_vectors.size(); ++k) {
      out << "support." << k << " = " << join_vector(m.support_vectors[k], 17) << '\n';
    }
  } else {
    const auto& v = std::get<StoredVqc>(file.body);
    const auto& m = v.model;
    write_feature_map(out, m.feature_map);
    out << "ansatz.n_qubits = " << m.ansatz.n_qubits << '\n';
    out << "ansatz.layers = " << m.ansatz.layers << '\n';
    out << "ansatz.entangler = " << to_string(m.ansatz.entangler) << '\n';
    out << "theta = " << join_vector(m.theta, 12) << '\n';
    out << "bias_b = " << fmt(m.bias_b, 17) << '\n';
    out << "readout = first_qubit_z\n";
    out << "shots = " << v.shots.to_string() << '\n';
    out << "seed = " << v.seed << '\n';
    out << "error_shots = " << fmt(v.error_shots, 17) << '\n';
  }
}

ModelFile read_model(std::istream& in, const std::string& source) {
  const KeyValues kv(in, source);
  if (kv.text("format") != kFormat) {
    throw ParseError(source + ": unsupported format '" + kv.text("format") + "'");
  }
  ModelFile file;
  const ModelKind kind = parse_model_kind(kv.text("model"));
  const FeatureMapSpec fm = read_feature_map(kv);

  const std::string& enc_kind = kv.text("encoding");
  if (enc_kind == "peptide") {
    EncodingSpec enc;
    for (const auto& name : kv.words("encoding.scales")) enc.scales.push_back(scale_by_name(name));
    const auto means = kv.reals("encoding.mean");
    const auto stds = kv.reals("encoding.std");
    if (means.size() != enc.scales.size() || stds.size() != enc.scales.size()) {
      throw ParseError(source + ": encoding statistics do not match the scale count");
    }
    for (std::size_t i = 0; i < means.size(); ++i) enc.normalization.push_back({means[i], stds[i]});
    if (enc.n_features() != fm.n_qubits) {
      throw ParseError(source + ": encoding has " + std::to_string(enc.n_features()) +
                       " features but the feature map " + std::to_string(fm.n_qubits) + " qubits");
    }
    file.encoding = std::move(enc);
  } else if (enc_kind != "features") {
    throw ParseError(source + ": unknown encoding '" + enc_kind + "'");
  }

  if (kind == ModelKind::kQsvm) {
    StoredQsvm q;
    auto& m = q.model;
    m.feature_map = fm;
    m.kernel_mode = ShotMode::parse(kv.text("kernel_mode"));
    m.seed = kv.unsigned_integer("seed");
    q.C = kv.real("C");
    q.tol = kv.real("tol");
    m.solution.bias = kv.real("bias");
    m.solution.objective = kv.real("objective");
    m.solution.converged = kv.integer("converged") != 0;
    const auto count = static_cast<Eigen::Index>(kv.integer("support.count"));
    const Eigen::VectorXd alphas = kv.vector("support.alphas", count);
    const Eigen::VectorXd labels = kv.vector("support.labels", count);
    for (Eigen::Index k = 0; k < count; ++k) {
      m.support_alphas.push_back(alphas(k));
      m.labels.push_back(static_cast<int>(labels(k)));
      m.support_vectors.push_back(kv.vector("support." + std::to_string(k), fm.n_qubits));
    }
    check_labels(m.labels);
    file.body = std::move(q);
  } else {
    StoredVqc v;
    auto& m = v.model;
    m.feature_map = fm;
    m.ansatz.n_qubits = static_cast<int>(kv.integer("ansatz.n_qubits"));
    m.ansatz.layers = static_cast<int>(kv.integer("ansatz.layers"));
    m.ansatz.entangler = parse_entangler(kv.text("ansatz.entangler"));
    if (m.ansatz.n_qubits != fm.n_qubits || m.ansatz.layers < 1) {
      throw ParseError(source + ": ansatz does not match the feature map");
    }
    m.theta = kv.vector("theta", m.ansatz.parameter_count());
    m.bias_b = kv.real("bias_b");
    if (kv.text("readout") != "first_qubit_z") {
      throw ParseError(source + ": unsupported readout '" + kv.text("readout") + "'");
    }
    v.shots = ShotMode::parse(kv.text("shots"));
    v.seed = kv.unsigned_integer("seed");
    v.error_shots = kv.real("error_shots");
    file.body = std::move(v);
  }
  return file;
}

void save_model(const std::filesystem::path& path, const ModelFile& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write model " + path.string());
  write_model(out, model);
}

ModelFile load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model " + path.string());
  return read_model(in, path.string());
}

}  // namespace qepi
