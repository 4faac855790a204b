#include "qepi/encode.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qepi/rng.hpp"

namespace qepi {

namespace {

//                                 A      C     D     E     F     G     H     I     K     L
//                                 M      N     P     Q     R     S     T     V     W     Y
const PropensityScale kParker{
    "parker_hydrophilicity",
    {2.1, 1.4, 10.0, 7.8, -9.2, 5.7, 2.1, -8.0, 5.7, -9.2,
     -4.2, 7.0, 2.1, 6.0, 4.2, 6.5, 5.2, -3.7, -10.0, -1.9}};

const PropensityScale kKyteDoolittle{
    "kyte_doolittle_hydropathy",
    {1.8, 2.5, -3.5, -3.5, 2.8, -0.4, -3.2, 4.5, -3.9, 3.8,
     1.9, -3.5, -1.6, -3.5, -4.5, -0.8, -0.7, 4.2, -0.9, -1.3}};

const PropensityScale kEmini{
    "emini_surface_accessibility",
    {0.815, 0.394, 1.283, 1.445, 0.695, 0.714, 1.180, 0.603, 1.545, 0.603,
     0.714, 1.296, 1.236, 1.348, 1.475, 1.115, 1.184, 0.606, 0.808, 1.089}};

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string where(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line) + ": ";
}

int parse_label(const std::string& text, const std::string& source, std::size_t line) {
  if (text == "1" || text == "+1") return 1;
  if (text == "-1" || text == "0") return -1;
  throw ParseError(where(source, line) + "invalid label '" + text + "'");
}

/// Yields (line number, content) for each non-blank, non-comment line.
template <typename Fn>
void for_each_data_line(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    fn(number, t);
  }
}

void shuffle(std::vector<std::size_t>& v, Xoshiro256& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace

int residue_index(char residue) noexcept {
  const auto pos = kResidues.find(residue);
  return pos == std::string_view::npos ? -1 : static_cast<int>(pos);
}

std::vector<int> Dataset::labels() const {
  std::vector<int> y;
  y.reserve(records.size());
  for (const auto& r : records) y.push_back(r.label);
  return y;
}

double PropensityScale::value(char residue) const {
  const int i = residue_index(residue);
  if (i < 0) throw ValidationError(std::string("invalid residue '") + residue + "'");
  return values[static_cast<std::size_t>(i)];
}

const PropensityScale& parker_hydrophilicity() { return kParker; }
const PropensityScale& kyte_doolittle_hydropathy() { return kKyteDoolittle; }
const PropensityScale& emini_surface_accessibility() { return kEmini; }

const PropensityScale& scale_by_name(const std::string& name) {
  for (const auto* s : {&kParker, &kKyteDoolittle, &kEmini}) {
    if (s->name == name) return *s;
  }
  throw ParseError("unknown propensity scale '" + name + "'");
}

EncodingSpec EncodingSpec::defaults(int n_features) {
  if (n_features < 1 || n_features > 3) {
    throw ValidationError("peptide encoding supports 1 to 3 features, got " +
                          std::to_string(n_features));
  }
  const PropensityScale* all[] = {&kParker, &kKyteDoolittle, &kEmini};
  EncodingSpec spec;
  for (int i = 0; i < n_features; ++i) spec.scales.push_back(*all[i]);
  return spec;
}

Dataset parse_dataset(std::istream& in, const std::string& source) {
  Dataset data;
  bool header_seen = false;
  for_each_data_line(in, [&](std::size_t number, const std::string& line) {
    const auto fields = split_commas(line);
    if (!header_seen) {
      if (fields.size() != 2 || fields[0] != "sequence" || fields[1] != "label") {
        throw ParseError(where(source, number) + "expected header 'sequence,label'");
      }
      header_seen = true;
      return;
    }
    if (fields.size() != 2) {
      throw ParseError(where(source, number) + "expected 2 fields, got " +
                       std::to_string(fields.size()));
    }
    const std::string& seq = fields[0];
    if (seq.empty()) throw ParseError(where(source, number) + "empty sequence");
    for (char c : seq) {
      if (residue_index(c) < 0) {
        throw ParseError(where(source, number) + "invalid residue '" + std::string(1, c) +
                         "' in " + seq);
      }
    }
    data.records.push_back({seq, parse_label(fields[1], source, number)});
  });
  if (!header_seen) throw ParseError(source + ": missing header 'sequence,label'");
  return data;
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset " + path.string());
  return parse_dataset(in, path.string());
}

void write_dataset(std::ostream& out, const Dataset& data) {
  out << "sequence,label\n";
  for (const auto& r : data.records) out << r.sequence << ',' << r.label << '\n';
}

Eigen::VectorXd raw_features(const PeptideRecord& record, const EncodingSpec& spec) {
  if (record.sequence.empty()) throw ValidationError("empty sequence");
  Eigen::VectorXd raw(spec.n_features());
  for (int s = 0; s < spec.n_features(); ++s) {
    double total = 0.0;
    for (char c : record.sequence) total += spec.scales[static_cast<std::size_t>(s)].value(c);
    raw(s) = total / static_cast<double>(record.sequence.size());
  }
  return raw;
}

Eigen::VectorXd featurize(const PeptideRecord& record, const EncodingSpec& spec) {
  if (!spec.fitted()) throw StateError("encoding normalization has not been fitted");
  const Eigen::VectorXd raw = raw_features(record, spec);
  Eigen::VectorXd out(raw.size());
  for (Eigen::Index s = 0; s < raw.size(); ++s) {
    const auto& norm = spec.normalization[static_cast<std::size_t>(s)];
    double z = norm.std <= kStdFloor ? 0.0 : (raw(s) - norm.mean) / norm.std;
    z = std::clamp(z, -kClipSigma, kClipSigma);
    out(s) = (z / kClipSigma) * std::numbers::pi;
  }
  return out;
}

LabeledSet featurize(const Dataset& data, const EncodingSpec& spec) {
  LabeledSet out;
  out.x.reserve(data.size());
  for (const auto& r : data.records) {
    out.x.push_back(featurize(r, spec));
    out.y.push_back(r.label);
  }
  return out;
}

EncodingSpec fit_normalization(const Dataset& train, EncodingSpec spec) {
  if (train.size() < 2) {
    throw SizeError("normalization needs at least 2 records, got " +
                    std::to_string(train.size()));
  }
  if (spec.scales.empty()) throw ConfigError("encoding has no scales");
  const auto t = static_cast<double>(train.size());
  const int n = spec.n_features();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::VectorXd> raws;
  raws.reserve(train.size());
  for (const auto& r : train.records) {
    raws.push_back(raw_features(r, spec));
    sum += raws.back();
  }
  const Eigen::VectorXd mean = sum / t;
  Eigen::VectorXd var = Eigen::VectorXd::Zero(n);
  for (const auto& raw : raws) var += (raw - mean).cwiseAbs2();
  var /= t;

  spec.normalization.clear();
  for (int s = 0; s < n; ++s) {
    spec.normalization.push_back({mean(s), std::max(std::sqrt(var(s)), kStdFloor)});
  }
  return spec;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    const std::vector<int>& labels, double test_fraction, std::uint64_t seed,
    bool stratified) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ConfigError("test fraction must lie in (0, 1), got " + std::to_string(test_fraction));
  }
  const std::size_t t = labels.size();
  if (t < 4) throw SizeError("split needs at least 4 records, got " + std::to_string(t));
  const auto test_total = static_cast<std::size_t>(std::clamp<long>(
      std::lround(static_cast<double>(t) * test_fraction), 1L, static_cast<long>(t) - 1));

  Xoshiro256 rng(seed);
  std::vector<std::size_t> test;
  if (!stratified) {
    std::vector<std::size_t> order(t);
    for (std::size_t i = 0; i < t; ++i) order[i] = i;
    shuffle(order, rng);
    test.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(test_total));
  } else {
    std::vector<std::size_t> groups[2];
    for (std::size_t i = 0; i < t; ++i) groups[labels[i] > 0 ? 0 : 1].push_back(i);
    if (groups[0].empty() || groups[1].empty()) {
      throw DegenerateError("stratified split needs both classes");
    }
    // Largest-remainder allocation of test_total across the two classes.
    std::size_t take[2];
    double remainder[2];
    for (int c = 0; c < 2; ++c) {
      const double share = static_cast<double>(groups[c].size() * test_total) / static_cast<double>(t);
      take[c] = static_cast<std::size_t>(std::floor(share));
      remainder[c] = share - static_cast<double>(take[c]);
    }
    if (take[0] + take[1] < test_total) {
      const int c = remainder[1] > remainder[0] ? 1 : 0;
      ++take[c];
    }
    for (int c = 0; c < 2; ++c) {
      shuffle(groups[c], rng);
      test.insert(test.end(), groups[c].begin(),
                  groups[c].begin() + static_cast<std::ptrdiff_t>(take[c]));
    }
  }
  std::sort(test.begin(), test.end());
  std::vector<std::size_t> train;
  train.reserve(t - test.size());
  for (std::size_t i = 0, k = 0; i < t; ++i) {
    if (k < test.size() && test[k] == i) {
      ++k;
    } else {
      train.push_back(i);
    }
  }
  return {train, test};
}

std::pair<Dataset, Dataset> split(const Dataset& data, double test_fraction,
                                  std::uint64_t seed, bool stratified) {
  const auto [train_idx, test_idx] = split_indices(data.labels(), test_fraction, seed, stratified);
  std::pair<Dataset, Dataset> out;
  for (auto i : train_idx) out.first.records.push_back(data.records[i]);
  for (auto i : test_idx) out.second.records.push_back(data.records[i]);
  return out;
}

std::pair<LabeledSet, LabeledSet> split(const LabeledSet& data, double test_fraction,
                                        std::uint64_t seed, bool stratified) {
  const auto [train_idx, test_idx] = split_indices(data.y, test_fraction, seed, stratified);
  std::pair<LabeledSet, LabeledSet> out;
  for (auto i : train_idx) {
    out.first.x.push_back(data.x[i]);
    out.first.y.push_back(data.y[i]);
  }
  for (auto i : test_idx) {
    out.second.x.push_back(data.x[i]);
    out.second.y.push_back(data.y[i]);
  }
  return out;
}

LabeledSet parse_feature_set(std::istream& in, const std::string& source) {
  LabeledSet data;
  std::size_t width = 0;
  for_each_data_line(in, [&](std::size_t number, const std::string& line) {
    const auto fields = split_commas(line);
    if (width == 0) {
      if (fields.size() < 2 || fields.back() != "label") {
        throw ParseError(where(source, number) + "expected header 'x0,...,label'");
      }
      for (std::size_t i = 0; i + 1 < fields.size(); ++i) {
        if (fields[i] != "x" + std::to_string(i)) {
          throw ParseError(where(source, number) + "expected column x" + std::to_string(i) +
                           ", got '" + fields[i] + "'");
        }
      }
      width = fields.size();
      return;
    }
    if (fields.size() != width) {
      throw ParseError(where(source, number) + "expected " + std::to_string(width) +
                       " fields, got " + std::to_string(fields.size()));
    }
    Eigen::VectorXd x(static_cast<Eigen::Index>(width - 1));
    for (std::size_t i = 0; i + 1 < width; ++i) {
      char* end = nullptr;
      x(static_cast<Eigen::Index>(i)) = std::strtod(fields[i].c_str(), &end);
      if (fields[i].empty() || *end != '\0' || !std::isfinite(x(static_cast<Eigen::Index>(i)))) {
        throw ParseError(where(source, number) + "invalid number '" + fields[i] + "'");
      }
    }
    data.x.push_back(std::move(x));
    data.y.push_back(parse_label(fields.back(), source, number));
  });
  if (width == 0) throw ParseError(source + ": missing header 'x0,...,label'");
  return data;
}

LabeledSet load_feature_set(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset " + path.string());
  return parse_feature_set(in, path.string());
}

void write_feature_set(std::ostream& out, const LabeledSet& data) {
  const Eigen::Index n = data.x.empty() ? 0 : data.x.front().size();
  for (Eigen::Index i = 0; i < n; ++i) out << 'x' << i << ',';
  out << "label\n";
  char buf[40];
  for (std::size_t k = 0; k < data.size(); ++k) {
    for (Eigen::Index i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", data.x[k](i));
      out << buf << ',';
    }
    out << data.y[k] << '\n';
  }
}

}  // namespace qepi
