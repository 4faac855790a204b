#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qepi/vqc.hpp"

namespace qepi {

/// The 20 canonical residues, in table order.
inline constexpr std::string_view kResidues = "ACDEFGHIKLMNPQRSTVWY";

/// Index of a residue in kResidues, or -1.
int residue_index(char residue) noexcept;

struct PeptideRecord {
  std::string sequence;
  /// +1 epitope, -1 non-epitope.
  int label = 1;
};

struct Dataset {
  std::vector<PeptideRecord> records;

  std::size_t size() const noexcept { return records.size(); }
  std::vector<int> labels() const;
};

/// One real per residue, ordered as kResidues.
struct PropensityScale {
  std::string name;
  std::array<double, 20> values{};

  double value(char residue) const;
};

/// Parker, Guo and Hodges (1986) HPLC hydrophilicity.
const PropensityScale& parker_hydrophilicity();
/// Kyte and Doolittle (1982) hydropathy.
const PropensityScale& kyte_doolittle_hydropathy();
/// Emini et al. (1985) surface accessibility.
const PropensityScale& emini_surface_accessibility();
/// Lookup by `name` field; ParseError when unknown.
const PropensityScale& scale_by_name(const std::string& name);

struct ScaleNormalization {
  double mean = 0.0;
  double std = 1.0;
};

inline constexpr double kStdFloor = 1e-9;
inline constexpr double kClipSigma = 3.0;

struct EncodingSpec {
  std::vector<PropensityScale> scales;
  /// Empty until fitted; otherwise one entry per scale.
  std::vector<ScaleNormalization> normalization;

  int n_features() const noexcept { return static_cast<int>(scales.size()); }
  bool fitted() const noexcept { return normalization.size() == scales.size() && !scales.empty(); }

  /// First n of (Parker, Kyte-Doolittle, Emini). 1 <= n <= 3.
  static EncodingSpec defaults(int n_features);
};

/// Parse `sequence,label` CSV text. `source` names the input in errors.
Dataset parse_dataset(std::istream& in, const std::string& source);
Dataset load_dataset(const std::filesystem::path& path);
void write_dataset(std::ostream& out, const Dataset& data);

/// Per-scale mean over the residues of the sequence.
Eigen::VectorXd raw_features(const PeptideRecord& record, const EncodingSpec& spec);

/// Standardize with the fitted statistics, clip to +-3 sigma, map to [-pi, pi].
Eigen::VectorXd featurize(const PeptideRecord& record, const EncodingSpec& spec);
LabeledSet featurize(const Dataset& data, const EncodingSpec& spec);

/// Population mean and std of raw features over `train`; std floored at 1e-9.
EncodingSpec fit_normalization(const Dataset& train, EncodingSpec spec);

/// Indices of (train, test) in ascending order. Test size is
/// round(t * test_fraction) clamped to [1, t-1]; stratified mode allocates it
/// across classes by largest remainder.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    const std::vector<int>& labels, double test_fraction, std::uint64_t seed,
    bool stratified);

std::pair<Dataset, Dataset> split(const Dataset& data, double test_fraction,
                                  std::uint64_t seed, bool stratified);
std::pair<LabeledSet, LabeledSet> split(const LabeledSet& data, double test_fraction,
                                        std::uint64_t seed, bool stratified);

/// Pre-encoded feature CSV: header `x0,...,x{n-1},label`, angles used as-is.
LabeledSet parse_feature_set(std::istream& in, const std::string& source);
LabeledSet load_feature_set(const std::filesystem::path& path);
void write_feature_set(std::ostream& out, const LabeledSet& data);

}  // namespace qepi
