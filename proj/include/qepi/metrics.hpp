#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qepi {

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const noexcept { return tp + fp + tn + fn; }
  bool operator==(const ConfusionCounts&) const = default;
};

enum class ModelKind { kQsvm, kVqc };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);

struct EvalReport {
  double acc = 0.0;
  double auc = 0.5;
  double mcc = 0.0;
  ConfusionCounts confusion;
  ModelKind model_kind = ModelKind::kQsvm;
};

ConfusionCounts confusion(const std::vector<int>& labels,
                          const std::vector<int>& predictions);

/// (tp + tn) / total.
double accuracy(const ConfusionCounts& c);

/// Matthews correlation; 0 when any marginal is empty.
double mcc(const ConfusionCounts& c);

/// Mann-Whitney statistic: P(score_pos > score_neg) + P(tie) / 2, from
/// mid-ranks of the pooled scores.
double roc_auc(const std::vector<int>& labels, const std::vector<double>& scores);

EvalReport evaluate(ModelKind kind, const std::vector<int>& labels,
                    const std::vector<int>& predictions,
                    const std::vector<double>& scores);

/// A published comparison row, kept verbatim for display.
struct ReferenceRow {
  std::string_view method;
  int year;
  std::string_view acc;
  std::string_view auc;
  std::string_view mcc;
};

/// Published B-cell epitope predictor figures, including the quantum QSVM
/// and VQC rows; display only.
const std::array<ReferenceRow, 11>& reference_rows();

}  // namespace qepi
