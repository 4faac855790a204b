#include "qepi/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qepi/errors.hpp"

namespace qepi {

std::string to_string(ModelKind kind) {
  return kind == ModelKind::kQsvm ? "qsvm" : "vqc";
}

ModelKind parse_model_kind(const std::string& name) {
  if (name == "qsvm") return ModelKind::kQsvm;
  if (name == "vqc") return ModelKind::kVqc;
  throw ParseError("unknown model kind '" + name + "'");
}

ConfusionCounts confusion(const std::vector<int>& labels,
                          const std::vector<int>& predictions) {
  if (labels.size() != predictions.size()) {
    throw ShapeError(std::to_string(labels.size()) + " labels but " +
                     std::to_string(predictions.size()) + " predictions");
  }
  if (labels.empty()) throw SizeError("confusion of an empty prediction set");
  ConfusionCounts c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool actual = labels[i] > 0;
    const bool predicted = predictions[i] > 0;
    if (actual && predicted) ++c.tp;
    else if (!actual && !predicted) ++c.tn;
    else if (predicted) ++c.fp;
    else ++c.fn;
  }
  return c;
}

double accuracy(const ConfusionCounts& c) {
  if (c.total() == 0) throw SizeError("accuracy of zero predictions");
  return static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
}

double mcc(const ConfusionCounts& c) {
  if (c.total() == 0) throw SizeError("MCC of zero predictions");
  const auto tp = static_cast<double>(c.tp);
  const auto tn = static_cast<double>(c.tn);
  const auto fp = static_cast<double>(c.fp);
  const auto fn = static_cast<double>(c.fn);
  const double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (denom == 0.0) return 0.0;
  return (tp * tn - fp * fn) / std::sqrt(denom);
}

double roc_auc(const std::vector<int>& labels, const std::vector<double>& scores) {
  if (labels.size() != scores.size()) {
    throw ShapeError(std::to_string(labels.size()) + " labels but " +
                     std::to_string(scores.size()) + " scores");
  }
  const std::size_t n = labels.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Twice the mid-rank keeps every rank an integer.
  double rank2_pos = 0.0;
  std::uint64_t n_pos = 0;
  for (std::size_t lo = 0; lo < n;) {
    std::size_t hi = lo + 1;
    while (hi < n && scores[order[hi]] == scores[order[lo]]) ++hi;
    const double rank2 = static_cast<double>(lo + 1 + hi);
    for (std::size_t k = lo; k < hi; ++k) {
      if (labels[order[k]] > 0) {
        rank2_pos += rank2;
        ++n_pos;
      }
    }
    lo = hi;
  }
  const std::uint64_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw DegenerateError("ROC AUC needs both positive and negative labels");
  }
  // U = sum of positive ranks - n_pos (n_pos + 1) / 2
  const double u2 = rank2_pos - static_cast<double>(n_pos * (n_pos + 1));
  return (u2 / 2.0) / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

EvalReport evaluate(ModelKind kind, const std::vector<int>& labels,
                    const std::vector<int>& predictions,
                    const std::vector<double>& scores) {
  EvalReport r;
  r.model_kind = kind;
  r.confusion = confusion(labels, predictions);
  r.acc = accuracy(r.confusion);
  r.mcc = mcc(r.confusion);
  r.auc = roc_auc(labels, scores);
  return r;
}

const std::array<ReferenceRow, 11>& reference_rows() {
  static const std::array<ReferenceRow, 11> rows{{
      {"ABCPred (neural network)", 2005, "66%", "0.72", "0.2"},
      {"Recurrent neural network, continuous epitopes", 2006, "65%", "0.64", "X"},
      {"Improved linear epitope method", 2006, "65%", "0.70", "X"},
      {"PEPITO", 2008, "70%", "0.75", "X"},
      {"SVMTriP", 2012, "70%-75%", "0.74", "0.4"},
      {"BepiPred-2.0", 2017, "68%-72%", "0.74", "X"},
      {"Command-line linear epitope methods review", 2021, "65%-70%", "0.68-0.72", "0.3-0.4"},
      {"Structure-based local+global features", 2022, "75%", "0.76", "0.45"},
      {"Graph attention network", 2024, "78%", "0.8", "0.5"},
      {"QSVM (published)", 2025, "70%", "0.71", "0.42"},
      {"VQC (published)", 2025, "73%", "0.703", "0.148"},
  }};
  return rows;
}

}  // namespace qepi
