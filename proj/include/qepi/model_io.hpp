#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>

#include "qepi/dualsvm.hpp"
#include "qepi/encode.hpp"
#include "qepi/metrics.hpp"
#include "qepi/vqc.hpp"

namespace qepi {

struct StoredQsvm {
  QSVMModel model;
  double C = 1.0;
  double tol = 1e-6;
};

struct StoredVqc {
  VQCModel model;
  ShotMode shots = ShotMode::exact();
  std::uint64_t seed = 0;
  double error_shots = 4.0;
};

/// A trained classifier plus the encoding that produced its inputs.
/// `encoding` is empty for models trained on pre-encoded feature files.
struct ModelFile {
  std::optional<EncodingSpec> encoding;
  std::variant<StoredQsvm, StoredVqc> body;

  ModelKind kind() const noexcept {
    return std::holds_alternative<StoredQsvm>(body) ? ModelKind::kQsvm : ModelKind::kVqc;
  }
};

/// Flat `key = value` lines, vectors space-separated. Multipliers and theta
/// carry 12 significant digits, everything else round-trips exactly.
void write_model(std::ostream& out, const ModelFile& model);
ModelFile read_model(std::istream& in, const std::string& source);

void save_model(const std::filesystem::path& path, const ModelFile& model);
ModelFile load_model(const std::filesystem::path& path);

}  // namespace qepi
