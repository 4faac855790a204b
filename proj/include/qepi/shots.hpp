#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "qepi/errors.hpp"

namespace qepi {

/// Exact probabilities, or R measurement shots.
class ShotMode {
 public:
  static ShotMode exact() { return ShotMode(std::nullopt); }
  static ShotMode shots(std::uint64_t r) {
    if (r == 0) throw ConfigError("shot count must be >= 1");
    return ShotMode(r);
  }

  /// "exact" or a positive integer.
  static ShotMode parse(const std::string& text) {
    if (text == "exact") return exact();
    std::size_t used = 0;
    long long r = 0;
    try {
      r = std::stoll(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != text.size() || used == 0 || r < 1) {
      throw ConfigError("shots must be 'exact' or a positive integer, got '" +
                        text + "'");
    }
    return shots(static_cast<std::uint64_t>(r));
  }

  bool is_exact() const noexcept { return !shots_; }
  std::uint64_t shots() const {
    if (!shots_) throw StateError("exact mode has no shot count");
    return *shots_;
  }
  std::string to_string() const {
    return shots_ ? std::to_string(*shots_) : std::string("exact");
  }

  bool operator==(const ShotMode&) const = default;

 private:
  explicit ShotMode(std::optional<std::uint64_t> r) : shots_(r) {}
  std::optional<std::uint64_t> shots_;
};

}  // namespace qepi
