#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "qepi/errors.hpp"

namespace qepi {

enum class GateKind { kH, kX, kY, kZ, kRX, kRY, kRZ, kCNOT, kCZ, kSWAP };

constexpr bool is_rotation(GateKind kind) noexcept {
  return kind == GateKind::kRX || kind == GateKind::kRY ||
         kind == GateKind::kRZ;
}

constexpr int arity(GateKind kind) noexcept {
  switch (kind) {
    case GateKind::kCNOT:
    case GateKind::kCZ:
    case GateKind::kSWAP:
      return 2;
    default:
      return 1;
  }
}

std::string_view kind_name(GateKind kind) noexcept;
GateKind parse_kind(std::string_view name);

/// One gate of the supported set. For CNOT, qubits[0] is the control.
class Gate {
 public:
  /// Throws ConfigError when the angle presence does not match the kind.
  /// Unused second slot of a single-qubit gate is -1.
  Gate(GateKind kind, std::array<int, 2> qubits,
       std::optional<double> angle = std::nullopt);

  static Gate h(int q) { return {GateKind::kH, {q, -1}}; }
  static Gate x(int q) { return {GateKind::kX, {q, -1}}; }
  static Gate y(int q) { return {GateKind::kY, {q, -1}}; }
  static Gate z(int q) { return {GateKind::kZ, {q, -1}}; }
  static Gate rx(int q, double a) { return {GateKind::kRX, {q, -1}, a}; }
  static Gate ry(int q, double a) { return {GateKind::kRY, {q, -1}, a}; }
  static Gate rz(int q, double a) { return {GateKind::kRZ, {q, -1}, a}; }
  static Gate cnot(int control, int target) {
    return {GateKind::kCNOT, {control, target}};
  }
  static Gate cz(int a, int b) { return {GateKind::kCZ, {a, b}}; }
  static Gate swap(int a, int b) { return {GateKind::kSWAP, {a, b}}; }

  GateKind kind() const noexcept { return kind_; }
  std::span<const int> qubits() const noexcept {
    return {qubits_.data(), static_cast<std::size_t>(arity(kind_))};
  }
  int qubit(std::size_t i) const { return qubits_.at(i); }
  std::optional<double> angle() const noexcept { return angle_; }

  /// Same kind and wiring, angle replaced. Only valid for rotations.
  Gate with_angle(double angle) const;

  /// Largest referenced qubit index.
  int max_qubit() const noexcept;

  bool operator==(const Gate&) const = default;

 private:
  GateKind kind_;
  std::array<int, 2> qubits_;
  std::optional<double> angle_;
};

/// Throws WiringError unless every index is in [0, n_qubits) and distinct.
void check_wiring(const Gate& gate, int n_qubits);

/// The inverse gate: rotations negate their angle, the rest are self-inverse.
Gate inverse(const Gate& gate);

}  // namespace qepi
