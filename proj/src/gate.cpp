#include "qepi/gate.hpp"

#include <algorithm>

namespace qepi {

namespace {

constexpr std::array<std::pair<GateKind, std::string_view>, 10> kNames{{
    {GateKind::kH, "H"},
    {GateKind::kX, "X"},
    {GateKind::kY, "Y"},
    {GateKind::kZ, "Z"},
    {GateKind::kRX, "RX"},
    {GateKind::kRY, "RY"},
    {GateKind::kRZ, "RZ"},
    {GateKind::kCNOT, "CNOT"},
    {GateKind::kCZ, "CZ"},
    {GateKind::kSWAP, "SWAP"},
}};

}  // namespace

std::string_view kind_name(GateKind kind) noexcept {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "?";
}

GateKind parse_kind(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  throw ParseError("unknown gate kind '" + std::string(name) + "'");
}

Gate::Gate(GateKind kind, std::array<int, 2> qubits,
           std::optional<double> angle)
    : kind_(kind), qubits_(qubits), angle_(angle) {
  if (is_rotation(kind) != angle.has_value()) {
    throw ConfigError(std::string(kind_name(kind)) +
                      (angle ? " takes no angle" : " requires an angle"));
  }
  if (arity(kind) == 1) qubits_[1] = -1;
}

Gate Gate::with_angle(double angle) const {
  return Gate(kind_, qubits_, angle);
}

int Gate::max_qubit() const noexcept {
  return arity(kind_) == 2 ? std::max(qubits_[0], qubits_[1]) : qubits_[0];
}

void check_wiring(const Gate& gate, int n_qubits) {
  const auto qs = gate.qubits();
  for (int q : qs) {
    if (q < 0 || q >= n_qubits) {
      throw WiringError(std::string(kind_name(gate.kind())) + ": qubit " +
                        std::to_string(q) + " outside [0, " +
                        std::to_string(n_qubits) + ")");
    }
  }
  if (qs.size() == 2 && qs[0] == qs[1]) {
    throw WiringError(std::string(kind_name(gate.kind())) +
                      ": repeated qubit " + std::to_string(qs[0]));
  }
}

Gate inverse(const Gate& gate) {
  if (const auto a = gate.angle()) return gate.with_angle(-*a);
  return gate;
}

}  // namespace qepi
