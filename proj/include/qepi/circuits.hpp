#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "qepi/gate.hpp"
#include "qepi/statevector.hpp"

namespace qepi {

struct Circuit {
  int n_qubits = 0;
  std::vector<Gate> gates;

  bool operator==(const Circuit&) const = default;
};

/// Second-order Pauli-Z evolution map. Per repetition: H on every qubit,
/// RZ(2 x_i) on qubit i, then for each pair (i, j):
/// CNOT(i, j), RZ(2 (pi - x_i)(pi - x_j)) on j, CNOT(i, j).
struct FeatureMapSpec {
  int n_qubits = 2;
  int depth = 2;
  std::vector<std::pair<int, int>> entangling_pairs;

  /// Linear chain (i, i+1) coupling.
  static FeatureMapSpec linear(int n_qubits, int depth = 2);

  bool operator==(const FeatureMapSpec&) const = default;
};

enum class EntanglerKind { kCzRing, kSwapChain };

std::string to_string(EntanglerKind kind);
EntanglerKind parse_entangler(const std::string& name);

/// Hardware-efficient ansatz: (RY, RZ per qubit, entangler) x layers, then a
/// closing rotation block.
struct AnsatzSpec {
  int n_qubits = 2;
  int layers = 2;
  EntanglerKind entangler = EntanglerKind::kCzRing;

  /// 2 * n_qubits * (layers + 1).
  Eigen::Index parameter_count() const {
    return 2 * Eigen::Index{n_qubits} * (layers + 1);
  }

  bool operator==(const AnsatzSpec&) const = default;
};

/// Index of the RY (component 0) or RZ (component 1) angle of `qubit` in
/// rotation block `block`.
constexpr Eigen::Index ansatz_parameter_index(int n_qubits, int block,
                                              int qubit, int component) {
  return 2 * (Eigen::Index{block} * n_qubits + qubit) + component;
}

Circuit build_feature_map(const Eigen::Ref<const Eigen::VectorXd>& x,
                          const FeatureMapSpec& spec);

Circuit build_entangler(int n_qubits, EntanglerKind kind);

Circuit build_ansatz(const Eigen::Ref<const Eigen::VectorXd>& theta,
                     const AnsatzSpec& spec);

/// U_phi(x_j) followed by U_phi(x_i)^dagger. Its all-zeros probability on
/// |0...0> equals |<phi(x_i)|phi(x_j)>|^2.
Circuit build_kernel_circuit(const Eigen::Ref<const Eigen::VectorXd>& x_i,
                             const Eigen::Ref<const Eigen::VectorXd>& x_j,
                             const FeatureMapSpec& spec);

/// Reversed order, rotation angles negated.
Circuit invert(const Circuit& circuit);

/// `first` then `second`; qubit counts must agree.
Circuit concat(const Circuit& first, const Circuit& second);

void apply_circuit_inplace(Statevector& state, const Circuit& circuit);

/// The circuit applied to |0...0>.
Statevector simulate(const Circuit& circuit);

/// One gate per line: `KIND q0[,q1][(angle)]`.
std::string to_text(const Circuit& circuit);

}  // namespace qepi
