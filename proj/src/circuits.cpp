#include "qepi/circuits.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace qepi {

namespace {

void check_dimension(const Eigen::Ref<const Eigen::VectorXd>& x, int n,
                     const char* what) {
  if (x.size() != n) {
    throw ShapeError(std::string(what) + ": feature length " +
                     std::to_string(x.size()) + " != " + std::to_string(n) +
                     " qubits");
  }
}

}  // namespace

FeatureMapSpec FeatureMapSpec::linear(int n_qubits, int depth) {
  FeatureMapSpec spec;
  spec.n_qubits = n_qubits;
  spec.depth = depth;
  for (int i = 0; i + 1 < n_qubits; ++i) spec.entangling_pairs.emplace_back(i, i + 1);
  return spec;
}

std::string to_string(EntanglerKind kind) {
  return kind == EntanglerKind::kCzRing ? "cz_ring" : "swap_chain";
}

EntanglerKind parse_entangler(const std::string& name) {
  if (name == "cz_ring") return EntanglerKind::kCzRing;
  if (name == "swap_chain") return EntanglerKind::kSwapChain;
  throw ParseError("unknown entangler '" + name + "'");
}

Circuit build_feature_map(const Eigen::Ref<const Eigen::VectorXd>& x,
                          const FeatureMapSpec& spec) {
  check_dimension(x, spec.n_qubits, "feature map");
  if (spec.depth < 1) throw ConfigError("feature-map depth must be >= 1");
  constexpr double pi = std::numbers::pi;

  Circuit c{spec.n_qubits, {}};
  c.gates.reserve(static_cast<std::size_t>(spec.depth) *
                  (2 * spec.n_qubits + 3 * spec.entangling_pairs.size()));
  for (int rep = 0; rep < spec.depth; ++rep) {
    for (int q = 0; q < spec.n_qubits; ++q) c.gates.push_back(Gate::h(q));
    for (int q = 0; q < spec.n_qubits; ++q) c.gates.push_back(Gate::rz(q, 2.0 * x(q)));
    for (const auto& [i, j] : spec.entangling_pairs) {
      const double phase = 2.0 * (pi - x(i)) * (pi - x(j));
      c.gates.push_back(Gate::cnot(i, j));
      c.gates.push_back(Gate::rz(j, phase));
      c.gates.push_back(Gate::cnot(i, j));
    }
  }
  for (const auto& g : c.gates) check_wiring(g, c.n_qubits);
  return c;
}

Circuit build_entangler(int n_qubits, EntanglerKind kind) {
  if (n_qubits < 2) {
    throw SizeError("entangler needs >= 2 qubits, got " + std::to_string(n_qubits));
  }
  Circuit c{n_qubits, {}};
  if (kind == EntanglerKind::kCzRing) {
    const int pairs = n_qubits == 2 ? 1 : n_qubits;
    for (int i = 0; i < pairs; ++i) c.gates.push_back(Gate::cz(i, (i + 1) % n_qubits));
  } else {
    for (int i = 0; i + 1 < n_qubits; ++i) c.gates.push_back(Gate::swap(i, i + 1));
  }
  return c;
}

Circuit build_ansatz(const Eigen::Ref<const Eigen::VectorXd>& theta,
                     const AnsatzSpec& spec) {
  if (spec.layers < 1) throw ConfigError("ansatz layers must be >= 1");
  if (theta.size() != spec.parameter_count()) {
    throw ShapeError("ansatz expects " + std::to_string(spec.parameter_count()) +
                     " parameters, got " + std::to_string(theta.size()));
  }
  if (!theta.allFinite()) throw ConfigError("ansatz parameters must be finite");

  const Circuit entangler = build_entangler(spec.n_qubits, spec.entangler);
  Circuit c{spec.n_qubits, {}};
  for (int block = 0; block <= spec.layers; ++block) {
    for (int q = 0; q < spec.n_qubits; ++q) {
      c.gates.push_back(Gate::ry(q, theta(ansatz_parameter_index(spec.n_qubits, block, q, 0))));
      c.gates.push_back(Gate::rz(q, theta(ansatz_parameter_index(spec.n_qubits, block, q, 1))));
    }
    if (block < spec.layers) {
      c.gates.insert(c.gates.end(), entangler.gates.begin(), entangler.gates.end());
    }
  }
  return c;
}

Circuit build_kernel_circuit(const Eigen::Ref<const Eigen::VectorXd>& x_i,
                             const Eigen::Ref<const Eigen::VectorXd>& x_j,
                             const FeatureMapSpec& spec) {
  check_dimension(x_i, spec.n_qubits, "kernel circuit");
  check_dimension(x_j, spec.n_qubits, "kernel circuit");
  return concat(build_feature_map(x_j, spec), invert(build_feature_map(x_i, spec)));
}

Circuit invert(const Circuit& circuit) {
  Circuit out{circuit.n_qubits, {}};
  out.gates.reserve(circuit.gates.size());
  for (auto it = circuit.gates.rbegin(); it != circuit.gates.rend(); ++it) {
    out.gates.push_back(inverse(*it));
  }
  return out;
}

Circuit concat(const Circuit& first, const Circuit& second) {
  if (first.n_qubits != second.n_qubits) {
    throw ShapeError("cannot concatenate " + std::to_string(first.n_qubits) +
                     "- and " + std::to_string(second.n_qubits) + "-qubit circuits");
  }
  Circuit out = first;
  out.gates.insert(out.gates.end(), second.gates.begin(), second.gates.end());
  return out;
}

void apply_circuit_inplace(Statevector& state, const Circuit& circuit) {
  if (state.n_qubits() != circuit.n_qubits) {
    throw ShapeError("circuit on " + std::to_string(circuit.n_qubits) +
                     " qubits applied to a " + std::to_string(state.n_qubits()) +
                     "-qubit state");
  }
  for (const auto& g : circuit.gates) apply_gate_inplace(state, g);
}

Statevector simulate(const Circuit& circuit) {
  auto state = Statevector::zero(circuit.n_qubits);
  apply_circuit_inplace(state, circuit);
  return state;
}

std::string to_text(const Circuit& circuit) {
  std::ostringstream out;
  for (const auto& g : circuit.gates) {
    out << kind_name(g.kind()) << ' ' << g.qubit(0);
    if (arity(g.kind()) == 2) out << ',' << g.qubit(1);
    if (const auto a = g.angle()) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "(%.12g)", *a);
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace qepi
