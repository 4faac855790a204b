#pragma once

// Dense statevector simulator. Qubit 0 is the least-significant bit of the
// basis index; outcome strings print qubit n-1 first.

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qepi/errors.hpp"
#include "qepi/gate.hpp"
#include "qepi/rng.hpp"

namespace qepi {

inline constexpr int kDefaultMaxQubits = 24;

template <typename Real>
class BasicStatevector {
 public:
  using Complex = std::complex<Real>;
  using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

  /// |0...0> on n qubits; SizeError unless 1 <= n <= max_qubits.
  static BasicStatevector zero(int n_qubits,
                               int max_qubits = kDefaultMaxQubits) {
    check_qubit_count(n_qubits, max_qubits);
    Vector amps = Vector::Zero(Eigen::Index{1} << n_qubits);
    amps(0) = Complex(1);
    return BasicStatevector(n_qubits, std::move(amps));
  }

  /// Wraps caller-provided amplitudes; no normalization is applied.
  static BasicStatevector from_amplitudes(int n_qubits, Vector amps) {
    check_qubit_count(n_qubits, kDefaultMaxQubits);
    if (amps.size() != (Eigen::Index{1} << n_qubits)) {
      throw ShapeError("amplitude vector length " +
                       std::to_string(amps.size()) + " != 2^" +
                       std::to_string(n_qubits));
    }
    return BasicStatevector(n_qubits, std::move(amps));
  }

  int n_qubits() const noexcept { return n_qubits_; }
  Eigen::Index dimension() const noexcept { return amps_.size(); }
  const Vector& amplitudes() const noexcept { return amps_; }
  Complex operator[](Eigen::Index i) const { return amps_(i); }

  Real norm_squared() const { return amps_.squaredNorm(); }

  /// Probability of each basis index.
  Eigen::Matrix<Real, Eigen::Dynamic, 1> probabilities() const {
    return amps_.cwiseAbs2();
  }

  // Mutation is reserved for the gate kernels below.
  template <typename R>
  friend void apply_gate_inplace(BasicStatevector<R>& state, const Gate& gate);

 private:
  BasicStatevector(int n, Vector amps) : n_qubits_(n), amps_(std::move(amps)) {}

  static void check_qubit_count(int n, int max_qubits) {
    if (n < 1 || n > max_qubits) {
      throw SizeError("qubit count " + std::to_string(n) + " outside [1, " +
                      std::to_string(max_qubits) + "]");
    }
  }

  int n_qubits_;
  Vector amps_;
};

using Statevector = BasicStatevector<double>;

template <typename Real = double>
BasicStatevector<Real> new_zero_state(int n_qubits,
                                      int max_qubits = kDefaultMaxQubits) {
  return BasicStatevector<Real>::zero(n_qubits, max_qubits);
}

/// 2x2 unitary of a single-qubit gate, rows/cols ordered (|0>, |1>).
/// RX/RY/RZ(t) = exp(-i t P / 2).
template <typename Real>
Eigen::Matrix<std::complex<Real>, 2, 2> single_qubit_matrix(const Gate& gate) {
  using C = std::complex<Real>;
  using M = Eigen::Matrix<C, 2, 2>;
  const Real half = static_cast<Real>(gate.angle().value_or(0.0)) / Real(2);
  const Real c = std::cos(half);
  const Real s = std::sin(half);
  const Real r = Real(1) / std::sqrt(Real(2));
  M m;
  switch (gate.kind()) {
    case GateKind::kH:
      m << C(r), C(r), C(r), C(-r);
      break;
    case GateKind::kX:
      m << C(0), C(1), C(1), C(0);
      break;
    case GateKind::kY:
      m << C(0), C(0, -1), C(0, 1), C(0);
      break;
    case GateKind::kZ:
      m << C(1), C(0), C(0), C(-1);
      break;
    case GateKind::kRX:
      m << C(c), C(0, -s), C(0, -s), C(c);
      break;
    case GateKind::kRY:
      m << C(c), C(-s), C(s), C(c);
      break;
    case GateKind::kRZ:
      m << C(c, -s), C(0), C(0), C(c, s);
      break;
    default:
      throw ConfigError(std::string(kind_name(gate.kind())) +
                        " is not a single-qubit gate");
  }
  return m;
}

/// Applies the gate to the designated qubits using stride-paired updates.
template <typename Real>
void apply_gate_inplace(BasicStatevector<Real>& state, const Gate& gate) {
  check_wiring(gate, state.n_qubits());
  auto& a = state.amps_;
  const Eigen::Index dim = a.size();

  if (arity(gate.kind()) == 1) {
    const auto m = single_qubit_matrix<Real>(gate);
    const Eigen::Index stride = Eigen::Index{1} << gate.qubit(0);
    for (Eigen::Index base = 0; base < dim; base += 2 * stride) {
      for (Eigen::Index k = base; k < base + stride; ++k) {
        const auto a0 = a(k);
        const auto a1 = a(k + stride);
        a(k) = m(0, 0) * a0 + m(0, 1) * a1;
        a(k + stride) = m(1, 0) * a0 + m(1, 1) * a1;
      }
    }
    return;
  }

  const Eigen::Index b0 = Eigen::Index{1} << gate.qubit(0);
  const Eigen::Index b1 = Eigen::Index{1} << gate.qubit(1);
  switch (gate.kind()) {
    case GateKind::kCNOT:
      for (Eigen::Index i = 0; i < dim; ++i) {
        if ((i & b0) && !(i & b1)) std::swap(a(i), a(i | b1));
      }
      break;
    case GateKind::kCZ:
      for (Eigen::Index i = 0; i < dim; ++i) {
        if ((i & b0) && (i & b1)) a(i) = -a(i);
      }
      break;
    case GateKind::kSWAP:
      for (Eigen::Index i = 0; i < dim; ++i) {
        if ((i & b0) && !(i & b1)) std::swap(a(i), a(i ^ b0 ^ b1));
      }
      break;
    default:
      break;
  }
}

template <typename Real>
BasicStatevector<Real> apply_gate(BasicStatevector<Real> state,
                                  const Gate& gate) {
  apply_gate_inplace(state, gate);
  return state;
}

/// <a|b> = sum conj(a_k) b_k.
template <typename Real>
std::complex<Real> inner_product(const BasicStatevector<Real>& a,
                                 const BasicStatevector<Real>& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw ShapeError("inner product of " + std::to_string(a.n_qubits()) +
                     "- and " + std::to_string(b.n_qubits()) +
                     "-qubit states");
  }
  return a.amplitudes().dot(b.amplitudes());
}

/// <Z_q>, exact.
template <typename Real>
Real expectation_z(const BasicStatevector<Real>& state, int qubit) {
  if (qubit < 0 || qubit >= state.n_qubits()) {
    throw WiringError("expectation_z: qubit " + std::to_string(qubit) +
                      " outside [0, " + std::to_string(state.n_qubits()) +
                      ")");
  }
  const Eigen::Index bit = Eigen::Index{1} << qubit;
  Real acc(0);
  for (Eigen::Index i = 0; i < state.dimension(); ++i) {
    const Real p = std::norm(state[i]);
    acc += (i & bit) ? -p : p;
  }
  return acc;
}

/// Bit string of a basis index, qubit n-1 first.
inline std::string outcome_string(std::uint64_t index, int n_qubits) {
  std::string s(static_cast<std::size_t>(n_qubits), '0');
  for (int q = 0; q < n_qubits; ++q) {
    if ((index >> q) & 1U) s[static_cast<std::size_t>(n_qubits - 1 - q)] = '1';
  }
  return s;
}

struct MeasurementCounts {
  std::uint64_t shots = 0;
  std::map<std::string, std::uint64_t> counts;

  std::uint64_t count(const std::string& outcome) const {
    const auto it = counts.find(outcome);
    return it == counts.end() ? 0 : it->second;
  }
};

/// Tally of R draws keyed by basis index.
///
/// Each draw takes u = uniform() * total from a Xoshiro256 stream seeded
/// with `seed` and selects the first index whose cumulative probability
/// exceeds u.
template <typename Real>
std::map<std::uint64_t, std::uint64_t> sample_indices(
    const BasicStatevector<Real>& state, std::uint64_t shots,
    std::uint64_t seed) {
  if (shots == 0) throw ConfigError("shot count must be >= 1");
  std::vector<double> cumulative(static_cast<std::size_t>(state.dimension()));
  double total = 0.0;
  for (Eigen::Index i = 0; i < state.dimension(); ++i) {
    total += static_cast<double>(std::norm(state[i]));
    cumulative[static_cast<std::size_t>(i)] = total;
  }
  Xoshiro256 rng(seed);
  std::map<std::uint64_t, std::uint64_t> tally;
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    ++tally[static_cast<std::uint64_t>(it - cumulative.begin())];
  }
  return tally;
}

template <typename Real>
MeasurementCounts sample_measurements(const BasicStatevector<Real>& state,
                                      std::uint64_t shots,
                                      std::uint64_t seed) {
  MeasurementCounts out;
  out.shots = shots;
  for (const auto& [index, n] : sample_indices(state, shots, seed)) {
    out.counts.emplace(outcome_string(index, state.n_qubits()), n);
  }
  return out;
}

}  // namespace qepi
