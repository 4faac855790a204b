#include "qepi/qkernel.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

namespace qepi {

double kernel_exact(const Eigen::Ref<const Eigen::VectorXd>& x_i,
                    const Eigen::Ref<const Eigen::VectorXd>& x_j,
                    const FeatureMapSpec& spec) {
  const auto phi_i = simulate(build_feature_map(x_i, spec));
  const auto phi_j = simulate(build_feature_map(x_j, spec));
  return std::min(1.0, std::norm(inner_product(phi_i, phi_j)));
}

double kernel_shot_estimate(const Eigen::Ref<const Eigen::VectorXd>& x_i,
                            const Eigen::Ref<const Eigen::VectorXd>& x_j,
                            const FeatureMapSpec& spec, std::uint64_t shots,
                            std::uint64_t seed) {
  if (shots == 0) throw ConfigError("shot count must be >= 1");
  const auto state = simulate(build_kernel_circuit(x_i, x_j, spec));
  const auto tally = sample_indices(state, shots, seed);
  const auto zero = tally.find(0);
  const std::uint64_t r0 = zero == tally.end() ? 0 : zero->second;
  return static_cast<double>(r0) / static_cast<double>(shots);
}

double kernel_value(const Eigen::Ref<const Eigen::VectorXd>& x_i,
                    const Eigen::Ref<const Eigen::VectorXd>& x_j,
                    const FeatureMapSpec& spec, const KernelMode& mode,
                    std::uint64_t seed) {
  if (mode.is_exact()) return kernel_exact(x_i, x_j, spec);
  return kernel_shot_estimate(x_i, x_j, spec, mode.shots(), seed);
}

KernelMatrix kernel_matrix(const FeatureRows& rows, const FeatureMapSpec& spec,
                           const KernelMode& mode, std::uint64_t seed) {
  if (rows.empty()) throw SizeError("kernel matrix needs at least one point");
  const auto t = static_cast<Eigen::Index>(rows.size());
  for (const auto& x : rows) {
    if (x.size() != spec.n_qubits) {
      throw ShapeError("feature length " + std::to_string(x.size()) +
                       " != " + std::to_string(spec.n_qubits) + " qubits");
    }
  }

  KernelMatrix k{Eigen::MatrixXd::Identity(t, t), mode};
  if (mode.is_exact()) {
    std::vector<Statevector> states;
    states.reserve(rows.size());
    for (const auto& x : rows) states.push_back(simulate(build_feature_map(x, spec)));
    for (Eigen::Index i = 0; i < t; ++i) {
      for (Eigen::Index j = i + 1; j < t; ++j) {
        const double v = std::min(1.0, std::norm(inner_product(states[i], states[j])));
        k.values(i, j) = v;
        k.values(j, i) = v;
      }
    }
    return k;
  }

  for (Eigen::Index i = 0; i < t; ++i) {
    for (Eigen::Index j = i + 1; j < t; ++j) {
      const double v = kernel_shot_estimate(
          rows[i], rows[j], spec, mode.shots(),
          derive_seed(seed, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j)));
      k.values(i, j) = v;
      k.values(j, i) = v;
    }
  }
  return k;
}

double min_eigenvalue(const Eigen::MatrixXd& symmetric) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  return solver.eigenvalues().minCoeff();
}

KernelMatrix regularize_psd(const KernelMatrix& kernel) {
  const Eigen::MatrixXd& a = kernel.values;
  if (a.rows() != a.cols()) throw ShapeError("kernel matrix must be square");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");

  const Eigen::VectorXd clipped = solver.eigenvalues().cwiseMax(0.0);
  const Eigen::MatrixXd& v = solver.eigenvectors();
  Eigen::MatrixXd rebuilt = v * clipped.asDiagonal() * v.transpose();
  rebuilt = 0.5 * (rebuilt + rebuilt.transpose()).eval();

  // D^-1/2 A D^-1/2 keeps PSD and restores the unit diagonal. A zero
  // diagonal entry means the whole row vanished; it becomes a unit row.
  const Eigen::Index t = rebuilt.rows();
  Eigen::VectorXd scale(t);
  for (Eigen::Index i = 0; i < t; ++i) {
    const double d = rebuilt(i, i);
    scale(i) = d > 1e-300 ? 1.0 / std::sqrt(d) : 0.0;
  }
  KernelMatrix out{Eigen::MatrixXd::Identity(t, t), kernel.mode};
  for (Eigen::Index i = 0; i < t; ++i) {
    for (Eigen::Index j = i + 1; j < t; ++j) {
      const double vij = scale(i) * rebuilt(i, j) * scale(j);
      out.values(i, j) = vij;
      out.values(j, i) = vij;
    }
  }
  return out;
}

void write_kernel_dump(std::ostream& out, const Eigen::MatrixXd& values) {
  out << values.rows() << '\n';
  char buf[40];
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.12g", values(i, j));
      if (j) out << ' ';
      out << buf;
    }
    out << '\n';
  }
}

Eigen::MatrixXd read_kernel_dump(std::istream& in) {
  long long t = -1;
  if (!(in >> t) || t < 0) throw ParseError("kernel dump: missing size line");
  Eigen::MatrixXd values(t, t);
  for (Eigen::Index i = 0; i < t; ++i) {
    for (Eigen::Index j = 0; j < t; ++j) {
      if (!(in >> values(i, j))) {
        throw ParseError("kernel dump: truncated at row " + std::to_string(i));
      }
    }
  }
  return values;
}

}  // namespace qepi
