#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "qepi/circuits.hpp"
#include "qepi/shots.hpp"

namespace qepi {

using KernelMode = ShotMode;
using FeatureRows = std::vector<Eigen::VectorXd>;

/// Symmetric t x t matrix of kernel values. Diagonal is 1 in both modes.
struct KernelMatrix {
  Eigen::MatrixXd values;
  KernelMode mode = KernelMode::exact();

  Eigen::Index size() const noexcept { return values.rows(); }
};

/// |<phi(x_i)|phi(x_j)>|^2 from two state preparations.
double kernel_exact(const Eigen::Ref<const Eigen::VectorXd>& x_i,
                    const Eigen::Ref<const Eigen::VectorXd>& x_j,
                    const FeatureMapSpec& spec);

/// r_0 / R: frequency of the all-zeros outcome of the overlap circuit.
double kernel_shot_estimate(const Eigen::Ref<const Eigen::VectorXd>& x_i,
                            const Eigen::Ref<const Eigen::VectorXd>& x_j,
                            const FeatureMapSpec& spec, std::uint64_t shots,
                            std::uint64_t seed);

/// Dispatches on mode; `seed` is ignored in exact mode.
double kernel_value(const Eigen::Ref<const Eigen::VectorXd>& x_i,
                    const Eigen::Ref<const Eigen::VectorXd>& x_j,
                    const FeatureMapSpec& spec, const KernelMode& mode,
                    std::uint64_t seed);

/// Upper triangle computed, then mirrored. In shots mode cell (i, j) draws
/// from derive_seed(seed, i, j).
KernelMatrix kernel_matrix(const FeatureRows& rows, const FeatureMapSpec& spec,
                           const KernelMode& mode, std::uint64_t seed);

/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Eigen::MatrixXd& symmetric);

/// Clip negative eigenvalues, rebuild, re-symmetrize and rescale to a unit
/// diagonal. Result has min eigenvalue >= -1e-8 and is exactly symmetric.
KernelMatrix regularize_psd(const KernelMatrix& kernel);

/// Plain-text dump: `t`, then t rows of t values at 12 significant digits.
void write_kernel_dump(std::ostream& out, const Eigen::MatrixXd& values);
Eigen::MatrixXd read_kernel_dump(std::istream& in);

}  // namespace qepi
