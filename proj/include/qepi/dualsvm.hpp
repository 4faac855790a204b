#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "qepi/qkernel.hpp"

namespace qepi {

inline constexpr double kHardMargin = std::numeric_limits<double>::infinity();

/// maximize  L(a) = sum_i a_i - sum_ij y_i y_j a_i a_j K_ij
/// s.t.      sum_i a_i y_i = 0,  0 <= a_i <= C.
///
/// No 1/2 on the quadratic term, so optimal multipliers are half the
/// textbook ones. C = kHardMargin leaves the upper bound open.
struct DualProblem {
  Eigen::MatrixXd K;
  std::vector<int> y;
  double C = 1.0;
  double tol = 1e-6;
  /// Pair updates are capped at max_sweeps * t.
  std::size_t max_sweeps = 10000;
};

struct DualSolution {
  Eigen::VectorXd alphas;
  double bias = 0.0;
  double objective = 0.0;
  std::vector<std::size_t> support_indices;
  std::size_t iterations = 0;
  bool converged = false;
  /// Non-empty when the iteration cap stopped the solver.
  std::string warning;
};

/// Called after every pair update with (iteration, objective).
using DualObserver = std::function<void(std::size_t, double)>;

double dual_objective(const Eigen::Ref<const Eigen::VectorXd>& alphas,
                      const Eigen::Ref<const Eigen::MatrixXd>& K,
                      const std::vector<int>& y);

/// SMO: each step moves the maximal KKT-violating pair along the equality
/// constraint to the clipped 1-D optimum, until the violation gap <= tol.
DualSolution solve_dual(const DualProblem& problem,
                        const DualObserver& observer = {});

/// sum_j 2 a_j y_j K(x_j, x): the margin-scale decision value without bias.
/// The factor 2 undoes the halving of the multipliers.
double kernel_expansion(const Eigen::Ref<const Eigen::VectorXd>& alphas,
                        const std::vector<int>& y,
                        const Eigen::Ref<const Eigen::VectorXd>& kernel_column);

struct QSVMModel {
  DualSolution solution;
  FeatureRows support_vectors;
  std::vector<int> labels;
  /// Multipliers of the support vectors, aligned with support_vectors.
  std::vector<double> support_alphas;
  FeatureMapSpec feature_map;
  KernelMode kernel_mode = KernelMode::exact();
  std::uint64_t seed = 0;
};

struct QSVMTraining {
  QSVMModel model;
  KernelMatrix kernel;
  bool psd_repaired = false;
};

/// Kernel matrix -> (shots mode: PSD repair when min eigenvalue < -1e-8)
/// -> solve_dual -> model holding the support vectors.
QSVMTraining train_qsvm(const FeatureRows& rows, const std::vector<int>& y,
                        const FeatureMapSpec& spec, const KernelMode& mode,
                        double C, double tol, std::uint64_t seed);

/// sum_{sv} 2 a_i y_i K(x, x_i) + bias. In shots mode support vector k uses
/// derive_seed(seed, k).
double decision_score(const QSVMModel& model,
                      const Eigen::Ref<const Eigen::VectorXd>& x,
                      std::uint64_t seed);

/// +1 when score >= 0.
constexpr int sign_label(double score) noexcept { return score >= 0.0 ? 1 : -1; }

int predict(const QSVMModel& model, const Eigen::Ref<const Eigen::VectorXd>& x,
            std::uint64_t seed);

/// Throws ValidationError unless every label is +1 or -1.
void check_labels(const std::vector<int>& y);

}  // namespace qepi
