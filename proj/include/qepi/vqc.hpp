#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "qepi/circuits.hpp"
#include "qepi/qkernel.hpp"
#include "qepi/shots.hpp"

namespace qepi {

enum class Readout { kFirstQubitZ };

struct VQCModel {
  Eigen::VectorXd theta;
  AnsatzSpec ansatz;
  FeatureMapSpec feature_map;
  /// Bias b of the error model.
  double bias_b = 0.0;
  Readout readout = Readout::kFirstQubitZ;
};

/// Label +1 is first-qubit outcome 0, label -1 is outcome 1.
struct EmpiricalDistribution {
  double p_plus = 0.0;
  double p_minus = 0.0;
  /// 0 for exact marginals.
  std::uint64_t shots = 0;

  double mass(int label) const { return label > 0 ? p_plus : p_minus; }
};

/// Labeled feature vectors, the unit the classifiers consume.
struct LabeledSet {
  FeatureRows x;
  std::vector<int> y;

  std::size_t size() const noexcept { return y.size(); }
};

/// How forward passes are evaluated inside loss and gradient.
///
/// The error model scales with sqrt(R). In shots mode R is the shot count;
/// in exact mode `error_shots` stands in for it.
struct Evaluation {
  ShotMode mode = ShotMode::exact();
  std::uint64_t seed = 0;
  double error_shots = 4.0;

  double effective_shots() const {
    return mode.is_exact() ? error_shots : static_cast<double>(mode.shots());
  }
};

inline constexpr double kErrorClamp = 1e-6;

/// Prepares W(theta) U_phi(x)|0...0> and reads the first qubit.
EmpiricalDistribution forward(const VQCModel& model,
                              const Eigen::Ref<const Eigen::VectorXd>& x,
                              const ShotMode& mode, std::uint64_t seed);

/// sig( sqrt(R) * 2^(-y b) * p / sqrt(2 p (1 - p)) ), where p is the mass on
/// the wrong label -y clamped to [1e-6, 1 - 1e-6].
double pointwise_error(const EmpiricalDistribution& dist, int y, double b,
                       double shots);

/// d pointwise_error / d p_plus. Zero inside the clamp region.
double pointwise_error_slope(double p_plus, int y, double b, double shots);

/// Mean pointwise error. Point k samples with derive_seed(seed, k).
double loss(const VQCModel& model, const LabeledSet& data,
            const Evaluation& eval);

enum class GradientRule {
  /// Shift rule on each point's first-qubit marginal, chained through the
  /// error model. Exact for the circuit part.
  kMarginalShift,
  /// (L(theta_j + pi/2) - L(theta_j - pi/2)) / 2 on the loss itself.
  kLossShift,
};

Eigen::VectorXd gradient(const VQCModel& model, const LabeledSet& data,
                         const Evaluation& eval,
                         GradientRule rule = GradientRule::kMarginalShift);

/// d loss / d b, analytic.
double bias_gradient(const VQCModel& model, const LabeledSet& data,
                     const Evaluation& eval);

struct TrainConfig {
  double learning_rate = 0.05;
  int max_epochs = 200;
  /// Shots used when evaluating the trained model.
  ShotMode shots = ShotMode::exact();
  /// Compute training gradients with `shots` instead of exact marginals.
  bool shot_gradients = false;
  std::uint64_t seed = 0;
  double convergence_tol = 1e-6;
  double error_shots = 4.0;
  bool train_bias = false;
  GradientRule rule = GradientRule::kMarginalShift;
};

struct TrainResult {
  VQCModel model;
  /// Loss after each update, in the gradient's evaluation mode.
  std::vector<double> loss_trace;
  double initial_loss = 0.0;
  bool converged = false;
};

/// theta_0 ~ U[-pi, pi] from the seed, then theta <- theta - eta grad L until
/// |grad L| <= tol or max_epochs updates.
TrainResult train(const LabeledSet& data, const FeatureMapSpec& feature_map,
                  const AnsatzSpec& ansatz, const TrainConfig& config);

/// argmax label; ties go to +1.
int predict(const VQCModel& model, const Eigen::Ref<const Eigen::VectorXd>& x,
            const ShotMode& mode, std::uint64_t seed);

}  // namespace qepi
