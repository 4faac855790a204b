#include "qepi/vqc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qepi/dualsvm.hpp"

namespace qepi {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void check_model(const VQCModel& model) {
  if (model.ansatz.n_qubits != model.feature_map.n_qubits) {
    throw ShapeError("ansatz has " + std::to_string(model.ansatz.n_qubits) +
                     " qubits, feature map " + std::to_string(model.feature_map.n_qubits));
  }
  if (model.theta.size() != model.ansatz.parameter_count()) {
    throw ShapeError("theta has " + std::to_string(model.theta.size()) +
                     " entries, ansatz expects " +
                     std::to_string(model.ansatz.parameter_count()));
  }
}

void check_data(const LabeledSet& data) {
  if (data.size() == 0) throw SizeError("dataset is empty");
  if (data.x.size() != data.y.size()) {
    throw ShapeError(std::to_string(data.x.size()) + " feature rows but " +
                     std::to_string(data.y.size()) + " labels");
  }
  check_labels(data.y);
}

Statevector feature_state(const VQCModel& model,
                          const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != model.feature_map.n_qubits) {
    throw ShapeError("point has " + std::to_string(x.size()) +
                     " features, model expects " +
                     std::to_string(model.feature_map.n_qubits));
  }
  return simulate(build_feature_map(x, model.feature_map));
}

/// Readout distribution of W(theta) applied to a prepared feature state.
EmpiricalDistribution readout(const Statevector& encoded,
                              const Eigen::Ref<const Eigen::VectorXd>& theta,
                              const AnsatzSpec& ansatz, const ShotMode& mode,
                              std::uint64_t seed) {
  Statevector state = encoded;
  apply_circuit_inplace(state, build_ansatz(theta, ansatz));
  EmpiricalDistribution d;
  if (mode.is_exact()) {
    const double z = expectation_z(state, 0);
    d.p_plus = 0.5 * (1.0 + z);
    d.p_minus = 1.0 - d.p_plus;
    return d;
  }
  const std::uint64_t r = mode.shots();
  std::uint64_t plus = 0;
  for (const auto& [index, n] : sample_indices(state, r, seed)) {
    if ((index & 1U) == 0) plus += n;
  }
  d.shots = r;
  d.p_plus = static_cast<double>(plus) / static_cast<double>(r);
  d.p_minus = static_cast<double>(r - plus) / static_cast<double>(r);
  return d;
}

struct ErrorTerms {
  double z;
  double value;
};

ErrorTerms error_terms(double wrong_mass, int y, double b, double shots) {
  const double q = std::clamp(wrong_mass, kErrorClamp, 1.0 - kErrorClamp);
  const double scale = std::sqrt(shots) * std::exp2(-y * b);
  const double z = scale * q / std::sqrt(2.0 * q * (1.0 - q));
  return {z, sigmoid(z)};
}

}  // namespace

EmpiricalDistribution forward(const VQCModel& model,
                              const Eigen::Ref<const Eigen::VectorXd>& x,
                              const ShotMode& mode, std::uint64_t seed) {
  check_model(model);
  return readout(feature_state(model, x), model.theta, model.ansatz, mode, seed);
}

double pointwise_error(const EmpiricalDistribution& dist, int y, double b,
                       double shots) {
  return error_terms(dist.mass(-y), y, b, shots).value;
}

double pointwise_error_slope(double p_plus, int y, double b, double shots) {
  const double q = y > 0 ? 1.0 - p_plus : p_plus;
  if (q < kErrorClamp || q > 1.0 - kErrorClamp) return 0.0;
  const auto [z, s] = error_terms(q, y, b, shots);
  // z = c sqrt(u), u = q / (2 (1 - q))
  const double u = q / (2.0 * (1.0 - q));
  const double dz_dq = (z / std::sqrt(u)) / (2.0 * std::sqrt(u)) / (2.0 * (1.0 - q) * (1.0 - q));
  const double dq_dp = y > 0 ? -1.0 : 1.0;
  return s * (1.0 - s) * dz_dq * dq_dp;
}

double loss(const VQCModel& model, const LabeledSet& data,
            const Evaluation& eval) {
  check_model(model);
  check_data(data);
  const double r = eval.effective_shots();
  double total = 0.0;
  for (std::size_t k = 0; k < data.size(); ++k) {
    const auto d = readout(feature_state(model, data.x[k]), model.theta,
                           model.ansatz, eval.mode, derive_seed(eval.seed, k));
    total += pointwise_error(d, data.y[k], model.bias_b, r);
  }
  return total / static_cast<double>(data.size());
}

Eigen::VectorXd gradient(const VQCModel& model, const LabeledSet& data,
                         const Evaluation& eval, GradientRule rule) {
  check_model(model);
  check_data(data);
  const Eigen::Index n_params = model.theta.size();
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(n_params);

  if (rule == GradientRule::kLossShift) {
    VQCModel shifted = model;
    for (Eigen::Index j = 0; j < n_params; ++j) {
      shifted.theta(j) = model.theta(j) + kHalfPi;
      const double up = loss(shifted, data, eval);
      shifted.theta(j) = model.theta(j) - kHalfPi;
      const double down = loss(shifted, data, eval);
      shifted.theta(j) = model.theta(j);
      grad(j) = 0.5 * (up - down);
    }
    return grad;
  }

  const double r = eval.effective_shots();
  Eigen::VectorXd theta = model.theta;
  for (std::size_t k = 0; k < data.size(); ++k) {
    const Statevector encoded = feature_state(model, data.x[k]);
    const std::uint64_t point_seed = derive_seed(eval.seed, k);
    const auto base = readout(encoded, theta, model.ansatz, eval.mode, point_seed);
    const double slope = pointwise_error_slope(base.p_plus, data.y[k], model.bias_b, r);
    if (slope == 0.0) continue;
    for (Eigen::Index j = 0; j < n_params; ++j) {
      const auto ju = static_cast<std::uint64_t>(j);
      theta(j) = model.theta(j) + kHalfPi;
      const double up =
          readout(encoded, theta, model.ansatz, eval.mode, derive_seed(point_seed, ju, 1)).p_plus;
      theta(j) = model.theta(j) - kHalfPi;
      const double down =
          readout(encoded, theta, model.ansatz, eval.mode, derive_seed(point_seed, ju, 2)).p_plus;
      theta(j) = model.theta(j);
      grad(j) += slope * 0.5 * (up - down);
    }
  }
  return grad / static_cast<double>(data.size());
}

double bias_gradient(const VQCModel& model, const LabeledSet& data,
                     const Evaluation& eval) {
  check_model(model);
  check_data(data);
  const double r = eval.effective_shots();
  double total = 0.0;
  for (std::size_t k = 0; k < data.size(); ++k) {
    const int y = data.y[k];
    const auto d = readout(feature_state(model, data.x[k]), model.theta,
                           model.ansatz, eval.mode, derive_seed(eval.seed, k));
    const double q = d.mass(-y);
    if (q < kErrorClamp || q > 1.0 - kErrorClamp) continue;
    const auto [z, s] = error_terms(q, y, model.bias_b, r);
    total += s * (1.0 - s) * (-y * std::numbers::ln2 * z);
  }
  return total / static_cast<double>(data.size());
}

TrainResult train(const LabeledSet& data, const FeatureMapSpec& feature_map,
                  const AnsatzSpec& ansatz, const TrainConfig& config) {
  check_data(data);
  const bool has_pos = std::find(data.y.begin(), data.y.end(), 1) != data.y.end();
  const bool has_neg = std::find(data.y.begin(), data.y.end(), -1) != data.y.end();
  if (!has_pos || !has_neg) throw DegenerateError("training data needs both classes");
  if (!(config.learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  if (config.max_epochs < 1) throw ConfigError("max_epochs must be >= 1");

  TrainResult result;
  VQCModel& model = result.model;
  model.ansatz = ansatz;
  model.feature_map = feature_map;
  model.theta.resize(ansatz.parameter_count());
  Xoshiro256 rng(config.seed);
  for (Eigen::Index j = 0; j < model.theta.size(); ++j) {
    model.theta(j) = rng.uniform(-std::numbers::pi, std::numbers::pi);
  }

  auto evaluation = [&](int epoch) {
    Evaluation e;
    e.mode = config.shot_gradients ? config.shots : ShotMode::exact();
    e.seed = derive_seed(config.seed, static_cast<std::uint64_t>(epoch), 0x5eed);
    e.error_shots = config.error_shots;
    return e;
  };

  result.initial_loss = loss(model, data, evaluation(0));
  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    const Evaluation e = evaluation(epoch);
    const Eigen::VectorXd g = gradient(model, data, e, config.rule);
    const double gb = config.train_bias ? bias_gradient(model, data, e) : 0.0;
    if (std::sqrt(g.squaredNorm() + gb * gb) <= config.convergence_tol) {
      result.converged = true;
      break;
    }
    model.theta -= config.learning_rate * g;
    model.bias_b -= config.learning_rate * gb;
    result.loss_trace.push_back(loss(model, data, evaluation(epoch + 1)));
  }
  return result;
}

int predict(const VQCModel& model, const Eigen::Ref<const Eigen::VectorXd>& x,
            const ShotMode& mode, std::uint64_t seed) {
  const auto d = forward(model, x, mode, seed);
  return d.p_plus >= d.p_minus ? 1 : -1;
}

}  // namespace qepi
