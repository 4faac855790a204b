#include "qepi/dualsvm.hpp"

#include <algorithm>
#include <cmath>

namespace qepi {

void check_labels(const std::vector<int>& y) {
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 1 && y[i] != -1) {
      throw ValidationError("label " + std::to_string(i) + " is " +
                            std::to_string(y[i]) + ", expected +1 or -1");
    }
  }
}

double dual_objective(const Eigen::Ref<const Eigen::VectorXd>& alphas,
                      const Eigen::Ref<const Eigen::MatrixXd>& K,
                      const std::vector<int>& y) {
  const auto t = static_cast<Eigen::Index>(y.size());
  if (alphas.size() != t || K.rows() != t || K.cols() != t) {
    throw ShapeError("dual objective: alphas " + std::to_string(alphas.size()) +
                     ", labels " + std::to_string(t) + ", kernel " +
                     std::to_string(K.rows()) + "x" + std::to_string(K.cols()));
  }
  Eigen::VectorXd ay(t);
  for (Eigen::Index i = 0; i < t; ++i) ay(i) = alphas(i) * y[static_cast<std::size_t>(i)];
  return alphas.sum() - ay.dot(K * ay);
}

double kernel_expansion(const Eigen::Ref<const Eigen::VectorXd>& alphas,
                        const std::vector<int>& y,
                        const Eigen::Ref<const Eigen::VectorXd>& kernel_column) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < alphas.size(); ++j) {
    s += 2.0 * alphas(j) * y[static_cast<std::size_t>(j)] * kernel_column(j);
  }
  return s;
}

namespace {

double solve_bias(const DualProblem& p, const Eigen::VectorXd& alphas) {
  const auto t = static_cast<Eigen::Index>(p.y.size());
  double free_sum = 0.0;
  std::size_t free_count = 0;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < t; ++i) {
    const int yi = p.y[static_cast<std::size_t>(i)];
    const double residual = yi - kernel_expansion(alphas, p.y, p.K.col(i));
    const double a = alphas(i);
    if (a > p.tol && a < p.C - p.tol) {
      free_sum += residual;
      ++free_count;
    } else if (a <= p.tol) {
      // y_i (s_i + b) >= 1
      if (yi > 0) lower = std::max(lower, residual);
      else upper = std::min(upper, residual);
    } else {
      // y_i (s_i + b) <= 1
      if (yi > 0) upper = std::min(upper, residual);
      else lower = std::max(lower, residual);
    }
  }
  if (free_count > 0) return free_sum / static_cast<double>(free_count);
  if (std::isfinite(lower) && std::isfinite(upper)) return 0.5 * (lower + upper);
  if (std::isfinite(lower)) return lower;
  if (std::isfinite(upper)) return upper;
  return 0.0;
}

}  // namespace

DualSolution solve_dual(const DualProblem& p, const DualObserver& observer) {
  const auto t = static_cast<Eigen::Index>(p.y.size());
  if (p.K.rows() != t || p.K.cols() != t) {
    throw ShapeError("kernel is " + std::to_string(p.K.rows()) + "x" +
                     std::to_string(p.K.cols()) + " but there are " +
                     std::to_string(t) + " labels");
  }
  check_labels(p.y);
  const bool has_pos = std::find(p.y.begin(), p.y.end(), 1) != p.y.end();
  const bool has_neg = std::find(p.y.begin(), p.y.end(), -1) != p.y.end();
  if (!has_pos || !has_neg) {
    throw DegenerateError("dual problem needs both +1 and -1 labels");
  }
  if (!(p.C > 0.0)) throw ConfigError("box bound C must be positive");
  if (!(p.tol > 0.0)) throw ConfigError("KKT tolerance must be positive");

  const double C = p.C;
  auto y = [&](Eigen::Index i) { return static_cast<double>(p.y[static_cast<std::size_t>(i)]); };
  // Minimize f(a) = a' Q a - sum a, Q_ij = y_i y_j K_ij; gradient 2 Q a - 1.
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(t);
  Eigen::VectorXd grad = Eigen::VectorXd::Constant(t, -1.0);

  auto in_up = [&](Eigen::Index i) { return y(i) > 0 ? alpha(i) < C : alpha(i) > 0.0; };
  auto in_low = [&](Eigen::Index i) { return y(i) > 0 ? alpha(i) > 0.0 : alpha(i) < C; };

  DualSolution sol;
  const std::size_t cap = p.max_sweeps * static_cast<std::size_t>(std::max<Eigen::Index>(t, 1));
  for (;;) {
    Eigen::Index i_up = -1;
    Eigen::Index j_low = -1;
    double m_up = -std::numeric_limits<double>::infinity();
    double m_low = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < t; ++k) {
      const double v = -y(k) * grad(k);
      if (in_up(k) && v > m_up) {
        m_up = v;
        i_up = k;
      }
      if (in_low(k) && v < m_low) {
        m_low = v;
        j_low = k;
      }
    }
    if (i_up < 0 || j_low < 0 || m_up - m_low <= p.tol) {
      sol.converged = true;
      break;
    }
    if (sol.iterations >= cap) {
      sol.warning = "iteration cap reached with KKT gap " + std::to_string(m_up - m_low);
      break;
    }

    const Eigen::Index i = i_up;
    const Eigen::Index j = j_low;
    // a_i += y_i * step, a_j -= y_j * step keeps sum a y fixed.
    double curvature = 2.0 * (p.K(i, i) + p.K(j, j) - 2.0 * p.K(i, j));
    if (curvature <= 1e-12) curvature = 1e-12;
    double step = (m_up - m_low) / curvature;

    const double room_i = y(i) > 0 ? C - alpha(i) : alpha(i);
    const double room_j = y(j) > 0 ? alpha(j) : C - alpha(j);
    bool clip_i = false;
    bool clip_j = false;
    if (room_i <= step) {
      step = room_i;
      clip_i = true;
    }
    if (room_j <= step) {
      step = room_j;
      clip_j = true;
      clip_i = room_i <= step;
    }

    const double old_i = alpha(i);
    const double old_j = alpha(j);
    alpha(i) += y(i) * step;
    alpha(j) -= y(j) * step;
    if (clip_i) alpha(i) = y(i) > 0 ? C : 0.0;
    if (clip_j) alpha(j) = y(j) > 0 ? 0.0 : C;
    const double d_i = alpha(i) - old_i;
    const double d_j = alpha(j) - old_j;
    for (Eigen::Index k = 0; k < t; ++k) {
      grad(k) += 2.0 * y(k) * (y(i) * p.K(k, i) * d_i + y(j) * p.K(k, j) * d_j);
    }
    ++sol.iterations;
    if (observer) observer(sol.iterations, dual_objective(alpha, p.K, p.y));
  }

  sol.alphas = alpha;
  sol.objective = dual_objective(alpha, p.K, p.y);
  sol.bias = solve_bias(p, alpha);
  for (Eigen::Index k = 0; k < t; ++k) {
    if (alpha(k) > p.tol) sol.support_indices.push_back(static_cast<std::size_t>(k));
  }
  return sol;
}

QSVMTraining train_qsvm(const FeatureRows& rows, const std::vector<int>& y,
                        const FeatureMapSpec& spec, const KernelMode& mode,
                        double C, double tol, std::uint64_t seed) {
  if (rows.size() != y.size()) {
    throw ShapeError(std::to_string(rows.size()) + " feature rows but " +
                     std::to_string(y.size()) + " labels");
  }
  QSVMTraining out;
  out.kernel = kernel_matrix(rows, spec, mode, seed);

  DualProblem problem{out.kernel.values, y, C, tol};
  if (!mode.is_exact() && min_eigenvalue(out.kernel.values) < -1e-8) {
    problem.K = regularize_psd(out.kernel).values;
    out.psd_repaired = true;
  }

  auto& m = out.model;
  m.solution = solve_dual(problem);
  m.feature_map = spec;
  m.kernel_mode = mode;
  m.seed = seed;
  for (std::size_t idx : m.solution.support_indices) {
    m.support_vectors.push_back(rows[idx]);
    m.labels.push_back(y[idx]);
    m.support_alphas.push_back(m.solution.alphas(static_cast<Eigen::Index>(idx)));
  }
  return out;
}

double decision_score(const QSVMModel& model,
                      const Eigen::Ref<const Eigen::VectorXd>& x,
                      std::uint64_t seed) {
  if (x.size() != model.feature_map.n_qubits) {
    throw ShapeError("point has " + std::to_string(x.size()) +
                     " features, model expects " +
                     std::to_string(model.feature_map.n_qubits));
  }
  double score = model.solution.bias;
  for (std::size_t k = 0; k < model.support_vectors.size(); ++k) {
    const double kv = kernel_value(x, model.support_vectors[k], model.feature_map,
                                   model.kernel_mode, derive_seed(seed, k));
    score += 2.0 * model.support_alphas[k] * model.labels[k] * kv;
  }
  return score;
}

int predict(const QSVMModel& model, const Eigen::Ref<const Eigen::VectorXd>& x,
            std::uint64_t seed) {
  return sign_label(decision_score(model, x, seed));
}

}  // namespace qepi
