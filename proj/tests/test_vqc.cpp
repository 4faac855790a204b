#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qepi/vqc.hpp"

using namespace qepi;
using std::numbers::pi;

namespace {

VQCModel random_model(int n, int layers, std::mt19937_64& rng,
                      EntanglerKind kind = EntanglerKind::kCzRing) {
  VQCModel m;
  m.feature_map = FeatureMapSpec::linear(n);
  m.ansatz = {n, layers, kind};
  m.theta = oracle::random_angles(m.ansatz.parameter_count(), rng);
  return m;
}

LabeledSet toy() {
  LabeledSet d;
  d.x = {Eigen::Vector2d(0.5, 0.5), Eigen::Vector2d(-0.5, -0.5)};
  d.y = {1, -1};
  return d;
}

LabeledSet random_set(int t, int n, std::mt19937_64& rng) {
  LabeledSet d;
  for (int i = 0; i < t; ++i) {
    d.x.push_back(oracle::random_angles(n, rng));
    d.y.push_back(i % 2 ? -1 : 1);
  }
  return d;
}

/// p_plus from the dense oracle: probability that qubit 0 reads 0.
double oracle_p_plus(const VQCModel& m, const Eigen::VectorXd& x) {
  const oracle::Vec psi =
      oracle::run(build_ansatz(m.theta, m.ansatz), oracle::run(build_feature_map(x, m.feature_map)));
  double p = 0.0;
  for (Eigen::Index i = 0; i < psi.size(); i += 2) p += std::norm(psi(i));
  return p;
}

double sig(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double train_accuracy(const VQCModel& m, const LabeledSet& d) {
  int ok = 0;
  for (std::size_t k = 0; k < d.size(); ++k) ok += predict(m, d.x[k], ShotMode::exact(), 0) == d.y[k];
  return static_cast<double>(ok) / static_cast<double>(d.size());
}

}  // namespace

TEST_CASE("forward at zero parameters") {
  VQCModel m;
  m.feature_map = FeatureMapSpec::linear(2);
  m.ansatz = {2, 2, EntanglerKind::kCzRing};
  m.theta = Eigen::VectorXd::Zero(m.ansatz.parameter_count());
  const Eigen::VectorXd x = Eigen::VectorXd::Zero(2);
  const auto d = forward(m, x, ShotMode::exact(), 0);
  // The ansatz is the identity here, so p_plus is the feature state's
  // marginal. At x = 0 two repetitions reduce to exp(-i pi^2 XX)|00>.
  const double feature_only = std::norm(simulate(build_feature_map(x, m.feature_map))[0]) +
                              std::norm(simulate(build_feature_map(x, m.feature_map))[2]);
  CHECK(d.p_plus == doctest::Approx(feature_only).epsilon(1e-12));
  CHECK(d.p_plus == doctest::Approx(std::pow(std::cos(pi * pi), 2)).epsilon(1e-12));

  // Without the feature map the whole circuit is the identity.
  Statevector s = Statevector::zero(2);
  apply_circuit_inplace(s, build_ansatz(m.theta, m.ansatz));
  CHECK((1 + expectation_z(s, 0)) / 2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("forward matches the dense oracle and the Z expectation") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = trial % 2 ? 3 : 2;
    const VQCModel m = random_model(n, 2, rng);
    const Eigen::VectorXd x = oracle::random_angles(n, rng);
    const auto d = forward(m, x, ShotMode::exact(), 0);
    CHECK(std::abs(d.p_plus - oracle_p_plus(m, x)) <= 1e-12);
    Statevector s = simulate(build_feature_map(x, m.feature_map));
    apply_circuit_inplace(s, build_ansatz(m.theta, m.ansatz));
    CHECK(std::abs(d.p_plus - (1 + expectation_z(s, 0)) / 2) <= 1e-12);
    CHECK(std::abs(d.p_plus + d.p_minus - 1) <= 1e-12);
    CHECK(d.shots == 0);
  }
  const VQCModel m = random_model(2, 1, rng);
  CHECK_THROWS_AS(forward(m, Eigen::VectorXd::Zero(3), ShotMode::exact(), 0), ShapeError);
}

TEST_CASE("shot-mode forward") {
  std::mt19937_64 rng(52);
  int within = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const VQCModel m = random_model(2, 2, rng);
    const Eigen::VectorXd x = oracle::random_angles(2, rng);
    const double p = forward(m, x, ShotMode::exact(), 0).p_plus;
    const auto d = forward(m, x, ShotMode::shots(4096), 100 + trial);
    within += std::abs(d.p_plus - p) <= oracle::four_sigma(p, 4096);
    CHECK(d.shots == 4096);
    CHECK(std::abs(d.p_plus + d.p_minus - 1) <= 1e-12);
    const double r = d.p_plus * 4096;
    CHECK(r == std::round(r));
    const auto again = forward(m, x, ShotMode::shots(4096), 100 + trial);
    CHECK(again.p_plus == d.p_plus);
  }
  CHECK(within >= 48);
}

TEST_CASE("pointwise error model") {
  SUBCASE("half mass at R = 100") {
    const EmpiricalDistribution d{0.5, 0.5, 0};
    const double want = sig(std::sqrt(100.0) * 0.5 / std::sqrt(2 * 0.5 * 0.5));
    CHECK(want == doctest::Approx(0.99915).epsilon(1e-5));
    CHECK(pointwise_error(d, 1, 0.0, 100) == doctest::Approx(want).epsilon(1e-15));
  }
  SUBCASE("vanishing wrong-label mass tends to one half from above") {
    double previous = 1.0;
    for (double eps : {1e-2, 1e-4, 1e-6}) {
      const double e = pointwise_error({1 - eps, eps, 0}, 1, 0.0, 100);
      CHECK(e > 0.5);
      CHECK(e < previous);
      previous = e;
    }
    // Clamped at 1e-6.
    CHECK(pointwise_error({1.0, 0.0, 0}, 1, 0.0, 100) ==
          doctest::Approx(pointwise_error({1 - 1e-6, 1e-6, 0}, 1, 0.0, 100)).epsilon(1e-12));
    const double floor_z = 10 * 1e-6 / std::sqrt(2 * 1e-6 * (1 - 1e-6));
    CHECK(pointwise_error({1.0, 0.0, 0}, 1, 0.0, 100) == doctest::Approx(sig(floor_z)).epsilon(1e-14));
  }
  SUBCASE("the wrong-label mass is what counts") {
    const EmpiricalDistribution d{0.8, 0.2, 0};
    CHECK(pointwise_error(d, 1, 0.0, 16) < pointwise_error(d, -1, 0.0, 16));
  }
  SUBCASE("monotone in b through 2^(-y b)") {
    const EmpiricalDistribution d{0.6, 0.4, 0};
    CHECK(pointwise_error(d, 1, 0.5, 16) < pointwise_error(d, 1, 0.0, 16));
    CHECK(pointwise_error(d, -1, 0.5, 16) > pointwise_error(d, -1, 0.0, 16));
    const double z = std::sqrt(16.0) * std::exp2(-0.5) * 0.4 / std::sqrt(2 * 0.4 * 0.6);
    CHECK(pointwise_error(d, 1, 0.5, 16) == doctest::Approx(sig(z)).epsilon(1e-15));
  }
  SUBCASE("range") {
    std::mt19937_64 rng(53);
    for (int k = 0; k < 200; ++k) {
      const double p = oracle::uniform(rng, 0, 1);
      const double e = pointwise_error({p, 1 - p, 0}, k % 2 ? 1 : -1, oracle::uniform(rng, -2, 2),
                                       oracle::uniform(rng, 1, 1000));
      CHECK(e > 0.0);
      CHECK(e <= 1.0);
    }
  }
  SUBCASE("slope matches a finite difference") {
    for (double p : {0.1, 0.35, 0.5, 0.8}) {
      for (int y : {1, -1}) {
        const double h = 1e-6;
        const double fd = (pointwise_error({p + h, 1 - p - h, 0}, y, 0.3, 9) -
                           pointwise_error({p - h, 1 - p + h, 0}, y, 0.3, 9)) / (2 * h);
        CHECK(pointwise_error_slope(p, y, 0.3, 9) == doctest::Approx(fd).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("loss") {
  std::mt19937_64 rng(54);
  const VQCModel m = random_model(2, 2, rng);
  const Evaluation exact;
  CHECK(exact.effective_shots() == exact.error_shots);
  CHECK(Evaluation{ShotMode::shots(500), 0, 4.0}.effective_shots() == 500.0);

  LabeledSet one;
  one.x = {oracle::random_angles(2, rng)};
  one.y = {-1};
  CHECK(loss(m, one, exact) ==
        pointwise_error(forward(m, one.x[0], ShotMode::exact(), 0), -1, 0.0, exact.error_shots));

  const LabeledSet d = random_set(6, 2, rng);
  LabeledSet twice = d;
  twice.x.insert(twice.x.end(), d.x.begin(), d.x.end());
  twice.y.insert(twice.y.end(), d.y.begin(), d.y.end());
  CHECK(loss(m, twice, exact) == doctest::Approx(loss(m, d, exact)).epsilon(1e-14));
  CHECK(std::abs(loss(m, d, exact) - loss(m, d, exact)) <= 1e-15);
  const double l = loss(m, d, exact);
  CHECK(l > 0.0);
  CHECK(l < 1.0);

  CHECK_THROWS_AS(loss(m, LabeledSet{}, exact), SizeError);

  // Shot mode is a pure function of the seed.
  const Evaluation shots{ShotMode::shots(256), 7, 4.0};
  CHECK(loss(m, d, shots) == loss(m, d, shots));
}

TEST_CASE("rotation periodicity") {
  std::mt19937_64 rng(55);
  const VQCModel m = random_model(2, 2, rng);
  const LabeledSet d = random_set(5, 2, rng);
  for (Eigen::Index j = 0; j < m.theta.size(); ++j) {
    VQCModel shifted = m;
    shifted.theta(j) += 2 * pi;
    CHECK(std::abs(loss(shifted, d, {}) - loss(m, d, {})) <= 1e-10);
  }
}

TEST_CASE("gradient") {
  std::mt19937_64 rng(56);
  SUBCASE("closing rotations off the readout qubit do not matter") {
    const VQCModel m = random_model(3, 2, rng);
    const LabeledSet d = random_set(4, 3, rng);
    const Eigen::VectorXd g = gradient(m, d, {});
    for (int q = 1; q < 3; ++q)
      for (int comp = 0; comp < 2; ++comp)
        CHECK(std::abs(g(ansatz_parameter_index(3, m.ansatz.layers, q, comp))) <= 1e-10);
    const Eigen::VectorXd gl = gradient(m, d, {}, GradientRule::kLossShift);
    for (int q = 1; q < 3; ++q)
      CHECK(std::abs(gl(ansatz_parameter_index(3, m.ansatz.layers, q, 0))) <= 1e-10);
  }
  SUBCASE("matches central finite differences") {
    const LabeledSet d = toy();
    for (int trial = 0; trial < 5; ++trial) {
      const VQCModel m = random_model(2, 2, rng);
      const Eigen::VectorXd g = gradient(m, d, {});
      double worst = 0.0;
      for (Eigen::Index j = 0; j < m.theta.size(); ++j) {
        const double h = 1e-4;
        VQCModel up = m;
        VQCModel down = m;
        up.theta(j) += h;
        down.theta(j) -= h;
        const double fd = (loss(up, d, {}) - loss(down, d, {})) / (2 * h);
        worst = std::max(worst, std::abs(g(j) - fd));
      }
      CHECK(worst <= 1e-3);
    }
  }
  SUBCASE("bias derivative matches a finite difference") {
    VQCModel m = random_model(2, 1, rng);
    m.bias_b = 0.2;
    const LabeledSet d = random_set(6, 2, rng);
    const double h = 1e-5;
    VQCModel up = m;
    VQCModel down = m;
    up.bias_b += h;
    down.bias_b -= h;
    const double fd = (loss(up, d, {}) - loss(down, d, {})) / (2 * h);
    CHECK(bias_gradient(m, d, {}) == doctest::Approx(fd).epsilon(1e-6));
  }
  SUBCASE("literal loss-level shift") {
    const VQCModel m = random_model(2, 1, rng);
    const LabeledSet d = toy();
    const Eigen::VectorXd g = gradient(m, d, {}, GradientRule::kLossShift);
    for (Eigen::Index j = 0; j < m.theta.size(); ++j) {
      VQCModel up = m;
      VQCModel down = m;
      up.theta(j) += pi / 2;
      down.theta(j) -= pi / 2;
      CHECK(g(j) == doctest::Approx((loss(up, d, {}) - loss(down, d, {})) / 2).epsilon(1e-14));
    }
  }
}

TEST_CASE("training on the two-point toy") {
  const LabeledSet d = toy();
  TrainConfig cfg;
  cfg.learning_rate = 0.05;
  cfg.max_epochs = 200;
  int perfect = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    cfg.seed = seed;
    const TrainResult r = train(d, FeatureMapSpec::linear(2), {2, 2, EntanglerKind::kCzRing}, cfg);
    CHECK(r.loss_trace.size() <= 200);
    CHECK(r.loss_trace.back() <= r.initial_loss);
    perfect += train_accuracy(r.model, d) == 1.0;
  }
  CHECK(perfect >= 4);
}

TEST_CASE("training is deterministic and validates its inputs") {
  std::mt19937_64 rng(57);
  const LabeledSet d = random_set(6, 2, rng);
  TrainConfig cfg;
  cfg.max_epochs = 5;
  cfg.seed = 99;
  const AnsatzSpec ansatz{2, 1, EntanglerKind::kCzRing};
  const TrainResult a = train(d, FeatureMapSpec::linear(2), ansatz, cfg);
  const TrainResult b = train(d, FeatureMapSpec::linear(2), ansatz, cfg);
  CHECK(a.model.theta == b.model.theta);
  CHECK(a.loss_trace == b.loss_trace);
  CHECK(a.loss_trace.size() == 5);

  // Initial parameters are U[-pi, pi] draws from the seed.
  TrainConfig zero = cfg;
  zero.max_epochs = 1;
  zero.learning_rate = 1e-300;
  const TrainResult init = train(d, FeatureMapSpec::linear(2), ansatz, zero);
  Xoshiro256 draws(99);
  for (Eigen::Index j = 0; j < init.model.theta.size(); ++j)
    CHECK(init.model.theta(j) == doctest::Approx(draws.uniform(-pi, pi)).epsilon(1e-15));

  LabeledSet one_class = d;
  for (auto& y : one_class.y) y = 1;
  CHECK_THROWS_AS(train(one_class, FeatureMapSpec::linear(2), ansatz, cfg), DegenerateError);
  TrainConfig bad = cfg;
  bad.learning_rate = 0.0;
  CHECK_THROWS_AS(train(d, FeatureMapSpec::linear(2), ansatz, bad), ConfigError);
  bad = cfg;
  bad.max_epochs = 0;
  CHECK_THROWS_AS(train(d, FeatureMapSpec::linear(2), ansatz, bad), ConfigError);
}

TEST_CASE("bias training moves b") {
  std::mt19937_64 rng(58);
  const LabeledSet d = random_set(6, 2, rng);
  TrainConfig cfg;
  cfg.max_epochs = 3;
  cfg.train_bias = true;
  const TrainResult r = train(d, FeatureMapSpec::linear(2), {2, 1, EntanglerKind::kCzRing}, cfg);
  CHECK(r.model.bias_b != 0.0);
}

TEST_CASE("prediction") {
  std::mt19937_64 rng(59);
  int near_07 = 0;
  int near_02 = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const VQCModel m = random_model(2, 1, rng);
    const Eigen::VectorXd x = oracle::random_angles(2, rng);
    const double p = oracle_p_plus(m, x);
    CHECK(predict(m, x, ShotMode::exact(), 0) == (p >= 0.5 ? 1 : -1));
    if (std::abs(p - 0.7) < 0.05) near_07 += predict(m, x, ShotMode::exact(), 0) == 1;
    if (std::abs(p - 0.2) < 0.05) near_02 += predict(m, x, ShotMode::exact(), 0) == -1;
  }
  CHECK(near_07 > 0);
  CHECK(near_02 > 0);
}

TEST_CASE("shot predictions agree with exact ones away from the boundary") {
  std::mt19937_64 rng(60);
  int eligible = 0;
  int agree = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const VQCModel m = random_model(2, 2, rng);
    const Eigen::VectorXd x = oracle::random_angles(2, rng);
    const double p = forward(m, x, ShotMode::exact(), 0).p_plus;
    if (std::abs(p - 0.5) <= 0.05) continue;
    ++eligible;
    agree += predict(m, x, ShotMode::shots(8192), 1000 + trial) == predict(m, x, ShotMode::exact(), 0);
  }
  REQUIRE(eligible > 100);
  CHECK(agree >= 0.99 * eligible);
}

TEST_CASE("global phase leaves the readout unchanged") {
  std::mt19937_64 rng(61);
  const oracle::Vec psi = oracle::random_state(3, rng);
  const auto a = Statevector::from_amplitudes(3, psi);
  const auto b = Statevector::from_amplitudes(3, psi * std::polar(1.0, 1.234));
  CHECK(std::abs(expectation_z(a, 0) - expectation_z(b, 0)) <= 1e-15);
}
