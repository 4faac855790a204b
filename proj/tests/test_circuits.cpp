#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qepi/circuits.hpp"

using namespace qepi;
using std::numbers::pi;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

int count_kind(const Circuit& c, GateKind kind) {
  int n = 0;
  for (const auto& g : c.gates) n += g.kind() == kind;
  return n;
}

}  // namespace

TEST_CASE("feature map gate list") {
  FeatureMapSpec spec{2, 1, {{0, 1}}};
  const Circuit c = build_feature_map(vec({0, 0}), spec);
  const std::vector<Gate> want{Gate::h(0),       Gate::h(1),
                               Gate::rz(0, 0.0), Gate::rz(1, 0.0),
                               Gate::cnot(0, 1), Gate::rz(1, 2 * pi * pi),
                               Gate::cnot(0, 1)};
  CHECK(c.n_qubits == 2);
  CHECK(c.gates == want);

  spec.depth = 2;
  CHECK(build_feature_map(vec({0, 0}), spec).gates.size() == 2 * want.size());

  CHECK_THROWS_AS(build_feature_map(vec({0, 0, 0}), spec), ShapeError);
}

TEST_CASE("feature map angles follow the template") {
  const FeatureMapSpec spec = FeatureMapSpec::linear(3, 1);
  CHECK(spec.entangling_pairs == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
  const Eigen::VectorXd x = vec({0.3, -1.2, 2.5});
  const Circuit c = build_feature_map(x, spec);
  REQUIRE(c.gates.size() == 3 + 3 + 2 * 3);
  for (int q = 0; q < 3; ++q) CHECK(*c.gates[3 + q].angle() == doctest::Approx(2 * x(q)));
  CHECK(*c.gates[7].angle() == doctest::Approx(2 * (pi - 0.3) * (pi + 1.2)));
  CHECK(*c.gates[10].angle() == doctest::Approx(2 * (pi + 1.2) * (pi - 2.5)));
  CHECK(c.gates[10].qubit(0) == 2);
}

TEST_CASE("feature map determinism") {
  const FeatureMapSpec spec = FeatureMapSpec::linear(3);
  const Eigen::VectorXd x = vec({0.1, 0.2, -0.7});
  CHECK(build_feature_map(x, spec) == build_feature_map(x, spec));
}

TEST_CASE("entanglers") {
  const Circuit ring3 = build_entangler(3, EntanglerKind::kCzRing);
  CHECK(ring3.gates == std::vector<Gate>{Gate::cz(0, 1), Gate::cz(1, 2), Gate::cz(2, 0)});
  CHECK(build_entangler(2, EntanglerKind::kCzRing).gates == std::vector<Gate>{Gate::cz(0, 1)});

  const Circuit chain6 = build_entangler(6, EntanglerKind::kSwapChain);
  CHECK(chain6.gates.size() == 5);
  CHECK(count_kind(chain6, GateKind::kSWAP) == 5);
  for (int i = 0; i < 5; ++i) CHECK(chain6.gates[i] == Gate::swap(i, i + 1));

  CHECK_THROWS_AS(build_entangler(1, EntanglerKind::kCzRing), SizeError);
  CHECK_THROWS_AS(build_entangler(1, EntanglerKind::kSwapChain), SizeError);
}

TEST_CASE("ansatz structure") {
  SUBCASE("n=2, l=1") {
    const AnsatzSpec spec{2, 1, EntanglerKind::kCzRing};
    REQUIRE(spec.parameter_count() == 8);
    const Circuit c = build_ansatz(Eigen::VectorXd::Constant(8, 0.1), spec);
    CHECK(count_kind(c, GateKind::kRY) + count_kind(c, GateKind::kRZ) == 8);
    CHECK(count_kind(c, GateKind::kCZ) == 1);
    // rotation block, entangler, rotation block
    CHECK(c.gates[4] == Gate::cz(0, 1));
  }
  SUBCASE("n=3, l=2") { CHECK(AnsatzSpec{3, 2}.parameter_count() == 18); }
  SUBCASE("zero angles leave |0...0> alone") {
    for (int n = 2; n <= 4; ++n) {
      const AnsatzSpec spec{n, 2, EntanglerKind::kCzRing};
      const auto s = simulate(build_ansatz(Eigen::VectorXd::Zero(spec.parameter_count()), spec));
      CHECK(std::abs(s[0]) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("parameter index layout") {
    const AnsatzSpec spec{3, 1, EntanglerKind::kCzRing};
    Eigen::VectorXd theta = Eigen::VectorXd::LinSpaced(spec.parameter_count(), 1, 12);
    const Circuit c = build_ansatz(theta, spec);
    for (const auto& g : c.gates) {
      if (!is_rotation(g.kind())) continue;
      bool found = false;
      for (int block = 0; block <= spec.layers; ++block) {
        const int comp = g.kind() == GateKind::kRY ? 0 : 1;
        const auto k = ansatz_parameter_index(3, block, g.qubit(0), comp);
        found = found || *g.angle() == theta(k);
      }
      CHECK(found);
    }
  }
  SUBCASE("errors") {
    const AnsatzSpec spec{2, 1};
    CHECK_THROWS_AS(build_ansatz(Eigen::VectorXd::Zero(7), spec), ShapeError);
    Eigen::VectorXd bad = Eigen::VectorXd::Zero(8);
    bad(3) = std::nan("");
    CHECK_THROWS_AS(build_ansatz(bad, spec), ConfigError);
  }
}

TEST_CASE("property: ansatz parameter count formula") {
  for (int n = 2; n <= 6; ++n) {
    for (int l = 1; l <= 4; ++l) {
      for (auto kind : {EntanglerKind::kCzRing, EntanglerKind::kSwapChain}) {
        const AnsatzSpec spec{n, l, kind};
        CHECK(spec.parameter_count() == 2 * n * (l + 1));
        const Circuit c = build_ansatz(Eigen::VectorXd::Zero(spec.parameter_count()), spec);
        int rotations = 0;
        for (const auto& g : c.gates) rotations += is_rotation(g.kind());
        CHECK(rotations == spec.parameter_count());
      }
    }
  }
}

TEST_CASE("invert") {
  const Circuit c{1, {Gate::h(0), Gate::rz(0, 0.7)}};
  CHECK(invert(c).gates == std::vector<Gate>{Gate::rz(0, -0.7), Gate::h(0)});

  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    Circuit r{3, {}};
    for (int k = 0; k < 30; ++k) r.gates.push_back(oracle::random_gate(3, rng, oracle::all_kinds()));
    CHECK(invert(invert(r)) == r);
    const oracle::Vec psi = oracle::random_state(3, rng);
    auto s = Statevector::from_amplitudes(3, psi);
    apply_circuit_inplace(s, concat(r, invert(r)));
    CHECK((oracle::to_vec(s) - psi).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("concat checks widths") {
  CHECK_THROWS(concat(Circuit{2, {}}, Circuit{3, {}}));
}

TEST_CASE("kernel circuit") {
  const FeatureMapSpec spec = FeatureMapSpec::linear(2);
  const Eigen::VectorXd x = vec({0.4, -2.2});
  const auto same = simulate(build_kernel_circuit(x, x, spec));
  CHECK(std::norm(same[0]) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(build_kernel_circuit(x, vec({1, 2, 3}), spec), ShapeError);
}

TEST_CASE("property: overlap circuit equals the state overlap") {
  std::mt19937_64 rng(22);
  double worst = 0.0;
  for (int n : {2, 3}) {
    const FeatureMapSpec spec = FeatureMapSpec::linear(n);
    for (int trial = 0; trial < 50; ++trial) {
      const Eigen::VectorXd xi = oracle::random_angles(n, rng);
      const Eigen::VectorXd xj = oracle::random_angles(n, rng);
      // Oracle: two dense preparations.
      const oracle::Vec a = oracle::run(build_feature_map(xi, spec));
      const oracle::Vec b = oracle::run(build_feature_map(xj, spec));
      const double want = std::norm(a.dot(b));
      const double got = std::norm(simulate(build_kernel_circuit(xi, xj, spec))[0]);
      worst = std::max(worst, std::abs(got - want));
    }
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("property: swap_chain keeps product states, cz_ring entangles") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const AnsatzSpec spec{3, 2, EntanglerKind::kSwapChain};
    const auto s = simulate(build_ansatz(oracle::random_angles(spec.parameter_count(), rng), spec));
    for (int q = 0; q < 3; ++q) CHECK(oracle::qubit_purity(oracle::to_vec(s), q) == doctest::Approx(1.0).epsilon(1e-10));
  }
  int entangled = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const AnsatzSpec spec{2, 2, EntanglerKind::kCzRing};
    const auto s = simulate(build_ansatz(oracle::random_angles(spec.parameter_count(), rng), spec));
    entangled += oracle::qubit_purity(oracle::to_vec(s), 0) < 1.0 - 1e-6;
  }
  CHECK(entangled >= 90);
}

TEST_CASE("text listing") {
  const Circuit c{2, {Gate::h(0), Gate::cnot(0, 1), Gate::rz(1, 0.5)}};
  CHECK(to_text(c) == "H 0\nCNOT 0,1\nRZ 1(0.5)\n");
}
