// Generates the bundled 2-qubit separable dataset.
//
// A hidden reference VQC (linear ZZ feature map of depth 2, cz_ring ansatz
// with 2 layers, theta drawn from U[-pi, pi] with the reference seed) labels
// points drawn uniformly from [-pi, pi]^2. Points whose first-qubit marginal
// lies within `margin` of 1/2 are rejected; the rest are labeled +1 when
// p_plus > 1/2. The first half of the rows is the training split.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <numbers>

#include "qepi/encode.hpp"
#include "qepi/rng.hpp"
#include "qepi/vqc.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate the synthetic separable VQC dataset"};
  std::uint64_t model_seed = 2024;
  std::uint64_t sample_seed = 11;
  int count = 80;
  double margin = 0.15;
  std::string out_path;
  app.add_option("--model-seed", model_seed, "Seed of the hidden reference theta");
  app.add_option("--sample-seed", sample_seed, "Seed of the point sampler");
  app.add_option("--count", count, "Number of rows");
  app.add_option("--margin", margin, "Minimum |p_plus - 1/2|");
  app.add_option("--out", out_path, "Output CSV (stdout when omitted)");
  CLI11_PARSE(app, argc, argv);

  qepi::VQCModel reference;
  reference.feature_map = qepi::FeatureMapSpec::linear(2, 2);
  reference.ansatz = {2, 2, qepi::EntanglerKind::kCzRing};
  reference.theta.resize(reference.ansatz.parameter_count());
  qepi::Xoshiro256 theta_rng(model_seed);
  for (auto& v : reference.theta) v = theta_rng.uniform(-std::numbers::pi, std::numbers::pi);

  qepi::LabeledSet data;
  qepi::Xoshiro256 rng(sample_seed);
  while (static_cast<int>(data.size()) < count) {
    Eigen::VectorXd x(2);
    x(0) = rng.uniform(-std::numbers::pi, std::numbers::pi);
    x(1) = rng.uniform(-std::numbers::pi, std::numbers::pi);
    const double p = qepi::forward(reference, x, qepi::ShotMode::exact(), 0).p_plus;
    if (std::abs(p - 0.5) < margin) continue;
    data.x.push_back(x);
    data.y.push_back(p > 0.5 ? 1 : -1);
  }

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary);
    if (!file) {
      std::cerr << "cannot write " << out_path << '\n';
      return 2;
    }
  }
  std::ostream& out = out_path.empty() ? std::cout : file;
  out << "# hidden reference VQC: feature_map=linear depth 2, ansatz cz_ring layers 2\n";
  out << "# model_seed=" << model_seed << " sample_seed=" << sample_seed
      << " margin=" << margin << "; rows 1-" << count / 2 << " train, rest test\n";
  qepi::write_feature_set(out, data);
  return 0;
}
