#include "anglerefit/datagen.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "anglerefit/errors.hpp"
#include "anglerefit/simplex.hpp"

namespace anglerefit {
namespace {

Eigen::VectorXd signal_probabilities(const Eigen::VectorXd& signal, const ExampleSpec& spec) {
  const double inv_two_var = 1.0 / (2.0 * spec.signal_sd * spec.signal_sd);
  Eigen::VectorXd log_density(spec.k);
  for (int j = 0; j < spec.k; ++j) {
    log_density[j] = -(signal - spec.class_means.row(j).transpose()).squaredNorm() * inv_two_var;
  }
  const Eigen::ArrayXd w = (log_density.array() - log_density.maxCoeff()).exp();
  return (w / w.sum()).matrix();
}

}  // namespace

std::string to_string(ExampleId id) { return id == ExampleId::ex1 ? "ex1" : "ex2"; }

ExampleId parse_example_id(std::string_view text) {
  if (text == "ex1") return ExampleId::ex1;
  if (text == "ex2") return ExampleId::ex2;
  throw InvalidArgument("unknown example '" + std::string(text) + "' (expected ex1 or ex2)");
}

void ExampleSpec::validate() const {
  if (k < 2) throw InvalidArgument("example needs k >= 2");
  if (signal_dim < 1 || noise_dim < 0) throw InvalidArgument("bad example dimensions");
  if (class_means.rows() != k || class_means.cols() != signal_dim) {
    throw InvalidArgument("class means must be k x signal_dim");
  }
  if (!class_means.allFinite()) throw InvalidArgument("class means must be finite");
  if (!(signal_sd > 0.0) || !std::isfinite(signal_sd)) throw InvalidArgument("signal sd must be > 0");
  if (noise_dim > 0 && (!(noise_sd > 0.0) || !std::isfinite(noise_sd))) {
    throw InvalidArgument("noise sd must be > 0");
  }
}

ExampleSpec example1_spec(double signal_sd) {
  ExampleSpec spec;
  spec.id = ExampleId::ex1;
  spec.k = 3;
  spec.signal_dim = 10;
  spec.noise_dim = 1490;
  spec.class_means = Eigen::MatrixXd::Zero(3, 10);
  spec.class_means.row(0).segment(0, 4).setConstant(3.0);
  spec.class_means.row(1).segment(3, 4).setConstant(3.0);
  spec.class_means.row(2).segment(6, 4).setConstant(3.0);
  spec.signal_sd = signal_sd;
  spec.noise_sd = std::sqrt(0.02);
  return spec;
}

ExampleSpec example2_spec() {
  ExampleSpec spec;
  spec.id = ExampleId::ex2;
  spec.k = 10;
  spec.signal_dim = 2;
  spec.noise_dim = 498;
  spec.class_means.resize(10, 2);
  for (int j = 0; j < 10; ++j) {
    const double angle = 2.0 * std::numbers::pi * j / 10.0;
    spec.class_means(j, 0) = 3.0 * std::cos(angle);
    spec.class_means(j, 1) = 3.0 * std::sin(angle);
  }
  spec.signal_sd = 1.0;
  spec.noise_sd = std::sqrt(0.01);
  return spec;
}

ExampleSpec example_spec(ExampleId id) {
  return id == ExampleId::ex1 ? example1_spec() : example2_spec();
}

SplitSizes default_sizes(ExampleId id) {
  return id == ExampleId::ex1 ? SplitSizes{300, 300, 29400} : SplitSizes{300, 300, 10000};
}

LabeledDataset generate(const ExampleSpec& spec, Eigen::Index n, std::uint64_t seed) {
  spec.validate();
  if (n < 1) throw InvalidArgument("sample size must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> label_dist(1, spec.k);
  std::normal_distribution<double> normal(0.0, 1.0);

  LabeledDataset data;
  data.k = spec.k;
  data.X.resize(n, spec.features());
  data.y.resize(static_cast<std::size_t>(n));
  data.true_probs.emplace(n, spec.k);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int label = label_dist(rng);
    data.y[static_cast<std::size_t>(i)] = label;
    for (int d = 0; d < spec.signal_dim; ++d) {
      data.X(i, d) = spec.class_means(label - 1, d) + spec.signal_sd * normal(rng);
    }
    for (int d = 0; d < spec.noise_dim; ++d) {
      data.X(i, spec.signal_dim + d) = spec.noise_sd * normal(rng);
    }
    data.true_probs->row(i) =
        signal_probabilities(data.X.row(i).head(spec.signal_dim).transpose(), spec).transpose();
  }
  return data;
}

LabeledDataset gen_example1(Eigen::Index n, std::uint64_t seed) {
  return generate(example1_spec(), n, seed);
}

LabeledDataset gen_example2(Eigen::Index n, std::uint64_t seed) {
  return generate(example2_spec(), n, seed);
}

Eigen::VectorXd true_probabilities(const Eigen::VectorXd& x, const ExampleSpec& spec) {
  spec.validate();
  if (x.size() != spec.features() && x.size() != spec.signal_dim) {
    throw InvalidArgument("point has dimension " + std::to_string(x.size()) + ", expected " +
                          std::to_string(spec.features()) + " or " + std::to_string(spec.signal_dim));
  }
  return signal_probabilities(x.head(spec.signal_dim), spec);
}

BayesErrorEstimate bayes_error(const ExampleSpec& spec, Eigen::Index n_mc, std::uint64_t seed) {
  spec.validate();
  if (n_mc < 1) throw InvalidArgument("Monte-Carlo size must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> label_dist(1, spec.k);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd signal(spec.signal_dim);
  Eigen::Index wrong = 0;
  for (Eigen::Index i = 0; i < n_mc; ++i) {
    const int label = label_dist(rng);
    for (int d = 0; d < spec.signal_dim; ++d) {
      signal[d] = spec.class_means(label - 1, d) + spec.signal_sd * normal(rng);
    }
    wrong += predict_label(signal_probabilities(signal, spec)) != label;
  }
  const double rate = static_cast<double>(wrong) / static_cast<double>(n_mc);
  return {rate, std::sqrt(rate * (1.0 - rate) / static_cast<double>(n_mc))};
}

}  // namespace anglerefit
