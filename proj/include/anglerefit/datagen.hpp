#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "anglerefit/dataset.hpp"

namespace anglerefit {

enum class ExampleId { ex1, ex2 };

std::string to_string(ExampleId id);
ExampleId parse_example_id(std::string_view text);

/// Example 1 draws each signal coordinate with this standard deviation
/// ("variance sigma = 2" read as sd = 2; it reproduces the 5.51% Bayes error,
/// sd = sqrt(2) gives about 0.7%).
inline constexpr double kExample1SignalSd = 2.0;

/// Gaussian class-conditional generator: equal priors, isotropic signal
/// coordinates around per-class means, i.i.d. centered noise coordinates.
struct ExampleSpec {
  ExampleId id = ExampleId::ex1;
  int k = 3;
  int signal_dim = 10;
  int noise_dim = 1490;
  Eigen::MatrixXd class_means;  // k x signal_dim
  double signal_sd = kExample1SignalSd;
  double noise_sd = 0.0;

  int features() const { return signal_dim + noise_dim; }
  void validate() const;
};

/// k = 3, ten signal coordinates, 1490 N(0, 0.02) noise coordinates.
ExampleSpec example1_spec(double signal_sd = kExample1SignalSd);
/// k = 10, means equally spaced on the radius-3 circle, 498 N(0, 0.01) noise
/// coordinates.
ExampleSpec example2_spec();
ExampleSpec example_spec(ExampleId id);

struct SplitSizes {
  Eigen::Index train = 300;
  Eigen::Index tune = 300;
  Eigen::Index test = 0;
};

/// 300/300/29400 for Example 1, 300/300/10000 for Example 2.
SplitSizes default_sizes(ExampleId id);

/// n rows with labels, features (signal first, then noise) and true_probs.
LabeledDataset generate(const ExampleSpec& spec, Eigen::Index n, std::uint64_t seed);
LabeledDataset gen_example1(Eigen::Index n, std::uint64_t seed);
LabeledDataset gen_example2(Eigen::Index n, std::uint64_t seed);

/// P(Y = j | x) under the generative model; noise coordinates cancel.
/// x may be a full feature vector or just its signal coordinates.
Eigen::VectorXd true_probabilities(const Eigen::VectorXd& x, const ExampleSpec& spec);

struct BayesErrorEstimate {
  double error = 0.0;
  double std_error = 0.0;
};

/// Monte-Carlo error of the rule argmax_j P_j(x).
BayesErrorEstimate bayes_error(const ExampleSpec& spec, Eigen::Index n_mc, std::uint64_t seed);

}  // namespace anglerefit
