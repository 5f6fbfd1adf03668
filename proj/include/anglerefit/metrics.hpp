#pragma once

#include <vector>

#include <Eigen/Dense>

namespace anglerefit {

/// Probabilities are floored here before taking logarithms.
inline constexpr double kProbabilityFloor = 1e-12;

/// Fraction of positions where the labels disagree.
double error_rate(const std::vector<int>& predicted, const std::vector<int>& truth);

/// (1/n) sum_i sum_j |P_j(x_i) - P^_j(x_i)|; the inner sum is not divided by k.
double mad(const Eigen::MatrixXd& true_probs, const Eigen::MatrixXd& est_probs);

/// -(1/n) sum_i p_{y_i} log p_{y_i}, using the estimated probability of the
/// observed class.
double cre(const Eigen::MatrixXd& est_probs, const std::vector<int>& truth);

/// -(1/n) sum_i log p_{y_i}.
double nll(const Eigen::MatrixXd& est_probs, const std::vector<int>& truth);

}  // namespace anglerefit
