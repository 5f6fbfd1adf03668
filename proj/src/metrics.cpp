#include "anglerefit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "anglerefit/errors.hpp"

namespace anglerefit {
namespace {

void check_stochastic(const Eigen::MatrixXd& P, const char* what) {
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    if (std::abs(P.row(i).sum() - 1.0) > 1e-6) {
      throw InvalidArgument(std::string(what) + " row " + std::to_string(i) + " does not sum to one");
    }
  }
}

// Estimated probability of the observed class for each row, floored.
std::vector<double> observed_class_probs(const Eigen::MatrixXd& P, const std::vector<int>& truth) {
  if (P.rows() != static_cast<Eigen::Index>(truth.size())) {
    throw InvalidArgument("probability matrix has " + std::to_string(P.rows()) + " rows but " +
                          std::to_string(truth.size()) + " labels were given");
  }
  if (truth.empty()) throw InvalidArgument("no observations");
  std::vector<double> out(truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 1 || truth[i] > P.cols()) {
      throw InvalidArgument("label " + std::to_string(truth[i]) + " outside the probability columns");
    }
    out[i] = std::max(P(static_cast<Eigen::Index>(i), truth[i] - 1), kProbabilityFloor);
  }
  return out;
}

}  // namespace

double error_rate(const std::vector<int>& predicted, const std::vector<int>& truth) {
  if (predicted.size() != truth.size()) {
    throw InvalidArgument("prediction and truth lengths differ: " + std::to_string(predicted.size()) +
                          " vs " + std::to_string(truth.size()));
  }
  if (truth.empty()) throw InvalidArgument("no observations");
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) wrong += predicted[i] != truth[i];
  return static_cast<double>(wrong) / static_cast<double>(truth.size());
}

double mad(const Eigen::MatrixXd& true_probs, const Eigen::MatrixXd& est_probs) {
  if (true_probs.rows() != est_probs.rows() || true_probs.cols() != est_probs.cols()) {
    throw InvalidArgument("probability matrices have different shapes");
  }
  if (true_probs.rows() == 0) throw InvalidArgument("no observations");
  check_stochastic(true_probs, "true probability");
  check_stochastic(est_probs, "estimated probability");
  return (true_probs - est_probs).cwiseAbs().sum() / static_cast<double>(true_probs.rows());
}

double cre(const Eigen::MatrixXd& est_probs, const std::vector<int>& truth) {
  double total = 0.0;
  for (double p : observed_class_probs(est_probs, truth)) total += p * std::log(p);
  return -total / static_cast<double>(truth.size());
}

double nll(const Eigen::MatrixXd& est_probs, const std::vector<int>& truth) {
  double total = 0.0;
  for (double p : observed_class_probs(est_probs, truth)) total += std::log(p);
  return -total / static_cast<double>(truth.size());
}

}  // namespace anglerefit
