#pragma once

#include <vector>

#include <Eigen/Dense>

#include "anglerefit/dataset.hpp"
#include "anglerefit/linear_model.hpp"
#include "anglerefit/simplex.hpp"

namespace anglerefit {

/// Stage-2 iteration cap; unpenalized fits may diverge under separability.
inline constexpr int kStage2MaxIterations = 5000;
/// Stage-2 coefficient norm above which the fit is flagged as separable.
inline constexpr double kSeparableNorm = 1e6;

struct RefitDiagnostics {
  bool stage2_converged = false;
  int stage2_iterations = 0;
  double stage2_coef_norm = 0.0;
  bool stage2_separable = false;
};

/// Penalized stage-1 model on the raw features composed with an unpenalized
/// stage-2 model on the (k-1) stage-1 decision values.
struct RefitModel {
  LinearAngleModel stage1;
  LinearAngleModel stage2;
  RefitDiagnostics diagnostics;

  /// Throws DataValidationError unless stage2.p == stage1.k - 1, stage2 has
  /// lambda 0 and both stages share k and the loss.
  void validate() const;
};

/// Stage-2 training set: features f_hat(x_i), same labels.
LabeledDataset stage2_dataset(const LinearAngleModel& stage1, const LabeledDataset& data);

/// Fits stage 1 with stage1_config, then refits.
RefitModel refit_fit(const LabeledDataset& data, const FitConfig& stage1_config,
                     const SimplexCode& code);

/// Refit on top of an already fitted stage-1 model.
RefitModel refit_from_stage1(const LinearAngleModel& stage1, const LabeledDataset& data,
                             const SimplexCode& code);

/// Stage-2 decision values f~(f_hat(x)).
Eigen::VectorXd refit_decision_values(const RefitModel& model, const Eigen::VectorXd& x);
Eigen::MatrixXd refit_decision_matrix(const RefitModel& model, const Eigen::MatrixXd& X);

Eigen::VectorXd refit_probabilities(const RefitModel& model, const Eigen::VectorXd& x);
Eigen::MatrixXd refit_probability_matrix(const RefitModel& model, const Eigen::MatrixXd& X);

int refit_predict(const RefitModel& model, const Eigen::VectorXd& x);
std::vector<int> refit_predict_all(const RefitModel& model, const Eigen::MatrixXd& X);

/// Class probabilities of a single linear model (stage-1 estimates).
Eigen::MatrixXd model_probability_matrix(const LinearAngleModel& model, const Eigen::MatrixXd& X);

}  // namespace anglerefit
