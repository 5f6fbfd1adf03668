#include "anglerefit/refit.hpp"

#include "anglerefit/errors.hpp"
#include "anglerefit/loss.hpp"
#include "anglerefit/probability.hpp"

namespace anglerefit {

void RefitModel::validate() const {
  stage1.validate();
  stage2.validate();
  if (stage2.p != stage1.k - 1) throw DataValidationError("stage-2 input dimension must be k - 1");
  if (stage2.k != stage1.k) throw DataValidationError("stages disagree on k");
  if (stage2.lambda != 0.0) throw DataValidationError("stage-2 model must be unpenalized");
  if (stage2.loss_id != stage1.loss_id) throw DataValidationError("stages disagree on the loss");
}

LabeledDataset stage2_dataset(const LinearAngleModel& stage1, const LabeledDataset& data) {
  LabeledDataset derived = data.with_features(decision_matrix(stage1, data.X));
  derived.true_probs.reset();
  return derived;
}

RefitModel refit_fit(const LabeledDataset& data, const FitConfig& stage1_config,
                     const SimplexCode& code) {
  const FitResult stage1 = fit(data, stage1_config, code);
  return refit_from_stage1(stage1.model, data, code);
}

RefitModel refit_from_stage1(const LinearAngleModel& stage1, const LabeledDataset& data,
                             const SimplexCode& code) {
  FitConfig config;
  config.loss = stage1.loss_id;
  config.penalty = Penalty::none;
  config.lambda = 0.0;
  config.standardize = false;
  config.max_iterations = kStage2MaxIterations;

  const FitResult stage2 = fit(stage2_dataset(stage1, data), config, code);

  RefitModel model;
  model.stage1 = stage1;
  model.stage2 = stage2.model;
  model.diagnostics.stage2_converged = stage2.diagnostics.converged;
  model.diagnostics.stage2_iterations = stage2.diagnostics.iterations;
  model.diagnostics.stage2_coef_norm = stage2.model.coef.norm();
  // A diverging fit can also stop on the relative-change rule before the cap.
  model.diagnostics.stage2_separable = model.diagnostics.stage2_coef_norm > kSeparableNorm;
  return model;
}

Eigen::VectorXd refit_decision_values(const RefitModel& model, const Eigen::VectorXd& x) {
  return decision_values(model.stage2, decision_values(model.stage1, x));
}

Eigen::MatrixXd refit_decision_matrix(const RefitModel& model, const Eigen::MatrixXd& X) {
  return decision_matrix(model.stage2, decision_matrix(model.stage1, X));
}

Eigen::VectorXd refit_probabilities(const RefitModel& model, const Eigen::VectorXd& x) {
  const SimplexCode code(model.stage2.k);
  return class_probabilities(vertex_scores(refit_decision_values(model, x), code),
                             loss_by_name(model.stage2.loss_id));
}

Eigen::MatrixXd refit_probability_matrix(const RefitModel& model, const Eigen::MatrixXd& X) {
  const SimplexCode code(model.stage2.k);
  return class_probability_matrix(refit_decision_matrix(model, X) * code.vertices(),
                                  loss_by_name(model.stage2.loss_id));
}

int refit_predict(const RefitModel& model, const Eigen::VectorXd& x) {
  const SimplexCode code(model.stage2.k);
  return predict_label(vertex_scores(refit_decision_values(model, x), code));
}

std::vector<int> refit_predict_all(const RefitModel& model, const Eigen::MatrixXd& X) {
  return labels_from_decisions(refit_decision_matrix(model, X), SimplexCode(model.stage2.k));
}

Eigen::MatrixXd model_probability_matrix(const LinearAngleModel& model, const Eigen::MatrixXd& X) {
  const SimplexCode code(model.k);
  return class_probability_matrix(decision_matrix(model, X) * code.vertices(),
                                  loss_by_name(model.loss_id));
}

}  // namespace anglerefit
