#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "anglerefit/dataset.hpp"
#include "anglerefit/simplex.hpp"

namespace anglerefit {

enum class Penalty { none, l1, l2 };

std::string to_string(Penalty penalty);
Penalty parse_penalty(std::string_view text);

struct FitConfig {
  std::string loss = "logistic";
  Penalty penalty = Penalty::l1;
  double lambda = 0.0;
  int max_iterations = 2000;
  /// Stop once the relative change of the objective drops below this.
  double tolerance = 1e-6;
  /// Backtracking factor for the step size, in (0, 1).
  double line_search_shrink = 0.5;
  /// z-score features with training statistics before fitting.
  bool standardize = true;
  /// Start from small random coefficients instead of zero.
  bool random_init = false;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Coefficients B (p x (k-1)) and intercepts b0 (k-1) of f(x) = B^T x + b0.
/// Also used to carry gradients with respect to the same parameters.
struct ModelParams {
  Eigen::MatrixXd coef;
  Eigen::VectorXd intercept;

  static ModelParams zeros(Eigen::Index p, int k);
};

/// Per-feature affine map x -> (x - mean) / scale.
struct Standardization {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;

  static Standardization identity(Eigen::Index p);
  /// Population mean and standard deviation; constant columns get scale 1.
  static Standardization from_data(const Eigen::MatrixXd& X);

  Eigen::MatrixXd apply_rows(const Eigen::MatrixXd& X) const;
  Eigen::VectorXd apply_point(const Eigen::VectorXd& x) const;
  bool is_identity() const;
};

struct LinearAngleModel {
  int k = 2;
  Eigen::Index p = 0;
  Eigen::MatrixXd coef;       // p x (k-1), on the standardized scale
  Eigen::VectorXd intercept;  // k-1
  std::string loss_id = "logistic";
  Penalty penalty = Penalty::none;
  double lambda = 0.0;
  Standardization standardization;
  std::vector<std::string> label_names;  // optional, size k when present

  ModelParams params() const { return {coef, intercept}; }
  /// Throws DataValidationError on inconsistent shapes or non-finite entries.
  void validate() const;
};

struct FitDiagnostics {
  int iterations = 0;
  bool converged = false;
  int momentum_restarts = 0;
  double final_objective = 0.0;
  /// Objective at the initial point followed by every accepted iterate.
  std::vector<double> objective_trace;
};

struct FitResult {
  LinearAngleModel model;
  FitDiagnostics diagnostics;
};

/// J(B): sum of |b| for l1, sum of b^2 for l2, 0 for none. Intercepts are
/// never penalized.
double penalty_value(const Eigen::MatrixXd& coef, Penalty penalty);

/// (1/n) sum_i l(<W_{y_i}, f(x_i)>) + lambda * J(B), evaluated on data.X as is.
double objective(const ModelParams& params, const LabeledDataset& data, const FitConfig& config,
                 const SimplexCode& code);

/// Gradient of the smooth part of the objective: the loss term, plus the
/// ridge term when the penalty is l2. The l1 term is left to the proximal map.
ModelParams smooth_gradient(const ModelParams& params, const LabeledDataset& data,
                            const FitConfig& config, const SimplexCode& code);

/// Accelerated proximal gradient with backtracking and monotone momentum
/// restarts, starting from the zero model.
FitResult fit(const LabeledDataset& data, const FitConfig& config, const SimplexCode& code);

Eigen::VectorXd decision_values(const LinearAngleModel& model, const Eigen::VectorXd& x);
/// Row i holds f(x_i).
Eigen::MatrixXd decision_matrix(const LinearAngleModel& model, const Eigen::MatrixXd& X);

int predict(const LinearAngleModel& model, const Eigen::VectorXd& x);
std::vector<int> predict_all(const LinearAngleModel& model, const Eigen::MatrixXd& X);

/// Argmax labels for each row of a decision matrix.
std::vector<int> labels_from_decisions(const Eigen::MatrixXd& decisions, const SimplexCode& code);

}  // namespace anglerefit
