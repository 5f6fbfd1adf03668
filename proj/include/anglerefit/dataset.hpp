#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace anglerefit {

/// Features, 1-based labels and (for synthetic data) the true conditional
/// class probabilities.
struct LabeledDataset {
  Eigen::MatrixXd X;                          // n x p
  std::vector<int> y;                         // labels in 1..k
  int k = 0;
  std::optional<Eigen::MatrixXd> true_probs;  // n x k, rows sum to one
  std::vector<std::string> label_names;       // label_names[j-1] names class j; may be empty

  Eigen::Index rows() const { return X.rows(); }
  Eigen::Index features() const { return X.cols(); }

  /// Throws DataValidationError on inconsistent shapes, labels outside 1..k,
  /// non-finite features, or true_probs rows not summing to one.
  void validate() const;

  /// Rows in the given order (indices may repeat).
  LabeledDataset subset(const std::vector<Eigen::Index>& rows) const;

  /// Same labels and metadata, different feature matrix.
  LabeledDataset with_features(Eigen::MatrixXd features) const;

  /// Name for class j; falls back to the decimal index.
  std::string label_name(int label) const;
};

}  // namespace anglerefit
