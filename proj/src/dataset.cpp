#include "anglerefit/dataset.hpp"

#include <cmath>
#include <string>

#include "anglerefit/errors.hpp"

namespace anglerefit {

void LabeledDataset::validate() const {
  if (k < 2) throw DataValidationError("dataset needs at least two classes, k = " + std::to_string(k));
  if (static_cast<Eigen::Index>(y.size()) != X.rows()) {
    throw DataValidationError("label count " + std::to_string(y.size()) + " does not match " +
                              std::to_string(X.rows()) + " feature rows");
  }
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] < 1 || y[i] > k) {
      throw DataValidationError("label " + std::to_string(y[i]) + " at row " + std::to_string(i) +
                                " outside 1.." + std::to_string(k));
    }
  }
  if (!X.allFinite()) throw DataValidationError("feature matrix contains non-finite values");
  if (!label_names.empty() && static_cast<int>(label_names.size()) != k) {
    throw DataValidationError("label name count does not match k");
  }
  if (true_probs) {
    if (true_probs->rows() != X.rows() || true_probs->cols() != k) {
      throw DataValidationError("true probability matrix has the wrong shape");
    }
    for (Eigen::Index i = 0; i < true_probs->rows(); ++i) {
      if (std::abs(true_probs->row(i).sum() - 1.0) > 1e-10) {
        throw DataValidationError("true probabilities at row " + std::to_string(i) +
                                  " do not sum to one");
      }
    }
  }
}

LabeledDataset LabeledDataset::subset(const std::vector<Eigen::Index>& rows) const {
  LabeledDataset out;
  out.k = k;
  out.label_names = label_names;
  out.X.resize(static_cast<Eigen::Index>(rows.size()), X.cols());
  out.y.reserve(rows.size());
  if (true_probs) out.true_probs.emplace(static_cast<Eigen::Index>(rows.size()), k);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto i = rows[r];
    out.X.row(static_cast<Eigen::Index>(r)) = X.row(i);
    out.y.push_back(y[static_cast<std::size_t>(i)]);
    if (true_probs) out.true_probs->row(static_cast<Eigen::Index>(r)) = true_probs->row(i);
  }
  return out;
}

LabeledDataset LabeledDataset::with_features(Eigen::MatrixXd features) const {
  LabeledDataset out;
  out.X = std::move(features);
  out.y = y;
  out.k = k;
  out.true_probs = true_probs;
  out.label_names = label_names;
  return out;
}

std::string LabeledDataset::label_name(int label) const {
  if (label >= 1 && label <= static_cast<int>(label_names.size())) return label_names[label - 1];
  return std::to_string(label);
}

}  // namespace anglerefit
