#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "anglerefit/dataset.hpp"
#include "anglerefit/linear_model.hpp"
#include "anglerefit/simplex.hpp"

namespace anglerefit {

enum class SelectionMethod { holdout, cv };

struct TuningResult {
  std::vector<double> grid;
  std::vector<double> errors;  // tune-set (or mean fold) error per grid value
  std::size_t selected_index = 0;
  double selected_lambda = 0.0;
  SelectionMethod selected_by = SelectionMethod::holdout;
  std::vector<std::vector<double>> fold_errors;  // [grid index][fold], cv only
};

struct HoldoutSearch {
  TuningResult result;
  std::vector<FitResult> fits;  // one per grid value, fitted on the training set
};

/// {2^-10, 2^-9, ..., 2^10}, ascending.
std::vector<double> lambda_grid();

/// Index of the smallest error; ties go to the larger lambda (later index).
std::size_t select_index(const std::vector<double>& errors);

HoldoutSearch holdout_search(const LabeledDataset& train, const LabeledDataset& tune,
                             const FitConfig& base_config, const SimplexCode& code,
                             const std::vector<double>& grid = lambda_grid(), std::size_t jobs = 1);

/// Fits one model per grid value on train and keeps the lambda with the
/// smallest misclassification error on tune.
TuningResult select_holdout(const LabeledDataset& train, const LabeledDataset& tune,
                            const FitConfig& base_config, const SimplexCode& code,
                            const std::vector<double>& grid = lambda_grid(), std::size_t jobs = 1);

/// Stratified k-fold cross-validation over the grid. Fold membership is keyed
/// on (seed, row content), so it does not depend on row order.
TuningResult cv_select(const LabeledDataset& data, int folds, const FitConfig& base_config,
                       const SimplexCode& code, std::uint64_t seed,
                       const std::vector<double>& grid = lambda_grid(), std::size_t jobs = 1);

/// Stratified assignment of every row to one of `parts` groups (0-based),
/// keyed on (seed, row content). Group sizes differ by at most one.
std::vector<int> stratified_parts(const LabeledDataset& data, int parts, std::uint64_t seed);

/// Six-way stratified split; rows of part test_part (1..6) form the test set.
std::pair<LabeledDataset, LabeledDataset> split_six(const LabeledDataset& data, int test_part,
                                                    std::uint64_t seed);

/// CSV trace "lambda,error" followed by a "# selected ..." summary line.
void write_tuning_trace(std::ostream& out, const TuningResult& result);

}  // namespace anglerefit
