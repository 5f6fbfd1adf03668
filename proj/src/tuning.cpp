#include "anglerefit/tuning.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "anglerefit/errors.hpp"
#include "anglerefit/metrics.hpp"
#include "anglerefit/parallel.hpp"
#include "anglerefit/seeding.hpp"

namespace anglerefit {
namespace {

std::uint64_t row_key(const LabeledDataset& data, Eigen::Index i, std::uint64_t seed) {
  std::uint64_t h = splitmix64(seed ^ static_cast<std::uint64_t>(data.y[static_cast<std::size_t>(i)]));
  for (Eigen::Index j = 0; j < data.X.cols(); ++j) {
    h = splitmix64(h ^ std::bit_cast<std::uint64_t>(data.X(i, j)));
  }
  return h;
}

// Row indices sorted by content key; identical rows are interchangeable.
std::vector<Eigen::Index> canonical_order(const LabeledDataset& data, std::uint64_t seed,
                                          std::vector<std::uint64_t>& keys) {
  keys.resize(static_cast<std::size_t>(data.rows()));
  for (Eigen::Index i = 0; i < data.rows(); ++i) keys[static_cast<std::size_t>(i)] = row_key(data, i, seed);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(data.rows()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return keys[static_cast<std::size_t>(a)] < keys[static_cast<std::size_t>(b)];
  });
  return order;
}

FitConfig with_lambda(FitConfig config, double lambda) {
  config.lambda = lambda;
  return config;
}

}  // namespace

std::vector<double> lambda_grid() {
  std::vector<double> grid;
  for (int e = -10; e <= 10; ++e) grid.push_back(std::ldexp(1.0, e));
  return grid;
}

std::size_t select_index(const std::vector<double>& errors) {
  if (errors.empty()) throw InvalidArgument("cannot select from an empty error profile");
  std::size_t best = 0;
  for (std::size_t i = 1; i < errors.size(); ++i) {
    if (errors[i] <= errors[best]) best = i;
  }
  return best;
}

HoldoutSearch holdout_search(const LabeledDataset& train, const LabeledDataset& tune,
                             const FitConfig& base_config, const SimplexCode& code,
                             const std::vector<double>& grid, std::size_t jobs) {
  if (grid.empty()) throw InvalidArgument("empty lambda grid");
  if (train.rows() == 0 || tune.rows() == 0) throw InsufficientDataError("train and tune sets must be non-empty");
  if (train.features() != tune.features() || train.k != tune.k) {
    throw DataValidationError("train and tune sets disagree on p or k");
  }
  HoldoutSearch search;
  search.fits.resize(grid.size());
  search.result.errors.resize(grid.size());
  parallel_for(grid.size(), jobs, [&](std::size_t g) {
    search.fits[g] = fit(train, with_lambda(base_config, grid[g]), code);
    search.result.errors[g] = error_rate(predict_all(search.fits[g].model, tune.X), tune.y);
  });
  search.result.grid = grid;
  search.result.selected_index = select_index(search.result.errors);
  search.result.selected_lambda = grid[search.result.selected_index];
  search.result.selected_by = SelectionMethod::holdout;
  return search;
}

TuningResult select_holdout(const LabeledDataset& train, const LabeledDataset& tune,
                            const FitConfig& base_config, const SimplexCode& code,
                            const std::vector<double>& grid, std::size_t jobs) {
  return holdout_search(train, tune, base_config, code, grid, jobs).result;
}

std::vector<int> stratified_parts(const LabeledDataset& data, int parts, std::uint64_t seed) {
  if (parts < 1) throw InvalidArgument("need at least one part");
  std::vector<std::uint64_t> keys;
  const auto order = canonical_order(data, seed, keys);
  std::vector<int> assignment(static_cast<std::size_t>(data.rows()), 0);
  // Deal rows class by class in key order; the running counter keeps part
  // sizes within one of each other.
  std::size_t dealt = 0;
  for (int label = 1; label <= data.k; ++label) {
    for (Eigen::Index i : order) {
      if (data.y[static_cast<std::size_t>(i)] != label) continue;
      assignment[static_cast<std::size_t>(i)] = static_cast<int>(dealt++ % static_cast<std::size_t>(parts));
    }
  }
  return assignment;
}

TuningResult cv_select(const LabeledDataset& data, int folds, const FitConfig& base_config,
                       const SimplexCode& code, std::uint64_t seed, const std::vector<double>& grid,
                       std::size_t jobs) {
  if (grid.empty()) throw InvalidArgument("empty lambda grid");
  if (folds < 2) throw InvalidArgument("cross-validation needs at least two folds");
  if (data.rows() < folds) {
    throw InsufficientDataError("cannot make " + std::to_string(folds) + " folds from " +
                                std::to_string(data.rows()) + " rows");
  }
  const auto assignment = stratified_parts(data, folds, seed);
  std::vector<std::uint64_t> keys;
  const auto order = canonical_order(data, seed, keys);

  std::vector<LabeledDataset> fold_train(static_cast<std::size_t>(folds));
  std::vector<LabeledDataset> fold_test(static_cast<std::size_t>(folds));
  for (int f = 0; f < folds; ++f) {
    std::vector<Eigen::Index> in_train, in_test;
    for (Eigen::Index i : order) {
      (assignment[static_cast<std::size_t>(i)] == f ? in_test : in_train).push_back(i);
    }
    if (static_cast<int>(in_train.size()) < data.k) {
      throw InsufficientDataError("fold " + std::to_string(f + 1) + " leaves fewer than k training rows");
    }
    fold_train[static_cast<std::size_t>(f)] = data.subset(in_train);
    fold_test[static_cast<std::size_t>(f)] = data.subset(in_test);
  }

  TuningResult result;
  result.grid = grid;
  result.selected_by = SelectionMethod::cv;
  result.fold_errors.assign(grid.size(), std::vector<double>(static_cast<std::size_t>(folds), 0.0));
  const std::size_t tasks = grid.size() * static_cast<std::size_t>(folds);
  parallel_for(tasks, jobs, [&](std::size_t task) {
    const std::size_t g = task / static_cast<std::size_t>(folds);
    const std::size_t f = task % static_cast<std::size_t>(folds);
    const FitResult fitted = fit(fold_train[f], with_lambda(base_config, grid[g]), code);
    result.fold_errors[g][f] = error_rate(predict_all(fitted.model, fold_test[f].X), fold_test[f].y);
  });
  result.errors.resize(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double total = 0.0;
    for (double e : result.fold_errors[g]) total += e;
    result.errors[g] = total / static_cast<double>(folds);
  }
  result.selected_index = select_index(result.errors);
  result.selected_lambda = grid[result.selected_index];
  return result;
}

std::pair<LabeledDataset, LabeledDataset> split_six(const LabeledDataset& data, int test_part,
                                                    std::uint64_t seed) {
  constexpr int kParts = 6;
  if (test_part < 1 || test_part > kParts) throw InvalidArgument("test part must lie in 1..6");
  if (data.rows() < kParts) {
    throw InsufficientDataError("six-way split needs at least 6 rows, got " + std::to_string(data.rows()));
  }
  const auto assignment = stratified_parts(data, kParts, seed);
  std::vector<std::uint64_t> keys;
  const auto order = canonical_order(data, seed, keys);
  std::vector<Eigen::Index> train, test;
  for (Eigen::Index i : order) {
    (assignment[static_cast<std::size_t>(i)] == test_part - 1 ? test : train).push_back(i);
  }
  return {data.subset(train), data.subset(test)};
}

void write_tuning_trace(std::ostream& out, const TuningResult& result) {
  const auto precision = out.precision(17);
  out << "lambda,error\n";
  for (std::size_t g = 0; g < result.grid.size(); ++g) {
    out << result.grid[g] << ',' << result.errors[g] << '\n';
  }
  out << "# selected lambda=" << result.selected_lambda << " index=" << result.selected_index
      << " by=" << (result.selected_by == SelectionMethod::cv ? "cv" : "holdout")
      << " error=" << result.errors[result.selected_index] << '\n';
  out.precision(precision);
}

}  // namespace anglerefit
