#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "anglerefit/datagen.hpp"
#include "anglerefit/dataset.hpp"
#include "anglerefit/linear_model.hpp"

namespace anglerefit {

/// Benchmark protocol. With `example` set, each replicate draws fresh
/// train/tune/test sets and tunes lambda on the tune set. With `dataset` set,
/// each replicate takes one part of a seeded six-way split as the test set and
/// tunes lambda by cross-validation on the rest; the test part cycles 1..6.
struct BenchConfig {
  std::optional<ExampleId> example;
  std::optional<LabeledDataset> dataset;
  SplitSizes sizes;
  std::vector<std::string> losses{"soft", "logistic"};
  FitConfig base;
  int replicates = 10;
  int folds = 4;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  std::vector<double> grid;  // empty means lambda_grid()
};

struct ReportRow {
  std::string method;
  int replicate = 0;
  double lambda_selected = 0.0;
  double error = 0.0;
  double mad = 0.0;  // NaN when true probabilities are unknown
  double cre = 0.0;
  double nll = 0.0;
  std::optional<bool> stage2_converged;  // refit rows only
};

struct BenchReport {
  std::vector<ReportRow> rows;        // sorted by method order, then replicate
  std::vector<std::string> methods;   // in report order
  std::vector<std::string> failures;  // one message per failed (replicate, loss)
};

struct MethodSummary {
  int replicates = 0;
  double error = 0.0, error_se = 0.0;
  double mad = 0.0, mad_se = 0.0;
  double cre = 0.0, cre_se = 0.0;
  double nll = 0.0, nll_se = 0.0;
  double lambda_selected = 0.0;
  double stage2_converged = 0.0;  // fraction, refit methods only
};

/// "Soft" / "Logi" for the shipped losses, the loss name otherwise.
std::string method_name(const std::string& loss, bool refit);

BenchReport run_bench(const BenchConfig& config);

MethodSummary summarize(const BenchReport& report, const std::string& method);

/// Columns: method, replicate, lambda_selected, error, error_pct, mad,
/// mad_x100, cre, cre_x100, nll, stage2_converged. Per-replicate rows are
/// followed by "mean" and "se" aggregate rows for each method. Missing values
/// are written as NA.
void write_report(std::ostream& out, const BenchReport& report);

}  // namespace anglerefit
