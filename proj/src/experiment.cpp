#include "anglerefit/experiment.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "anglerefit/dataio.hpp"
#include "anglerefit/errors.hpp"
#include "anglerefit/metrics.hpp"
#include "anglerefit/parallel.hpp"
#include "anglerefit/refit.hpp"
#include "anglerefit/seeding.hpp"
#include "anglerefit/tuning.hpp"

namespace anglerefit {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct TaskOutput {
  ReportRow original;
  ReportRow refit;
  std::string failure;
};

ReportRow evaluate(const std::string& method, int replicate, double lambda,
                   const std::vector<int>& predicted, const Eigen::MatrixXd& probs,
                   const LabeledDataset& test) {
  ReportRow row;
  row.method = method;
  row.replicate = replicate;
  row.lambda_selected = lambda;
  row.error = error_rate(predicted, test.y);
  row.mad = test.true_probs ? mad(*test.true_probs, probs) : kNaN;
  row.cre = cre(probs, test.y);
  row.nll = nll(probs, test.y);
  return row;
}

TaskOutput run_task(const BenchConfig& config, const std::vector<double>& grid, int replicate,
                    const std::string& loss) {
  const std::uint64_t rseed = derive_seed(config.seed, static_cast<std::uint64_t>(replicate));
  FitConfig base = config.base;
  base.loss = loss;

  LabeledDataset train, test;
  LinearAngleModel stage1;
  double lambda = 0.0;
  if (config.example) {
    const ExampleSpec spec = example_spec(*config.example);
    train = generate(spec, config.sizes.train, derive_seed(rseed, 1));
    const LabeledDataset tune = generate(spec, config.sizes.tune, derive_seed(rseed, 2));
    test = generate(spec, config.sizes.test, derive_seed(rseed, 3));
    const SimplexCode code(spec.k);
    HoldoutSearch search = holdout_search(train, tune, base, code, grid);
    lambda = search.result.selected_lambda;
    stage1 = std::move(search.fits[search.result.selected_index].model);
  } else {
    // Six consecutive replicates share one partition and rotate the test part.
    const int part = replicate % 6 + 1;
    auto split = split_six(*config.dataset, part,
                           derive_seed(config.seed, static_cast<std::uint64_t>(replicate / 6) + 0x5157));
    train = std::move(split.first);
    test = std::move(split.second);
    const SimplexCode code(train.k);
    const TuningResult tuned = cv_select(train, config.folds, base, code, derive_seed(rseed, 4), grid);
    lambda = tuned.selected_lambda;
    FitConfig chosen = base;
    chosen.lambda = lambda;
    stage1 = fit(train, chosen, code).model;
  }

  const SimplexCode code(train.k);
  const RefitModel refit = refit_from_stage1(stage1, train, code);

  TaskOutput out;
  out.original = evaluate(method_name(loss, false), replicate, lambda, predict_all(stage1, test.X),
                          model_probability_matrix(stage1, test.X), test);
  out.refit = evaluate(method_name(loss, true), replicate, lambda, refit_predict_all(refit, test.X),
                       refit_probability_matrix(refit, test.X), test);
  out.refit.stage2_converged = refit.diagnostics.stage2_converged;
  return out;
}

std::string cell(double v) { return std::isnan(v) ? "NA" : format_double(v); }

void write_row(std::ostream& out, const std::string& method, const std::string& replicate,
               double lambda, double error, double mad_value, double cre_value, double nll_value,
               const std::string& converged) {
  out << method << ',' << replicate << ',' << cell(lambda) << ',' << cell(error) << ','
      << cell(100.0 * error) << ',' << cell(mad_value) << ',' << cell(100.0 * mad_value) << ','
      << cell(cre_value) << ',' << cell(100.0 * cre_value) << ',' << cell(nll_value) << ','
      << converged << '\n';
}

void mean_se(const std::vector<double>& values, double& mean, double& se) {
  mean = kNaN;
  se = kNaN;
  if (values.empty()) return;
  double total = 0.0;
  for (double v : values) total += v;
  mean = total / static_cast<double>(values.size());
  if (values.size() < 2) {
    se = 0.0;
    return;
  }
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  se = std::sqrt(ss / static_cast<double>(values.size() - 1) / static_cast<double>(values.size()));
}

}  // namespace

std::string method_name(const std::string& loss, bool refit) {
  std::string base = loss;
  if (loss == "soft") base = "Soft";
  if (loss == "logistic" || loss == "logi") base = "Logi";
  return refit ? "Refit " + base : base;
}

BenchReport run_bench(const BenchConfig& config) {
  if (config.example.has_value() == config.dataset.has_value()) {
    throw InvalidArgument("bench needs exactly one of an example id or a dataset");
  }
  if (config.replicates < 1) throw InvalidArgument("replicate count must be >= 1");
  if (config.losses.empty()) throw InvalidArgument("bench needs at least one loss");
  config.base.validate();
  if (config.dataset) config.dataset->validate();
  const std::vector<double> grid = config.grid.empty() ? lambda_grid() : config.grid;

  const std::size_t n_losses = config.losses.size();
  const std::size_t tasks = static_cast<std::size_t>(config.replicates) * n_losses;
  std::vector<TaskOutput> outputs(tasks);
  parallel_for(tasks, config.jobs, [&](std::size_t task) {
    const int replicate = static_cast<int>(task / n_losses);
    const std::string& loss = config.losses[task % n_losses];
    try {
      outputs[task] = run_task(config, grid, replicate, loss);
    } catch (const std::exception& e) {
      outputs[task].failure = "replicate " + std::to_string(replicate) + ", loss " + loss + ": " + e.what();
    }
  });

  BenchReport report;
  for (const auto& loss : config.losses) {
    report.methods.push_back(method_name(loss, false));
    report.methods.push_back(method_name(loss, true));
  }
  for (std::size_t l = 0; l < n_losses; ++l) {
    for (int pass = 0; pass < 2; ++pass) {
      for (int r = 0; r < config.replicates; ++r) {
        const TaskOutput& o = outputs[static_cast<std::size_t>(r) * n_losses + l];
        if (!o.failure.empty()) continue;
        report.rows.push_back(pass == 0 ? o.original : o.refit);
      }
    }
  }
  for (const auto& o : outputs) {
    if (!o.failure.empty()) report.failures.push_back(o.failure);
  }
  return report;
}

MethodSummary summarize(const BenchReport& report, const std::string& method) {
  std::vector<double> error, mad_v, cre_v, nll_v, lambda, converged;
  for (const auto& row : report.rows) {
    if (row.method != method) continue;
    error.push_back(row.error);
    mad_v.push_back(row.mad);
    cre_v.push_back(row.cre);
    nll_v.push_back(row.nll);
    lambda.push_back(row.lambda_selected);
    if (row.stage2_converged) converged.push_back(*row.stage2_converged ? 1.0 : 0.0);
  }
  MethodSummary s;
  s.replicates = static_cast<int>(error.size());
  mean_se(error, s.error, s.error_se);
  mean_se(mad_v, s.mad, s.mad_se);
  mean_se(cre_v, s.cre, s.cre_se);
  mean_se(nll_v, s.nll, s.nll_se);
  double unused = 0.0;
  mean_se(lambda, s.lambda_selected, unused);
  mean_se(converged, s.stage2_converged, unused);
  return s;
}

void write_report(std::ostream& out, const BenchReport& report) {
  out << "method,replicate,lambda_selected,error,error_pct,mad,mad_x100,cre,cre_x100,nll,"
         "stage2_converged\n";
  for (const auto& row : report.rows) {
    write_row(out, row.method, std::to_string(row.replicate), row.lambda_selected, row.error, row.mad,
              row.cre, row.nll,
              row.stage2_converged ? (*row.stage2_converged ? "1" : "0") : "NA");
  }
  for (const auto& method : report.methods) {
    const MethodSummary s = summarize(report, method);
    if (s.replicates == 0) continue;
    const bool refit = method.rfind("Refit ", 0) == 0;
    write_row(out, method, "mean", s.lambda_selected, s.error, s.mad, s.cre, s.nll,
              refit ? cell(s.stage2_converged) : "NA");
    write_row(out, method, "se", kNaN, s.error_se, s.mad_se, s.cre_se, s.nll_se, "NA");
  }
}

}  // namespace anglerefit
