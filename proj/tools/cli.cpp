#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "anglerefit/datagen.hpp"
#include "anglerefit/dataio.hpp"
#include "anglerefit/errors.hpp"
#include "anglerefit/experiment.hpp"
#include "anglerefit/loss.hpp"
#include "anglerefit/refit.hpp"
#include "anglerefit/seeding.hpp"
#include "anglerefit/tuning.hpp"
#include "anglerefit/version.hpp"

namespace anglerefit::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

const std::map<std::string, LabelOrder> kLabelOrders{{"appearance", LabelOrder::first_appearance},
                                                     {"sorted", LabelOrder::sorted}};

struct DataFlags {
  std::string label_column = "label";
  bool no_header = false;
  LabelOrder label_order = LabelOrder::first_appearance;

  CsvOptions csv() const { return {label_column, !no_header, label_order}; }
};

void add_data_flags(CLI::App* cmd, DataFlags& flags) {
  cmd->add_option("--label-column", flags.label_column,
                  "Label column: header name, 0-based index, or 'last'")
      ->capture_default_str();
  cmd->add_flag("--no-header", flags.no_header, "CSV files have no header row");
  cmd->add_option("--label-order", flags.label_order, "Class numbering: appearance or sorted")
      ->transform(CLI::CheckedTransformer(kLabelOrders, CLI::ignore_case));
}

struct ModelFlags {
  std::string loss = "logistic";
  std::string penalty = "l1";
  std::optional<double> lambda;
  bool tune_grid = false;
  std::vector<double> grid;
  std::string tune_data;
  int folds = 4;
  std::uint64_t seed = 1;
  std::string standardize = "on";
  int max_iterations = FitConfig{}.max_iterations;
  double tolerance = FitConfig{}.tolerance;
  std::size_t jobs = 1;
  std::string trace;
};

void add_model_flags(CLI::App* cmd, ModelFlags& flags) {
  cmd->add_option("--loss", flags.loss, "Margin loss")
      ->check(CLI::IsMember(loss_names()))
      ->capture_default_str();
  cmd->add_option("--penalty", flags.penalty, "Penalty on the coefficients")
      ->check(CLI::IsMember({"none", "l1", "l2"}))
      ->capture_default_str();
  auto* lambda = cmd->add_option("--lambda", flags.lambda, "Penalty weight")
                     ->check(CLI::NonNegativeNumber);
  auto* tune = cmd->add_flag("--tune-grid", flags.tune_grid,
                             "Select lambda from the grid 2^-10..2^10 (or --grid)");
  lambda->excludes(tune);
  cmd->add_option("--grid", flags.grid, "Candidate lambdas for --tune-grid")
      ->check(CLI::PositiveNumber)
      ->delimiter(',');
  cmd->add_option("--tune-data", flags.tune_data,
                  "Hold-out CSV for --tune-grid (default: cross-validation)");
  cmd->add_option("--folds", flags.folds, "Cross-validation folds for --tune-grid")
      ->check(CLI::Range(2, 1000))
      ->capture_default_str();
  cmd->add_option("--seed", flags.seed, "Seed for fold assignment")->capture_default_str();
  cmd->add_option("--standardize", flags.standardize, "Standardize features before fitting")
      ->check(CLI::IsMember({"on", "off", "auto"}))
      ->capture_default_str();
  cmd->add_option("--max-iter", flags.max_iterations, "Solver iteration cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--tolerance", flags.tolerance, "Relative objective change for stopping")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--jobs", flags.jobs, "Parallel grid fits")->check(CLI::PositiveNumber);
  cmd->add_option("--trace", flags.trace, "Write the tuning trace CSV here");
}

FitConfig fit_config(const ModelFlags& flags) {
  FitConfig config;
  config.loss = flags.loss;
  config.penalty = parse_penalty(flags.penalty);
  config.lambda = flags.lambda.value_or(0.0);
  config.standardize = flags.standardize != "off";
  config.max_iterations = flags.max_iterations;
  config.tolerance = flags.tolerance;
  config.seed = flags.seed;
  return config;
}

// Re-expresses data's labels in the class numbering given by names.
LabeledDataset align_labels(LabeledDataset data, const std::vector<std::string>& names) {
  if (names.empty()) return data;
  std::map<std::string, int> index;
  for (std::size_t j = 0; j < names.size(); ++j) index[names[j]] = static_cast<int>(j) + 1;
  for (auto& label : data.y) {
    const std::string name = data.label_name(label);
    const auto it = index.find(name);
    if (it == index.end()) {
      throw DataValidationError("label '" + name + "' does not occur in the training data");
    }
    label = it->second;
  }
  data.k = static_cast<int>(names.size());
  data.label_names = names;
  return data;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  file << text;
  if (!file) throw IoError("failed writing '" + path + "'");
}

std::vector<std::string> class_header(int k, const std::vector<std::string>& names) {
  std::vector<std::string> header;
  for (int j = 1; j <= k; ++j) {
    header.push_back(names.empty() ? "p" + std::to_string(j) : names[static_cast<std::size_t>(j) - 1]);
  }
  return header;
}

std::string command_line(const std::vector<std::string>& args) {
  std::string line = "anglerefit";
  for (const auto& a : args) line += " " + a;
  return line;
}

// Selected lambda for fit/refit/tune; writes the trace when asked.
double resolve_lambda(const ModelFlags& flags, const FitConfig& config, const LabeledDataset& train,
                      const DataFlags& data_flags, std::ostream& err) {
  if (!flags.tune_grid) return config.lambda;
  const SimplexCode code(train.k);
  const std::vector<double> grid = flags.grid.empty() ? lambda_grid() : flags.grid;
  TuningResult result;
  if (!flags.tune_data.empty()) {
    const LabeledDataset tune = align_labels(load_csv(flags.tune_data, data_flags.csv()), train.label_names);
    result = select_holdout(train, tune, config, code, grid, flags.jobs);
  } else {
    result = cv_select(train, flags.folds, config, code, flags.seed, grid, flags.jobs);
  }
  if (!flags.trace.empty()) {
    std::ostringstream trace;
    write_tuning_trace(trace, result);
    write_text(flags.trace, trace.str());
  }
  err << "selected lambda " << format_double(result.selected_lambda) << " (error "
      << format_double(result.errors[result.selected_index]) << ")\n";
  return result.selected_lambda;
}

struct SimulateFlags {
  ExampleId example = ExampleId::ex1;
  std::optional<Eigen::Index> train, tune, test;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  std::string prefix;
};

int cmd_simulate(const SimulateFlags& flags, const std::vector<std::string>& args, std::ostream& out) {
  const ExampleSpec spec = example_spec(flags.example);
  const SplitSizes defaults = default_sizes(flags.example);
  const SplitSizes sizes{flags.train.value_or(defaults.train), flags.tune.value_or(defaults.tune),
                         flags.test.value_or(defaults.test)};
  const std::string prefix = flags.prefix.empty() ? to_string(flags.example) : flags.prefix;
  fs::create_directories(flags.out_dir);

  json files = json::object();
  json seeds = json::object();
  const std::pair<const char*, Eigen::Index> splits[] = {
      {"train", sizes.train}, {"tune", sizes.tune}, {"test", sizes.test}};
  std::uint64_t index = 1;
  for (const auto& [name, n] : splits) {
    const std::uint64_t seed = derive_seed(flags.seed, index++);
    const LabeledDataset data = generate(spec, n, seed);
    const fs::path csv = fs::path(flags.out_dir) / (prefix + "_" + name + ".csv");
    const fs::path probs = fs::path(flags.out_dir) / (prefix + "_" + name + "_probs.csv");
    save_csv(data, csv.string());
    save_matrix_csv(*data.true_probs, class_header(spec.k, {}), probs.string());
    files[name] = {{"data", csv.filename().string()}, {"true_probs", probs.filename().string()},
                   {"rows", n}};
    seeds[name] = seed;
    out << "wrote " << csv.string() << " (" << n << " rows)\n";
  }

  json meta;
  meta["tool"] = "anglerefit";
  meta["version"] = kVersion;
  meta["command"] = command_line(args);
  meta["example"] = to_string(flags.example);
  meta["seed"] = flags.seed;
  meta["split_seeds"] = seeds;
  meta["files"] = files;
  meta["spec"] = {{"k", spec.k},
                  {"signal_dim", spec.signal_dim},
                  {"noise_dim", spec.noise_dim},
                  {"signal_sd", spec.signal_sd},
                  {"noise_sd", spec.noise_sd},
                  {"class_means", std::vector<std::vector<double>>()}};
  for (int j = 0; j < spec.k; ++j) {
    std::vector<double> row;
    for (int d = 0; d < spec.signal_dim; ++d) row.push_back(spec.class_means(j, d));
    meta["spec"]["class_means"].push_back(row);
  }
  meta["sigma_reading"] =
      flags.example == ExampleId::ex1
          ? "signal coordinates have standard deviation 2; noise N(0, 0.02) read as variance 0.02"
          : "signal covariance I_2, means equally spaced on the radius-3 circle; noise N(0, 0.01) read "
            "as variance 0.01";
  const fs::path meta_path = fs::path(flags.out_dir) / (prefix + "_metadata.json");
  write_text(meta_path.string(), meta.dump(2) + "\n");
  out << "wrote " << meta_path.string() << "\n";
  return kExitOk;
}

struct BenchFlags {
  std::optional<ExampleId> example;
  std::string data;
  DataFlags data_flags;
  std::vector<std::string> losses{"soft", "logistic"};
  std::string penalty = "l2";
  std::string standardize = "auto";
  int replicates = 10;
  int folds = 4;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  std::optional<Eigen::Index> train, tune, test;
  std::string out;
  std::vector<double> grid;
};

int cmd_bench(const BenchFlags& flags, const std::vector<std::string>& args, std::ostream& out,
              std::ostream& err) {
  BenchConfig config;
  std::size_t rows = 0;
  if (flags.example) {
    config.example = flags.example;
    const SplitSizes defaults = default_sizes(*flags.example);
    config.sizes = {flags.train.value_or(defaults.train), flags.tune.value_or(defaults.tune),
                    flags.test.value_or(defaults.test)};
  } else {
    config.dataset = load_csv(flags.data, flags.data_flags.csv());
    rows = static_cast<std::size_t>(config.dataset->rows());
  }
  config.losses = flags.losses;
  config.base.penalty = parse_penalty(flags.penalty);
  // Simulated features already share a scale; real data columns do not.
  config.base.standardize = flags.standardize == "on" || (flags.standardize == "auto" && !flags.example);
  config.replicates = flags.replicates;
  config.folds = flags.folds;
  config.seed = flags.seed;
  config.jobs = flags.jobs;
  config.grid = flags.grid;

  const BenchReport report = run_bench(config);
  for (const auto& failure : report.failures) err << "warning: " << failure << "\n";

  std::ostringstream csv;
  write_report(csv, report);
  if (flags.out.empty()) {
    out << csv.str();
  } else {
    write_text(flags.out, csv.str());
    json meta;
    meta["tool"] = "anglerefit";
    meta["version"] = kVersion;
    meta["command"] = command_line(args);
    meta["seed"] = flags.seed;
    meta["replicates"] = flags.replicates;
    meta["losses"] = flags.losses;
    meta["penalty"] = flags.penalty;
    meta["standardize"] = config.base.standardize;
    if (flags.example) {
      meta["example"] = to_string(*flags.example);
      meta["sizes"] = {{"train", config.sizes.train}, {"tune", config.sizes.tune}, {"test", config.sizes.test}};
    } else {
      meta["data"] = flags.data;
      meta["rows"] = rows;
      meta["folds"] = flags.folds;
    }
    meta["failures"] = report.failures;
    write_text(flags.out + ".meta.json", meta.dump(2) + "\n");
    out << "wrote " << flags.out << "\n";
  }
  if (report.rows.empty()) {
    err << "error: every replicate failed\n";
    return kExitRuntime;
  }
  return kExitOk;
}

struct FitFlags {
  std::string data;
  std::string out;
  std::string stage1;
  DataFlags data_flags;
  ModelFlags model;
};

int cmd_fit(const FitFlags& flags, bool refit, std::ostream& out, std::ostream& err) {
  const LabeledDataset train = load_csv(flags.data, flags.data_flags.csv());
  const SimplexCode code(train.k);
  if (refit && !flags.stage1.empty()) {
    const LinearAngleModel stage1 = load_model(flags.stage1);
    const LabeledDataset aligned = align_labels(train, stage1.label_names);
    const RefitModel model = refit_from_stage1(stage1, aligned, SimplexCode(stage1.k));
    save_refit_model(model, flags.out);
    out << "wrote " << flags.out << "\n";
    return kExitOk;
  }
  FitConfig config = fit_config(flags.model);
  config.lambda = resolve_lambda(flags.model, config, train, flags.data_flags, err);
  if (refit) {
    const RefitModel model = refit_fit(train, config, code);
    if (model.diagnostics.stage2_separable) {
      err << "warning: stage-2 training data look separable (coefficient norm "
          << format_double(model.diagnostics.stage2_coef_norm) << ")\n";
    }
    save_refit_model(model, flags.out);
  } else {
    const FitResult result = fit(train, config, code);
    if (!result.diagnostics.converged) {
      err << "warning: solver stopped at the iteration cap (" << result.diagnostics.iterations << ")\n";
    }
    save_model(result.model, flags.out);
  }
  out << "wrote " << flags.out << "\n";
  return kExitOk;
}

struct TuneFlags {
  std::string data;
  DataFlags data_flags;
  ModelFlags model;
};

int cmd_tune(TuneFlags flags, std::ostream& out, std::ostream& err) {
  const LabeledDataset train = load_csv(flags.data, flags.data_flags.csv());
  flags.model.tune_grid = true;
  const FitConfig config = fit_config(flags.model);
  const SimplexCode code(train.k);
  const std::vector<double> grid = flags.model.grid.empty() ? lambda_grid() : flags.model.grid;
  TuningResult result;
  if (!flags.model.tune_data.empty()) {
    const LabeledDataset tune =
        align_labels(load_csv(flags.model.tune_data, flags.data_flags.csv()), train.label_names);
    result = select_holdout(train, tune, config, code, grid, flags.model.jobs);
  } else {
    result = cv_select(train, flags.model.folds, config, code, flags.model.seed, grid, flags.model.jobs);
  }
  std::ostringstream trace;
  write_tuning_trace(trace, result);
  if (flags.model.trace.empty()) {
    out << trace.str();
  } else {
    write_text(flags.model.trace, trace.str());
    out << format_double(result.selected_lambda) << "\n";
  }
  (void)err;
  return kExitOk;
}

struct ApplyFlags {
  std::string model;
  std::string data;
  std::string out;
  bool no_header = false;
  std::string drop_column = "label";
};

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_text(path, text);
  }
}

int cmd_predict(const ApplyFlags& flags, std::ostream& out) {
  const auto loaded = load_any_model(flags.model);
  const Eigen::MatrixXd X = load_features(flags.data, !flags.no_header, flags.drop_column);
  std::vector<int> labels;
  std::vector<std::string> names;
  if (const auto* model = std::get_if<LinearAngleModel>(&loaded)) {
    labels = predict_all(*model, X);
    names = model->label_names;
  } else {
    const auto& refit = std::get<RefitModel>(loaded);
    labels = refit_predict_all(refit, X);
    names = refit.stage1.label_names;
  }
  std::string text = "label\n";
  for (int label : labels) {
    text += (names.empty() ? std::to_string(label) : names[static_cast<std::size_t>(label) - 1]) + "\n";
  }
  emit(flags.out, text, out);
  return kExitOk;
}

int cmd_prob(const ApplyFlags& flags, std::ostream& out) {
  const auto loaded = load_any_model(flags.model);
  const Eigen::MatrixXd X = load_features(flags.data, !flags.no_header, flags.drop_column);
  Eigen::MatrixXd P;
  std::vector<std::string> header;
  if (const auto* model = std::get_if<LinearAngleModel>(&loaded)) {
    P = model_probability_matrix(*model, X);
    header = class_header(model->k, model->label_names);
  } else {
    const auto& refit = std::get<RefitModel>(loaded);
    P = refit_probability_matrix(refit, X);
    header = class_header(refit.stage1.k, refit.stage1.label_names);
  }
  std::string text;
  for (std::size_t j = 0; j < header.size(); ++j) text += (j ? "," : "") + header[j];
  text += "\n";
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    for (Eigen::Index j = 0; j < P.cols(); ++j) text += (j ? "," : "") + format_double(P(i, j));
    text += "\n";
  }
  emit(flags.out, text, out);
  return kExitOk;
}

void add_apply_flags(CLI::App* cmd, ApplyFlags& flags) {
  cmd->add_option("--model", flags.model, "Model document (linear or refit)")->required();
  cmd->add_option("--data", flags.data, "Feature CSV")->required();
  cmd->add_option("--out", flags.out, "Output CSV (default: standard output)");
  cmd->add_flag("--no-header", flags.no_header, "The CSV has no header row");
  cmd->add_option("--drop-column", flags.drop_column,
                  "Column to ignore when present, e.g. the label (empty keeps all)")
      ->capture_default_str();
}

const std::map<std::string, ExampleId> kExamples{{"ex1", ExampleId::ex1}, {"ex2", ExampleId::ex2}};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Angle-based linear classification with refitted class probabilities", "anglerefit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  SimulateFlags sim;
  auto* simulate = app.add_subcommand("simulate", "Write simulated train/tune/test CSVs");
  simulate->add_option("--example", sim.example, "Example id: ex1 or ex2")
      ->required()
      ->transform(CLI::CheckedTransformer(kExamples, CLI::ignore_case));
  simulate->add_option("--train", sim.train, "Training rows")->check(CLI::PositiveNumber);
  simulate->add_option("--tune", sim.tune, "Tuning rows")->check(CLI::PositiveNumber);
  simulate->add_option("--test", sim.test, "Test rows")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.seed, "Base seed")->capture_default_str();
  simulate->add_option("--out-dir", sim.out_dir, "Output directory")->capture_default_str();
  simulate->add_option("--prefix", sim.prefix, "File name prefix (default: example id)");

  BenchFlags bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run the Soft/Logi vs refit comparison");
  auto* bench_example = bench_cmd->add_option("--example", bench.example, "Simulated example id")
                            ->transform(CLI::CheckedTransformer(kExamples, CLI::ignore_case));
  auto* bench_data = bench_cmd->add_option("--data", bench.data, "Real-data CSV (six-way split + CV)");
  bench_example->excludes(bench_data);
  add_data_flags(bench_cmd, bench.data_flags);
  bench_cmd->add_option("--losses", bench.losses, "Comma-separated losses")
      ->delimiter(',')
      ->check(CLI::IsMember(loss_names()))
      ->capture_default_str();
  bench_cmd->add_option("--penalty", bench.penalty, "Stage-1 penalty")
      ->check(CLI::IsMember({"l1", "l2"}))
      ->capture_default_str();
  bench_cmd->add_option("--standardize", bench.standardize,
                        "on, off, or auto (off for simulated examples, on for CSV data)")
      ->check(CLI::IsMember({"on", "off", "auto"}))
      ->capture_default_str();
  bench_cmd->add_option("--replicates", bench.replicates, "Replicates")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_option("--folds", bench.folds, "Cross-validation folds (real data)")
      ->check(CLI::Range(2, 1000))
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "Base seed")->capture_default_str();
  bench_cmd->add_option("--jobs", bench.jobs, "Concurrent replicate tasks")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_option("--train", bench.train, "Training rows (simulation)")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--tune", bench.tune, "Tuning rows (simulation)")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--test", bench.test, "Test rows (simulation)")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--grid", bench.grid, "Candidate lambdas (default 2^-10..2^10)")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--out", bench.out, "Report CSV (default: standard output)");

  FitFlags fit_flags;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a penalized linear angle-based classifier");
  fit_cmd->add_option("--data", fit_flags.data, "Training CSV")->required();
  fit_cmd->add_option("--out", fit_flags.out, "Model document to write")->required();
  add_data_flags(fit_cmd, fit_flags.data_flags);
  add_model_flags(fit_cmd, fit_flags.model);

  FitFlags refit_flags;
  auto* refit_cmd = app.add_subcommand("refit", "Fit stage 1 (or load it) and refit stage 2");
  refit_cmd->add_option("--data", refit_flags.data, "Training CSV")->required();
  refit_cmd->add_option("--out", refit_flags.out, "Refit model document to write")->required();
  refit_cmd->add_option("--stage1", refit_flags.stage1, "Existing stage-1 model document");
  add_data_flags(refit_cmd, refit_flags.data_flags);
  add_model_flags(refit_cmd, refit_flags.model);

  TuneFlags tune_flags;
  auto* tune_cmd = app.add_subcommand("tune", "Print the tuning trace over the lambda grid");
  tune_cmd->add_option("--data", tune_flags.data, "Training CSV")->required();
  add_data_flags(tune_cmd, tune_flags.data_flags);
  add_model_flags(tune_cmd, tune_flags.model);

  ApplyFlags predict_flags;
  auto* predict_cmd = app.add_subcommand("predict", "Write predicted labels");
  add_apply_flags(predict_cmd, predict_flags);

  ApplyFlags prob_flags;
  auto* prob_cmd = app.add_subcommand("prob", "Write n x k class probabilities");
  add_apply_flags(prob_cmd, prob_flags);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*simulate) return cmd_simulate(sim, args, out);
    if (*bench_cmd) {
      if (!bench.example && bench.data.empty()) {
        err << "error: bench needs --example or --data\n";
        return kExitUsage;
      }
      return cmd_bench(bench, args, out, err);
    }
    if (*fit_cmd) {
      if (!fit_flags.model.lambda && !fit_flags.model.tune_grid) {
        err << "error: fit needs --lambda or --tune-grid\n";
        return kExitUsage;
      }
      return cmd_fit(fit_flags, false, out, err);
    }
    if (*refit_cmd) {
      if (refit_flags.stage1.empty() && !refit_flags.model.lambda && !refit_flags.model.tune_grid) {
        err << "error: refit needs --stage1, --lambda or --tune-grid\n";
        return kExitUsage;
      }
      return cmd_fit(refit_flags, true, out, err);
    }
    if (*tune_cmd) return cmd_tune(tune_flags, out, err);
    if (*predict_cmd) return cmd_predict(predict_flags, out);
    if (*prob_cmd) return cmd_prob(prob_flags, out);
  } catch (const std::exception& e) {
    std::string message = e.what();
    std::replace(message.begin(), message.end(), '\n', ' ');
    err << "error: " << message << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace anglerefit::cli
