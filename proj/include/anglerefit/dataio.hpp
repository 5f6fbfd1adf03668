#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "anglerefit/dataset.hpp"
#include "anglerefit/linear_model.hpp"
#include "anglerefit/refit.hpp"

namespace anglerefit {

enum class LabelOrder {
  first_appearance,  // class 1 is the first label seen in the file
  sorted,            // numeric order when every label is a number, else lexicographic
};

struct CsvOptions {
  /// Header name, or a 0-based column index.
  std::string label_column = "label";
  bool has_header = true;
  LabelOrder label_order = LabelOrder::first_appearance;
};

/// Numeric features plus one label column. Throws IoError for unreadable
/// files and DataValidationError (with the line number) for bad cells.
LabeledDataset load_csv(const std::string& path, const CsvOptions& options = {});

/// Feature matrix only; the column named/indexed by drop_column is skipped
/// when present (pass an empty string to keep every column).
Eigen::MatrixXd load_features(const std::string& path, bool has_header,
                              const std::string& drop_column = "label");

/// Header x1..xp,label; labels written by name; 17 significant digits.
void save_csv(const LabeledDataset& data, const std::string& path);

/// n x k matrix with a header row, 17 significant digits.
void save_matrix_csv(const Eigen::MatrixXd& M, const std::vector<std::string>& header,
                     const std::string& path);
Eigen::MatrixXd load_matrix_csv(const std::string& path, bool has_header = true);

/// Shortest decimal with 17 significant digits ("%.17g").
std::string format_double(double value);

void write_model(std::ostream& out, const LinearAngleModel& model);
LinearAngleModel read_model(std::istream& in);
void save_model(const LinearAngleModel& model, const std::string& path);
LinearAngleModel load_model(const std::string& path);

void write_refit_model(std::ostream& out, const RefitModel& model);
RefitModel read_refit_model(std::istream& in);
void save_refit_model(const RefitModel& model, const std::string& path);
RefitModel load_refit_model(const std::string& path);

/// Either kind of model document, chosen by its header tag.
std::variant<LinearAngleModel, RefitModel> load_any_model(const std::string& path);

}  // namespace anglerefit
