#include "anglerefit/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "anglerefit/errors.hpp"

namespace anglerefit {
namespace {

constexpr const char* kModelTag = "anglerefit-linear-model";
constexpr const char* kRefitTag = "anglerefit-refit-model";
constexpr const char* kVersion = "v1";

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

bool parse_double(const std::string& text, double& value) {
  if (text.empty()) return false;
  const char* first = text.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size();
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;
};

CsvTable read_table(const std::string& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool header_pending = has_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    if (header_pending) {
      table.header = std::move(fields);
      header_pending = false;
      continue;
    }
    const std::size_t width = table.header.empty() ? (table.rows.empty() ? fields.size() : table.rows.front().size())
                                                   : table.header.size();
    if (fields.size() != width) {
      throw DataValidationError(path + ":" + std::to_string(line_no) + ": expected " +
                                std::to_string(width) + " fields, found " + std::to_string(fields.size()));
    }
    table.rows.push_back(std::move(fields));
    table.line_numbers.push_back(line_no);
  }
  if (table.rows.empty()) throw DataValidationError("'" + path + "' contains no data rows");
  return table;
}

// -1 when the column is absent.
long resolve_column(const CsvTable& table, const std::string& column) {
  if (column.empty()) return -1;
  const std::size_t width = table.rows.front().size();
  if (auto it = std::find(table.header.begin(), table.header.end(), column); it != table.header.end()) {
    return static_cast<long>(it - table.header.begin());
  }
  if (column == "last") return static_cast<long>(width) - 1;
  long index = 0;
  const auto [ptr, ec] = std::from_chars(column.data(), column.data() + column.size(), index);
  if (ec == std::errc() && ptr == column.data() + column.size() && index >= 0 &&
      index < static_cast<long>(width)) {
    return index;
  }
  return -1;
}

Eigen::MatrixXd parse_features(const CsvTable& table, const std::string& path, long skip) {
  const auto width = static_cast<long>(table.rows.front().size());
  const Eigen::Index p = width - (skip >= 0 ? 1 : 0);
  Eigen::MatrixXd X(static_cast<Eigen::Index>(table.rows.size()), p);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    Eigen::Index c = 0;
    for (long j = 0; j < width; ++j) {
      if (j == skip) continue;
      double value = 0.0;
      const auto& cell = table.rows[r][static_cast<std::size_t>(j)];
      if (!parse_double(cell, value) || !std::isfinite(value)) {
        throw DataValidationError(path + ":" + std::to_string(table.line_numbers[r]) +
                                  ": non-numeric feature '" + cell + "' in column " + std::to_string(j + 1));
      }
      X(static_cast<Eigen::Index>(r), c++) = value;
    }
  }
  return X;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  return out;
}

// ---- model documents ----

void write_values(std::ostream& out, const char* key, const Eigen::VectorXd& v) {
  out << key;
  for (Eigen::Index i = 0; i < v.size(); ++i) out << ' ' << format_double(v[i]);
  out << '\n';
}

class DocReader {
 public:
  explicit DocReader(std::istream& in) : in_(in) {}

  std::vector<std::string> next_line() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (trim(line).empty()) continue;
      std::istringstream tokens(line);
      std::vector<std::string> out;
      for (std::string tok; tokens >> tok;) out.push_back(tok);
      return out;
    }
    throw FormatError("model document ended unexpectedly after line " + std::to_string(line_no_));
  }

  std::vector<std::string> expect(const std::string& key) {
    auto tokens = next_line();
    if (tokens.empty() || tokens.front() != key) {
      throw FormatError("line " + std::to_string(line_no_) + ": expected '" + key + "'");
    }
    tokens.erase(tokens.begin());
    return tokens;
  }

  std::string expect_single(const std::string& key) {
    auto tokens = expect(key);
    if (tokens.size() != 1) throw FormatError("line " + std::to_string(line_no_) + ": '" + key + "' takes one value");
    return tokens.front();
  }

  double number(const std::string& text) {
    double v = 0.0;
    if (!parse_double(text, v)) {
      throw FormatError("line " + std::to_string(line_no_) + ": bad number '" + text + "'");
    }
    return v;
  }

  long integer(const std::string& text) {
    long v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw FormatError("line " + std::to_string(line_no_) + ": bad integer '" + text + "'");
    }
    return v;
  }

  Eigen::VectorXd vector(const std::string& key) {
    const auto tokens = expect(key);
    Eigen::VectorXd v(static_cast<Eigen::Index>(tokens.size()));
    for (std::size_t i = 0; i < tokens.size(); ++i) v[static_cast<Eigen::Index>(i)] = number(tokens[i]);
    return v;
  }

  void header(const char* tag) {
    const auto tokens = next_line();
    if (tokens.size() != 2 || tokens[0] != tag) {
      throw FormatError(std::string("missing '") + tag + "' header");
    }
    if (tokens[1] != kVersion) {
      throw FormatError("unsupported document version '" + tokens[1] + "' (expected " + kVersion + ")");
    }
  }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

LinearAngleModel read_model_body(DocReader& doc) {
  doc.header(kModelTag);
  LinearAngleModel model;
  const long k = doc.integer(doc.expect_single("k"));
  const long p = doc.integer(doc.expect_single("p"));
  if (k < 2 || p < 0) throw DataValidationError("model document has invalid k or p");
  model.k = static_cast<int>(k);
  model.p = p;
  model.loss_id = doc.expect_single("loss");
  model.penalty = parse_penalty(doc.expect_single("penalty"));
  model.lambda = doc.number(doc.expect_single("lambda"));
  const long label_count = doc.integer(doc.expect_single("labels"));
  if (label_count < 0) throw FormatError("negative label count");
  for (long j = 0; j < label_count; ++j) {
    auto tokens = doc.next_line();
    if (tokens.size() != 1) throw FormatError("label names must be single tokens");
    model.label_names.push_back(tokens.front());
  }
  model.standardization.mean = doc.vector("mean");
  model.standardization.scale = doc.vector("scale");
  model.intercept = doc.vector("intercept");
  const long coef_rows = doc.integer(doc.expect_single("coef"));
  if (coef_rows != p) throw DataValidationError("coefficient block has " + std::to_string(coef_rows) + " rows, p = " + std::to_string(p));
  model.coef.resize(p, k - 1);
  for (long r = 0; r < p; ++r) {
    const auto tokens = doc.next_line();
    if (static_cast<long>(tokens.size()) != k - 1) {
      throw DataValidationError("coefficient row " + std::to_string(r + 1) + " has " +
                                std::to_string(tokens.size()) + " entries, expected k - 1 = " +
                                std::to_string(k - 1));
    }
    for (long c = 0; c < k - 1; ++c) model.coef(r, c) = doc.number(tokens[static_cast<std::size_t>(c)]);
  }
  doc.expect("end");
  model.validate();
  return model;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  if (ec != std::errc()) throw Error("failed to format a double");
  return std::string(buf, ptr);
}

LabeledDataset load_csv(const std::string& path, const CsvOptions& options) {
  const CsvTable table = read_table(path, options.has_header);
  const long label_col = resolve_column(table, options.label_column);
  if (label_col < 0) throw DataValidationError("label column '" + options.label_column + "' not found in '" + path + "'");
  if (table.rows.front().size() < 2) throw DataValidationError("'" + path + "' has no feature columns");

  LabeledDataset data;
  data.X = parse_features(table, path, label_col);

  std::vector<std::string> raw(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    raw[r] = table.rows[r][static_cast<std::size_t>(label_col)];
    if (raw[r].empty()) {
      throw DataValidationError(path + ":" + std::to_string(table.line_numbers[r]) + ": missing label");
    }
  }
  std::vector<std::string> names;
  for (const auto& label : raw) {
    if (std::find(names.begin(), names.end(), label) == names.end()) names.push_back(label);
  }
  if (options.label_order == LabelOrder::sorted) {
    const bool numeric = std::all_of(names.begin(), names.end(), [](const std::string& s) {
      double v = 0.0;
      return parse_double(s, v);
    });
    std::sort(names.begin(), names.end(), [numeric](const std::string& a, const std::string& b) {
      if (!numeric) return a < b;
      double x = 0.0, y = 0.0;
      parse_double(a, x);
      parse_double(b, y);
      return x < y;
    });
  }
  std::map<std::string, int> code;
  for (std::size_t j = 0; j < names.size(); ++j) code[names[j]] = static_cast<int>(j) + 1;
  data.y.reserve(raw.size());
  for (const auto& label : raw) data.y.push_back(code.at(label));
  data.k = static_cast<int>(names.size());
  data.label_names = std::move(names);
  if (data.k < 2) throw DataValidationError("'" + path + "' contains a single class");
  data.validate();
  return data;
}

Eigen::MatrixXd load_features(const std::string& path, bool has_header, const std::string& drop_column) {
  const CsvTable table = read_table(path, has_header);
  long skip = -1;
  if (!drop_column.empty()) {
    if (has_header) {
      if (auto it = std::find(table.header.begin(), table.header.end(), drop_column); it != table.header.end()) {
        skip = static_cast<long>(it - table.header.begin());
      }
    } else {
      skip = resolve_column(table, drop_column);
    }
  }
  return parse_features(table, path, skip);
}

void save_csv(const LabeledDataset& data, const std::string& path) {
  auto out = open_for_write(path);
  for (Eigen::Index j = 0; j < data.X.cols(); ++j) out << 'x' << (j + 1) << ',';
  out << "label\n";
  for (Eigen::Index i = 0; i < data.X.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.X.cols(); ++j) out << format_double(data.X(i, j)) << ',';
    out << data.label_name(data.y[static_cast<std::size_t>(i)]) << '\n';
  }
  if (!out) throw IoError("failed writing '" + path + "'");
}

void save_matrix_csv(const Eigen::MatrixXd& M, const std::vector<std::string>& header,
                     const std::string& path) {
  if (!header.empty() && static_cast<Eigen::Index>(header.size()) != M.cols()) {
    throw InvalidArgument("header width does not match the matrix");
  }
  auto out = open_for_write(path);
  for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
  if (!header.empty()) out << '\n';
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) out << (j ? "," : "") << format_double(M(i, j));
    out << '\n';
  }
  if (!out) throw IoError("failed writing '" + path + "'");
}

Eigen::MatrixXd load_matrix_csv(const std::string& path, bool has_header) {
  return parse_features(read_table(path, has_header), path, -1);
}

void write_model(std::ostream& out, const LinearAngleModel& model) {
  model.validate();
  for (const auto& name : model.label_names) {
    if (name.empty() || name.find_first_of(" \t\r\n") != std::string::npos) {
      throw InvalidArgument("label names must be non-empty and free of whitespace to be saved");
    }
  }
  out << kModelTag << ' ' << kVersion << '\n';
  out << "k " << model.k << '\n';
  out << "p " << model.p << '\n';
  out << "loss " << model.loss_id << '\n';
  out << "penalty " << to_string(model.penalty) << '\n';
  out << "lambda " << format_double(model.lambda) << '\n';
  out << "labels " << model.label_names.size() << '\n';
  for (const auto& name : model.label_names) out << name << '\n';
  write_values(out, "mean", model.standardization.mean);
  write_values(out, "scale", model.standardization.scale);
  write_values(out, "intercept", model.intercept);
  out << "coef " << model.p << '\n';
  for (Eigen::Index r = 0; r < model.coef.rows(); ++r) {
    for (Eigen::Index c = 0; c < model.coef.cols(); ++c) {
      out << (c ? " " : "") << format_double(model.coef(r, c));
    }
    out << '\n';
  }
  out << "end\n";
}

LinearAngleModel read_model(std::istream& in) {
  DocReader doc(in);
  return read_model_body(doc);
}

void save_model(const LinearAngleModel& model, const std::string& path) {
  auto out = open_for_write(path);
  write_model(out, model);
  if (!out) throw IoError("failed writing '" + path + "'");
}

LinearAngleModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_model(in);
}

void write_refit_model(std::ostream& out, const RefitModel& model) {
  model.validate();
  out << kRefitTag << ' ' << kVersion << '\n';
  out << "stage2_converged " << (model.diagnostics.stage2_converged ? 1 : 0) << '\n';
  out << "stage2_iterations " << model.diagnostics.stage2_iterations << '\n';
  out << "stage2_coef_norm " << format_double(model.diagnostics.stage2_coef_norm) << '\n';
  out << "stage2_separable " << (model.diagnostics.stage2_separable ? 1 : 0) << '\n';
  write_model(out, model.stage1);
  write_model(out, model.stage2);
}

RefitModel read_refit_model(std::istream& in) {
  DocReader doc(in);
  doc.header(kRefitTag);
  RefitModel model;
  model.diagnostics.stage2_converged = doc.integer(doc.expect_single("stage2_converged")) != 0;
  model.diagnostics.stage2_iterations = static_cast<int>(doc.integer(doc.expect_single("stage2_iterations")));
  model.diagnostics.stage2_coef_norm = doc.number(doc.expect_single("stage2_coef_norm"));
  model.diagnostics.stage2_separable = doc.integer(doc.expect_single("stage2_separable")) != 0;
  model.stage1 = read_model_body(doc);
  model.stage2 = read_model_body(doc);
  model.validate();
  return model;
}

void save_refit_model(const RefitModel& model, const std::string& path) {
  auto out = open_for_write(path);
  write_refit_model(out, model);
  if (!out) throw IoError("failed writing '" + path + "'");
}

RefitModel load_refit_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_refit_model(in);
}

std::variant<LinearAngleModel, RefitModel> load_any_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string first;
  in >> first;
  in.seekg(0);
  if (first == kRefitTag) return read_refit_model(in);
  if (first == kModelTag) return read_model(in);
  throw FormatError("'" + path + "' is not a model document");
}

}  // namespace anglerefit
