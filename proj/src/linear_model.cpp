#include "anglerefit/linear_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "anglerefit/errors.hpp"
#include "anglerefit/loss.hpp"

namespace anglerefit {
namespace {

constexpr double kStepGrowth = 1.25;
constexpr int kMaxBacktracks = 100;

// Row i is W_{y_i}^T.
Eigen::MatrixXd label_vertices(const std::vector<int>& y, const SimplexCode& code) {
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(y.size()), code.dim());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] < 1 || y[i] > code.classes()) {
      throw DataValidationError("label " + std::to_string(y[i]) + " at row " + std::to_string(i) +
                                " outside 1.." + std::to_string(code.classes()));
    }
    rows.row(static_cast<Eigen::Index>(i)) = code.vertices().col(y[i] - 1).transpose();
  }
  return rows;
}

void check_shapes(const ModelParams& params, const LabeledDataset& data, const SimplexCode& code) {
  if (data.rows() == 0) throw DataValidationError("empty dataset");
  if (static_cast<Eigen::Index>(data.y.size()) != data.rows()) {
    throw DataValidationError("label count does not match feature rows");
  }
  if (params.coef.rows() != data.features() || params.coef.cols() != code.dim() ||
      params.intercept.size() != code.dim()) {
    throw InvalidArgument("model parameters do not match p = " + std::to_string(data.features()) +
                          ", k = " + std::to_string(code.classes()));
  }
}

// The empirical risk of one design matrix. Values and gradients take the
// product X * B precomputed so the solver can reuse it across extrapolation.
class Problem {
 public:
  Problem(const Eigen::MatrixXd& X, const std::vector<int>& y, const SimplexCode& code,
          const MarginLoss& loss, Penalty penalty, double lambda)
      : X_(X), vertices_(label_vertices(y, code)), loss_(loss), penalty_(penalty), lambda_(lambda) {}

  const Eigen::MatrixXd& design() const { return X_; }

  Eigen::VectorXd margins(const Eigen::MatrixXd& XB, const Eigen::VectorXd& intercept) const {
    return XB.cwiseProduct(vertices_).rowwise().sum() + vertices_ * intercept;
  }

  /// Mean loss; +inf when a margin overflows.
  double loss_value(const ModelParams& params, const Eigen::MatrixXd& XB) const {
    const Eigen::VectorXd u = margins(XB, params.intercept);
    if (!u.allFinite()) return std::numeric_limits<double>::infinity();
    double total = 0.0;
    for (Eigen::Index i = 0; i < u.size(); ++i) total += loss_.eval(u[i]);
    return total / static_cast<double>(u.size());
  }

  double penalty_term(const ModelParams& params) const {
    return lambda_ * penalty_value(params.coef, penalty_);
  }

  ModelParams loss_gradient(const ModelParams& params, const Eigen::MatrixXd& XB) const {
    const Eigen::VectorXd u = margins(XB, params.intercept);
    const double inv_n = 1.0 / static_cast<double>(u.size());
    Eigen::VectorXd weight(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) weight[i] = loss_.deriv(u[i]) * inv_n;
    const Eigen::MatrixXd G = vertices_.array().colwise() * weight.array();
    ModelParams grad;
    grad.coef = X_.transpose() * G;
    grad.intercept = G.colwise().sum().transpose();
    return grad;
  }

  /// argmin_B lambda J(B) + ||B - V||^2 / (2s); intercepts are left alone.
  Eigen::MatrixXd penalty_prox(const Eigen::MatrixXd& V, double s) const {
    if (lambda_ <= 0.0) return V;
    switch (penalty_) {
      case Penalty::l1: {
        const double tau = s * lambda_;
        return V.unaryExpr([tau](double v) { return v > tau ? v - tau : (v < -tau ? v + tau : 0.0); });
      }
      case Penalty::l2: return V / (1.0 + 2.0 * s * lambda_);
      case Penalty::none: break;
    }
    return V;
  }

  Penalty penalty() const { return penalty_; }
  double lambda() const { return lambda_; }

  /// Step that satisfies the descent condition for any iterate:
  /// 1 / (c * mean ||(x_i, 1)||^2).
  double safe_step() const {
    const double mean_sq = X_.rowwise().squaredNorm().mean() + 1.0;
    return 1.0 / (loss_.curvature_bound() * mean_sq);
  }

 private:
  const Eigen::MatrixXd& X_;
  Eigen::MatrixXd vertices_;
  const MarginLoss& loss_;
  Penalty penalty_;
  double lambda_;
};

struct Iterate {
  ModelParams params;
  Eigen::MatrixXd XB;
};

struct StepResult {
  Iterate point;
  double objective;
};

// One proximal gradient step from y with backtracking; updates step in place.
// The smooth part is the loss alone; both penalties enter through their
// proximal maps so a heavy ridge term does not throttle the intercept step.
StepResult prox_step(const Problem& problem, const Iterate& y, double& step, double shrink) {
  const ModelParams grad = problem.loss_gradient(y.params, y.XB);
  const double fy = problem.loss_value(y.params, y.XB);
  double s = step * kStepGrowth;
  Iterate z;
  double fz = 0.0;
  for (int trial = 0; trial < kMaxBacktracks; ++trial) {
    z.params.coef = problem.penalty_prox(y.params.coef - s * grad.coef, s);
    z.params.intercept = y.params.intercept - s * grad.intercept;
    z.XB = problem.design() * z.params.coef;
    fz = problem.loss_value(z.params, z.XB);

    const Eigen::MatrixXd d_coef = z.params.coef - y.params.coef;
    const Eigen::VectorXd d_int = z.params.intercept - y.params.intercept;
    const double linear = (grad.coef.array() * d_coef.array()).sum() + grad.intercept.dot(d_int);
    const double quadratic = (d_coef.squaredNorm() + d_int.squaredNorm()) / (2.0 * s);
    const double slack = 4.0 * std::numeric_limits<double>::epsilon() * std::abs(fy);
    if (std::isfinite(fz) && fz <= fy + linear + quadratic + slack) break;
    s *= shrink;
  }
  step = s;
  const double total = fz + problem.penalty_term(z.params);
  return {std::move(z), total};
}

Iterate extrapolate(const Iterate& x, const Iterate& previous, double theta) {
  Iterate y;
  y.params.coef = x.params.coef + theta * (x.params.coef - previous.params.coef);
  y.params.intercept = x.params.intercept + theta * (x.params.intercept - previous.params.intercept);
  y.XB = x.XB + theta * (x.XB - previous.XB);
  return y;
}

}  // namespace

std::string to_string(Penalty penalty) {
  switch (penalty) {
    case Penalty::none: return "none";
    case Penalty::l1: return "l1";
    case Penalty::l2: return "l2";
  }
  return "none";
}

Penalty parse_penalty(std::string_view text) {
  if (text == "none") return Penalty::none;
  if (text == "l1") return Penalty::l1;
  if (text == "l2") return Penalty::l2;
  throw InvalidArgument("unknown penalty '" + std::string(text) + "' (expected none, l1 or l2)");
}

void FitConfig::validate() const {
  if (!std::isfinite(lambda) || lambda < 0.0) throw InvalidArgument("lambda must be finite and >= 0");
  if (max_iterations < 1) throw InvalidArgument("max_iterations must be >= 1");
  if (!(tolerance >= 0.0)) throw InvalidArgument("tolerance must be >= 0");
  if (!(line_search_shrink > 0.0 && line_search_shrink < 1.0)) {
    throw InvalidArgument("line_search_shrink must lie in (0, 1)");
  }
  loss_by_name(loss);
}

ModelParams ModelParams::zeros(Eigen::Index p, int k) {
  return {Eigen::MatrixXd::Zero(p, k - 1), Eigen::VectorXd::Zero(k - 1)};
}

Standardization Standardization::identity(Eigen::Index p) {
  return {Eigen::VectorXd::Zero(p), Eigen::VectorXd::Ones(p)};
}

Standardization Standardization::from_data(const Eigen::MatrixXd& X) {
  Standardization st = identity(X.cols());
  if (X.rows() == 0) return st;
  st.mean = X.colwise().mean().transpose();
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double var = (X.col(j).array() - st.mean[j]).square().mean();
    const double sd = std::sqrt(var);
    st.scale[j] = sd > 1e-12 * std::max(1.0, std::abs(st.mean[j])) ? sd : 1.0;
  }
  return st;
}

Eigen::MatrixXd Standardization::apply_rows(const Eigen::MatrixXd& X) const {
  if (X.cols() != mean.size()) {
    throw InvalidArgument("feature count " + std::to_string(X.cols()) + " does not match " +
                          std::to_string(mean.size()));
  }
  return (X.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array();
}

Eigen::VectorXd Standardization::apply_point(const Eigen::VectorXd& x) const {
  if (x.size() != mean.size()) {
    throw InvalidArgument("feature count " + std::to_string(x.size()) + " does not match " +
                          std::to_string(mean.size()));
  }
  return (x - mean).cwiseQuotient(scale);
}

bool Standardization::is_identity() const {
  return (mean.array() == 0.0).all() && (scale.array() == 1.0).all();
}

void LinearAngleModel::validate() const {
  if (k < 2) throw DataValidationError("model k must be >= 2");
  if (coef.rows() != p || coef.cols() != k - 1) {
    throw DataValidationError("coefficient matrix is " + std::to_string(coef.rows()) + " x " +
                              std::to_string(coef.cols()) + ", expected " + std::to_string(p) +
                              " x " + std::to_string(k - 1));
  }
  if (intercept.size() != k - 1) throw DataValidationError("intercept length must be k - 1");
  if (standardization.mean.size() != p || standardization.scale.size() != p) {
    throw DataValidationError("standardization vectors must have length p");
  }
  if (!coef.allFinite() || !intercept.allFinite() || !standardization.mean.allFinite() ||
      !standardization.scale.allFinite()) {
    throw DataValidationError("model contains non-finite values");
  }
  if ((standardization.scale.array() <= 0.0).any()) {
    throw DataValidationError("standardization scales must be positive");
  }
  if (!label_names.empty() && static_cast<int>(label_names.size()) != k) {
    throw DataValidationError("label name count does not match k");
  }
  if (!std::isfinite(lambda) || lambda < 0.0) throw DataValidationError("model lambda must be >= 0");
}

double penalty_value(const Eigen::MatrixXd& coef, Penalty penalty) {
  switch (penalty) {
    case Penalty::l1: return coef.cwiseAbs().sum();
    case Penalty::l2: return coef.squaredNorm();
    case Penalty::none: return 0.0;
  }
  return 0.0;
}

double objective(const ModelParams& params, const LabeledDataset& data, const FitConfig& config,
                 const SimplexCode& code) {
  check_shapes(params, data, code);
  const Problem problem(data.X, data.y, code, loss_by_name(config.loss), config.penalty, config.lambda);
  const Eigen::MatrixXd XB = data.X * params.coef;
  const Eigen::VectorXd u = problem.margins(XB, params.intercept);
  if (!u.allFinite()) throw DataValidationError("objective has non-finite margins");
  return problem.loss_value(params, XB) + problem.penalty_term(params);
}

ModelParams smooth_gradient(const ModelParams& params, const LabeledDataset& data,
                            const FitConfig& config, const SimplexCode& code) {
  check_shapes(params, data, code);
  const Problem problem(data.X, data.y, code, loss_by_name(config.loss), config.penalty, config.lambda);
  const Eigen::MatrixXd XB = data.X * params.coef;
  ModelParams grad = problem.loss_gradient(params, XB);
  if (config.penalty == Penalty::l2) grad.coef += 2.0 * config.lambda * params.coef;
  return grad;
}

FitResult fit(const LabeledDataset& data, const FitConfig& config, const SimplexCode& code) {
  config.validate();
  data.validate();
  if (data.k != code.classes()) {
    throw InvalidArgument("dataset has k = " + std::to_string(data.k) + " but simplex code has k = " +
                          std::to_string(code.classes()));
  }
  const int k = code.classes();
  if (data.rows() < k) {
    throw InsufficientDataError("fit needs at least k = " + std::to_string(k) + " rows, got " +
                                std::to_string(data.rows()));
  }
  const MarginLoss& loss = loss_by_name(config.loss);
  const Eigen::Index p = data.features();
  const bool penalized = config.penalty != Penalty::none && config.lambda > 0.0;

  // Unpenalized fits are invariant to affine reparametrization, so they are
  // solved on standardized features and mapped back to the raw scale.
  const bool fold_back = !config.standardize && !penalized;
  const Standardization work_scale = (config.standardize || fold_back)
                                         ? Standardization::from_data(data.X)
                                         : Standardization::identity(p);
  const Eigen::MatrixXd design =
      work_scale.is_identity() ? data.X : work_scale.apply_rows(data.X);
  const Problem problem(design, data.y, code, loss, penalized ? config.penalty : Penalty::none,
                        penalized ? config.lambda : 0.0);

  Iterate x;
  x.params = ModelParams::zeros(p, k);
  if (config.random_init) {
    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> normal(0.0, 0.01);
    x.params.coef = x.params.coef.unaryExpr([&](double) { return normal(rng); });
  }
  x.XB = design * x.params.coef;

  FitDiagnostics diag;
  double fx = problem.loss_value(x.params, x.XB) + problem.penalty_term(x.params);
  diag.objective_trace.push_back(fx);

  Iterate previous = x;
  double t = 1.0;
  double step = problem.safe_step();
  const double shrink = config.line_search_shrink;
  for (int it = 0; it < config.max_iterations; ++it) {
    ++diag.iterations;
    double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double theta = (t - 1.0) / t_next;
    StepResult next = theta > 0.0 ? prox_step(problem, extrapolate(x, previous, theta), step, shrink)
                                   : prox_step(problem, x, step, shrink);
    if (!(next.objective <= fx) && theta > 0.0) {
      ++diag.momentum_restarts;
      t_next = 1.0;
      next = prox_step(problem, x, step, shrink);
    }
    if (!(next.objective <= fx)) {
      // No descent left at working precision.
      diag.converged = true;
      break;
    }
    const double change = (fx - next.objective) / std::max(std::abs(fx), 1e-300);
    previous = std::move(x);
    x = std::move(next.point);
    fx = next.objective;
    diag.objective_trace.push_back(fx);
    t = t_next;
    if (change < config.tolerance) {
      diag.converged = true;
      break;
    }
  }
  diag.final_objective = fx;

  FitResult result;
  LinearAngleModel& model = result.model;
  model.k = k;
  model.p = p;
  model.loss_id = loss.name();
  model.penalty = config.penalty;
  model.lambda = config.lambda;
  model.label_names = data.label_names;
  if (fold_back) {
    model.coef = x.params.coef.array().colwise() / work_scale.scale.array();
    model.intercept = x.params.intercept - model.coef.transpose() * work_scale.mean;
    model.standardization = Standardization::identity(p);
  } else {
    model.coef = std::move(x.params.coef);
    model.intercept = std::move(x.params.intercept);
    model.standardization = work_scale;
  }
  result.diagnostics = std::move(diag);
  return result;
}

Eigen::VectorXd decision_values(const LinearAngleModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.p) {
    throw InvalidArgument("feature vector has dimension " + std::to_string(x.size()) +
                          ", model expects " + std::to_string(model.p));
  }
  return model.coef.transpose() * model.standardization.apply_point(x) + model.intercept;
}

Eigen::MatrixXd decision_matrix(const LinearAngleModel& model, const Eigen::MatrixXd& X) {
  if (X.cols() != model.p) {
    throw InvalidArgument("data has " + std::to_string(X.cols()) + " features, model expects " +
                          std::to_string(model.p));
  }
  Eigen::MatrixXd F = model.standardization.apply_rows(X) * model.coef;
  F.rowwise() += model.intercept.transpose();
  return F;
}

int predict(const LinearAngleModel& model, const Eigen::VectorXd& x) {
  const SimplexCode code(model.k);
  return predict_label(vertex_scores(decision_values(model, x), code));
}

std::vector<int> predict_all(const LinearAngleModel& model, const Eigen::MatrixXd& X) {
  return labels_from_decisions(decision_matrix(model, X), SimplexCode(model.k));
}

std::vector<int> labels_from_decisions(const Eigen::MatrixXd& decisions, const SimplexCode& code) {
  if (decisions.cols() != code.dim()) throw InvalidArgument("decision matrix has the wrong width");
  const Eigen::MatrixXd scores = decisions * code.vertices();
  std::vector<int> labels(static_cast<std::size_t>(scores.rows()));
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    labels[static_cast<std::size_t>(i)] = predict_label(scores.row(i).transpose());
  }
  return labels;
}

}  // namespace anglerefit
