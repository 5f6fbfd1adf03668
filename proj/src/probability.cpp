#include "anglerefit/probability.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "anglerefit/errors.hpp"

namespace anglerefit {

Eigen::VectorXd class_probabilities(const Eigen::VectorXd& scores, const MarginLoss& loss) {
  if (scores.size() == 0) throw InvalidArgument("empty score vector");
  if (scores.hasNaN()) throw DegenerateDerivativeError("score is NaN");
  // A common rescale keeps the ordering (and the direction) of large scores;
  // infinite entries can only be clamped.
  const double top_abs = scores.cwiseAbs().maxCoeff();
  const double factor = std::isfinite(top_abs) && top_abs > kScoreClamp ? kScoreClamp / top_abs : 1.0;
  // log w_j = -log(-l'(u_j))
  Eigen::VectorXd log_w(scores.size());
  for (Eigen::Index j = 0; j < scores.size(); ++j) {
    const double u = std::clamp(scores[j] * factor, -kScoreClamp, kScoreClamp);
    log_w[j] = -loss.log_neg_deriv(u);
    if (!std::isfinite(log_w[j])) {
      throw DegenerateDerivativeError("loss derivative is zero or non-finite at score " +
                                      std::to_string(u));
    }
  }
  const double top = log_w.maxCoeff();
  Eigen::VectorXd w = (log_w.array() - top).exp();
  return w / w.sum();
}

Eigen::MatrixXd class_probability_matrix(const Eigen::MatrixXd& scores, const MarginLoss& loss) {
  Eigen::MatrixXd out(scores.rows(), scores.cols());
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    out.row(i) = class_probabilities(scores.row(i).transpose(), loss).transpose();
  }
  return out;
}

double binary_probability(double f, const MarginLoss& loss) {
  if (!std::isfinite(f)) throw InvalidArgument("binary probability needs a finite decision value");
  const double u = std::clamp(f, -kScoreClamp, kScoreClamp);
  const double neg = loss.deriv(-u);
  const double pos = loss.deriv(u);
  if (!(neg < 0.0) || !(pos < 0.0) || !std::isfinite(neg) || !std::isfinite(pos)) {
    throw DegenerateDerivativeError("loss derivative is zero or non-finite at decision value " +
                                    std::to_string(u));
  }
  return neg / (neg + pos);
}

}  // namespace anglerefit
