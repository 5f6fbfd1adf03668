#pragma once

#include <Eigen/Dense>

#include "anglerefit/loss.hpp"

namespace anglerefit {

/// Score vectors are scaled down so no entry exceeds this magnitude before
/// weighting; the common factor preserves their ordering.
inline constexpr double kScoreClamp = 1e8;

/// P_j = l'(u_j)^{-1} / sum_i l'(u_i)^{-1}, computed as normalized positive
/// weights -1/l'(u_j) in log space. Throws DegenerateDerivativeError when a
/// weight is not finite (l'(u_j) = 0 or non-finite scores).
Eigen::VectorXd class_probabilities(const Eigen::VectorXd& scores, const MarginLoss& loss);

/// Row-wise class_probabilities of an n x k score matrix.
Eigen::MatrixXd class_probability_matrix(const Eigen::MatrixXd& scores, const MarginLoss& loss);

/// Binary estimate l'(-f) / (l'(-f) + l'(f)) of the +1 class probability.
double binary_probability(double f, const MarginLoss& loss);

}  // namespace anglerefit
