#include "anglerefit/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "anglerefit/errors.hpp"

namespace anglerefit {

SimplexCode::SimplexCode(int k) : k_(k) {
  if (k < 2) {
    throw InvalidArgument("simplex code needs k >= 2, got " + std::to_string(k));
  }
  const double km1 = static_cast<double>(k - 1);
  const double kd = static_cast<double>(k);
  vertices_.resize(k - 1, k);
  vertices_.col(0).setConstant(1.0 / std::sqrt(km1));
  const double shift = -(1.0 + std::sqrt(kd)) / std::pow(km1, 1.5);
  const double scale = std::sqrt(kd / km1);
  for (int j = 1; j < k; ++j) {
    vertices_.col(j).setConstant(shift);
    vertices_(j - 1, j) += scale;
  }
}

Eigen::VectorXd SimplexCode::vertex(int label) const {
  if (label < 1 || label > k_) {
    throw InvalidArgument("class label " + std::to_string(label) + " outside 1.." +
                          std::to_string(k_));
  }
  return vertices_.col(label - 1);
}

SimplexCode simplex_vertices(int k) { return SimplexCode(k); }

Eigen::VectorXd vertex_scores(const Eigen::VectorXd& f, const SimplexCode& code) {
  if (f.size() != code.dim()) {
    throw InvalidArgument("decision vector has dimension " + std::to_string(f.size()) +
                          ", expected " + std::to_string(code.dim()));
  }
  return code.vertices().transpose() * f;
}

Eigen::VectorXd reconstruct(const Eigen::VectorXd& scores, const SimplexCode& code) {
  if (scores.size() != code.classes()) {
    throw InvalidArgument("score vector has length " + std::to_string(scores.size()) +
                          ", expected " + std::to_string(code.classes()));
  }
  const double magnitude = std::max(1.0, scores.cwiseAbs().maxCoeff());
  if (std::abs(scores.sum()) > 1e-8 * magnitude) {
    throw InvalidArgument("scores must sum to zero to be reconstructed");
  }
  const double k = code.classes();
  return ((k - 1.0) / k) * (code.vertices() * scores);
}

int predict_label(const Eigen::VectorXd& scores) {
  if (scores.size() == 0) throw InvalidArgument("cannot predict from an empty score vector");
  Eigen::Index best = 0;
  for (Eigen::Index j = 1; j < scores.size(); ++j) {
    if (scores[j] > scores[best]) best = j;
  }
  return static_cast<int>(best) + 1;
}

}  // namespace anglerefit
