#pragma once

#include <Eigen/Dense>

namespace anglerefit {

/// The k vertices W_1..W_k of a centered regular simplex in R^{k-1}.
///
/// Class j is always assigned to vertex W_j. Vertices are stored as the
/// columns of a (k-1) x k matrix; construction is deterministic, so two codes
/// built for the same k are bit-identical.
class SimplexCode {
 public:
  explicit SimplexCode(int k);

  int classes() const { return k_; }
  int dim() const { return k_ - 1; }

  /// (k-1) x k; column j-1 holds W_j.
  const Eigen::MatrixXd& vertices() const { return vertices_; }

  /// Vertex for a 1-based class label.
  Eigen::VectorXd vertex(int label) const;

 private:
  int k_;
  Eigen::MatrixXd vertices_;
};

SimplexCode simplex_vertices(int k);

/// u_j = <W_j, f> for j = 1..k. The scores always sum to zero.
Eigen::VectorXd vertex_scores(const Eigen::VectorXd& f, const SimplexCode& code);

/// Inverse of vertex_scores: f = ((k-1)/k) * sum_j u_j W_j.
/// Throws InvalidArgument when the scores do not sum to zero.
Eigen::VectorXd reconstruct(const Eigen::VectorXd& scores, const SimplexCode& code);

/// 1-based argmax; ties go to the smallest index.
int predict_label(const Eigen::VectorXd& scores);

}  // namespace anglerefit
