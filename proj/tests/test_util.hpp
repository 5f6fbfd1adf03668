#pragma once

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "anglerefit/dataset.hpp"

namespace testutil {

inline Eigen::VectorXd random_vector(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c,
                                     double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = normal(rng);
  return m;
}

// n = 15, p = 3, k = 3; mirrors tests/oracle/compute_oracles.py.
inline anglerefit::LabeledDataset toy_data() {
  anglerefit::LabeledDataset d;
  d.k = 3;
  d.X.resize(15, 3);
  for (int i = 0; i < 15; ++i) {
    const int label = i % 3 + 1;
    d.y.push_back(label);
    for (int j = 0; j < 3; ++j) d.X(i, j) = std::sin(1.7 * i + 0.9 * j) * (1.0 + 0.3 * j);
    if (label == 1) d.X(i, 0) += 0.8;
    if (label == 2) d.X(i, 1) += 0.8;
  }
  return d;
}

// Well-separated 2D blobs, k = 3, n_per_class rows each.
inline anglerefit::LabeledDataset blobs(int n_per_class, std::uint64_t seed, double spread = 0.3) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, spread);
  const double centers[3][2] = {{0.0, 4.0}, {-4.0, -2.0}, {4.0, -2.0}};
  anglerefit::LabeledDataset d;
  d.k = 3;
  d.X.resize(3 * n_per_class, 2);
  int row = 0;
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < n_per_class; ++i, ++row) {
      d.X(row, 0) = centers[c][0] + normal(rng);
      d.X(row, 1) = centers[c][1] + normal(rng);
      d.y.push_back(c + 1);
    }
  }
  return d;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("anglerefit_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testutil
