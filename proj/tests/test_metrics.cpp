#include <doctest.h>

#include <cmath>
#include <random>

#include "anglerefit/errors.hpp"
#include "anglerefit/metrics.hpp"
#include "test_util.hpp"

using namespace anglerefit;

namespace {

Eigen::MatrixXd random_stochastic(std::mt19937_64& rng, Eigen::Index n, Eigen::Index k) {
  std::uniform_real_distribution<double> unif(0.01, 1.0);
  Eigen::MatrixXd P(n, k);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) P(i, j) = unif(rng);
    P.row(i) /= P.row(i).sum();
  }
  return P;
}

Eigen::MatrixXd constant_true_prob(Eigen::Index n, double p) {
  Eigen::MatrixXd P(n, 2);
  P.col(0).setConstant(p);
  P.col(1).setConstant(1.0 - p);
  return P;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("error rate") {
  CHECK(error_rate({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(error_rate({2, 3, 1}, {1, 2, 3}) == 1.0);
  CHECK(error_rate({1, 1, 2, 2, 3, 3, 1, 2}, {1, 1, 2, 2, 3, 3, 2, 1}) == 0.25);
  CHECK_THROWS_AS(error_rate({1, 2}, {1}), InvalidArgument);
  CHECK_THROWS_AS(error_rate({}, {}), InvalidArgument);

  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> label(1, 4);
  std::vector<int> a(100), b(100);
  for (int i = 0; i < 100; ++i) a[i] = label(rng), b[i] = label(rng);
  const int relabel[5] = {0, 3, 1, 4, 2};
  std::vector<int> pa, pb;
  for (int i = 0; i < 100; ++i) pa.push_back(relabel[a[i]]), pb.push_back(relabel[b[i]]);
  CHECK(error_rate(pa, pb) == error_rate(a, b));
}

TEST_CASE("mean absolute difference") {
  Eigen::MatrixXd truth(1, 3), est(1, 3);
  truth << 1, 0, 0;
  est << 1.0 / 3, 1.0 / 3, 1.0 / 3;
  CHECK(mad(truth, est) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(mad(truth, truth) == 0.0);

  std::mt19937_64 rng(9);
  for (int t = 0; t < 50; ++t) {
    const Eigen::MatrixXd a = random_stochastic(rng, 20, 4), b = random_stochastic(rng, 20, 4);
    const double m = mad(a, b);
    CHECK(m > 0.0);
    CHECK(m <= 2.0);
    CHECK(m == mad(b, a));
  }
  Eigen::MatrixXd bad = truth;
  bad(0, 0) = 0.5;
  CHECK_THROWS_AS(mad(truth, bad), InvalidArgument);
  CHECK_THROWS_AS(mad(truth, Eigen::MatrixXd::Constant(1, 2, 0.5)), InvalidArgument);
}

TEST_CASE("cross-entropy-style score") {
  const std::vector<int> ones(6, 1);
  CHECK(cre(constant_true_prob(6, 1.0), ones) == 0.0);
  CHECK(cre(constant_true_prob(6, 1.0 / M_E), ones) == doctest::Approx(1.0 / M_E).epsilon(1e-15));
  CHECK(cre(constant_true_prob(6, 0.5), ones) == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-15));
  // Probability 0 is floored, so the score stays finite.
  CHECK(cre(constant_true_prob(6, 0.0), ones) == doctest::Approx(1e-12 * std::log(1e12)));

  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> label(1, 3);
  for (int t = 0; t < 50; ++t) {
    const Eigen::MatrixXd P = random_stochastic(rng, 30, 3);
    std::vector<int> y;
    for (int i = 0; i < 30; ++i) y.push_back(label(rng));
    CHECK(cre(P, y) >= 0.0);
    CHECK(cre(P, y) <= 1.0 / M_E);
    CHECK(nll(P, y) >= 0.0);
  }
  CHECK_THROWS_AS(cre(constant_true_prob(6, 0.5), {1, 2}), InvalidArgument);
  CHECK_THROWS_AS(cre(constant_true_prob(2, 0.5), {1, 3}), InvalidArgument);
}

TEST_CASE("negative log-likelihood") {
  CHECK(nll(constant_true_prob(4, 1.0), {1, 1, 1, 1}) == 0.0);
  CHECK(nll(Eigen::MatrixXd::Constant(5, 4, 0.25), {1, 2, 3, 4, 1}) == doctest::Approx(std::log(4.0)));
  CHECK(nll(constant_true_prob(3, 0.5), {1, 2, 2}) == doctest::Approx(std::log(2.0)));
  CHECK(nll(constant_true_prob(1, 0.0), {1}) == doctest::Approx(std::log(1e12)));
}

}  // TEST_SUITE
