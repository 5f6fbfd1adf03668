#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "anglerefit/errors.hpp"
#include "anglerefit/probability.hpp"
#include "anglerefit/simplex.hpp"
#include "test_util.hpp"

using namespace anglerefit;

TEST_SUITE("probability") {

TEST_CASE("zero scores give uniform probabilities") {
  for (const char* name : {"logistic", "soft"}) {
    for (int k : {2, 3, 7}) {
      const Eigen::VectorXd p = class_probabilities(Eigen::VectorXd::Zero(k), loss_by_name(name));
      CHECK((p.array() - 1.0 / k).abs().maxCoeff() < 1e-15);
    }
  }
}

TEST_CASE("logistic k = 2 is the sigmoid") {
  Eigen::VectorXd u(2);
  u << 1.0, -1.0;
  CHECK(class_probabilities(u, loss_by_name("logistic"))[0] ==
        doctest::Approx(0.7310585786300049).epsilon(1e-14));
  CHECK(binary_probability(1.0, loss_by_name("logistic")) ==
        doctest::Approx(0.7310585786300049).epsilon(1e-14));
}

TEST_CASE("soft LUM k = 3 weights (4, 1, 1)") {
  Eigen::VectorXd u(3);
  u << 1.0, -0.5, -0.5;
  const Eigen::VectorXd p = class_probabilities(u, loss_by_name("soft"));
  CHECK(p[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(p[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(p[2] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("binary probability") {
  for (const char* name : {"logistic", "soft"}) CHECK(binary_probability(0.0, loss_by_name(name)) == 0.5);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-30.0, 30.0);
  const SimplexCode code(2);
  for (int t = 0; t < 1000; ++t) {
    const double f = dist(rng);
    const double sigmoid = 1.0 / (1.0 + std::exp(-f));
    const double b = binary_probability(f, loss_by_name("logistic"));
    CHECK(std::abs(b - sigmoid) < 1e-12);
    const Eigen::VectorXd multi =
        class_probabilities(vertex_scores(Eigen::VectorXd::Constant(1, f), code), loss_by_name("logistic"));
    CHECK(std::abs(multi[0] - b) < 1e-12);
  }
  CHECK_THROWS_AS(binary_probability(std::numeric_limits<double>::infinity(), loss_by_name("soft")),
                  InvalidArgument);
}

TEST_CASE("property suite over random score vectors") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> kdist(2, 8);
  for (const char* name : {"logistic", "soft"}) {
    CAPTURE(name);
    const MarginLoss& loss = loss_by_name(name);
    for (int t = 0; t < 10000; ++t) {
      const int k = kdist(rng);
      const SimplexCode code(k);
      const Eigen::VectorXd u = vertex_scores(testutil::random_vector(rng, k - 1, 3.0), code);
      const Eigen::VectorXd p = class_probabilities(u, loss);
      REQUIRE(p.minCoeff() > 0.0);
      REQUIRE(p.maxCoeff() < 1.0);
      REQUIRE(std::abs(p.sum() - 1.0) < 1e-10);

      std::vector<int> perm(static_cast<std::size_t>(k));
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      Eigen::VectorXd up(k);
      for (int j = 0; j < k; ++j) up[j] = u[perm[static_cast<std::size_t>(j)]];
      const Eigen::VectorXd pp = class_probabilities(up, loss);
      for (int j = 0; j < k; ++j) REQUIRE(std::abs(pp[j] - p[perm[static_cast<std::size_t>(j)]]) < 1e-14);

      const int j = t % k;
      Eigen::VectorXd bumped = u;
      bumped[j] += 0.25;
      const Eigen::VectorXd pb = class_probabilities(bumped, loss);
      REQUIRE(pb[j] >= p[j] - 1e-15);
      for (int i = 0; i < k; ++i) {
        if (i != j) REQUIRE(pb[i] <= p[i] + 1e-15);
      }
    }
  }
}

TEST_CASE("small scores stay near 1/k for logistic") {
  // Largest |P_j - 1/3| / max|u_j| found by a dense scan over |u| <= 0.1.
  const double lipschitz = 0.2260;
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> dist(-0.1, 0.1);
  for (int t = 0; t < 5000; ++t) {
    Eigen::VectorXd u(3);
    for (int j = 0; j < 3; ++j) u[j] = dist(rng);
    const Eigen::VectorXd p = class_probabilities(u, loss_by_name("logistic"));
    CHECK((p.array() - 1.0 / 3.0).abs().maxCoeff() <= lipschitz * u.cwiseAbs().maxCoeff() + 1e-15);
  }
}

TEST_CASE("huge scores keep their ordering") {
  Eigen::VectorXd u(3);
  u << 1e20, 5e19, -1.5e20;
  const Eigen::VectorXd p = class_probabilities(u, loss_by_name("soft"));
  CHECK(p[0] == doctest::Approx(0.8).epsilon(1e-6));
  CHECK(p[1] == doctest::Approx(0.2).epsilon(1e-6));
  CHECK(p[0] > p[1]);
  CHECK(p[1] > p[2]);
  const Eigen::VectorXd q = class_probabilities(u, loss_by_name("logistic"));
  CHECK(q[0] == doctest::Approx(1.0));
  CHECK(std::abs(q.sum() - 1.0) < 1e-12);
  u << std::numeric_limits<double>::infinity(), 0.0, -std::numeric_limits<double>::infinity();
  CHECK(class_probabilities(u, loss_by_name("soft"))[0] == doctest::Approx(1.0));
}

TEST_CASE("NaN scores are degenerate") {
  Eigen::VectorXd u(2);
  u << std::numeric_limits<double>::quiet_NaN(), 0.0;
  CHECK_THROWS_AS(class_probabilities(u, loss_by_name("logistic")), DegenerateDerivativeError);
  CHECK_THROWS_AS(class_probabilities(Eigen::VectorXd(), loss_by_name("logistic")), InvalidArgument);
}

TEST_CASE("matrix form is row-wise") {
  std::mt19937_64 rng(2);
  const Eigen::MatrixXd U = testutil::random_matrix(rng, 5, 4);
  const Eigen::MatrixXd P = class_probability_matrix(U, loss_by_name("soft"));
  for (int i = 0; i < 5; ++i) {
    CHECK((P.row(i).transpose() - class_probabilities(U.row(i).transpose(), loss_by_name("soft")))
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }
}

}  // TEST_SUITE
