#include <doctest.h>

#include <cmath>
#include <random>

#include "anglerefit/errors.hpp"
#include "anglerefit/simplex.hpp"
#include "test_util.hpp"

using namespace anglerefit;

TEST_SUITE("simplex") {

TEST_CASE("k = 2 vertices are +1 and -1") {
  const SimplexCode code(2);
  CHECK(code.vertices()(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(code.vertices()(0, 1) == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("k = 3 vertices match the closed form") {
  const SimplexCode code(3);
  const double expected[3][2] = {{0.7071067811865476, 0.7071067811865476},
                                 {0.25881904510252074, -0.9659258262890682},
                                 {-0.9659258262890682, 0.25881904510252074}};
  for (int j = 0; j < 3; ++j)
    for (int d = 0; d < 2; ++d) CHECK(std::abs(code.vertices()(d, j) - expected[j][d]) < 1e-15);
}

TEST_CASE("geometry for k = 2..20") {
  for (int k = 2; k <= 20; ++k) {
    CAPTURE(k);
    const SimplexCode code(k);
    const Eigen::MatrixXd& W = code.vertices();
    const Eigen::MatrixXd gram = W.transpose() * W;
    for (int i = 0; i < k; ++i) {
      CHECK(std::abs(gram(i, i) - 1.0) < 1e-10);
      for (int j = 0; j < k; ++j) {
        if (i != j) CHECK(std::abs(gram(i, j) + 1.0 / (k - 1)) < 1e-10);
      }
    }
    CHECK(W.rowwise().sum().cwiseAbs().maxCoeff() < 1e-10);
    const Eigen::MatrixXd frame = W * W.transpose();
    const Eigen::MatrixXd target =
        (static_cast<double>(k) / (k - 1)) * Eigen::MatrixXd::Identity(k - 1, k - 1);
    CHECK((frame - target).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("construction is bit-identical for the same k") {
  for (int k = 2; k <= 12; ++k) CHECK(SimplexCode(k).vertices() == simplex_vertices(k).vertices());
}

TEST_CASE("invalid k is rejected") {
  CHECK_THROWS_AS(SimplexCode(1), InvalidArgument);
  CHECK_THROWS_AS(SimplexCode(0), InvalidArgument);
  CHECK_THROWS_AS(SimplexCode(3).vertex(4), InvalidArgument);
}

TEST_CASE("vertex scores") {
  const SimplexCode code3(3);
  CHECK(vertex_scores(Eigen::VectorXd::Zero(2), code3).cwiseAbs().maxCoeff() == 0.0);
  const SimplexCode code2(2);
  const Eigen::VectorXd u = vertex_scores(Eigen::VectorXd::Constant(1, 1.75), code2);
  CHECK(u[0] == doctest::Approx(1.75));
  CHECK(u[1] == doctest::Approx(-1.75));
  CHECK_THROWS_AS(vertex_scores(Eigen::VectorXd::Zero(3), code3), InvalidArgument);
}

TEST_CASE("scores sum to zero and round trip for random f") {
  std::mt19937_64 rng(17);
  for (int k : {2, 3, 5, 10}) {
    const SimplexCode code(k);
    for (int t = 0; t < 1000; ++t) {
      const Eigen::VectorXd f = testutil::random_vector(rng, k - 1, 3.0);
      const Eigen::VectorXd u = vertex_scores(f, code);
      CHECK(std::abs(u.sum()) < 1e-10);
      CHECK((reconstruct(u, code) - f).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("reconstruct edge cases") {
  const SimplexCode code2(2);
  Eigen::VectorXd u(2);
  u << 2.5, -2.5;
  CHECK(reconstruct(u, code2)[0] == doctest::Approx(2.5));
  CHECK(reconstruct(Eigen::VectorXd::Zero(4), SimplexCode(4)).cwiseAbs().maxCoeff() == 0.0);
  Eigen::VectorXd bad(3);
  bad << 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(reconstruct(bad, SimplexCode(3)), InvalidArgument);
  CHECK_THROWS_AS(reconstruct(Eigen::VectorXd::Zero(2), SimplexCode(3)), InvalidArgument);
}

TEST_CASE("predict label") {
  Eigen::VectorXd u(3);
  u << 0.5, -0.2, -0.3;
  CHECK(predict_label(u) == 1);
  CHECK(predict_label(Eigen::VectorXd::Zero(3)) == 1);
  u << -1.0, 0.5, 0.5;
  CHECK(predict_label(u) == 2);
  CHECK_THROWS_AS(predict_label(Eigen::VectorXd()), InvalidArgument);
  for (int k = 2; k <= 20; ++k) {
    const SimplexCode code(k);
    for (int j = 1; j <= k; ++j) CHECK(predict_label(vertex_scores(code.vertex(j), code)) == j);
  }
}

}  // TEST_SUITE
