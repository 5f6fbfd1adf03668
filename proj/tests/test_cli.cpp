#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "anglerefit/dataio.hpp"
#include "cli.hpp"
#include "test_util.hpp"

using namespace anglerefit;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t data_rows(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) ++n;
  return n - 1;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"simulate"}).code == cli::kExitUsage);
  CHECK(run({"simulate", "--example", "ex9"}).code == cli::kExitUsage);
  CHECK(run({"fit", "--data", "x.csv", "--out", "m.txt", "--lambda", "1", "--penalty", "l3"}).code ==
        cli::kExitUsage);
  CHECK(run({"fit", "--data", "x.csv", "--out", "m.txt"}).code == cli::kExitUsage);
  CHECK(run({"bench"}).code == cli::kExitUsage);
  CHECK(run({"frobnicate"}).code == cli::kExitUsage);
  const Run help = run({"--help"});
  CHECK(help.code == cli::kExitOk);
  CHECK(help.out.find("simulate") != std::string::npos);
  CHECK(run({"--version"}).code == cli::kExitOk);
}

TEST_CASE("simulate writes the splits and metadata") {
  const auto dir = testutil::temp_dir("cli_simulate");
  const Run r = run({"simulate", "--example", "ex2", "--train", "30", "--tune", "20", "--test", "50", "--seed",
                     "7", "--out-dir", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(data_rows(dir / "ex2_train.csv") == 30);
  CHECK(data_rows(dir / "ex2_tune.csv") == 20);
  CHECK(data_rows(dir / "ex2_test.csv") == 50);
  CHECK(data_rows(dir / "ex2_test_probs.csv") == 50);
  const auto meta = nlohmann::json::parse(slurp(dir / "ex2_metadata.json"));
  CHECK(meta.contains("split_seeds"));
  CHECK(meta.contains("sigma_reading"));
  CHECK(meta["files"]["test"]["rows"] == 50);
  CHECK(meta["spec"]["k"] == 10);

  const auto again = testutil::temp_dir("cli_simulate_again");
  run({"simulate", "--example", "ex2", "--train", "30", "--tune", "20", "--test", "50", "--seed", "7",
       "--out-dir", again.string()});
  CHECK(slurp(dir / "ex2_train.csv") == slurp(again / "ex2_train.csv"));

}

TEST_CASE("fit, predict, prob and refit") {
  const auto dir = testutil::temp_dir("cli_fit");
  REQUIRE(run({"simulate", "--example", "ex1", "--train", "90", "--tune", "60", "--test", "40", "--seed", "3",
               "--out-dir", dir.string()})
              .code == 0);
  const std::string train = (dir / "ex1_train.csv").string();
  const std::string test = (dir / "ex1_test.csv").string();
  const std::string model = (dir / "m.txt").string();
  REQUIRE(run({"fit", "--data", train, "--out", model, "--loss", "soft", "--penalty", "l2", "--lambda", "64",
               "--standardize", "off"})
              .code == 0);

  const std::string probs = (dir / "p.csv").string();
  REQUIRE(run({"prob", "--model", model, "--data", train, "--out", probs}).code == 0);
  const Eigen::MatrixXd P = load_matrix_csv(probs);
  CHECK(P.rows() == 90);
  CHECK(P.cols() == 3);
  CHECK((P.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-10);
  CHECK(P.minCoeff() > 0.0);

  const Run labels = run({"predict", "--model", model, "--data", test});
  REQUIRE(labels.code == 0);
  std::istringstream lines(labels.out);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) count += !line.empty() && line != "label";
  CHECK(count == 40);

  const std::string refit = (dir / "r.txt").string();
  REQUIRE(run({"refit", "--data", train, "--out", refit, "--stage1", model}).code == 0);
  const std::string rprobs = (dir / "rp.csv").string();
  REQUIRE(run({"prob", "--model", refit, "--data", train, "--out", rprobs}).code == 0);
  const Eigen::MatrixXd R = load_matrix_csv(rprobs);
  CHECK((R - P).cwiseAbs().maxCoeff() > 0.05);
  CHECK((R.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-10);

  std::ofstream(dir / "narrow.csv") << "a,b\n1,2\n3,4\n";
  const Run mismatch = run({"predict", "--model", model, "--data", (dir / "narrow.csv").string()});
  CHECK(mismatch.code == cli::kExitRuntime);
  CHECK(mismatch.err.rfind("error: ", 0) == 0);
  CHECK(run({"prob", "--model", (dir / "missing.txt").string(), "--data", train}).code == cli::kExitRuntime);
}

TEST_CASE("tuned fit writes a trace") {
  const auto dir = testutil::temp_dir("cli_tune");
  REQUIRE(run({"simulate", "--example", "ex1", "--train", "40", "--tune", "40", "--test", "10", "--seed", "5",
               "--out-dir", dir.string()})
              .code == 0);
  const std::string trace = (dir / "trace.csv").string();
  const Run r = run({"fit", "--data", (dir / "ex1_train.csv").string(), "--out", (dir / "m.txt").string(),
                     "--tune-grid", "--grid", "0.1,10", "--tune-data", (dir / "ex1_tune.csv").string(),
                     "--penalty", "l2", "--trace", trace});
  REQUIRE(r.code == 0);
  const std::string text = slurp(trace);
  CHECK(text.rfind("lambda,error\n", 0) == 0);
  CHECK(text.find("# selected") != std::string::npos);
}

TEST_CASE("bench reports are reproducible") {
  const auto dir = testutil::temp_dir("cli_bench");
  const std::vector<std::string> base{"bench", "--example", "ex1", "--train", "40", "--tune", "40", "--test",
                                      "50", "--replicates", "2", "--grid", "0.1,10", "--seed", "11"};
  auto with_out = [&](const std::string& name) {
    auto args = base;
    args.push_back("--out");
    args.push_back((dir / name).string());
    return args;
  };
  REQUIRE(run(with_out("a.csv")).code == 0);
  REQUIRE(run(with_out("b.csv")).code == 0);
  const std::string a = slurp(dir / "a.csv");
  CHECK(a == slurp(dir / "b.csv"));
  CHECK(a.find("Refit Soft,mean,") != std::string::npos);
  CHECK(std::filesystem::exists(dir / "a.csv.meta.json"));
}

}  // TEST_SUITE
