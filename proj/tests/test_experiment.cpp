#include <doctest.h>

#include <cmath>
#include <sstream>

#include "anglerefit/errors.hpp"
#include "anglerefit/experiment.hpp"
#include "test_util.hpp"

using namespace anglerefit;

namespace {

BenchConfig small_example_bench() {
  BenchConfig c;
  c.example = ExampleId::ex1;
  c.sizes = {40, 40, 60};
  c.replicates = 2;
  c.grid = {0.01, 1.0};
  c.base.penalty = Penalty::l2;
  c.base.standardize = false;
  c.base.max_iterations = 200;
  return c;
}

std::string report_text(const BenchReport& r) {
  std::ostringstream out;
  write_report(out, r);
  return out.str();
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("method names") {
  CHECK(method_name("soft", false) == "Soft");
  CHECK(method_name("logistic", true) == "Refit Logi");
  CHECK(method_name("hinge2", true) == "Refit hinge2");
}

TEST_CASE("simulation bench") {
  const BenchReport r = run_bench(small_example_bench());
  CHECK(r.failures.empty());
  CHECK(r.methods == std::vector<std::string>{"Soft", "Refit Soft", "Logi", "Refit Logi"});
  REQUIRE(r.rows.size() == 8);
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const ReportRow& row = r.rows[i];
    CHECK(row.method == r.methods[i / 2]);
    CHECK(row.replicate == static_cast<int>(i % 2));
    CHECK(std::isfinite(row.mad));
    CHECK(row.stage2_converged.has_value() == (row.method.rfind("Refit", 0) == 0));
  }
  const MethodSummary s = summarize(r, "Soft");
  CHECK(s.replicates == 2);
  CHECK(s.error == doctest::Approx((r.rows[0].error + r.rows[1].error) / 2));

  const std::string text = report_text(r);
  CHECK(text.rfind("method,replicate,lambda_selected,error,error_pct,mad,mad_x100,cre,cre_x100,nll,"
                   "stage2_converged\n", 0) == 0);
  CHECK(text.find("Soft,mean,") != std::string::npos);
  CHECK(text.find("Refit Logi,se,NA,") != std::string::npos);
}

TEST_CASE("bench is deterministic and thread-count independent") {
  BenchConfig c = small_example_bench();
  const std::string a = report_text(run_bench(c));
  c.jobs = 4;
  CHECK(report_text(run_bench(c)) == a);
  c.seed = 2;
  CHECK(report_text(run_bench(c)) != a);
}

TEST_CASE("real-data bench") {
  BenchConfig c;
  c.dataset = testutil::blobs(12, 4, 1.5);
  c.replicates = 3;
  c.folds = 3;
  c.grid = {0.01, 1.0};
  c.losses = {"soft"};
  const BenchReport r = run_bench(c);
  CHECK(r.failures.empty());
  REQUIRE(r.rows.size() == 6);
  for (const auto& row : r.rows) {
    CHECK(std::isnan(row.mad));
    CHECK(row.cre >= 0.0);
  }
  CHECK(report_text(r).find(",NA,NA,") != std::string::npos);
}

TEST_CASE("failed replicates are isolated") {
  BenchConfig c;
  c.dataset = testutil::blobs(4, 4);
  c.replicates = 2;
  c.folds = 30;
  c.grid = {1.0};
  c.losses = {"logistic"};
  const BenchReport r = run_bench(c);
  CHECK(r.rows.empty());
  CHECK(r.failures.size() == 2);
  CHECK(summarize(r, "Logi").replicates == 0);
}

TEST_CASE("bench configuration errors") {
  BenchConfig c = small_example_bench();
  c.dataset = testutil::toy_data();
  CHECK_THROWS_AS(run_bench(c), InvalidArgument);
  c = small_example_bench();
  c.replicates = 0;
  CHECK_THROWS_AS(run_bench(c), InvalidArgument);
  c = small_example_bench();
  c.losses.clear();
  CHECK_THROWS_AS(run_bench(c), InvalidArgument);
}

}  // TEST_SUITE
