#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "icsel/cli.hpp"

using namespace icsel;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(std::vector<const char*> args) {
  args.insert(args.begin(), "icsel");
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(args.size()), args.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("criteria grammar") {
  const auto c = cli::parse_criteria("aic,bic,swic:beta=1,nu=1000");
  REQUIRE(c.size() == 3);
  CHECK(c[0].label == "aic");
  CHECK(c[1].label == "bic");
  CHECK(c[2].label == "swic:b1:v1000");
  CHECK(c[2].alpha == doctest::Approx(0.0415565).epsilon(1e-6));

  const auto g = cli::parse_criteria("glp:alpha=0.5,beta=2,hq");
  REQUIRE(g.size() == 2);
  CHECK(g[0].kind == penalty::Kind::GeneralizedLogPlus);
  CHECK(g[0].beta == 2);
  CHECK(g[1].kind == penalty::Kind::HannanQuinn);

  CHECK_THROWS_AS(cli::parse_criteria("swic:beta=0,nu=1000"), cli::UsageError);
  CHECK_THROWS_AS(cli::parse_criteria("swic:beta=1.5,nu=1000"), cli::UsageError);
  CHECK_THROWS_AS(cli::parse_criteria("swic:beta=1"), cli::UsageError);
  CHECK_THROWS_AS(cli::parse_criteria("ric"), cli::UsageError);
  CHECK_THROWS_AS(cli::parse_criteria("beta=1"), cli::UsageError);
}

TEST_CASE("n lists") {
  CHECK(cli::parse_n_list("100,1000,1e4") == std::vector<std::size_t>{100, 1000, 10000});
  CHECK_THROWS_AS(cli::parse_n_list("100,abc"), cli::UsageError);
  CHECK_THROWS_AS(cli::parse_n_list("0"), cli::UsageError);
}

TEST_CASE("argument parsing") {
  const char* argv[] = {"icsel", "--scenario", "S3.1", "--n", "100,1000",
                        "--criteria", "aic,bic,swic:beta=1,nu=1000"};
  const auto cfg = cli::parse_args(7, argv);
  CHECK(cfg.scenario == "S3.1");
  CHECK(cfg.n_list == std::vector<std::size_t>{100, 1000});
  CHECK(cfg.criteria.size() == 3);
  CHECK(cfg.runs == 0);  // filled in once the scenario family is known
  CHECK(cfg.threads == 1);

  const auto env = cli::parse_args(7, argv, "3");
  CHECK(env.threads == 3);

  const char* mix[] = {"icsel", "--scenario", "S1.2", "--n", "100", "--runs", "7"};
  CHECK(cli::parse_args(7, mix).runs == 7);
  CHECK(cli::parse_args(5, mix).criteria.size() == 6);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({"--n", "100"}).code == 2);
  CHECK(run({"--scenario", "S3.1", "--n", "100", "--criteria", "swic:beta=0,nu=1000"}).code == 2);
  CHECK(run({"--scenario", "S3.1", "--n", "100", "--bogus"}).code == 2);
  CHECK(run({"--scenario", "nowhere.txt", "--n", "100"}).code == 2);
}

TEST_CASE("CSV rows") {
  sim::ExperimentReport rep;
  rep.rows.push_back({"S3.1", "bic", 10000, 100, 4.0, 1.0, 0});
  std::ostringstream out;
  cli::emit_report(rep, cli::Format::Csv, out);
  CHECK(out.str() ==
        "scenario,criterion,n,runs,avg,prop,failures\nS3.1,bic,10000,100,4.00,1.00,0\n");

  std::ostringstream empty;
  cli::emit_report({}, cli::Format::Csv, empty);
  CHECK(empty.str() == "scenario,criterion,n,runs,avg,prop,failures\n");

  rep.rows[0].avg = std::nan("");
  std::ostringstream nan_out;
  cli::emit_report(rep, cli::Format::Csv, nan_out);
  CHECK(nan_out.str().find(",nan,") != std::string::npos);

  std::ostringstream md;
  cli::emit_report(rep, cli::Format::Markdown, md);
  CHECK(md.str().find("| S3.1 |") != std::string::npos);
}

TEST_CASE("end-to-end run") {
  const auto a = run({"--scenario", "S3.1", "--n", "200", "--runs", "5", "--criteria", "aic,bic"});
  REQUIRE(a.code == 0);
  CHECK(a.out.rfind("scenario,criterion,n,runs,avg,prop,failures\n", 0) == 0);
  CHECK(a.out.find("S3.1,aic,200,5,") != std::string::npos);
  CHECK(a.out.find("S3.1,bic,200,5,") != std::string::npos);
  const auto b = run({"--scenario", "S3.1", "--n", "200", "--runs", "5", "--criteria", "aic,bic"});
  CHECK(a.out == b.out);
  const auto md = run({"--scenario", "S3.1", "--n", "200", "--runs", "2", "--format", "markdown"});
  CHECK(md.code == 0);
  CHECK(md.out.find("| scenario |") != std::string::npos);
}
