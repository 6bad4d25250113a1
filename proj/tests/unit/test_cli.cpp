#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "membrana_cli/config.hpp"
#include "membrana_cli/run.hpp"

namespace fs = std::filesystem;
using namespace membrana::cli;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("membrana_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string config(const std::string& body) {
    const auto path = dir_ / "config.json";
    std::ofstream(path) << body;
    return path.string();
  }

  int run_args(std::vector<std::string> args) {
    args.insert(args.begin(), "membrana");
    out_.str("");
    err_.str("");
    return run(args, out_, err_);
  }

  std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

const char* kEig = R"({"geometry": {"kind": "two_interval", "bounds": [0, 0.5, 1], "n": [33, 33]},
  "gamma": [1, 2], "c1": 0, "c2": "1", "d": 1})";

}  // namespace

TEST(Config, ParsesGeometryAndCoefficients) {
  const auto cfg = parse_config(R"j({"geometry": {"kind": "concentric_radial", "dim": 3,
    "radii": [0.5, 1], "n": [9, 17]}, "c1": "1 + sin(3*r)", "alpha": 2,
    "tolerances": {"logistic": 1e-9}})j");
  EXPECT_EQ(cfg.geometry.kind, membrana::GeometryKind::ConcentricRadial);
  EXPECT_EQ(cfg.geometry.n2, 17u);
  EXPECT_EQ(cfg.alpha2.source, "2");
  EXPECT_DOUBLE_EQ(cfg.tolerances.logistic, 1e-9);
}

TEST(Config, RejectsUnknownKeys) {
  EXPECT_THROW(parse_config(R"({"gama": [1, 1]})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"tolerances": {"tol": 1}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"geometry": {"n": [5, 5], "bounds": [0, 1, 2], "extra": 1}})"),
               ConfigError);
}

TEST(Config, RejectsBadValues) {
  EXPECT_THROW(parse_config("{"), ConfigError);
  EXPECT_THROW(parse_config(R"({"gamma": [1, -1]})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"c1": "1 +"})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"geometry": {"bounds": [0, 1, 0.5], "n": [5, 5]}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"d": 0})"), ConfigError);
}

TEST_F(Cli, EigWritesArtifacts) {
  EXPECT_EQ(run_args({"eig", "--config", config(kEig), "--output", (dir_ / "out").string()}), kOk);
  EXPECT_NE(out_.str().find("Lambda1"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "eigenfunction.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "eig.json"));
}

TEST_F(Cli, OutputIsDeterministic) {
  const auto cfg = config(kEig);
  ASSERT_EQ(run_args({"eig", "-c", cfg, "-o", (dir_ / "a").string()}), kOk);
  ASSERT_EQ(run_args({"eig", "-c", cfg, "-o", (dir_ / "b").string()}), kOk);
  EXPECT_EQ(slurp(dir_ / "a" / "eigenfunction.csv"), slurp(dir_ / "b" / "eigenfunction.csv"));
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run_args({"eig", "-c", config(R"({"unknown": 1})")}), kConfigError);
  EXPECT_EQ(run_args({"eig"}), kConfigError);
  EXPECT_EQ(run_args({"frobnicate"}), kConfigError);
  EXPECT_EQ(run_args({"check", "--suite", "nope"}), kConfigError);
  const auto bad = config(R"({"geometry": {"bounds": [0, 0.5, 1], "n": [17, 17]},
    "lambda2_list": [0, 5], "output": ")" + (dir_ / "h").string() + R"("})");
  EXPECT_EQ(run_args({"curve-h", "-c", bad}), kSolverError);
  const auto strict = config(R"({"tolerances": {"uniqueness": 1e-300}, "cases": 3, "output": ")" +
                             (dir_ / "c").string() + R"("})");
  EXPECT_EQ(run_args({"check", "--suite", "uniqueness", "-c", strict}), kCheckFailed);
}

TEST_F(Cli, CurveHWritesCsv) {
  const auto cfg = config(R"({"geometry": {"bounds": [0, 0.5, 1], "n": [33, 33]},
    "lambda2_list": [-10, -1, 0, 1]})");
  ASSERT_EQ(run_args({"curve-h", "-c", cfg, "-o", dir_.string()}), kOk);
  const auto csv = slurp(dir_ / "hcurve.csv");
  EXPECT_EQ(csv.rfind("lambda2,H,residual\n", 0), 0u);
  EXPECT_TRUE(fs::exists(dir_ / "hcurve.json"));
}

TEST_F(Cli, Schema) {
  EXPECT_EQ(run_args({"--schema"}), kOk);
  for (const char* col : {"coordinate", "alt_deviation", "lambda2", "interior_increments"}) {
    EXPECT_NE(out_.str().find(col), std::string::npos) << col;
  }
}
