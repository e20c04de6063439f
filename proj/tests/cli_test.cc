#include "cli.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "empeq/game_io.h"

namespace empeq {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("empeq_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p.string();
  }
  static std::string read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }

  fs::path dir_;
};

std::string corpus_file(const std::string& name) {
  return std::string(EMPEQ_CORPUS_DIR) + "/" + name;
}

TEST_F(CliTest, CorpusEmitMatchesBundledFiles) {
  for (const auto& [name, file] : {std::pair{"gamma1", "gamma1.json"}, {"psi", "psi.json"},
                                   {"phi", "phi.json"}, {"gamma2c", "gamma2c_2_2.json"}}) {
    const Result r = run({"corpus", "emit", name});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, read(corpus_file(file))) << name;
  }
  const Result list = run({"corpus", "list"});
  EXPECT_EQ(list.out, "gamma1\npsi\ngamma2c\nphi\n");
}

TEST_F(CliTest, NashIsDeterministic) {
  const Result a = run({"nash", "--game", corpus_file("phi.json")});
  const Result b = run({"nash", "--game", corpus_file("phi.json")});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const Json doc = Json::parse(a.out);
  EXPECT_TRUE(doc.contains("isolated"));
}

TEST_F(CliTest, EmpiricalSingleCandidate) {
  const std::string profile =
      write("p.json", R"({"profile": {"P1": {"a3": 1}, "P2": {"b3": 1}}})");
  const Result r = run({"empirical", "--corpus", "gamma2c", "--profile", profile});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json doc = Json::parse(r.out);
  EXPECT_EQ(doc["decision"], "non-member");
  const std::string out = (dir_ / "verdict.json").string();
  ASSERT_EQ(run({"empirical", "--game", "gamma2c", "--profile", profile, "--out", out}).code, 0);
  EXPECT_EQ(read(out), r.out);
}

TEST_F(CliTest, EmpiricalTimingsFlag) {
  const Result r = run({"empirical", "--corpus", "gamma1", "--timings"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(Json::parse(r.out).contains("timings"));
}

TEST_F(CliTest, InputErrorsExitTwo) {
  EXPECT_EQ(run({"nash", "--game", (dir_ / "missing.json").string()}).code, 2);
  EXPECT_EQ(run({"nash"}).code, 2);
  EXPECT_EQ(run({"nash", "--corpus", "gamma1", "--game", "psi"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  const std::string bad = write("bad.json", R"({"players": ["A"],)");
  const Result r = run({"nash", "--game", bad});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
  EXPECT_EQ(run({"empirical", "--corpus", "gamma1", "--delta-schedule", "0.1,x"}).code, 2);
  EXPECT_EQ(run({"empirical", "--corpus", "gamma1", "--delta-schedule", "0.01,0.1"}).code, 2);
  EXPECT_EQ(run({"region", "--corpus", "gamma1", "--kind", "odd"}).code, 2);
  EXPECT_EQ(run({"region", "--corpus", "phi"}).code, 2);
  EXPECT_EQ(run({"nash", "--corpus", "gamma1", "--format", "csv"}).code, 2);
  const std::string mixed = write("mixed.json", R"({"profile": {"P1": {"a1": 0.5, "a2": 0.5},
                                                                  "P2": {"b1": 1}}})");
  EXPECT_EQ(run({"empirical", "--corpus", "gamma1", "--profile", mixed}).code, 2);
}

TEST_F(CliTest, HelpExitsZero) {
  const Result r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("empirical"), std::string::npos);
}

TEST_F(CliTest, RegionAndTraceCsv) {
  const Result region = run({"region", "--corpus", "gamma1", "--resolution", "4"});
  ASSERT_EQ(region.code, 0) << region.err;
  EXPECT_EQ(region.out.substr(0, region.out.find('\n')), "coord_1,coord_2,satisfied");
  const Result trace = run({"trace", "--corpus", "gamma1", "--lambda-max", "10"});
  ASSERT_EQ(trace.code, 0) << trace.err;
  const std::string header = trace.out.substr(0, trace.out.find('\n'));
  EXPECT_EQ(header.rfind("lambda,", 0), 0u) << header;
  EXPECT_EQ(header.substr(header.size() - 9), ",residual");
  const Result json = run({"trace", "--corpus", "psi", "--format", "json"});
  ASSERT_EQ(json.code, 0);
  EXPECT_TRUE(Json::parse(json.out).contains("nearest_equilibrium"));
}

TEST_F(CliTest, WpmReport) {
  const std::string profile =
      write("p.json", R"({"profile": {"P1": {"a1": 0.5, "a2": 0.5}, "P2": {"b1": 1}}})");
  const Result r = run({"wpm", "--corpus", "psi", "--profile", profile});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_FALSE(Json::parse(r.out).empty());
  EXPECT_EQ(run({"wpm", "--corpus", "psi", "--profile", profile, "--m", "2"}).code, 2);
}

TEST_F(CliTest, CcostBuildCheckRoundtrip) {
  const std::string profile = write(
      "p.json", R"({"profile": {"P1": {"a1": 0.6, "a2": 0.4}, "P2": {"b1": 0.7, "b2": 0.3}}})");
  const std::string splines = (dir_ / "splines.json").string();
  const Result build = run({"ccost", "build", "--corpus", "gamma1", "--profile", profile,
                            "--out", splines});
  ASSERT_EQ(build.code, 0) << build.err;
  const Json doc = Json::parse(read(splines));
  EXPECT_TRUE(doc.contains("splines"));

  const Result rt = run({"ccost", "roundtrip", "--splines", splines});
  ASSERT_EQ(rt.code, 0) << rt.err;
  EXPECT_EQ(rt.out, read(splines));

  const Result check =
      run({"ccost", "check", "--corpus", "gamma1", "--splines", splines, "--profile", profile});
  ASSERT_EQ(check.code, 0) << check.err;
  EXPECT_TRUE(Json::parse(check.out).contains("payoffs"));

  const std::string pure =
      write("pure.json", R"({"profile": {"P1": {"a1": 1}, "P2": {"b1": 1}}})");
  EXPECT_EQ(run({"ccost", "build", "--corpus", "gamma1", "--profile", pure}).code, 2);
}

}  // namespace
}  // namespace empeq
