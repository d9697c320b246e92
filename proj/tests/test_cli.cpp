#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <regex>
#include <sstream>

#include "elastica/cli.hpp"
#include "elastica/io.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using elastica::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string value_of(const std::string& table, const std::string& key) {
  std::istringstream in(table);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + " ", 0) == 0) {
      const auto pos = line.find_first_not_of(' ', key.size());
      return line.substr(pos);
    }
  }
  return {};
}

class CliFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("elastica-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST(CliSolve, HatAtRStar) {
  const auto r = call({"solve", "--l", "0.456946581", "--L", "1", "--family", "hat"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(std::stod(value_of(r.out, "p")), 0.70710678, 1e-8);
  for (const char* key : {"residual", "K(p)", "E(p)", "b0", "lambda0"}) {
    EXPECT_FALSE(value_of(r.out, key).empty()) << key;
  }
}

TEST(CliSolve, CheckAboveP0) {
  const auto r = call({"solve", "--l", "0.5", "--L", "1", "--family", "check"});
  EXPECT_EQ(r.code, 0);
  const double p = std::stod(value_of(r.out, "p"));
  EXPECT_GT(p, 0.90890);
  EXPECT_LT(p, 1.0);
}

TEST(CliSolve, DomainError) {
  const auto r = call({"solve", "--l", "2", "--L", "1", "--family", "hat"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("requires 0 < l < L"), std::string::npos);
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
}

TEST(CliUsage, BadInvocations) {
  EXPECT_EQ(call({}).code, 2);
  EXPECT_EQ(call({"frobnicate"}).code, 2);
  EXPECT_EQ(call({"solve", "--L", "1"}).code, 2);
  EXPECT_EQ(call({"solve", "--l", "x", "--L", "1"}).code, 2);
  EXPECT_EQ(call({"solve", "--l", "0.5", "--L", "1", "--family", "round"}).code, 2);
  EXPECT_EQ(call({"sample", "--l", "0.5", "--L", "1", "--samples", "1"}).code, 2);
  EXPECT_EQ(call({"sample", "--l", "0.5", "--L", "1", "--format", "png"}).code, 2);
  EXPECT_EQ(call({"solve", "--l", "1e-8", "--L", "1"}).code, 2);
  EXPECT_EQ(call({"--help"}).code, 0);
}

TEST(CliSample, EndpointsCsv) {
  const auto r = call({"sample", "--l", "0.6", "--L", "1", "--samples", "2"});
  EXPECT_EQ(r.code, 0);
  const auto c = elastica::io::parse_curve_csv(r.out);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.x[0], 0.0);
  EXPECT_NEAR(c.x[1], 0.6, 1e-12);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 3);
}

TEST(CliSample, Deterministic) {
  const std::vector<std::string> args{"sample", "--l",    "0.3",   "--L",      "2", "--family",
                                      "check",  "--n",    "2",     "--sign",   "minus",
                                      "--format", "json", "--samples", "500"};
  const auto a = call(args);
  const auto b = call(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_TRUE(nlohmann::json::parse(a.out).contains("tangent_x"));
}

TEST_F(CliFiles, SampleFormatFromExtension) {
  ASSERT_EQ(call({"sample", "--l", "0.6", "--L", "1", "--out", path("c.svg")}).code, 0);
  EXPECT_NE(elastica::io::read_text(path("c.svg")).find("<svg"), std::string::npos);
  ASSERT_EQ(call({"sample", "--l", "0.6", "--L", "1", "--out", path("c.json")}).code, 0);
  EXPECT_NO_THROW(nlohmann::json::parse(elastica::io::read_text(path("c.json"))));
  ASSERT_EQ(call({"sample", "--l", "0.6", "--L", "1", "--out", path("c.csv")}).code, 0);
  EXPECT_NO_THROW(elastica::io::parse_curve_csv(elastica::io::read_text(path("c.csv"))));
}

TEST(CliSample, UnwritableOutput) {
  const auto r = call({"sample", "--l", "0.6", "--L", "1", "--out", "/nonexistent-dir/c.csv"});
  EXPECT_EQ(r.code, 3);
}

TEST(CliSpectrum, Ordering) {
  auto rows = [](const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) out.push_back(line);
    return out;
  };
  auto index_of = [](const std::vector<std::string>& rs, const std::string& family, int n) {
    const std::regex pattern("^\\s*\\d+\\s+" + family + "\\s+" + std::to_string(n) + "\\s");
    for (std::size_t i = 0; i < rs.size(); ++i) {
      if (std::regex_search(rs[i], pattern)) return i;
    }
    return rs.size();
  };

  const auto high = call({"spectrum", "--l", "0.95", "--L", "1", "--n-max", "2"});
  ASSERT_EQ(high.code, 0);
  const auto hr = rows(high.out);
  ASSERT_EQ(hr.size(), 12u);
  EXPECT_NE(hr[0].find("hat"), std::string::npos);
  EXPECT_NE(hr[0].find("plus"), std::string::npos);
  EXPECT_EQ(hr[0].back(), '*');
  EXPECT_EQ(hr[1].back(), '*');
  EXPECT_NE(hr[2].back(), '*');
  EXPECT_LT(index_of(hr, "hat", 1), index_of(hr, "check", 0));

  const auto low = rows(call({"spectrum", "--l", "0.05", "--L", "1", "--n-max", "2"}).out);
  EXPECT_LT(index_of(low, "check", 0), index_of(low, "hat", 1));
}

TEST(CliVerify, PassesAndFails) {
  const auto ok = call({"verify", "--l", "0.5", "--L", "1", "--n-max", "4"});
  EXPECT_EQ(ok.code, 0) << ok.out;
  EXPECT_EQ(ok.out.find("FAIL"), std::string::npos);

  const auto star = call({"verify", "--l", "0.4569465810444636", "--L", "1", "--n-max", "2"});
  EXPECT_EQ(star.code, 0) << star.out;
  EXPECT_NE(star.out.find("boundary"), std::string::npos);

  const auto bad =
      call({"verify", "--l", "0.5", "--L", "1", "--n-max", "2", "--tolerance-scale", "1e-9"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("FAIL"), std::string::npos);
  EXPECT_NE(bad.err.find("verification failed: "), std::string::npos);
}

TEST_F(CliFiles, MinimizeWritesCurveAndReport) {
  const auto up = call({"minimize", "--l", "0.6", "--L", "1", "--m", "200", "--seed", "arc-up",
                        "--out", path("up.csv")});
  ASSERT_EQ(up.code, 0) << up.err;
  const auto down = call({"minimize", "--l", "0.6", "--L", "1", "--m", "200", "--seed",
                          "arc-down", "--out", path("down.csv")});
  ASSERT_EQ(down.code, 0) << down.err;

  const auto ju = nlohmann::json::parse(elastica::io::read_text(path("up.json")));
  const auto jd = nlohmann::json::parse(elastica::io::read_text(path("down.json")));
  EXPECT_LE(ju["hausdorff_to_reference"].get<double>(), 0.02);
  EXPECT_TRUE(ju["converged"].get<bool>());
  EXPECT_EQ(ju["reference_sign"], "plus");
  EXPECT_EQ(jd["reference_sign"], "minus");
  EXPECT_NEAR(ju["final_energy"].get<double>() / jd["final_energy"].get<double>(), 1.0, 1e-10);

  const auto poly = elastica::io::parse_polyline_csv(elastica::io::read_text(path("up.csv")), 1.0);
  EXPECT_EQ(poly.size(), 200u);
}

TEST_F(CliFiles, MinimizeDeterministicAndFromFile) {
  const std::vector<std::string> args{"minimize", "--l", "0.4", "--L", "1", "--m", "60",
                                      "--seed", "random:7", "--out", path("a.csv")};
  ASSERT_EQ(call(args).code, 0);
  const std::string first = elastica::io::read_text(path("a.csv"));
  const std::string first_report = elastica::io::read_text(path("a.json"));
  ASSERT_EQ(call(args).code, 0);
  EXPECT_EQ(elastica::io::read_text(path("a.csv")), first);
  EXPECT_EQ(elastica::io::read_text(path("a.json")), first_report);

  const auto again = call({"minimize", "--l", "0.4", "--L", "1", "--init", path("a.csv"), "--out",
                           path("b.csv"), "--report", path("b-report.json")});
  EXPECT_EQ(again.code, 0) << again.err;
  EXPECT_TRUE(fs::exists(path("b-report.json")));
}

TEST_F(CliFiles, MinimizeIterationCap) {
  const auto r = call({"minimize", "--l", "0.6", "--L", "1", "--m", "100", "--seed", "random:z",
                       "--max-iterations", "2", "--out", path("cap.csv")});
  EXPECT_EQ(r.code, 4);
  EXPECT_TRUE(fs::exists(path("cap.json")));
}

TEST(CliMinimize, TooFewVertices) {
  const auto r = call({"minimize", "--l", "0.6", "--L", "1", "--m", "8"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("m ≥ 16 required"), std::string::npos);
}

TEST(CliMinimize, MissingInitFile) {
  EXPECT_EQ(call({"minimize", "--l", "0.6", "--L", "1", "--init", "/nonexistent-dir/x.csv"}).code, 3);
}

TEST_F(CliFiles, ConfigFilePrecedence) {
  elastica::io::write_text(path("run.ini"), "l=0.5\nL=1\nfamily=check\n");
  const auto from_file = call({"--config", path("run.ini"), "solve"});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  EXPECT_EQ(value_of(from_file.out, "family"), "check");

  const auto flag_wins = call({"--config", path("run.ini"), "solve", "--family", "hat"});
  ASSERT_EQ(flag_wins.code, 0);
  EXPECT_EQ(value_of(flag_wins.out, "family"), "hat");
  EXPECT_EQ(value_of(flag_wins.out, "l/L"), "0.5");

  EXPECT_EQ(call({"--config", path("missing.ini"), "solve"}).code, 3);
  elastica::io::write_text(path("bad.ini"), "colour=blue\n");
  EXPECT_EQ(call({"--config", path("bad.ini"), "solve", "--l", "0.5", "--L", "1"}).code, 2);
}

TEST(CliLogging, EnvironmentLevel) {
  ::setenv("ELASTICA_LOG", "info", 1);
  const auto r = call({"spectrum", "--l", "0.5", "--L", "1", "--n-max", "0"});
  ::unsetenv("ELASTICA_LOG");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("[info]"), std::string::npos);

  const auto quiet = call({"spectrum", "--l", "0.5", "--L", "1", "--n-max", "0"});
  EXPECT_TRUE(quiet.err.empty());
}
