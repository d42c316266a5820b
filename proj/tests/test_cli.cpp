#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "cps/io.hpp"

using cps::io::Json;
namespace fs = std::filesystem;

namespace {

std::string data(const std::string& name) { return std::string(CPS_DATA_DIR) + "/" + name; }

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cps_run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  int code = cps::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("cps_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string tmp(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_F(Cli, SchemeFromSlope) {
  Result r = cps_run({"scheme-from-slope", "--alpha", "(-1+sqrt2)", "-o", tmp("silver.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  Json j = cps::io::read_json_file(tmp("silver.json"));
  EXPECT_EQ(j["M"], Json::parse("[[2,1],[1,0]]"));
  EXPECT_EQ(j["slope"]["period"], Json::parse(R"(["2"])"));
  EXPECT_NE(r.out.find("M = "), std::string::npos);
}

TEST_F(Cli, SchemeFromMatrixAndCompanion) {
  Result r = cps_run({"scheme-from-matrix", "--matrix", "[[1,1],[1,0]]"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("k=2 d=1 n=1 D=5"), std::string::npos);
  // x^2 - 2x - 1, the silver mean polynomial.
  r = cps_run({"scheme-from-matrix", "--companion", "-1,-2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("k=2 d=1 n=1 D=2"), std::string::npos);
  // Not unimodular.
  r = cps_run({"scheme-from-matrix", "--matrix", "[[2,0],[0,1]]"});
  EXPECT_NE(r.code, 0);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(Cli, CheckSub) {
  Result yes = cps_run({"check-sub", "-s", data("fibonacci.json"), "-w", data("fibonacci_window.json")});
  EXPECT_EQ(yes.code, 0) << yes.err;
  EXPECT_EQ(yes.out.rfind("YES", 0), 0u);
  Result no = cps_run({"check-sub", "-s", data("blockdiag.json"), "-w", data("blockdiag_diamond.json")});
  EXPECT_EQ(no.code, 1) << no.err;
  EXPECT_EQ(no.out.rfind("NO", 0), 0u);
}

TEST_F(Cli, DeriveThenVerifyThenGifs) {
  std::string rule = tmp("rule.json");
  Result d = cps_run({"derive-rule", "-s", data("fibonacci.json"), "-w", data("fibonacci_window.json"), "-o", rule,
                      "--svg", tmp("rule.svg")});
  ASSERT_EQ(d.code, 0) << d.err;
  EXPECT_TRUE(fs::exists(tmp("rule.svg")));
  EXPECT_TRUE(fs::exists(tmp("rule.svg.json")));
  Result v = cps_run({"verify", "-s", data("fibonacci.json"), "-w", data("fibonacci_window.json"), "-r", rule,
                      "--radius", "60", "-o", tmp("verify.json")});
  EXPECT_EQ(v.code, 0) << v.out << v.err;
  EXPECT_EQ(v.out.rfind("ok", 0), 0u);
  EXPECT_TRUE(cps::io::read_json_file(tmp("verify.json"))["ok"].get<bool>());
  Result g = cps_run({"gifs", "-s", data("fibonacci.json"), "-r", rule});
  EXPECT_EQ(g.code, 0) << g.err;
}

TEST_F(Cli, LidsAtTheWindowCentre) {
  std::string rule = tmp("rule1.json");
  ASSERT_EQ(cps_run({"derive-rule", "-s", data("fibonacci.json"), "-w", data("fibonacci_window.json"), "--power", "1",
                     "-o", rule})
                .code,
            0);
  cps::Scheme f = cps::io::scheme_from_json(cps::io::read_json_file(data("fibonacci.json")));
  cps::FieldScalar centre = f.star(cps::IntVector{-1, 1})[0] / cps::FieldScalar(2);
  std::vector<std::string> args{"lids", "-s", data("fibonacci.json"), "-w", data("fibonacci_window.json"), "-r", rule,
                                "--shift", centre.to_string(), "--radius", "100", "--times"};
  args.push_back("3");
  Result fixed = cps_run(args);
  EXPECT_EQ(fixed.code, 0) << fixed.out << fixed.err;
  EXPECT_EQ(fixed.out.rfind("power=3 ", 0), 0u) << fixed.out;
  args.back() = "2";
  EXPECT_EQ(cps_run(args).code, 1);
}

TEST_F(Cli, VerifyCatchesWrongRule) {
  std::string rule = tmp("rule.json");
  ASSERT_EQ(cps_run({"derive-rule", "-s", data("fibonacci.json"), "-w", data("fibonacci_window.json"), "-o", rule}).code, 0);
  Json j = cps::io::read_json_file(rule);
  j["m"] = j["m"].get<unsigned>() + 1;
  cps::io::write_text_file(rule, j.dump());
  Result v = cps_run({"verify", "-s", data("fibonacci.json"), "-w", data("fibonacci_window.json"), "-r", rule});
  EXPECT_EQ(v.code, 1) << v.out << v.err;
}

TEST_F(Cli, Symmetry) {
  Result yes = cps_run({"symmetry", "-s", data("fibonacci.json"), "-w", data("fibonacci_window.json"), "--matrix",
                        "[[-1,0],[0,-1]]"});
  EXPECT_EQ(yes.code, 0) << yes.err;
  EXPECT_EQ(yes.out.rfind("yes", 0), 0u);
  Result no = cps_run({"symmetry", "-s", data("fibonacci.json"), "-w", data("two_intervals.json"), "--matrix",
                       "[[-1,0],[0,-1]]"});
  EXPECT_EQ(no.code, 1) << no.err;
  EXPECT_EQ(no.out.rfind("no", 0), 0u);
}

TEST_F(Cli, GenerateFormats) {
  std::vector<std::string> base{"generate", "-s", data("ammann_beenker.json"), "-w", data("octagon.json"), "--radius", "4"};
  auto with = [&](std::vector<std::string> extra) {
    std::vector<std::string> args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return cps_run(args);
  };
  Result j = with({"-o", tmp("p.json"), "--svg", tmp("p.svg")});
  ASSERT_EQ(j.code, 0) << j.err;
  Result c = with({"-o", tmp("p.csv")});
  ASSERT_EQ(c.code, 0) << c.err;
  Json pts = cps::io::read_json_file(tmp("p.json"));
  std::string csv = slurp(tmp("p.csv"));
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), pts["points"].size() + 1);
  EXPECT_TRUE(fs::exists(tmp("p.svg")));
  EXPECT_EQ(cps::io::read_json_file(tmp("p.svg.json")), pts);
  // Deterministic output.
  Result again = with({});
  Result twice = with({});
  EXPECT_EQ(again.out, twice.out);
  EXPECT_EQ(Json::parse(again.out), pts);
}

TEST_F(Cli, GenerateFromIfs) {
  Result r = cps_run({"generate", "-s", data("ammann_beenker.json"), "--ifs", data("ammann_beenker_fractal_ifs.json"),
                      "--radius", "3", "-o", tmp("ifs.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(cps::io::read_json_file(tmp("ifs.json")).contains("points"));
  Result missing = cps_run({"generate", "-s", data("ammann_beenker.json")});
  EXPECT_EQ(missing.code, 2);
}

TEST_F(Cli, Attractor) {
  Result r = cps_run({"attractor", "-s", data("ammann_beenker.json"), "--ifs", data("ammann_beenker_fractal_ifs.json"),
                      "--samples", "200", "--radius", "8"});
  ASSERT_EQ(r.code, 0) << r.err;
  Json j = Json::parse(r.out);
  EXPECT_EQ(j["contradictions"], 0);
  EXPECT_EQ(j["samples"].get<std::size_t>(),
            j["inside"].get<std::size_t>() + j["outside"].get<std::size_t>() + j["undetermined"].get<std::size_t>());
}

TEST_F(Cli, AcceptanceTilesTheWindow) {
  Result r = cps_run({"acceptance", "-s", data("ammann_beenker.json"), "-w", data("octagon.json"), "--radius",
                      "1/2*sqrt2", "--svg", tmp("acc.svg")});
  ASSERT_EQ(r.code, 0) << r.err;
  Json j = Json::parse(r.out);
  EXPECT_TRUE(j["tiles"].get<bool>());
  EXPECT_GT(j["cells"].size(), 1u);
  EXPECT_TRUE(fs::exists(tmp("acc.svg")));
}

TEST_F(Cli, CanonicalWindow) {
  Result r = cps_run({"canonical-window", "-s", data("ammann_beenker.json"), "--centred"});
  ASSERT_EQ(r.code, 0) << r.err;
  cps::Scheme ab = cps::io::scheme_from_json(cps::io::read_json_file(data("ammann_beenker.json")));
  cps::Window got = cps::io::window_from_json(Json::parse(r.out), ab);
  cps::Window oct = cps::io::window_from_json(cps::io::read_json_file(data("octagon.json")), ab);
  EXPECT_TRUE(got.support().equals(oct.support()));
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(cps_run({"bogus"}).code, 2);
  EXPECT_EQ(cps_run({}).code, 2);
  EXPECT_EQ(cps_run({"check-sub", "-s", data("no_such.json"), "-w", data("fibonacci_window.json")}).code, 2);
  EXPECT_EQ(cps_run({"--help"}).code, 0);
}
