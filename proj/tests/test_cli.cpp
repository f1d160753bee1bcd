#include "trieig/cli/commands.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "trieig/matgen.hpp"
#include "trieig/matrix_market.hpp"
#include "trieig/oracle.hpp"
#include "trieig/cli/report.hpp"

namespace trieig {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

CliRun Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "trieig");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path TmpDir() {
  const fs::path dir = fs::path(TRIEIG_TEST_TMPDIR);
  fs::create_directories(dir);
  return dir;
}

TriMatrix ReadMarket(const fs::path& path) {
  std::ifstream in(path);
  return read_matrix_market(in);
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(CliTest, FloatsUseSeventeenDigits) {
  const std::string text = cli::dump_json(Json{{"x", 0.1}, {"n", 3}, {"e", Json::array()}});
  EXPECT_NE(text.find("0.10000000000000001"), std::string::npos);
  EXPECT_NE(text.find("\"n\": 3"), std::string::npos);
  EXPECT_EQ(Json::parse(text)["x"].get<double>(), 0.1);
}

TEST(CliTest, GenExampleMatrix) {
  const fs::path path = TmpDir() / "A.mtx";
  const CliRun r = Cli({"gen", "-m", "5", "-a", "0", "-b", "1", "-c", "5", "--what", "A", "-o", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "gen A: m=5 a=0 b=1 c=5 gamma=5 orientation=lower -> " + path.string() + "\n");
  const TriMatrix a = ReadMarket(path);
  const std::vector<double> want{1, 0, 0, 0, 0, -5, 2, 0, 0, 0, -5, -5, 3, 0, 0, -5, -5, -5, 4, 0, -5, -5, -5, -5, 5};
  EXPECT_EQ(a, TriMatrix(5, Shape::Lower, want));
  const std::string text = Slurp(path);
  EXPECT_EQ(text.rfind("%%MatrixMarket matrix array real general\n", 0), 0u);
}

TEST(CliTest, GenFlippedEigenvectors) {
  const fs::path path = TmpDir() / "Xu.mtx";
  const CliRun r = Cli({"gen", "-m", "5", "-c", "5", "--upper", "--what", "X", "-o", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::vector<double> want{1, 5, 15, 35, 70, 0, 1, 5, 15, 35, 0, 0, 1, 5, 15, 0, 0, 0, 1, 5, 0, 0, 0, 0, 1};
  EXPECT_EQ(ReadMarket(path), TriMatrix(5, Shape::Upper, want));
}

TEST(CliTest, GenDiagonal) {
  const CliRun r = Cli({"gen", "-m", "3", "-a", "1", "-b", "1", "-c", "0", "--what", "A", "-o", "-"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.find("-0"), std::string::npos);
  std::istringstream in(r.out);
  EXPECT_EQ(read_matrix_market(in), TriMatrix(3, Shape::Lower, {2, 0, 0, 0, 3, 0, 0, 0, 4}));
}

TEST(CliTest, GenLargeXNeedsJson) {
  const fs::path path = TmpDir() / "Xbig.json";
  EXPECT_EQ(Cli({"gen", "-m", "600", "-c", "600", "--what", "X", "-o", (TmpDir() / "Xbig.mtx").string()}).code, 2);
  const CliRun r = Cli({"gen", "-m", "600", "-c", "600", "--what", "X", "--format", "json", "-o", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(Slurp(path));
  EXPECT_TRUE(j["exact"].get<bool>());
  // Row 600, column 1 holds binom(1198, 599).
  mpz_class central;
  mpz_bin_uiui(central.get_mpz_t(), 1198, 599);
  EXPECT_EQ(j["entries"][599][0].get<std::string>(), central.get_str());
  EXPECT_EQ(j["entries"][0][1].get<std::string>(), "0");
}

TEST(CliTest, MatrixMarketRoundTripIsBitExact) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int t = 0; t < 20; ++t) {
    const MatrixParams p{1 + rng() % 9, u(rng), u(rng), u(rng), t % 2 ? Shape::Upper : Shape::Lower};
    const fs::path path = TmpDir() / "rt.mtx";
    std::vector<std::string> args{"gen",           "-m", std::to_string(p.m), "-a", "", "-b", "", "-c", "",
                                  "--layout",      t % 3 ? "array" : "coordinate", "-o", path.string()};
    std::ostringstream a, b, c;
    a.precision(17);
    b.precision(17);
    c.precision(17);
    a << p.a;
    b << p.b;
    c << p.c;
    args[4] = a.str();
    args[6] = b.str();
    args[8] = c.str();
    if (p.orientation == Shape::Upper) args.push_back("--upper");
    ASSERT_EQ(Cli(args).code, 0);
    const TriMatrix back = ReadMarket(path);
    const TriMatrix want = build_A(p);
    ASSERT_EQ(back.shape(), want.shape());
    for (std::size_t k = 0; k < want.entries().size(); ++k) {
      EXPECT_EQ(std::signbit(back.entries()[k]), std::signbit(want.entries()[k]));
      EXPECT_EQ(back.entries()[k], want.entries()[k]);
    }
  }
}

TEST(CliTest, EigExample) {
  const CliRun r = Cli({"eig", "-m", "5", "-a", "0", "-b", "1", "-c", "5", "--method", "naive"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["columns_ok"], 5);
  const auto x = eigenvector_matrix({5, 0, 1, 5}).dense_native();
  for (std::size_t col = 0; col < 5; ++col) {
    const Json& c = j["columns"][col];
    EXPECT_EQ(c["status"], "Ok");
    EXPECT_EQ(c["residual"].get<double>(), 0.0);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(c["values"][i].get<double>(), x(i, col));
  }
}

TEST(CliTest, EigOverflowIsReportedNotFatal) {
  const CliRun r = Cli({"eig", "-m", "600", "-a", "0", "-b", "1", "-c", "600", "--method", "naive", "--vectors", "off"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["columns"][0]["status"], "OverflowDetected");
  EXPECT_TRUE(j["columns"][0]["overflow_row"].is_number());
  EXPECT_EQ(j["columns"][599]["status"], "Ok");

  EXPECT_EQ(Cli({"eig", "-m", "600", "-c", "600", "--method", "naive", "--expect", "ok", "--vectors", "off"}).code, 3);
  const CliRun robust = Cli({"eig", "-m", "600", "-c", "600", "--method", "robust", "--expect", "ok", "--vectors", "off"});
  ASSERT_EQ(robust.code, 0);
  const Json rj = Json::parse(robust.out);
  EXPECT_EQ(rj["columns_overflow"], 0);
  EXPECT_LE(rj["max_residual"].get<double>(), 1e-12);
  EXPECT_LT(rj["columns"][0]["scale_exp"].get<long>(), 0);
  EXPECT_GT(rj["columns"][0]["max_log2"].get<double>(), 1024.0);
}

TEST(CliTest, EigExtendedEmitsStrings) {
  const CliRun r = Cli({"eig", "-m", "4", "-c", "3", "--method", "extended"});
  ASSERT_EQ(r.code, 0);
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["columns"][0]["values"][1], "+1.5*2^1");
  EXPECT_TRUE(j["columns"][0]["scale_exp"].is_null());
}

TEST(CliTest, CondExample) {
  const CliRun r = Cli({"cond", "-m", "5", "-a", "0", "-b", "1", "-c", "5", "-j", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_LE(j["kappa_exact"].get<double>(), j["kappa_bound"].get<double>());
  EXPECT_NEAR(j["kappa_bound"].get<double>(), 6.70004, 1e-5);
  EXPECT_GT(j["margin"].get<double>(), 0.0);
  EXPECT_TRUE(j["perturb_stats"].is_null());

  const CliRun with_trials = Cli({"cond", "-m", "5", "-c", "5", "-j", "1", "--trials", "100"});
  ASSERT_EQ(with_trials.code, 0);
  EXPECT_TRUE(Json::parse(with_trials.out)["perturb_stats"]["pass"].get<bool>());
  EXPECT_EQ(Cli({"cond", "-m", "5", "-c", "5", "-j", "5"}).code, 2);
}

TEST(CliTest, GrowthAndPerturb) {
  const CliRun g = Cli({"growth", "-m", "5", "-b", "1", "-c", "5"});
  ASSERT_EQ(g.code, 0);
  EXPECT_TRUE(Json::parse(g.out)["pass"].get<bool>());

  const CliRun miss = Cli({"growth", "-m", "3", "-b", "1", "-c", "1"});
  ASSERT_EQ(miss.code, 0);
  const Json mj = Json::parse(miss.out);
  EXPECT_FALSE(mj["pass"].get<bool>());
  EXPECT_EQ(mj["first_violation"]["row"], 2);
  EXPECT_EQ(mj["first_violation"]["col"], 1);
  EXPECT_EQ(Cli({"growth", "-m", "3", "-b", "1", "-c", "1", "--expect-pass"}).code, 3);

  const CliRun p = Cli({"perturb", "-m", "5", "-c", "5", "-j", "1", "--trials", "1000", "--epsilon", "1e-8"});
  ASSERT_EQ(p.code, 0) << p.err;
  const Json pj = Json::parse(p.out);
  EXPECT_LE(pj["stats"]["max_ratio"].get<double>(), 4.0);
  EXPECT_EQ(pj["eigenvalue_shift"].get<double>(), 1e-8);
}

TEST(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(Cli({}).code, 2);
  EXPECT_EQ(Cli({"frobnicate"}).code, 2);
  EXPECT_EQ(Cli({"gen"}).code, 2);
  EXPECT_EQ(Cli({"gen", "-m", "5", "--what", "Y"}).code, 2);
  EXPECT_EQ(Cli({"gen", "-m", "0"}).code, 2);
  EXPECT_EQ(Cli({"gen", "-m", "5", "-c", "nan", "-o", "-"}).code, 2);
  EXPECT_EQ(Cli({"gen", "-m", "5", "-o", "/nonexistent-dir/A.mtx"}).code, 2);
  EXPECT_EQ(Cli({"eig", "-m", "4", "-b", "0"}).code, 2);
  EXPECT_EQ(Cli({"perturb", "-m", "5", "-c", "5", "-j", "1", "--epsilon", "1"}).code, 2);
  EXPECT_EQ(Cli({"verify", "--suite", "nope"}).code, 2);
  EXPECT_EQ(Cli({"--help"}).code, 0);
}

TEST(CliTest, VerifySingleSuite) {
  const CliRun r = Cli({"verify", "--suite", "growth", "-m", "5", "-c", "5", "-b", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  ASSERT_EQ(j["suites"].size(), 1u);
  EXPECT_EQ(j["suites"][0]["name"], "growth");
  EXPECT_EQ(j["suites"][0]["cases"], 1);
  EXPECT_TRUE(j["pass"].get<bool>());
}

TEST(CliTest, VerifyIsDeterministic) {
  const CliRun a = Cli({"verify", "--seed", "17"});
  const CliRun b = Cli({"verify", "--seed", "17"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const Json j = Json::parse(a.out);
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_EQ(j["suites"].size(), 9u);
}

TEST(CliTest, EigThreadsDoNotChangeReport) {
  const CliRun one = Cli({"eig", "-m", "80", "-c", "80", "--vectors", "on"});
  const CliRun four = Cli({"eig", "-m", "80", "-c", "80", "--vectors", "on", "--threads", "4"});
  ASSERT_EQ(one.code, 0);
  EXPECT_EQ(one.out, four.out);
}

}  // namespace
}  // namespace trieig
