#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vdp/cli_commands.hpp"

namespace vdp::cli {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    root_ = fs::temp_directory_path() /
            ("vdp_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
    fs::create_directories(root_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(root_, ec);
  }
  std::string path(const std::string& name) const { return (root_ / name).string(); }

 private:
  static inline int counter_ = 0;
  fs::path root_;
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

TEST(ParseDeltaTest, AcceptsDecimalsAndPowersOfTwo) {
  EXPECT_DOUBLE_EQ(parse_delta("2^-10"), 0.0009765625);
  EXPECT_DOUBLE_EQ(parse_delta("9.765625e-4"), 0.0009765625);
  EXPECT_DOUBLE_EQ(parse_delta("0.25"), 0.25);
  EXPECT_THROW(parse_delta("2^-0"), ConfigError);
  EXPECT_THROW(parse_delta("abc"), ConfigError);
  EXPECT_THROW(parse_delta("0.5x"), ConfigError);
}

TEST(DefaultGroupTest, EnvVarOverridesTheBuiltInDefault) {
  ::unsetenv("VDP_GROUP");
  EXPECT_EQ(default_group(), kDefaultGroup);
  ::setenv("VDP_GROUP", "toy-zp61", 1);
  EXPECT_EQ(default_group(), "toy-zp61");
  ::unsetenv("VDP_GROUP");
}

TEST(CmdParamsTest, PrintsDerivedCoinCount) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_params(out, err, 1.0, std::nullopt, "9.765625e-4"), kExitOk);
  EXPECT_NE(out.str().find("coins:   763"), std::string::npos);
}

TEST(CmdParamsTest, PrintsEpsilonToFourDecimals) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_params(out, err, std::nullopt, 1024, "9.765625e-4"), kExitOk);
  EXPECT_NE(out.str().find("epsilon: 0.8629"), std::string::npos);
}

TEST(CmdParamsTest, RejectsWeakParametersCitingTheCoinFloor) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_params(out, err, 100.0, std::nullopt, "0.5"), kExitUsage);
  EXPECT_NE(err.str().find("more than 30"), std::string::npos);
}

TEST(CmdParamsTest, RequiresExactlyOneOfEpsilonOrCoins) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_params(out, err, 1.0, 100, "2^-10"), kExitUsage);
  EXPECT_EQ(cmd_params(out, err, std::nullopt, std::nullopt, "2^-10"), kExitUsage);
}

TEST(CmdRunTest, DefaultsProduceAVerifiableTranscript) {
  TempDir dir;
  RunOptions opts;
  opts.group = Zp61::id();
  opts.session.seed = 5;
  opts.out_path = dir.path("t.json");
  std::ostringstream out, err;
  EXPECT_EQ(cmd_run(out, err, opts), kExitOk) << err.str();
  EXPECT_NE(out.str().find("estimate[0]:"), std::string::npos);
  std::ostringstream vout, verr;
  EXPECT_EQ(cmd_verify(vout, verr, opts.out_path), kExitOk);
}

TEST(CmdRunTest, SameSeedSameFile) {
  TempDir dir;
  RunOptions opts;
  opts.group = Zp61::id();
  opts.session.seed = 6;
  opts.session.n_clients = 10;
  opts.session.coins = 64;
  std::ostringstream out, err;
  opts.out_path = dir.path("a.json");
  ASSERT_EQ(cmd_run(out, err, opts), kExitOk);
  opts.out_path = dir.path("b.json");
  ASSERT_EQ(cmd_run(out, err, opts), kExitOk);
  EXPECT_EQ(slurp(dir.path("a.json")), slurp(dir.path("b.json")));
}

TEST(CmdRunTest, AdversaryTripsRejectionWithBlame) {
  TempDir dir;
  RunOptions opts;
  opts.group = Zp61::id();
  opts.session.seed = 7;
  opts.session.n_clients = 8;
  opts.session.coins = 40;
  opts.out_path = dir.path("t.json");
  opts.adversaries = {"prover1:tamper_output"};
  std::ostringstream out, err;
  EXPECT_EQ(cmd_run(out, err, opts), kExitRejected);
  EXPECT_NE(out.str().find("blame: prover:1"), std::string::npos);
  // the rejected transcript also fails file verification
  std::ostringstream vout, verr;
  EXPECT_EQ(cmd_verify(vout, verr, opts.out_path), kExitRejected);
}

TEST(CmdRunTest, BadAdversarySpecIsUsageError) {
  TempDir dir;
  RunOptions opts;
  opts.group = Zp61::id();
  opts.out_path = dir.path("t.json");
  opts.adversaries = {"prover9:sabotage"};
  std::ostringstream out, err;
  EXPECT_EQ(cmd_run(out, err, opts), kExitUsage);
}

TEST(CmdRunTest, UnknownGroupIsUsageError) {
  RunOptions opts;
  opts.group = "p-256";
  std::ostringstream out, err;
  EXPECT_EQ(cmd_run(out, err, opts), kExitUsage);
}

TEST(CmdVerifyTest, FlippedByteRejectsWithPhaseName) {
  TempDir dir;
  RunOptions opts;
  opts.group = Zp61::id();
  opts.session.seed = 8;
  opts.session.n_clients = 6;
  opts.session.coins = 40;
  opts.out_path = dir.path("t.json");
  std::ostringstream out, err;
  ASSERT_EQ(cmd_run(out, err, opts), kExitOk);

  auto text = slurp(opts.out_path);
  const auto anchor = text.find("\"commitments\"");
  ASSERT_NE(anchor, std::string::npos);
  const auto quote = text.find('"', text.find('[', anchor));
  ASSERT_NE(quote, std::string::npos);
  text[quote + 2] = text[quote + 2] == 'A' ? 'B' : 'A';
  const auto flipped = dir.path("flipped.json");
  std::ofstream(flipped, std::ios::binary) << text;

  std::ostringstream vout, verr;
  EXPECT_EQ(cmd_verify(vout, verr, flipped), kExitRejected);
  EXPECT_NE(vout.str().find("rejected at"), std::string::npos);
}

TEST(CmdVerifyTest, TruncatedFileIsMalformed) {
  TempDir dir;
  RunOptions opts;
  opts.group = Zp61::id();
  opts.session.seed = 9;
  opts.session.n_clients = 4;
  opts.session.coins = 40;
  opts.out_path = dir.path("t.json");
  std::ostringstream out, err;
  ASSERT_EQ(cmd_run(out, err, opts), kExitOk);
  auto text = slurp(opts.out_path);
  const auto truncated = dir.path("trunc.json");
  std::ofstream(truncated, std::ios::binary) << text.substr(0, text.size() / 3);
  std::ostringstream vout, verr;
  EXPECT_EQ(cmd_verify(vout, verr, truncated), kExitUsage);
}

TEST(CmdVerifyTest, MissingFileIsUsageError) {
  std::ostringstream vout, verr;
  EXPECT_EQ(cmd_verify(vout, verr, "/nonexistent/path.json"), kExitUsage);
}

TEST(CmdBenchTest, CoinsSweepEmitsPipelineShapedCsv) {
  TempDir dir;
  BenchOptions opts;
  opts.group = Zp61::id();
  opts.sweep = "coins";
  opts.n_clients = 500;
  opts.reps = 1;
  opts.budget_seconds = 10.0;
  opts.out_path = dir.path("report.csv");
  std::ostringstream out, err;
  ASSERT_EQ(cmd_bench(out, err, opts), kExitOk) << err.str();
  const auto csv = slurp(opts.out_path);
  EXPECT_NE(csv.find("phase,n,n_b,m,k,mean_ms,std_ms,reps"), std::string::npos);
  for (const auto& phase : bench_phases()) {
    EXPECT_NE(csv.find(phase + ",500,1024"), std::string::npos) << phase;
  }
  EXPECT_NE(out.str().find("single exponentiation"), std::string::npos);
}

TEST(CmdBenchTest, OneSecondBudgetCompletes) {
  TempDir dir;
  BenchOptions opts;
  opts.group = Zp61::id();
  opts.sweep = "bins";
  opts.n_clients = 200;
  opts.n_b = 64;
  opts.reps = 100000;
  opts.budget_seconds = 1.0;
  opts.out_path = dir.path("report.csv");
  std::ostringstream out, err;
  const auto t0 = std::chrono::steady_clock::now();
  ASSERT_EQ(cmd_bench(out, err, opts), kExitOk) << err.str();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(secs, 30.0);
}

TEST(CmdAuditTest, SmallAuditWritesReport) {
  TempDir dir;
  AuditOptions opts;
  opts.group = Zp61::id();
  opts.coins = 64;
  opts.trials = 2000;
  opts.out_path = dir.path("audit.json");
  std::ostringstream out, err;
  ASSERT_EQ(cmd_audit(out, err, opts), kExitOk) << err.str();
  EXPECT_NE(out.str().find("measured epsilon"), std::string::npos);
  const auto j = nlohmann::json::parse(slurp(opts.out_path));
  EXPECT_EQ(j["n_b"].get<uint64_t>(), 64u);
  EXPECT_TRUE(j.contains("epsilon_hat"));
}

// ---------------------------------------------------------------------------
// End-to-end through the real binary.

#ifdef VDP_CLI_BIN
TEST(BinaryEndToEndTest, RunVerifyExitCodes) {
  TempDir dir;
  const std::string bin = VDP_CLI_BIN;
  ASSERT_TRUE(fs::exists(bin)) << bin;
  const auto tpath = dir.path("t.json");

  auto sh = [](const std::string& cmd) {
    const int raw = std::system(cmd.c_str());
    return WEXITSTATUS(raw);
  };

  EXPECT_EQ(sh(bin + " run --group toy-zp61 --n 8 --coins 40 --seed 4 --out " + tpath +
               " > /dev/null"),
            0);
  EXPECT_EQ(sh(bin + " verify --in " + tpath + " > /dev/null"), 0);
  EXPECT_EQ(sh(bin + " run --group toy-zp61 --n 8 --coins 40 --seed 4 --out " + tpath +
               " --adversary prover0:morra_misreveal > /dev/null"),
            3);
  EXPECT_EQ(sh(bin + " params --epsilon 100 --delta 0.5 2> /dev/null"), 2);
  EXPECT_EQ(sh(bin + " params --epsilon 1.0 --delta 2^-10 > /dev/null"), 0);
  EXPECT_EQ(sh(bin + " nonsense 2> /dev/null"), 2);

  // a config file supplies defaults; flags still override
  const auto ini = dir.path("vdp.ini");
  const auto cfg_out = dir.path("cfg_run.json");
  std::ofstream(ini) << "[run]\nn=5\ncoins=40\ngroup=toy-zp61\nseed=9\nout=" << cfg_out << "\n";
  EXPECT_EQ(sh(bin + " --config " + ini + " run > /dev/null"), 0);
  EXPECT_EQ(sh(bin + " verify --in " + cfg_out + " > /dev/null"), 0);
}
#endif

}  // namespace
}  // namespace vdp::cli
