#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "projchan/cli.hpp"
#include "projchan/error.hpp"
#include "projchan/io.hpp"
#include "projchan/zoo.hpp"

using namespace projchan;
using io::Json;

namespace {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "projchan");
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Structural comparison: identical keys, strings and array lengths; numbers
/// within 1e-9 relative, so compiler-level rounding does not break goldens.
void expect_json_close(const Json& a, const Json& b, const std::string& path) {
  if (a.is_number() && b.is_number()) {
    const double x = a.get<double>();
    const double y = b.get<double>();
    EXPECT_LE(std::abs(x - y), 1e-9 * std::max(1.0, std::abs(y))) << path << ": " << x << " vs " << y;
    return;
  }
  ASSERT_EQ(a.type(), b.type()) << path;
  if (a.is_object()) {
    ASSERT_EQ(a.size(), b.size()) << path;
    for (auto it = b.begin(); it != b.end(); ++it) {
      ASSERT_TRUE(a.contains(it.key())) << path << "." << it.key();
      expect_json_close(a[it.key()], it.value(), path + "." + it.key());
    }
  } else if (a.is_array()) {
    ASSERT_EQ(a.size(), b.size()) << path;
    for (std::size_t i = 0; i < a.size(); ++i) expect_json_close(a[i], b[i], path + "[" + std::to_string(i) + "]");
  } else {
    EXPECT_EQ(a, b) << path;
  }
}

void check_golden(const std::string& name, const std::vector<std::string>& args) {
  const CliRun r = run(args);
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const std::filesystem::path file = std::filesystem::path("golden") / (name + ".json");
  const char* update = std::getenv("PROJCHAN_UPDATE_GOLDEN");
  if (update != nullptr && std::string(update) == "1") {
    std::ofstream(file) << r.out;
    return;
  }
  ASSERT_TRUE(std::filesystem::exists(file)) << file << " missing; rerun with PROJCHAN_UPDATE_GOLDEN=1";
  expect_json_close(Json::parse(r.out), Json::parse(slurp(file)), name);
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override { std::filesystem::current_path(PROJCHAN_TEST_DIR); }
};

template <class F>
void expect_error(ErrorKind kind, F&& f) {
  try {
    f();
    FAIL() << "expected " << error_kind_name(kind);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

}  // namespace

TEST_F(CliTest, GoldenValidate) { check_golden("validate_wh3", {"validate", "--file", "data/wh3.json"}); }
TEST_F(CliTest, GoldenZoo) { check_golden("zoo_pinch3", {"zoo", "--spec", "pinch:d=3,blocks=2+1"}); }
TEST_F(CliTest, GoldenZooList) { check_golden("zoo_list", {"zoo", "--list"}); }
TEST_F(CliTest, GoldenMinent) {
  check_golden("minent_wh3", {"--starts", "8", "minent", "--spec", "wh:d=3", "--alpha", "1"});
}
TEST_F(CliTest, GoldenMinentInfinity) {
  check_golden("minent_wh4_inf", {"--starts", "8", "minent", "--spec", "wh:d=4", "--alpha", "inf"});
}
TEST_F(CliTest, GoldenNorm) { check_golden("norm_casimir_reducible", {"--starts", "8", "norm", "--spec", "casimir-reducible"}); }
TEST_F(CliTest, GoldenCharacterize) {
  check_golden("characterize_weyl3", {"--starts", "8", "characterize", "--spec", "weyl:d=3"});
}
TEST_F(CliTest, GoldenAdditivity) {
  check_golden("additivity_wh3_pair",
               {"--starts", "8", "additivity", "--spec", "wh:d=3", "--spec", "wh:d=3", "--alpha", "2", "--check-lemma3", "20"});
}
TEST_F(CliTest, GoldenCapacity) {
  check_golden("capacity_casimir_reducible", {"--starts", "8", "capacity", "--spec", "casimir-reducible", "--group", "auto"});
}
TEST_F(CliTest, GoldenCapacityFromDiagonalFile) {
  check_golden("capacity_dephase3", {"--starts", "8", "capacity", "--spec", "diag:file=data/dephase3.json"});
}
TEST_F(CliTest, GoldenCovariance) {
  check_golden("covariance_weyl3", {"covariance", "--spec", "weyl:d=3", "--group", "phases", "--output-rep", "conj"});
}
TEST_F(CliTest, GoldenEof) { check_golden("eof_example9", {"--starts", "8", "eof", "--state", "example9"}); }
TEST_F(CliTest, GoldenEofFromFile) { check_golden("eof_bell", {"--starts", "4", "eof", "--state", "data/bell.json"}); }
TEST_F(CliTest, GoldenDilate) { check_golden("dilate_wh3", {"dilate", "--spec", "wh:d=3"}); }

TEST_F(CliTest, MinentReportsOneBitForWernerHolevo) {
  const CliRun r = run({"--starts", "8", "minent", "--spec", "wh:d=3", "--alpha", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_NEAR(j["result"]["value"].get<double>(), 1.0, 1e-6);
  EXPECT_EQ(j["manifest"]["command"], "minent");
  EXPECT_EQ(j["manifest"]["config"]["starts"], 8);
  EXPECT_EQ(j["manifest"]["config"]["seed"], 12648430);
  EXPECT_FALSE(j["manifest"].contains("wall_time_seconds"));
}

TEST_F(CliTest, CapacityOfCasimirReducibleIsOneBit) {
  const CliRun r = run({"--starts", "8", "capacity", "--spec", "casimir-reducible", "--group", "auto"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(Json::parse(r.out)["result"]["capacity"].get<double>(), 1.0, 1e-4);
}

TEST_F(CliTest, ValidateNonTracePreservingExitsTwo) {
  const CliRun r = run({"validate", "--file", "data/nontp.json"});
  EXPECT_EQ(r.code, cli::kExitValidation);
  const Json j = Json::parse(r.out);
  EXPECT_FALSE(j["result"]["flags"]["valid"].get<bool>());
  EXPECT_FALSE(j["result"]["flags"]["trace_preserving"].get<bool>());
}

TEST_F(CliTest, ParseErrorsExitTwo) {
  EXPECT_EQ(run({"validate", "--file", "data/missing_im.json"}).code, cli::kExitValidation);
  const CliRun syntax = run({"validate", "--file", "data/syntax.json"});
  EXPECT_EQ(syntax.code, cli::kExitValidation);
  EXPECT_NE(syntax.err.find("data/syntax.json:2:"), std::string::npos) << syntax.err;
}

TEST_F(CliTest, UsageErrorsExit64WithGrammar) {
  const CliRun none = run({});
  EXPECT_EQ(none.code, cli::kExitUsage);
  const CliRun missing = run({"minent"});
  EXPECT_EQ(missing.code, cli::kExitUsage);
  EXPECT_NE(missing.err.find("wh:d="), std::string::npos);
  EXPECT_EQ(run({"minent", "--spec", "wh:d=3", "--bogus"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"--format", "xml", "minent", "--spec", "wh:d=3"}).code, cli::kExitUsage);
}

TEST_F(CliTest, InvalidSpecExitsTwo) {
  const CliRun r = run({"minent", "--spec", "wh:d=1"});
  EXPECT_EQ(r.code, cli::kExitValidation);
  EXPECT_NE(r.err.find("SpecInvalid"), std::string::npos) << r.err;
  EXPECT_EQ(run({"minent", "--spec", "nonsense:d=3"}).code, cli::kExitValidation);
}

TEST_F(CliTest, CsvHasOneRowPerScalar) {
  const CliRun r = run({"--format", "csv", "--starts", "4", "minent", "--spec", "wh:d=3"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "metric,value");
  bool found = false;
  while (std::getline(in, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 1) << line;
    if (line.rfind("result.value,", 0) == 0) {
      found = true;
      EXPECT_NEAR(std::stod(line.substr(13)), 1.0, 1e-6);
    }
  }
  EXPECT_TRUE(found);
}

TEST_F(CliTest, OutFlagWritesFile) {
  const std::filesystem::path p = std::filesystem::temp_directory_path() / "projchan_cli_out.json";
  std::filesystem::remove(p);
  const CliRun r = run({"--out", p.string(), "dilate", "--spec", "wh:d=3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const Json j = Json::parse(slurp(p));
  EXPECT_EQ(j["result"]["isometry"]["env_dim"], 3);
  EXPECT_LE(j["result"]["residuals"]["isometry"].get<double>(), 1e-12);
  std::filesystem::remove(p);
}

TEST_F(CliTest, TimingFlagAddsWallTime) {
  const CliRun r = run({"--timing", "dilate", "--spec", "wh:d=3"});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(Json::parse(r.out)["manifest"].contains("wall_time_seconds"));
}

TEST_F(CliTest, RepeatedRunsAreByteIdentical) {
  const std::vector<std::string> args{"--starts", "8", "additivity", "--spec", "wh:d=3", "--spec", "wh:d=3", "--alpha", "5"};
  const CliRun a = run(args);
  const CliRun b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST_F(CliTest, ChannelFileRoundTrip) {
  const QuantumChannel loaded = io::load_channel("data/wh3.json");
  const QuantumChannel built = zoo::build(zoo::WernerHolevo{3}).channel;
  EXPECT_LE(max_abs(loaded.choi() - built.choi()), 1e-12);
  const QuantumChannel again = io::channel_from_json(Json::parse(io::dump_json(io::channel_to_json(loaded))));
  EXPECT_EQ(max_abs(again.choi() - loaded.choi()), 0.0);
}

TEST_F(CliTest, ChannelFileErrors) {
  expect_error(ErrorKind::ParseError, [] { io::load_channel("data/missing_im.json"); });
  expect_error(ErrorKind::ValidationError, [] { io::load_channel("data/baddims.json"); });
  expect_error(ErrorKind::ValidationError, [] { io::load_channel("data/nontp.json"); });
  expect_error(ErrorKind::ParseError, [] { io::load_channel("data/does_not_exist.json"); });
  EXPECT_NO_THROW(io::load_channel("data/nontp.json", false));
}

TEST_F(CliTest, SpecStrings) {
  EXPECT_TRUE(std::holds_alternative<zoo::WernerHolevo>(io::parse_spec("wh:d=3")));
  const auto pinch = std::get<zoo::Pinching>(io::parse_spec("pinch:d=3,blocks=2+1"));
  EXPECT_EQ(pinch.projections.size(), 2u);
  const auto sp = std::get<zoo::ShiftsPinching>(io::parse_spec("shiftpinch:d=4,K=1,2"));
  EXPECT_EQ(sp.K, (std::vector<std::size_t>{1, 2}));
  const auto stretch = std::get<zoo::Stretching>(io::parse_spec("stretch:d=3,lambda=0.25"));
  EXPECT_EQ(stretch.lambda, 0.25);
  const auto diag = std::get<zoo::Diagonal>(io::parse_spec("diag:file=data/dephase3.json"));
  EXPECT_EQ(diag.d, 3u);
  EXPECT_EQ(diag.diagonals.size(), 3u);
  expect_error(ErrorKind::SpecInvalid, [] { io::parse_spec("wh"); });
  expect_error(ErrorKind::SpecInvalid, [] { io::parse_spec("wh:d=3,x=1"); });
  expect_error(ErrorKind::SpecInvalid, [] { io::parse_spec("pinch:d=3,blocks=2+2"); });
}

TEST_F(CliTest, NumbersSerializeDeterministically) {
  Json j;
  j["b"] = io::number(1.0);
  j["a"] = io::number(0.1);
  j["c"] = io::number(-std::numeric_limits<double>::infinity());
  j["d"] = io::number(0.0);
  EXPECT_EQ(io::dump_json(j, -1), "{\"a\":0.10000000000000001,\"b\":1.0,\"c\":\"-inf\",\"d\":0.0}\n");
}
