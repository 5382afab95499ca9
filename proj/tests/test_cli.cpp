#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "rcp/cli/config.hpp"
#include "rcp/cli/csv.hpp"
#include "rcp/cli/experiments.hpp"
#include "rcp/errors.hpp"
#include "rcp/graphical/dump.hpp"
#include "rcp/renorm/recurrence.hpp"

using namespace rcp;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("rcp_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  out << s;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(RCP_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ExperimentConfig with_workers(json j, int workers) {
  j["workers"] = workers;
  return parse_config(j);
}

}  // namespace

TEST(Config, UnknownTopLevelKey) {
  try {
    parse_config(json{{"kind", "lambda0"}, {"colour", 1}});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("colour"), std::string::npos);
  }
}

TEST(Config, UnknownParamKey) {
  EXPECT_THROW(parse_config(json{{"kind", "lambda0"}, {"params", {{"depth", 3}}}}), ConfigError);
}

TEST(Config, WrongTypesAndRanges) {
  EXPECT_THROW(parse_config(json{{"kind", "survival-curve"}, {"trials", -5}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"kind", "survival-curve"}, {"trials", "many"}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"kind", "crossing"}, {"params", {{"n", "two"}}}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"kind", "nope"}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"kind", "lambda0"}, {"lambda", 1.0}, {"lambdas", {1.0}}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"kind", "lambda0"}, {"law", {{"family", "Nope"}}}}), ConfigError);
}

TEST(Config, DefaultsMerged) {
  const auto c = parse_config(json{{"kind", "recurrence"}, {"params", {{"theta", 3.0}}}});
  EXPECT_EQ(c.params["theta"], 3.0);
  EXPECT_EQ(c.params["steps"], 50);
  EXPECT_EQ(c.output, "recurrence");
  EXPECT_EQ(kind_names().size(), 11u);
}

TEST(Config, SeedPrecedence) {
  auto c = parse_config(json{{"kind", "lambda0"}, {"seed", 3}});
  ::unsetenv("RCP_SEED");
  apply_seed_overrides(c, std::nullopt);
  EXPECT_EQ(c.seed, 3u);
  ::setenv("RCP_SEED", "11", 1);
  apply_seed_overrides(c, std::nullopt);
  EXPECT_EQ(c.seed, 11u);
  apply_seed_overrides(c, 99);
  EXPECT_EQ(c.seed, 99u);
  ::setenv("RCP_SEED", "zz", 1);
  auto d = parse_config(json{{"kind", "lambda0"}});
  EXPECT_THROW(apply_seed_overrides(d, std::nullopt), ConfigError);
  ::unsetenv("RCP_SEED");
}

TEST(Csv, ChecksumLine) {
  CsvTable t({"a", "b"});
  t.row({cell(1.5), cell(true)});
  const std::string s = t.render();
  EXPECT_EQ(s.rfind("a,b\n1.5,1\n# checksum fnv1a64=", 0), 0u);
  EXPECT_TRUE(verify_csv_checksum(s));
  std::string tampered = s;
  tampered[4] = '7';
  EXPECT_FALSE(verify_csv_checksum(tampered));
  EXPECT_THROW(t.row({"1"}), DomainError);
}

TEST(Csv, NumberFormatting) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_double(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(format_double(std::nan("")), "nan");
}

TEST(Csv, AtomicWriteReplaces) {
  const auto dir = scratch("atomic");
  const auto p = dir / "x.csv";
  write_atomic(p.string(), "one\n");
  write_atomic(p.string(), "two\n");
  EXPECT_EQ(slurp(p), "two\n");
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir)) files += e.is_regular_file();
  EXPECT_EQ(files, 1u);
}

TEST(Experiments, SurvivalCurveShape) {
  const auto c = parse_config(json{{"kind", "survival-curve"},
                                   {"lambdas", {0.3, 3.0}},
                                   {"law", {{"family", "Exponential"}, {"rate", 1.0}}},
                                   {"trials", 50},
                                   {"radius", 20},
                                   {"horizon", 10.0}});
  const auto out = run_experiment(c);
  EXPECT_EQ(out.csv.header(),
            (std::vector<std::string>{"lambda", "estimate", "ci_lo", "ci_hi", "boundary_hits", "trials"}));
  EXPECT_EQ(out.csv.rows(), 2u);
}

TEST(Experiments, Lambda0MatchesBound) {
  const auto out = run_experiment(parse_config(json{{"kind", "lambda0"}}));
  const auto s = make_schedule(derive_constants(1, 2.5));
  const auto st = default_recurrence_state(1, 1.0);
  const auto b = lambda0_bound(s, st, *find_n0(s, st));
  EXPECT_EQ(out.summary["n0"], b.n0);
  EXPECT_TRUE(out.summary.contains("b_n0"));
  EXPECT_TRUE(out.summary.contains("N"));
  EXPECT_EQ(out.summary["lambda0_positive"], true);
  EXPECT_DOUBLE_EQ(out.summary["log_lambda0"].get<double>(), b.log_lambda0);
}

TEST(Experiments, ByteIdenticalAcrossWorkers) {
  const std::vector<json> configs{
      {{"kind", "survival-curve"}, {"lambdas", {0.5, 2.0}}, {"trials", 60}, {"radius", 15}, {"horizon", 15.0}},
      {{"kind", "crossing"}, {"lambda", 0.05}, {"trials", 80}, {"law", {{"family", "ParetoTail"}, {"alpha", 0.7}, {"scale", 1.0}}}},
      {{"kind", "determinism"}, {"lambda", 0.8}, {"params", {{"t", 5.0}, {"fields", 6}, {"replicates", 10}, {"radius", 6}}}},
  };
  for (const auto& j : configs) {
    const std::string a = run_experiment(with_workers(j, 1)).csv.render();
    const std::string b = run_experiment(with_workers(j, 3)).csv.render();
    EXPECT_EQ(a, b) << j.dump();
    EXPECT_TRUE(verify_csv_checksum(a));
  }
}

TEST(Experiments, ExitCodes) {
  EXPECT_EQ(exit_code_for(std::make_exception_ptr(ConfigError("x"))), 2);
  EXPECT_EQ(exit_code_for(std::make_exception_ptr(CapacityError("x"))), 3);
  EXPECT_EQ(exit_code_for(std::make_exception_ptr(PreconditionError("x"))), 4);
  EXPECT_EQ(exit_code_for(std::make_exception_ptr(FormatError("x"))), 5);
  EXPECT_EQ(exit_code_for(std::make_exception_ptr(std::runtime_error("x"))), 1);
}

TEST(Experiments, ReplayMatchesDumpedRuns) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto c = parse_config(json{{"kind", "sample-dump"},
                                     {"seed", seed},
                                     {"lambda", 1.2},
                                     {"radius", 4},
                                     {"horizon", 6.0},
                                     {"d", 1 + static_cast<int>(seed % 2)},
                                     {"law", {{"family", "ParetoTail"}, {"alpha", 0.6}, {"scale", 0.5}}}});
    const auto out = run_experiment(c);
    std::string dump, evolve, crossing;
    for (const auto& [suffix, content] : out.extra) {
      if (suffix == ".rcpg") dump = content;
      if (suffix == "_evolve.csv") evolve = content;
      if (suffix == "_crossing.csv") crossing = content;
    }
    ASSERT_FALSE(dump.empty());
    const auto sample = deserialize_sample(std::vector<std::uint8_t>(dump.begin(), dump.end()));
    EXPECT_EQ(replay_csv(sample, "evolve"), evolve) << seed;
    EXPECT_EQ(replay_csv(sample, "crossing"), crossing) << seed;
  }
}

TEST(Binary, NegativeTrialsExitTwoWithoutOutput) {
  const auto dir = scratch("bad_config");
  spit(dir / "c.json", R"({"kind": "survival-curve", "trials": -1})");
  const auto out = dir / "out";
  EXPECT_EQ(run_cli("--config " + (dir / "c.json").string() + " --out " + out.string()), 2);
  EXPECT_FALSE(fs::exists(out) && !fs::is_empty(out));
}

TEST(Binary, MissingConfigFileExitTwo) {
  EXPECT_EQ(run_cli("--config /nonexistent/c.json"), 2);
}

TEST(Binary, PreconditionExitFour) {
  const auto dir = scratch("precondition");
  spit(dir / "c.json", R"({"kind": "recurrence", "params": {"theta": 2.0}})");
  EXPECT_EQ(run_cli("--config " + (dir / "c.json").string() + " --out " + dir.string()), 4);
}

TEST(Binary, CapacityExitThree) {
  const auto dir = scratch("capacity");
  spit(dir / "c.json",
       R"({"kind": "survival-curve", "radius": 100000, "horizon": 1000, "trials": 1, "params": {"mark_budget": 1000}})");
  EXPECT_EQ(run_cli("--config " + (dir / "c.json").string() + " --out " + dir.string()), 3);
}

TEST(Binary, RunWritesCsvAndSidecar) {
  const auto dir = scratch("run");
  spit(dir / "c.json", R"({"kind": "lambda0", "output": "l0"})");
  ASSERT_EQ(run_cli("--config " + (dir / "c.json").string() + " --out " + dir.string()), 0);
  const std::string csv = slurp(dir / "l0.csv");
  EXPECT_TRUE(verify_csv_checksum(csv));
  const json side = json::parse(slurp(dir / "l0.json"));
  EXPECT_TRUE(side.contains("config"));
  EXPECT_TRUE(side.contains("provenance"));
  EXPECT_EQ(side["summary"]["lambda0_positive"], true);
}

TEST(Binary, SeedFlagWinsAndWorkerCountIsInvisible) {
  const auto dir = scratch("seed");
  spit(dir / "c.json", R"({"kind": "survival-curve", "lambdas": [1.5], "trials": 40, "radius": 10, "horizon": 10, "seed": 1})");
  ASSERT_EQ(run_cli("--config " + (dir / "c.json").string() + " --seed 7 --workers 1 --out " + (dir / "a").string()), 0);
  ASSERT_EQ(run_cli("--config " + (dir / "c.json").string() + " --seed 7 --workers 2 --out " + (dir / "b").string()), 0);
  EXPECT_EQ(slurp(dir / "a" / "survival-curve.csv"), slurp(dir / "b" / "survival-curve.csv"));
  const json side = json::parse(slurp(dir / "a" / "survival-curve.json"));
  EXPECT_EQ(side["config"]["seed"], 7);
}

TEST(Binary, ReplayRoundTrip) {
  const auto dir = scratch("replay");
  spit(dir / "c.json", R"({"kind": "sample-dump", "output": "s", "lambda": 1.0, "radius": 3, "horizon": 5})");
  ASSERT_EQ(run_cli("--config " + (dir / "c.json").string() + " --out " + dir.string()), 0);
  const auto again = dir / "again";
  for (const std::string cmd : {"evolve", "crossing"}) {
    ASSERT_EQ(run_cli("replay --dump " + (dir / "s.rcpg").string() + " --command " + cmd + " --out " + again.string()), 0);
    EXPECT_EQ(slurp(again / ("s_" + cmd + ".csv")), slurp(dir / ("s_" + cmd + ".csv"))) << cmd;
  }
}

TEST(Binary, CorruptAndEmptyDumpsExitFive) {
  const auto dir = scratch("corrupt");
  spit(dir / "c.json", R"({"kind": "sample-dump", "output": "s", "lambda": 1.0, "radius": 3, "horizon": 5})");
  ASSERT_EQ(run_cli("--config " + (dir / "c.json").string() + " --out " + dir.string()), 0);
  std::string bytes = slurp(dir / "s.rcpg");
  bytes[1] = 'Z';
  spit(dir / "bad.rcpg", bytes);
  spit(dir / "empty.rcpg", "");
  EXPECT_EQ(run_cli("replay --dump " + (dir / "bad.rcpg").string() + " --out " + dir.string()), 5);
  EXPECT_EQ(run_cli("replay --dump " + (dir / "empty.rcpg").string() + " --out " + dir.string()), 5);
}
