#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "freeshift/cli.hpp"
#include "freeshift/config.hpp"
#include "freeshift/contraction.hpp"
#include "freeshift/io.hpp"

namespace freeshift {
namespace {

using io::Json;

const GeneratorSet kF2 = GeneratorSet::free_rank2();

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("freeshift_test_" + name);
}

TEST(Json, WordRoundTrip) {
  const Word g = parse_word("a b' a", kF2);
  EXPECT_EQ(io::word_to_json(g, kF2), Json::parse(R"(["a", "b'", "a"])"));
  EXPECT_EQ(io::word_to_json(Word(2), kF2), Json::array());
  for (const auto& h : ball_enumerate(kF2, 3)) {
    EXPECT_EQ(io::word_from_json(io::word_to_json(h, kF2), kF2), h);
  }
}

TEST(Json, LabelsAndMeasure) {
  const RunLabel r({{1, 2}, {3, 1}});
  EXPECT_EQ(io::label_to_json(r), Json::parse("[[1, 2], [3, 1]]"));
  EXPECT_EQ(io::run_from_json(io::label_to_json(r)), r);
  EXPECT_EQ(io::pair_from_json(Json::parse("[2, 1]")), (SymbolPair{2, 1}));
  const MeasureSpec m(MeasureKind::plain, {0.25, 0.75});
  const MeasureSpec back = io::measure_from_json(io::measure_to_json(m));
  EXPECT_EQ(back.kind(), MeasureKind::plain);
  EXPECT_EQ(back.law(), m.law());
}

TEST(Json, BallRoundTripPreservesIsomorphismClass) {
  const LazyConfig x(3, MeasureSpec::uniform(MeasureKind::pair, 3));
  const FiniteBall b = ball(network_from_config(x, kF2), 2);
  const FiniteBall back = io::ball_from_json(io::ball_to_json(b));
  EXPECT_EQ(back.vertices, b.vertices);
  EXPECT_EQ(back.edges, b.edges);
  EXPECT_TRUE(ball_isomorphic(b, back));

  const IidRunField z(4, 2);
  const FiniteBall rb = ball(network_from_runs(z), 1);
  const FiniteBall rback = io::ball_from_json(io::ball_to_json(rb));
  EXPECT_TRUE(ball_isomorphic(rb, rback));
}

TEST(Json, ReportRoundTrip) {
  TestReport r;
  r.test = "t";
  r.window = {"e", "a"};
  r.trials = 10;
  r.aborts = 1;
  r.scans = 100;
  r.statistic_name = "tv";
  r.statistic = 0.125;
  r.threshold = 0.5;
  r.pass = true;
  r.seed_base = 9;
  const TestReport back = io::report_from_json(io::report_to_json(r));
  EXPECT_EQ(io::report_to_json(back), io::report_to_json(r));
  EXPECT_DOUBLE_EQ(back.abort_rate(), 0.01);
  EXPECT_TRUE(back.degraded());
}

TEST(Cli, ExactCheckExamples) {
  EXPECT_EQ(run({"rewire", "verify", "--checks", "involution", "--trials", "10", "--seed", "1"}).code,
            kExitPass);
  const CliResult tree = run({"contract", "verify", "--checks", "tree", "--trials", "5"});
  EXPECT_EQ(tree.code, kExitPass) << tree.err;
  const Json j = Json::parse(tree.out);
  ASSERT_EQ(j["reports"].size(), 1u);
  EXPECT_EQ(j["reports"][0]["trials"], 5);
  EXPECT_EQ(j["reports"][0]["statistic"], 0.0);
  EXPECT_TRUE(j["pass"].get<bool>());
}

TEST(Cli, Aliases) {
  EXPECT_EQ(run({"oe13", "verify", "--checks", "lemma35", "--trials", "3"}).code, kExitPass);
  EXPECT_EQ(run({"soe14", "verify", "--checks", "involution", "--trials", "3"}).code, kExitPass);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({"rewire", "verify", "--bogus"}).code, kExitUsage);
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"rewire", "verify", "--checks", "nonsense", "--trials", "1"}).code, kExitUsage);
  EXPECT_EQ(run({"sample", "--law", "0.5,0.6"}).code, kExitUsage);
  EXPECT_EQ(run({"sample", "--law", "x,y"}).code, kExitUsage);
  EXPECT_EQ(run({"contract", "apply", "--law", "0.3,0.7"}).code, kExitUsage);
  EXPECT_EQ(run({"--help"}).code, kExitPass);
}

TEST(Cli, IoErrors) {
  EXPECT_EQ(run({"sample", "--out", "/nonexistent/dir/x.json"}).code, kExitIo);
  EXPECT_EQ(run({"report", "--in", "/nonexistent/report.json"}).code, kExitIo);
  EXPECT_EQ(run({"contract", "invert", "--in", "/nonexistent/z.json"}).code, kExitIo);
}

TEST(Cli, DeterministicOutput) {
  const std::vector<std::string> args{"rewire", "apply", "--seed", "1", "--radius", "2", "--alphabet-size", "3"};
  const CliResult a = run(args);
  const CliResult b = run(args);
  EXPECT_EQ(a.code, kExitPass);
  EXPECT_EQ(a.out, b.out);
  const Json j = Json::parse(a.out);
  EXPECT_EQ(j["window"].size(), 17u);
  // The a-ray is fixed by the rewiring.
  EXPECT_EQ(j["window"][1]["word"], Json::parse(R"(["a"])"));
  EXPECT_EQ(j["window"][1]["rewired"], j["window"][1]["x"]);
}

TEST(Cli, BudgetAbortIsDegraded) {
  // This seed has a bracket scan longer than the default budget near the root.
  const std::vector<std::string> args{"rewire", "apply", "--seed", "11", "--radius", "2", "--alphabet-size", "3"};
  const CliResult a = run(args);
  EXPECT_EQ(a.code, kExitDegraded);
  EXPECT_NE(a.err.find("budget"), std::string::npos);
  EXPECT_EQ(run(args).code, kExitDegraded);
}

TEST(Cli, SampleMatchesLibrary) {
  const CliResult r = run({"sample", "--seed", "5", "--radius", "1", "--law", "0.2,0.8"});
  ASSERT_EQ(r.code, kExitPass);
  const LazyConfig x(5, MeasureSpec(MeasureKind::pair, {0.2, 0.8}));
  const Json sampled = Json::parse(r.out);
  for (const auto& entry : sampled["window"]) {
    const Word g = io::word_from_json(entry["word"], kF2);
    EXPECT_EQ(io::pair_from_json(entry["label"]), x.at(g));
  }
}

TEST(Cli, ApplyInvertRoundTrip) {
  const auto path = temp_path("apply.json");
  const CliResult apply =
      run({"contract", "apply", "--seed", "4", "--fradius", "3", "--out", path.string()});
  ASSERT_EQ(apply.code, kExitPass) << apply.err;
  std::ifstream f(path);
  const Json applied = Json::parse(f);
  const CliResult inv = run({"contract", "invert", "--in", path.string(), "--radius", "1"});
  ASSERT_NE(inv.code, kExitUsage) << inv.err;
  const LazyConfig y(applied["accepted_seed"].get<std::uint64_t>(),
                     MeasureSpec::uniform(MeasureKind::pair, 2));
  std::size_t resolved = 0;
  const Json inverted = Json::parse(inv.out);
  for (const auto& entry : inverted["window"]) {
    if (entry["label"].is_null()) continue;
    ++resolved;
    const Word g = io::word_from_json(entry["word"], kF2);
    EXPECT_EQ(io::pair_from_json(entry["label"]), y.at(g));
  }
  EXPECT_GE(resolved, 1u);
  std::filesystem::remove(path);
}

TEST(Cli, MeasureTestAndReport) {
  const auto path = temp_path("measure.json");
  const auto csv = temp_path("measure.csv");
  const CliResult m = run({"measure-test", "--suite", "calibration", "--trials", "4000", "--batches",
                           "2", "--tv-threshold", "0.2", "--out", path.string()});
  EXPECT_NE(m.code, kExitUsage) << m.err;
  const CliResult r = run({"report", "--in", path.string(), "--out", csv.string()});
  EXPECT_EQ(r.code, m.code);
  const Json summary = Json::parse(r.out);
  EXPECT_EQ(summary["reports"].get<std::size_t>(), Json::parse(std::ifstream(path))["reports"].size());
  std::ifstream c(csv);
  std::string header;
  std::getline(c, header);
  EXPECT_NE(header.find("test"), std::string::npos);
  std::filesystem::remove(path);
  std::filesystem::remove(csv);
  EXPECT_EQ(run({"measure-test", "--suite", "bogus", "--trials", "10"}).code, kExitUsage);
}

}  // namespace
}  // namespace freeshift
