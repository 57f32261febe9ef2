#include <gtest/gtest.h>

#include <sstream>

#include "dynoracle/cli.hpp"
#include "dynoracle/corpus_io.hpp"
#include "test_util.hpp"

namespace dynoracle {
namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "dynoracle");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string field(const std::string& line, const std::string& key) {
  const auto recs = read_records(line);
  if (recs.empty()) return {};
  const FieldValue* v = recs.front().find(key);
  if (!v) return {};
  if (auto s = std::get_if<std::string>(v)) return *s;
  return format_record(Record{}.add("v", *v)).substr(5, std::string::npos);
}

class CliTest : public ::testing::Test {
 protected:
  testing::TempDir dir;
};

TEST_F(CliTest, NoSubcommandIsAUsageError) { EXPECT_EQ(run({}).code, cli::kExitUsage); }

TEST_F(CliTest, HelpExitsZero) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_NE(r.out.find("score"), std::string::npos);
}

TEST_F(CliTest, UnknownMetricIsAUsageError) {
  const auto r = run({"score", "--metric", "meteor", "--ref", "a", "--hyp", "b"});
  EXPECT_EQ(r.code, cli::kExitUsage);
}

TEST_F(CliTest, MissingFileIsARuntimeError) {
  const auto r = run({"score", "--metric", "wer", "--ref", dir.file("none"), "--hyp",
                      dir.file("none2")});
  EXPECT_EQ(r.code, cli::kExitRuntime);
  EXPECT_NE(r.err.find("error"), std::string::npos);
}

TEST_F(CliTest, IdenticalBleuScoresOne) {
  const auto ref = dir.file("ref.txt", "the cat sat on the mat\nso we go home now\n");
  const auto r = run({"score", "--metric", "bleu4", "--ref", ref, "--hyp", ref});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"score\":1.000000"), std::string::npos) << r.out;
}

TEST_F(CliTest, WerPoolsDistanceOverReferenceTokens) {
  const auto ref = dir.file("ref.txt", "a b c\nd e\n");
  const auto hyp = dir.file("hyp.txt", "a b\nd x\n");
  const auto r = run({"score", "--metric", "wer", "--ref", ref, "--hyp", hyp});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"distance\":2"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("\"rate\":0.400000"), std::string::npos) << r.out;
}

TEST_F(CliTest, ConllPartialF1) {
  const auto ref = dir.file("ref.conll", "EU B-ORG\nrejects O\n\nPeter B-PER\nBlackburn I-PER\n");
  const auto hyp = dir.file("hyp.conll", "EU B-ORG\nrejects O\n\nPeter B-PER\nBlackburn O\n");
  const auto exact = run({"score", "--metric", "f1-exact", "--ref", ref, "--hyp", hyp});
  const auto partial = run({"score", "--metric", "f1-partial", "--ref", ref, "--hyp", hyp});
  ASSERT_EQ(exact.code, 0) << exact.err;
  EXPECT_NE(exact.out.find("\"f1\":0.500000"), std::string::npos) << exact.out;
  EXPECT_NE(partial.out.find("\"f1\":1.000000"), std::string::npos) << partial.out;
}

TEST_F(CliTest, BadConllTagReportsLine) {
  const auto ref = dir.file("ref.conll", "EU B-ORG\nrejects Q-X\n");
  const auto r = run({"score", "--metric", "f1-exact", "--ref", ref, "--hyp", ref});
  EXPECT_EQ(r.code, cli::kExitRuntime);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
}

TEST_F(CliTest, RougeWithConllInput) {
  const auto ref = dir.file("ref.conll", "a O\nb O\nc O\n");
  const auto r = run({"score", "--metric", "rouge1", "--conll", "--ref", ref, "--hyp", ref});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"score\":1.000000"), std::string::npos);
}

TEST_F(CliTest, OracleBeamExample) {
  const auto gold = dir.file("gold.txt", "a b c d\n");
  const auto prefix = dir.file("prefix.txt", "a c\n");
  const auto r = run({"oracle", "--metric", "rouge2", "--gold", gold, "--prefix", prefix,
                      "--beam-size", "16", "--beam-length", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(field(r.out, "next"), "d");
  EXPECT_EQ(field(r.out, "source"), "beam");
}

TEST_F(CliTest, OracleOnFullGoldPrefixSaysEnd) {
  const auto gold = dir.file("gold.txt", "a b\n");
  const auto r = run({"oracle", "--metric", "bleu4", "--gold", gold, "--prefix", gold});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(field(r.out, "next"), "<end>");
}

TEST_F(CliTest, OracleWerAndTags) {
  const auto gold = dir.file("gold.txt", "a b\n");
  const auto prefix = dir.file("prefix.txt", "b\n");
  const auto w = run({"oracle", "--metric", "wer", "--gold", gold, "--prefix", prefix});
  ASSERT_EQ(w.code, 0) << w.err;
  EXPECT_EQ(field(w.out, "next"), "b");

  const auto tg = dir.file("tg.txt", "O B-LOC I-LOC\n");
  const auto tp = dir.file("tp.txt", "B-LOC\n");
  const auto t = run({"oracle", "--metric", "f1-partial", "--gold", tg, "--prefix", tp});
  ASSERT_EQ(t.code, 0) << t.err;
  EXPECT_EQ(field(t.out, "next"), "I-LOC");
  EXPECT_EQ(field(t.out, "completion"), "I-LOC I-LOC");
}

TEST_F(CliTest, OracleLineCountMismatchIsARuntimeError) {
  const auto gold = dir.file("gold.txt", "a b\nc\n");
  const auto prefix = dir.file("prefix.txt", "a\n");
  EXPECT_EQ(run({"oracle", "--metric", "wer", "--gold", gold, "--prefix", prefix}).code,
            cli::kExitRuntime);
}

TEST_F(CliTest, VerifyWritesAReportAndExitsZeroOnPass) {
  const auto out = dir.file("report.jsonl");
  const auto r = run({"verify", "--oracle", "wer", "--exhaustive", "--alphabet", "2",
                      "--max-len", "3", "--out", out, "--jobs", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto recs = read_records(read_file(out));
  ASSERT_FALSE(recs.empty());
  EXPECT_EQ(std::get<bool>(*recs[0].find("passed")), true);
  EXPECT_EQ(format_record(recs[0]) + "\n", r.out);
}

TEST_F(CliTest, VerifyFailureExitsOneAndNamesTheReport) {
  // The partial-F1 gate is known to fail on this many random states.
  const auto out = dir.file("report.jsonl");
  const auto r = run({"verify", "--oracle", "f1-partial", "--cases", "3000", "--out", out});
  ASSERT_EQ(r.code, cli::kExitRuntime);
  EXPECT_NE(r.err.find(out), std::string::npos);
}

TEST_F(CliTest, SimulateSyntheticWritesTable) {
  const auto out = dir.file("trend.jsonl");
  const auto recs_path = dir.file("records.jsonl");
  const auto r = run({"simulate", "--synthetic", "12", "--corruption", "0.3,0.02",
                      "--beam-sizes", "2,4", "--out", out, "--records", recs_path});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_records(read_file(out)).size(), 4u);
  EXPECT_EQ(read_records(read_file(recs_path)).size(), 12u * 4);
  EXPECT_EQ(read_file(out), r.out);
}

TEST_F(CliTest, SimulateFromCorpusFile) {
  const auto corpus = dir.file("corpus.txt", "the cat sat on the mat\n\nso we go home now\n");
  const auto r = run({"simulate", "--corpus", corpus, "--corruption", "0.1",
                      "--beam-sizes", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"records\":2"), std::string::npos) << r.out;
}

TEST_F(CliTest, SimulateNeedsACorpus) {
  EXPECT_EQ(run({"simulate"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"simulate", "--synthetic", "3", "--corpus", "x"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"simulate", "--synthetic", "3", "--corruption", "1.5"}).code,
            cli::kExitUsage);
}

TEST_F(CliTest, SimulateIsSeedDeterministic) {
  const auto a = run({"simulate", "--synthetic", "10", "--seed", "4", "--jobs", "1"});
  const auto b = run({"simulate", "--synthetic", "10", "--seed", "4", "--jobs", "3"});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

}  // namespace
}  // namespace dynoracle
