#include <gtest/gtest.h>

#include <algorithm>

#include "dynoracle/sim_harness.hpp"
#include "test_util.hpp"

namespace dynoracle {
namespace {

using testing::random_tokens;
using testing::toks;

std::vector<std::string> words(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

TEST(Corrupt, ZeroPolicyIsIdentity) {
  const auto gold = toks("abcdefg");
  EXPECT_EQ(corrupt(gold, CorruptionPolicy{0, 0, 0, 9}), gold);
}

TEST(Corrupt, AlwaysDropEmptiesTheSequence) {
  EXPECT_TRUE(corrupt(toks("abcdefg"), CorruptionPolicy{1, 0, 0, 9}).empty());
}

TEST(Corrupt, SameSeedSameOutput) {
  const auto gold = toks("abcdefghij");
  const auto policy = CorruptionPolicy::at_level(0.3, 5);
  EXPECT_EQ(corrupt(gold, policy), corrupt(gold, policy));
}

TEST(Corrupt, AlwaysInsertDoublesTheLength) {
  const auto gold = toks("abcd");
  const auto out = corrupt(gold, CorruptionPolicy{0, 0, 1, 3});
  ASSERT_EQ(out.size(), 8u);
  for (std::size_t i = 0; i < gold.size(); ++i) EXPECT_EQ(out[2 * i], gold[i]);
}

TEST(Corrupt, SubstitutesDrawFromGoldUnigrams) {
  Rng rng(81);
  for (int trial = 0; trial < 200; ++trial) {
    const auto gold = random_tokens(rng, 1 + rng.below(10), 5);
    const auto out = corrupt(gold, CorruptionPolicy{0.2, 0.5, 0.3, rng.next()});
    for (TokenId t : out) EXPECT_NE(std::find(gold.begin(), gold.end(), t), gold.end());
  }
}

TEST(Corrupt, RejectsProbabilitiesOutsideUnitInterval) {
  EXPECT_THROW(corrupt(toks("ab"), CorruptionPolicy{1.5, 0, 0, 0}), std::invalid_argument);
  EXPECT_THROW(corrupt(toks("ab"), CorruptionPolicy{0, -0.1, 0, 0}), std::invalid_argument);
}

TEST(Corrupt, AtLevelSetsAllThree) {
  const auto p = CorruptionPolicy::at_level(0.1, 4);
  EXPECT_EQ(p.p_drop, 0.1);
  EXPECT_EQ(p.p_substitute, 0.1);
  EXPECT_EQ(p.p_insert, 0.1);
  EXPECT_EQ(p.seed, 4u);
}

TEST(CompareOnce, ZeroCorruptionHasZeroDelta) {
  const auto gold = toks("abcdefgh");
  BeamConfig cfg;
  for (std::size_t cut = 0; cut <= gold.size(); ++cut) {
    const auto rec = compare_once(gold, CorruptionPolicy{0, 0, 0, 1}, cut, cfg);
    EXPECT_EQ(rec.delta, 0.0);
    EXPECT_EQ(rec.source, SupervisionSource::GoldCopy);
  }
}

TEST(CompareOnce, DroppedWordGivesPositiveDelta) {
  Vocab v;
  const auto gold = v.encode(words("so we should submit the conference paper by midnight"));
  TokenSeq want = gold;
  want.erase(want.begin() + 4);
  // First seed whose drop-only policy removes exactly "the".
  CorruptionPolicy policy{0.15, 0, 0, 0};
  while (corrupt(gold, policy) != want) {
    ++policy.seed;
    ASSERT_LT(policy.seed, 100000u);
  }
  const auto rec = compare_once(gold, policy, 7, BeamConfig{});
  EXPECT_GT(rec.delta, 0.0);
  EXPECT_EQ(rec.source, SupervisionSource::Beam);
}

TEST(CompareOnce, DeltaIsNeverNegative) {
  Rng rng(82);
  BeamConfig cfg;
  for (int trial = 0; trial < 500; ++trial) {
    const auto gold = random_tokens(rng, 1 + rng.below(12), 8);
    const auto policy = CorruptionPolicy::at_level(0.05 * rng.below(7), rng.next());
    const auto noisy = corrupt(gold, policy);
    const std::size_t cut = rng.below(noisy.size() + 1);
    cfg.beam_size = 1 + rng.below(6);
    const auto rec = compare_once(gold, policy, cut, cfg);
    ASSERT_GE(rec.delta, 0.0);
    ASSERT_EQ(rec.delta, rec.oracle_score - rec.gold_copy_score);
    ASSERT_EQ(rec.cut, cut);
    ASSERT_EQ(rec.beam_size, cfg.beam_size);
  }
}

TEST(CompareOnce, RejectsCutPastTheCorruptedLength) {
  EXPECT_THROW(compare_once(toks("abc"), CorruptionPolicy{0, 0, 0, 0}, 4, BeamConfig{}),
               std::invalid_argument);
}

TEST(TrendReport, SingleCleanSentenceHasZeroDeltas) {
  SweepConfig cfg;
  cfg.corruption_levels = {0.0};
  const auto result = trend_report({toks("abcdefghij")}, cfg);
  for (const auto& r : result.records) EXPECT_EQ(r.delta, 0.0);
  for (const auto& row : result.table.rows) {
    EXPECT_EQ(row.mean_delta, 0.0);
    EXPECT_EQ(row.frac_improved, 0.0);
  }
}

TEST(TrendReport, IsDeterministicAndJobIndependent) {
  const auto corpus = synthetic_corpus(30, 3);
  SweepConfig cfg;
  cfg.seed = 3;
  cfg.jobs = 1;
  const auto a = trend_report(corpus, cfg);
  cfg.jobs = 4;
  const auto b = trend_report(corpus, cfg);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i)
    EXPECT_EQ(format_record(to_record(a.records[i])), format_record(to_record(b.records[i])));
  ASSERT_EQ(a.table.rows.size(), 6u);
  for (std::size_t i = 0; i < a.table.rows.size(); ++i)
    EXPECT_EQ(format_record(to_record(a.table.rows[i])), format_record(to_record(b.table.rows[i])));
}

TEST(TrendReport, TableAggregatesRecords) {
  const auto corpus = synthetic_corpus(20, 4);
  SweepConfig cfg;
  cfg.seed = 4;
  const auto result = trend_report(corpus, cfg);
  EXPECT_EQ(result.records.size(), 20u * 3 * 2);
  for (const auto& row : result.table.rows) {
    EXPECT_EQ(row.records, 20u);
    EXPECT_GE(row.frac_improved, 0.0);
    EXPECT_LE(row.frac_improved, 1.0);
    double sum = 0;
    int improved = 0;
    for (const auto& r : result.records) {
      if (r.corruption != row.corruption || r.beam_size != row.beam_size) continue;
      sum += r.delta;
      improved += r.delta > 0;
    }
    EXPECT_NEAR(row.mean_delta, sum / 20, 1e-12);
    EXPECT_NEAR(row.frac_improved, improved / 20.0, 1e-12);
  }
  EXPECT_THROW(result.table.at(0.5, 5), std::out_of_range);
  EXPECT_EQ(result.table.at(0.1, 20).beam_size, 20u);
}

TEST(TrendReport, BeamColumnsShareTheirPrefixes) {
  const auto corpus = synthetic_corpus(10, 6);
  SweepConfig cfg;
  cfg.seed = 6;
  const auto result = trend_report(corpus, cfg);
  for (const auto& a : result.records)
    for (const auto& b : result.records)
      if (a.sentence_id == b.sentence_id && a.corruption == b.corruption) {
        EXPECT_EQ(a.cut, b.cut);
        EXPECT_EQ(a.gold_copy_score, b.gold_copy_score);
      }
}

TEST(SyntheticCorpus, RespectsLengthBoundsAndSeed) {
  const auto a = synthetic_corpus(50, 1, 60, 8, 20);
  ASSERT_EQ(a.size(), 50u);
  for (const auto& s : a) {
    EXPECT_GE(s.size(), 8u);
    EXPECT_LE(s.size(), 20u);
    for (TokenId t : s) EXPECT_LT(t, 60u);
  }
  EXPECT_EQ(a, synthetic_corpus(50, 1, 60, 8, 20));
  EXPECT_NE(a, synthetic_corpus(50, 2, 60, 8, 20));
}

}  // namespace
}  // namespace dynoracle
