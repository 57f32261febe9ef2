#pragma once

#include <cstdint>
#include <vector>

#include "dynoracle/corpus_io.hpp"
#include "dynoracle/oracle_approx.hpp"
#include "dynoracle/seq_core.hpp"

namespace dynoracle {

// Stand-in for a model's own prefix. For each gold position, in order:
//   1. drop the token with probability p_drop;
//   2. otherwise replace it, with probability p_substitute, by a gold unigram
//      drawn uniformly (possibly itself);
//   3. then insert a uniformly drawn gold unigram with probability p_insert.
// Three uniforms are drawn per position whatever happens, so the stream is
// fixed by the seed and the gold length.
struct CorruptionPolicy {
  double p_drop = 0.0;
  double p_substitute = 0.0;
  double p_insert = 0.0;
  std::uint64_t seed = 0;

  // All three probabilities set to `level`.
  static CorruptionPolicy at_level(double level, std::uint64_t seed);
};

// Throws std::invalid_argument for probabilities outside [0, 1].
TokenSeq corrupt(TokenView gold, const CorruptionPolicy& policy);

struct ComparisonRecord {
  std::size_t sentence_id = 0;
  double corruption = 0.0;
  std::size_t cut = 0;
  std::size_t beam_size = 0;
  double gold_copy_score = 0.0;
  double oracle_score = 0.0;  // score of the chosen supervision
  double delta = 0.0;         // oracle_score - gold_copy_score, never negative
  SupervisionSource source = SupervisionSource::GoldCopy;
};

// Prefix = corrupt(gold)[0:cut]. Throws if cut exceeds the corrupted length.
ComparisonRecord compare_once(TokenView gold, const CorruptionPolicy& policy,
                              std::size_t cut, const BeamConfig& cfg);

struct TrendRow {
  double corruption = 0.0;
  std::size_t beam_size = 0;
  std::size_t records = 0;
  double frac_improved = 0.0;  // share of records with delta > 0
  double mean_gold_copy = 0.0;
  double mean_delta = 0.0;
};

struct TrendTable {
  std::vector<TrendRow> rows;  // corruption-major, in sweep order

  // Throws std::out_of_range if the cell was not swept.
  const TrendRow& at(double corruption, std::size_t beam_size) const;
};

struct SweepConfig {
  std::vector<double> corruption_levels{0.3, 0.1, 0.02};
  std::vector<std::size_t> beam_sizes{5, 20};
  BeamConfig base;  // beam_size is overridden per cell
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
};

struct SweepResult {
  std::vector<ComparisonRecord> records;
  TrendTable table;
};

// For every sentence and corruption level one corrupted prefix and cut are
// drawn (seeded by base seed, sentence id and level index) and shared by all
// beam sizes, so beam columns are paired comparisons.
SweepResult trend_report(const std::vector<TokenSeq>& corpus,
                         const SweepConfig& cfg);

// Synthetic sentences over a Zipf-distributed vocabulary of `vocab_size`
// ids; lengths uniform in [min_len, max_len].
std::vector<TokenSeq> synthetic_corpus(std::size_t sentences, std::uint64_t seed,
                                       std::size_t vocab_size = 60,
                                       std::size_t min_len = 8,
                                       std::size_t max_len = 20);

Record to_record(const ComparisonRecord& rec);
Record to_record(const TrendRow& row);

}  // namespace dynoracle
