#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dynoracle/metrics.hpp"
#include "dynoracle/seq_core.hpp"

namespace dynoracle {

enum class ApproxMetric { Rouge2F1, Bleu4 };

std::string_view to_string(ApproxMetric metric);

// Score of a full hypothesis against gold under `metric`.
double approx_score(ApproxMetric metric, const OverlapStats& stats);
double approx_score(ApproxMetric metric, TokenView hyp, TokenView gold);

// How beam entries are scored. Both modes produce bit-identical scores.
enum class ScoringMode { Naive, Cached };

struct BeamConfig {
  std::size_t beam_size = 5;
  std::size_t beam_length = 4;
  ApproxMetric metric = ApproxMetric::Bleu4;
  ScoringMode scoring = ScoringMode::Cached;
};

// Throws std::invalid_argument unless beam_size and beam_length are >= 1.
void validate(const BeamConfig& cfg);

// Dense index over the distinct n-grams (orders 1..4) of a gold sequence.
class GoldNGramIndex {
 public:
  explicit GoldNGramIndex(TokenView gold);

  // -1 when the n-gram does not occur in gold.
  int find(int order, const NGramKey& key) const;
  int gold_count(int slot) const { return gold_counts_[slot]; }
  std::size_t slots() const { return gold_counts_.size(); }
  const OverlapStats& empty_stats() const { return empty_stats_; }
  TokenView gold() const { return gold_; }

 private:
  TokenView gold_;
  std::array<std::unordered_map<NGramKey, int, NGramKeyHash>, kMaxNGramOrder>
      slot_of_;
  std::vector<int> gold_counts_;
  OverlapStats empty_stats_;  // stats of an empty hypothesis
};

// Hypothesis-side n-gram counts restricted to n-grams that occur in gold;
// only those can contribute clipped matches.
struct NGramCache {
  std::vector<std::uint16_t> hyp_counts;
  OverlapStats stats;
};

struct BeamEntry {
  TokenSeq seq;
  double score = -std::numeric_limits<double>::infinity();
  NGramCache cache;
};

// Entry for `seq` with its cache built token by token. The score is set to
// the metric value of seq; the beam root overrides it with -infinity.
BeamEntry make_entry(TokenView seq, const GoldNGramIndex& index,
                     ApproxMetric metric);

// Stats of entry.seq + token, touching only the <= 4 new n-grams.
OverlapStats peek_extend(const BeamEntry& entry, TokenId token,
                         const GoldNGramIndex& index);

BeamEntry cached_extend(const BeamEntry& entry, TokenId token,
                        const GoldNGramIndex& index, ApproxMetric metric);

struct BeamOracleResult {
  // nullopt (End) only if the search never left the prefix.
  std::optional<TokenId> token;
  TokenSeq best_seq;
  double best_score = -std::numeric_limits<double>::infinity();
};

// Beam search over completions drawn from the distinct gold tokens (in id
// order). Each round expands every queue entry by every candidate, keeps the
// top beam_size (stable: higher score first, then generation order), and the
// best sequence seen in any round is returned. Throws on empty gold.
BeamOracleResult beam_oracle_next(TokenView prefix, TokenView gold,
                                  const BeamConfig& cfg);

enum class SupervisionSource { Beam, GoldCopy };

std::string_view to_string(SupervisionSource source);

struct SupervisionChoice {
  std::optional<TokenId> next_token;  // nullopt = End
  SupervisionSource source = SupervisionSource::GoldCopy;
  double oracle_score = 0.0;
  double gold_copy_score = 0.0;
  double chosen_score = 0.0;
  TokenSeq completion;  // full winning sequence, prefix included
};

// prefix + gold[|prefix|:]
TokenSeq gold_copy_completion(TokenView prefix, TokenView gold);

// Better of the beam completion and the positional gold copy; ties go to the
// gold copy.
SupervisionChoice select_supervision(TokenView prefix, TokenView gold,
                                     const BeamConfig& cfg);

}  // namespace dynoracle
