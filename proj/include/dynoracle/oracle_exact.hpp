#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "dynoracle/metrics.hpp"
#include "dynoracle/seq_core.hpp"

namespace dynoracle {

// Inputs of one tag-oracle step. At position 0 both previous tags are O.
struct TagStepContext {
  Tag prev_gold;
  Tag curr_gold;
  Tag prev_pred;
};

// Next tag that keeps partial-match span F1 optimal.
Tag partial_f1_next_tag(const TagStepContext& ctx);

// Next tag for exact-match span F1.
Tag exact_f1_next_tag(const TagStepContext& ctx);

using TagOracle = Tag (*)(const TagStepContext&);

enum class TagMetric { ExactF1, PartialF1 };

TagOracle tag_oracle_for(TagMetric metric);
MatchMode match_mode_for(TagMetric metric);

// Rolls the oracle forward from the end of pred_prefix to the length of gold,
// feeding each output back as the next previous prediction. Returns the whole
// sequence (prefix followed by completion), so its size equals gold.size().
// Throws std::invalid_argument if the prefix is longer than gold.
TagSeq complete_tags(TagOracle next, std::span<const Tag> gold,
                     std::span<const Tag> pred_prefix);

// A WER supervision label: a gold token, or End when stopping is optimal.
using WerLabel = std::optional<TokenId>;

struct WerOracleOutput {
  // labels[i] supervises the step fed with S[0:i]; size |S| + 1.
  std::vector<WerLabel> labels;
};

// Column of dp_do row `row` (1-based chart row) chosen as the label.
// Columns 1..|G| name gold tokens, column |G|+1 is End. Minimum cost wins;
// among ties the diagonal column `row` is preferred, otherwise the largest.
std::size_t wer_label_column(const EditCharts& charts, std::size_t row);

// Labels for every prefix of the fed sequence. Once End is emitted every
// later label is End.
WerOracleOutput wer_oracle(TokenView gold, TokenView fed);

// Label for the step after `prefix`.
WerLabel wer_oracle_next(TokenView gold, TokenView prefix);

// Greedy rollout: append oracle labels to prefix until End. Returns only the
// appended tokens. Throws std::logic_error if End is not reached within
// |gold| + 1 steps.
TokenSeq complete_wer(TokenView gold, TokenView prefix);

}  // namespace dynoracle
