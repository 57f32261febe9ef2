#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dynoracle/seq_core.hpp"

namespace dynoracle {

inline constexpr double kTieTolerance = 1e-9;
inline constexpr int kMaxNGramOrder = 4;

struct ScoreTriple {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// f1 = 2PR/(P+R), 0 when P+R == 0.
ScoreTriple make_triple(double precision, double recall);

// ---------------------------------------------------------------------------
// Span F1

enum class MatchMode { Exact, Partial };

struct MatchCounts {
  int matched = 0;
  int n_pred = 0;
  int n_gold = 0;

  MatchCounts& operator+=(const MatchCounts& o) {
    matched += o.matched;
    n_pred += o.n_pred;
    n_gold += o.n_gold;
    return *this;
  }
  bool operator==(const MatchCounts&) const = default;
};

struct SpanF1Result {
  ScoreTriple scores;
  MatchCounts counts;
};

// Exact: identical (start, end, type). Partial: one-to-one, same type, at
// least one shared token; gold spans are visited left to right and each takes
// the leftmost still-unmatched predicted span that qualifies.
MatchCounts match_spans(const std::vector<Span>& pred,
                        const std::vector<Span>& gold, MatchMode mode);

// Both sides empty scores 1.0 everywhere; one empty side guards 0/0 to 0.
ScoreTriple f1_from_counts(const MatchCounts& counts);

// Throws std::invalid_argument when the lengths differ.
SpanF1Result span_f1(std::span<const Tag> pred, std::span<const Tag> gold,
                     MatchMode mode);

// Left-to-right span matcher that sees one (pred, gold) tag pair per step.
// Matching decisions are final when a gold span closes, so the running counts
// are an additive sum of per-step deltas.
struct IncrementalSpanState {
  struct OpenSpan {
    std::size_t start = 0;
    std::string type;
    bool matched = false;
  };

  MatchMode mode = MatchMode::Exact;
  std::size_t position = 0;
  MatchCounts counts;
  std::optional<OpenSpan> open_pred;
  std::optional<OpenSpan> open_gold;
  // Closed, still-unmatched predicted spans that a current or future gold
  // span can still reach. Sorted by start.
  std::vector<Span> pending_pred;

  explicit IncrementalSpanState(MatchMode m = MatchMode::Exact) : mode(m) {}
};

IncrementalSpanState incremental_span_step(IncrementalSpanState state,
                                           const Tag& pred_tag,
                                           const Tag& gold_tag);

// Counts as if the sequence ended at the current position.
MatchCounts incremental_span_finish(const IncrementalSpanState& state);

// ---------------------------------------------------------------------------
// Edit distance

// Row-major integer matrix.
class IntChart {
 public:
  IntChart() = default;
  IntChart(std::size_t rows, std::size_t cols, int fill = 0)
      : rows_(rows), cols_(cols), cells_(rows * cols, fill) {}

  int& operator()(std::size_t r, std::size_t c) { return cells_[r * cols_ + c]; }
  int operator()(std::size_t r, std::size_t c) const {
    return cells_[r * cols_ + c];
  }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<const int> row(std::size_t r) const {
    return {cells_.data() + r * cols_, cols_};
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<int> cells_;
};

// Charts for a fed sequence S against gold G.
//
//   dp_wer(i, j)  Levenshtein distance of S[0:i] to G[0:j]; shape
//                 (|S|+1) x (|G|+1).
//   dp_do(i, j)   for i >= 1, the least distance of S[0:i-1] + G[j-1] to
//                 G[0:j]: the cost of emitting gold token j as the label after
//                 the first i-1 fed tokens. Row 0 holds the 0..|G| start
//                 initialisation and column 0 holds i. Shape (|S|+2) x (|G|+1)
//                 so the label after all of S has a row.
struct EditCharts {
  IntChart dp_wer;
  IntChart dp_do;
  std::size_t fed_len = 0;
  std::size_t gold_len = 0;

  // Distance if the sequence stops after S[0:i-1]; the End column.
  int stop_cost(std::size_t i) const { return dp_wer(i - 1, gold_len); }
};

EditCharts edit_charts(TokenView fed, TokenView gold);

struct WerResult {
  int distance = 0;
  // Unset when ref is empty and hyp is not.
  std::optional<double> rate;
};

WerResult wer(TokenView hyp, TokenView ref);

// ---------------------------------------------------------------------------
// N-gram metrics

struct NGramKey {
  std::array<TokenId, kMaxNGramOrder> ids{};
  bool operator==(const NGramKey&) const = default;
};

struct NGramKeyHash {
  std::size_t operator()(const NGramKey& k) const noexcept;
};

// Zero-padded key for seq[pos : pos + order].
NGramKey ngram_key(TokenView seq, std::size_t pos, int order);

// Per-order n-gram multiset of one sequence.
class NGramCounts {
 public:
  NGramCounts() = default;
  NGramCounts(TokenView seq, int max_order = kMaxNGramOrder);

  int count(int order, const NGramKey& key) const;
  int total(int order) const { return totals_.at(order - 1); }
  int distinct(int order) const {
    return static_cast<int>(counts_.at(order - 1).size());
  }
  const auto& table(int order) const { return counts_.at(order - 1); }

 private:
  std::array<std::unordered_map<NGramKey, int, NGramKeyHash>, kMaxNGramOrder>
      counts_;
  std::array<int, kMaxNGramOrder> totals_{};
};

// Sufficient statistics for BLEU-4 and ROUGE-1..4 of one hypothesis against
// one reference. Index 0 holds unigrams.
struct OverlapStats {
  std::array<int, kMaxNGramOrder> matches{};
  std::array<int, kMaxNGramOrder> hyp_totals{};
  std::array<int, kMaxNGramOrder> ref_totals{};
  int hyp_len = 0;
  int ref_len = 0;

  bool operator==(const OverlapStats&) const = default;
};

OverlapStats overlap_stats(TokenView hyp, TokenView ref);

// Add-one smoothing on any order whose clipped match count or hypothesis
// n-gram count is zero; brevity penalty exp(1 - ref/hyp) when hyp is shorter.
double bleu4_from_stats(const OverlapStats& stats);
ScoreTriple rouge_from_stats(const OverlapStats& stats, int n);

double bleu4(TokenView hyp, TokenView ref);
ScoreTriple rouge_n(TokenView hyp, TokenView ref, int n);
ScoreTriple rouge_l(TokenView hyp, TokenView ref);

}  // namespace dynoracle
