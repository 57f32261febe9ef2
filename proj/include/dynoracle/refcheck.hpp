#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dynoracle/corpus_io.hpp"
#include "dynoracle/metrics.hpp"
#include "dynoracle/seq_core.hpp"

namespace dynoracle {

enum class Objective { Maximize, Minimize };

struct Completion {
  TokenSeq tokens;
  double score = 0.0;
};

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::uint64_t size, std::uint64_t budget);
  std::uint64_t size() const { return size_; }

 private:
  std::uint64_t size_;
};

inline constexpr std::uint64_t kDefaultEnumerationBudget = 20'000'000;

// sum_{l=min_len}^{max_len} count^l, saturating at UINT64_MAX.
std::uint64_t enumeration_size(std::size_t candidates, std::size_t min_len,
                               std::size_t max_len);

// Scores prefix + completion as one full sequence.
using SequenceScorer = std::function<double(TokenView)>;

// Exhaustive search over completions of length min_len..max_len drawn from
// `candidates`. Ties go to the shorter completion, then the lexicographically
// smaller one by token id.
Completion brute_force_completion(TokenView prefix, TokenView candidates,
                                  std::size_t min_len, std::size_t max_len,
                                  const SequenceScorer& score, Objective objective,
                                  std::uint64_t budget = kDefaultEnumerationBudget);

// Least edit distance to gold over all completions of prefix up to max_len
// tokens. Depth-first with one Levenshtein row per node; independent of the
// oracle charts.
Completion brute_force_wer(TokenView prefix, TokenView gold,
                           TokenView candidates, std::size_t max_len,
                           std::uint64_t budget = kDefaultEnumerationBudget);

// Best span-F1 completion of a tag prefix to the length of gold, drawn from
// `alphabet`. Returned tokens index into alphabet.
Completion brute_force_tags(std::span<const Tag> prefix, std::span<const Tag> gold,
                            std::span<const Tag> alphabet, MatchMode mode,
                            std::uint64_t budget = kDefaultEnumerationBudget);

// O plus B/I over `entity_types` types named A, B, ...
TagSeq tag_alphabet(std::size_t entity_types);

enum class OracleKind { ExactF1, PartialF1, Wer, Rouge2, Bleu4 };

std::string_view to_string(OracleKind kind);
std::optional<OracleKind> parse_oracle_kind(std::string_view name);

struct FuzzConfig {
  OracleKind kind = OracleKind::Wer;
  // Vocabulary size for token oracles, entity-type count for tag oracles.
  std::size_t alphabet = 3;
  std::size_t max_gold_len = 5;
  // Extra tokens a WER brute force may append beyond |gold|.
  std::size_t completion_slack = 2;
  std::size_t cases = 1000;
  std::uint64_t seed = 0;
  // Enumerate every (gold, prefix) pair instead of sampling.
  bool exhaustive = false;
  // Tag oracles: use gold prefixes instead of random ones.
  bool clean_prefixes = false;
  std::size_t max_counterexamples = 20;
  std::size_t jobs = 1;
};

// Scores are oriented so higher is better; WER cases carry the negated edit
// distance.
struct ScoreGap {
  std::string input;
  double oracle_score = 0.0;
  double optimal_score = 0.0;
  bool gate_violation = false;
};

struct VerificationReport {
  OracleKind kind = OracleKind::Wer;
  std::size_t cases_run = 0;
  // Oracle rollout reached the brute-force optimum.
  std::size_t agreements = 0;
  // Name and violation count of the property the run is gated on.
  std::string gate;
  std::size_t gate_violations = 0;
  // Cases that missed the optimum or broke the gate, capped. Gate violations
  // come first, then by input.
  std::vector<ScoreGap> gaps;
  std::size_t total_gaps = 0;
  std::uint64_t enumeration_size = 0;  // brute-force nodes, summed

  double agreement_rate() const {
    return cases_run ? static_cast<double>(agreements) / cases_run : 1.0;
  }
  // WER must agree everywhere; the other oracles gate on their dominance
  // property (and, for the beam oracles, on exhaustive equivalence).
  bool passed() const;
};

VerificationReport verify_oracle(const FuzzConfig& cfg);

// Summary record followed by one record per archived gap.
std::vector<Record> to_records(const VerificationReport& report);

}  // namespace dynoracle
