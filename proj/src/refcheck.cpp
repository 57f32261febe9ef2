#include "dynoracle/refcheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dynoracle/oracle_approx.hpp"
#include "dynoracle/oracle_exact.hpp"
#include "dynoracle/parallel.hpp"
#include "dynoracle/random.hpp"

namespace dynoracle {

BudgetExceeded::BudgetExceeded(std::uint64_t size, std::uint64_t budget)
    : std::runtime_error("enumeration of " + std::to_string(size) +
                         " completions exceeds budget " + std::to_string(budget)),
      size_(size) {}

std::uint64_t enumeration_size(std::size_t candidates, std::size_t min_len,
                               std::size_t max_len) {
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 0;
  std::uint64_t level = 1;
  for (std::size_t len = 0; len <= max_len; ++len) {
    if (len >= min_len) {
      if (total > kMax - level) return kMax;
      total += level;
    }
    if (len == max_len) break;
    if (candidates != 0 && level > kMax / candidates) return kMax;
    level *= candidates;
  }
  return total;
}

Completion brute_force_completion(TokenView prefix, TokenView candidates,
                                  std::size_t min_len, std::size_t max_len,
                                  const SequenceScorer& score, Objective objective,
                                  std::uint64_t budget) {
  const std::uint64_t size = enumeration_size(candidates.size(), min_len, max_len);
  if (size > budget) throw BudgetExceeded(size, budget);

  const bool maximize = objective == Objective::Maximize;
  Completion best;
  best.score = maximize ? -std::numeric_limits<double>::infinity()
                        : std::numeric_limits<double>::infinity();
  bool found = false;
  TokenSeq seq(prefix.begin(), prefix.end());
  std::vector<std::size_t> digits;
  for (std::size_t len = min_len; len <= max_len; ++len) {
    if (len > 0 && candidates.empty()) break;
    digits.assign(len, 0);
    seq.resize(prefix.size() + len);
    while (true) {
      for (std::size_t k = 0; k < len; ++k)
        seq[prefix.size() + k] = candidates[digits[k]];
      const double s = score(seq);
      if (!found || (maximize ? s > best.score : s < best.score)) {
        found = true;
        best.score = s;
        best.tokens.assign(seq.begin() + prefix.size(), seq.end());
      }
      // Odometer increment, last position fastest: lexicographic order.
      std::size_t k = len;
      while (k > 0 && ++digits[k - 1] == candidates.size()) digits[--k] = 0;
      if (k == 0) break;
    }
  }
  return best;
}

namespace {

struct WerSearch {
  TokenView gold;
  TokenView candidates;
  std::size_t max_len;
  TokenSeq path;
  Completion best;

  void visit(const std::vector<int>& row) {
    const double d = row.back();
    if (d < best.score || (d == best.score && path.size() < best.tokens.size())) {
      best.score = d;
      best.tokens = path;
    }
    if (path.size() == max_len) return;
    std::vector<int> next(row.size());
    for (TokenId tok : candidates) {
      next[0] = row[0] + 1;
      for (std::size_t j = 1; j < row.size(); ++j) {
        const int sub = row[j - 1] + (tok == gold[j - 1] ? 0 : 1);
        next[j] = std::min({sub, row[j] + 1, next[j - 1] + 1});
      }
      path.push_back(tok);
      visit(next);
      path.pop_back();
    }
  }
};

}  // namespace

Completion brute_force_wer(TokenView prefix, TokenView gold, TokenView candidates,
                           std::size_t max_len, std::uint64_t budget) {
  const std::uint64_t size = enumeration_size(candidates.size(), 0, max_len);
  if (size > budget) throw BudgetExceeded(size, budget);

  // Textbook Levenshtein row of prefix against gold.
  std::vector<int> row(gold.size() + 1);
  for (std::size_t j = 0; j <= gold.size(); ++j) row[j] = static_cast<int>(j);
  for (TokenId tok : prefix) {
    std::vector<int> next(row.size());
    next[0] = row[0] + 1;
    for (std::size_t j = 1; j < row.size(); ++j)
      next[j] = std::min({row[j - 1] + (tok == gold[j - 1] ? 0 : 1), row[j] + 1,
                          next[j - 1] + 1});
    row.swap(next);
  }
  WerSearch search{gold, candidates, max_len, {}, {}};
  search.best.score = std::numeric_limits<double>::infinity();
  search.visit(row);
  return search.best;
}

Completion brute_force_tags(std::span<const Tag> prefix, std::span<const Tag> gold,
                            std::span<const Tag> alphabet, MatchMode mode,
                            std::uint64_t budget) {
  if (prefix.size() > gold.size())
    throw std::invalid_argument("brute_force_tags: prefix longer than gold");
  TokenSeq ids(alphabet.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<TokenId>(i);
  const std::size_t remaining = gold.size() - prefix.size();

  TagSeq buffer(gold.size());
  std::copy(prefix.begin(), prefix.end(), buffer.begin());
  const SequenceScorer scorer = [&](TokenView seq) {
    for (std::size_t k = prefix.size(); k < seq.size(); ++k)
      buffer[k] = alphabet[seq[k]];
    return span_f1(buffer, gold, mode).scores.f1;
  };
  // The prefix only matters through `buffer`; enumerate the suffix alone.
  TokenSeq dummy_prefix(prefix.size(), 0);
  return brute_force_completion(dummy_prefix, ids, remaining, remaining, scorer,
                                Objective::Maximize, budget);
}

TagSeq tag_alphabet(std::size_t entity_types) {
  TagSeq out{Tag::outside()};
  for (std::size_t t = 0; t < entity_types; ++t) {
    const std::string name(1, static_cast<char>('A' + t));
    out.push_back(Tag::begin(name));
    out.push_back(Tag::inside(name));
  }
  return out;
}

std::string_view to_string(OracleKind kind) {
  switch (kind) {
    case OracleKind::ExactF1: return "f1-exact";
    case OracleKind::PartialF1: return "f1-partial";
    case OracleKind::Wer: return "wer";
    case OracleKind::Rouge2: return "rouge2";
    case OracleKind::Bleu4: return "bleu4";
  }
  return "?";
}

std::optional<OracleKind> parse_oracle_kind(std::string_view name) {
  for (OracleKind k : {OracleKind::ExactF1, OracleKind::PartialF1, OracleKind::Wer,
                       OracleKind::Rouge2, OracleKind::Bleu4}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

bool VerificationReport::passed() const {
  if (kind == OracleKind::Wer && agreements != cases_run) return false;
  return gate_violations == 0;
}

namespace {

struct CaseOutcome {
  bool agree = false;
  bool gate_ok = true;
  double oracle_score = 0.0;
  double optimal_score = 0.0;
  std::uint64_t nodes = 0;
  std::string input;
};

std::string token_name(TokenId id) {
  if (id < 26) return std::string(1, static_cast<char>('a' + id));
  return "t" + std::to_string(id);
}

std::string encode_tokens(TokenView seq) {
  std::string out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) out += ' ';
    out += token_name(seq[i]);
  }
  return out;
}

std::string encode_tags(std::span<const Tag> seq) {
  std::string out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) out += ' ';
    out += render_tag(seq[i]);
  }
  return out;
}

// All sequences of length 0..max_len over `alphabet` symbols, shortest
// first, lexicographic within a length.
std::vector<TokenSeq> all_sequences(std::size_t alphabet, std::size_t min_len,
                                    std::size_t max_len) {
  std::vector<TokenSeq> out;
  for (std::size_t len = min_len; len <= max_len; ++len) {
    TokenSeq seq(len, 0);
    while (true) {
      out.push_back(seq);
      std::size_t k = len;
      while (k > 0 && ++seq[k - 1] == alphabet) seq[--k] = 0;
      if (k == 0) break;
    }
  }
  return out;
}

TokenSeq random_tokens(Rng& rng, std::size_t len, std::size_t alphabet) {
  TokenSeq out(len);
  for (auto& t : out) t = static_cast<TokenId>(rng.below(alphabet));
  return out;
}

// --- WER -------------------------------------------------------------------

CaseOutcome check_wer(TokenView gold, TokenView prefix, const FuzzConfig& cfg) {
  CaseOutcome out;
  TokenSeq vocab(cfg.alphabet);
  for (std::size_t i = 0; i < vocab.size(); ++i) vocab[i] = static_cast<TokenId>(i);

  TokenSeq rolled(prefix.begin(), prefix.end());
  const TokenSeq completion = complete_wer(gold, prefix);
  rolled.insert(rolled.end(), completion.begin(), completion.end());
  out.oracle_score = -wer(rolled, gold).distance;

  const std::size_t max_len = gold.size() + cfg.completion_slack;
  out.optimal_score = -brute_force_wer(prefix, gold, vocab, max_len).score;
  out.nodes = enumeration_size(vocab.size(), 0, max_len);
  out.agree = out.oracle_score == out.optimal_score;
  out.gate_ok = out.agree;
  out.input = "gold=" + encode_tokens(gold) + "|prefix=" + encode_tokens(prefix);
  return out;
}

// --- tags ------------------------------------------------------------------

CaseOutcome check_tags(std::span<const Tag> gold, std::span<const Tag> prefix,
                       std::span<const Tag> alphabet, OracleKind kind) {
  const TagMetric metric =
      kind == OracleKind::ExactF1 ? TagMetric::ExactF1 : TagMetric::PartialF1;
  const MatchMode mode = match_mode_for(metric);
  CaseOutcome out;
  const TagSeq rolled = complete_tags(tag_oracle_for(metric), gold, prefix);
  out.oracle_score = span_f1(rolled, gold, mode).scores.f1;

  TagSeq outside(prefix.begin(), prefix.end());
  outside.resize(gold.size(), Tag::outside());
  const double outside_score = span_f1(outside, gold, mode).scores.f1;

  out.optimal_score = brute_force_tags(prefix, gold, alphabet, mode).score;
  const std::size_t remaining = gold.size() - prefix.size();
  out.nodes = enumeration_size(alphabet.size(), remaining, remaining);
  out.agree = std::abs(out.oracle_score - out.optimal_score) <= kTieTolerance;
  out.gate_ok = out.oracle_score >= outside_score - kTieTolerance;
  out.input = "gold=" + encode_tags(gold) + "|prefix=" + encode_tags(prefix);
  return out;
}

// --- beam ------------------------------------------------------------------

CaseOutcome check_beam(TokenView gold, TokenView prefix, OracleKind kind) {
  const ApproxMetric metric =
      kind == OracleKind::Bleu4 ? ApproxMetric::Bleu4 : ApproxMetric::Rouge2F1;
  TokenSeq candidates(gold.begin(), gold.end());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());

  BeamConfig cfg;
  cfg.metric = metric;
  cfg.beam_length = std::max<std::size_t>(1, gold.size() - std::min(gold.size(), prefix.size()));
  cfg.beam_size = static_cast<std::size_t>(enumeration_size(
      candidates.size(), cfg.beam_length, cfg.beam_length));

  CaseOutcome out;
  const SupervisionChoice choice = select_supervision(prefix, gold, cfg);
  out.oracle_score = choice.oracle_score;

  const SequenceScorer scorer = [&](TokenView seq) {
    return approx_score(metric, seq, gold);
  };
  out.optimal_score = brute_force_completion(prefix, candidates, 1, cfg.beam_length,
                                             scorer, Objective::Maximize)
                          .score;
  out.nodes = enumeration_size(candidates.size(), 1, cfg.beam_length);
  out.agree = std::abs(out.oracle_score - out.optimal_score) <= kTieTolerance;
  const bool dominant = choice.chosen_score >= choice.gold_copy_score &&
                        choice.chosen_score ==
                            std::max(choice.oracle_score, choice.gold_copy_score);
  out.gate_ok = dominant && out.agree;
  out.input = "gold=" + encode_tokens(gold) + "|prefix=" + encode_tokens(prefix);
  return out;
}

bool is_tag_kind(OracleKind k) {
  return k == OracleKind::ExactF1 || k == OracleKind::PartialF1;
}

std::string gate_name(OracleKind k) {
  switch (k) {
    case OracleKind::Wer: return "wer_optimality";
    case OracleKind::ExactF1:
    case OracleKind::PartialF1: return "rollout_ge_all_outside";
    default: return "dominance_and_exhaustive_equivalence";
  }
}

}  // namespace

VerificationReport verify_oracle(const FuzzConfig& cfg) {
  if (cfg.alphabet == 0) throw std::invalid_argument("verify: empty alphabet");

  // Inputs are materialised up front so evaluation order cannot matter.
  struct TokenCase { TokenSeq gold, prefix; };
  struct TagCase { TagSeq gold, prefix; };
  std::vector<TokenCase> token_cases;
  std::vector<TagCase> tag_cases;
  const TagSeq alphabet = tag_alphabet(cfg.alphabet);

  if (is_tag_kind(cfg.kind)) {
    auto add = [&](const TagSeq& gold, std::size_t k, Rng* rng,
                   const std::vector<TokenSeq>* all_prefixes) {
      if (cfg.clean_prefixes) {
        tag_cases.push_back({gold, TagSeq(gold.begin(), gold.begin() + k)});
      } else if (rng) {
        TagSeq prefix(k);
        for (auto& t : prefix) t = alphabet[rng->below(alphabet.size())];
        tag_cases.push_back({gold, std::move(prefix)});
      } else {
        for (const auto& ids : *all_prefixes) {
          if (ids.size() != k) continue;
          TagSeq prefix;
          for (TokenId id : ids) prefix.push_back(alphabet[id]);
          tag_cases.push_back({gold, std::move(prefix)});
        }
      }
    };
    if (cfg.exhaustive) {
      const auto golds = all_sequences(alphabet.size(), 1, cfg.max_gold_len);
      const auto prefixes = all_sequences(alphabet.size(), 0, cfg.max_gold_len);
      for (const auto& ids : golds) {
        TagSeq gold;
        for (TokenId id : ids) gold.push_back(alphabet[id]);
        for (std::size_t k = 0; k <= gold.size(); ++k) add(gold, k, nullptr, &prefixes);
      }
    } else {
      for (std::size_t c = 0; c < cfg.cases; ++c) {
        Rng rng(derive_seed({cfg.seed, c}));
        TagSeq gold(rng.between(1, cfg.max_gold_len));
        for (auto& t : gold) t = alphabet[rng.below(alphabet.size())];
        add(gold, rng.between(0, gold.size()), &rng, nullptr);
      }
    }
  } else {
    // Beam prefixes may use one symbol that never occurs in gold.
    const bool beam = cfg.kind != OracleKind::Wer;
    const std::size_t prefix_alphabet = cfg.alphabet + (beam ? 1 : 0);
    const std::size_t min_gold = beam ? 1 : 0;
    if (cfg.exhaustive) {
      const auto golds = all_sequences(cfg.alphabet, min_gold, cfg.max_gold_len);
      const auto prefixes = all_sequences(prefix_alphabet, 0, cfg.max_gold_len);
      for (const auto& g : golds)
        for (const auto& p : prefixes)
          if (!beam || p.size() <= g.size()) token_cases.push_back({g, p});
    } else {
      for (std::size_t c = 0; c < cfg.cases; ++c) {
        Rng rng(derive_seed({cfg.seed, c}));
        TokenSeq gold =
            random_tokens(rng, rng.between(min_gold, cfg.max_gold_len), cfg.alphabet);
        const std::size_t max_prefix = beam ? gold.size() : cfg.max_gold_len;
        TokenSeq prefix =
            random_tokens(rng, rng.between(0, max_prefix), prefix_alphabet);
        token_cases.push_back({std::move(gold), std::move(prefix)});
      }
    }
  }

  const std::size_t n = is_tag_kind(cfg.kind) ? tag_cases.size() : token_cases.size();
  std::vector<CaseOutcome> outcomes(n);
  parallel_for(n, cfg.jobs, [&](std::size_t i) {
    switch (cfg.kind) {
      case OracleKind::Wer:
        outcomes[i] = check_wer(token_cases[i].gold, token_cases[i].prefix, cfg);
        break;
      case OracleKind::ExactF1:
      case OracleKind::PartialF1:
        outcomes[i] = check_tags(tag_cases[i].gold, tag_cases[i].prefix, alphabet,
                                 cfg.kind);
        break;
      case OracleKind::Rouge2:
      case OracleKind::Bleu4:
        outcomes[i] = check_beam(token_cases[i].gold, token_cases[i].prefix, cfg.kind);
        break;
    }
  });

  VerificationReport report;
  report.kind = cfg.kind;
  report.gate = gate_name(cfg.kind);
  report.cases_run = n;
  for (auto& o : outcomes) {
    report.enumeration_size += o.nodes;
    if (o.agree) ++report.agreements;
    if (!o.gate_ok) ++report.gate_violations;
    if (!o.agree || !o.gate_ok) {
      if (!o.agree) ++report.total_gaps;
      report.gaps.push_back(
          {std::move(o.input), o.oracle_score, o.optimal_score, !o.gate_ok});
    }
  }
  // Gate violations are archived first so the cap never drops them.
  std::sort(report.gaps.begin(), report.gaps.end(),
            [](const ScoreGap& a, const ScoreGap& b) {
              if (a.gate_violation != b.gate_violation) return a.gate_violation;
              return a.input < b.input;
            });
  if (report.gaps.size() > cfg.max_counterexamples)
    report.gaps.resize(cfg.max_counterexamples);
  return report;
}

std::vector<Record> to_records(const VerificationReport& report) {
  std::vector<Record> out;
  Record summary;
  summary.add("record", "verification")
      .add("oracle", to_string(report.kind))
      .add("cases_run", report.cases_run)
      .add("agreements", report.agreements)
      .add("agreement_rate", report.agreement_rate())
      .add("gate", report.gate)
      .add("gate_violations", report.gate_violations)
      .add("passed", report.passed())
      .add("total_gaps", report.total_gaps)
      .add("enumeration_size", static_cast<std::int64_t>(report.enumeration_size));
  out.push_back(std::move(summary));
  for (const auto& g : report.gaps) {
    Record r;
    r.add("record", "gap")
        .add("input", g.input)
        .add("oracle_score", g.oracle_score)
        .add("optimal_score", g.optimal_score)
        .add("gate_violation", g.gate_violation);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace dynoracle
