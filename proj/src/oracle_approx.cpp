#include "dynoracle/oracle_approx.hpp"

#include <algorithm>
#include <stdexcept>

namespace dynoracle {

std::string_view to_string(ApproxMetric metric) {
  return metric == ApproxMetric::Bleu4 ? "bleu4" : "rouge2";
}

std::string_view to_string(SupervisionSource source) {
  return source == SupervisionSource::Beam ? "beam" : "gold_copy";
}

double approx_score(ApproxMetric metric, const OverlapStats& stats) {
  if (metric == ApproxMetric::Bleu4) return bleu4_from_stats(stats);
  return rouge_from_stats(stats, 2).f1;
}

double approx_score(ApproxMetric metric, TokenView hyp, TokenView gold) {
  if (metric == ApproxMetric::Bleu4) return bleu4(hyp, gold);
  return rouge_n(hyp, gold, 2).f1;
}

void validate(const BeamConfig& cfg) {
  if (cfg.beam_size < 1) throw std::invalid_argument("beam_size must be >= 1");
  if (cfg.beam_length < 1)
    throw std::invalid_argument("beam_length must be >= 1");
}

GoldNGramIndex::GoldNGramIndex(TokenView gold) : gold_(gold) {
  const NGramCounts counts(gold);
  empty_stats_.ref_len = static_cast<int>(gold.size());
  for (int order = 1; order <= kMaxNGramOrder; ++order) {
    empty_stats_.ref_totals[order - 1] = counts.total(order);
    // Slots in first-occurrence order keep the layout deterministic.
    for (std::size_t pos = 0; pos + order <= gold.size(); ++pos) {
      const NGramKey key = ngram_key(gold, pos, order);
      auto [it, inserted] = slot_of_[order - 1].try_emplace(
          key, static_cast<int>(gold_counts_.size()));
      if (inserted) gold_counts_.push_back(counts.count(order, key));
    }
  }
}

int GoldNGramIndex::find(int order, const NGramKey& key) const {
  const auto& table = slot_of_[order - 1];
  auto it = table.find(key);
  return it == table.end() ? -1 : it->second;
}

namespace {

// Visits the n-grams ending at a new final token: (order, key).
template <typename Fn>
void for_new_ngrams(TokenView seq, TokenId token, Fn&& fn) {
  const std::size_t len = seq.size() + 1;
  for (int order = 1; order <= kMaxNGramOrder; ++order) {
    if (len < static_cast<std::size_t>(order)) break;
    NGramKey key;
    for (int k = 0; k < order - 1; ++k)
      key.ids[k] = seq[seq.size() - (order - 1) + k];
    key.ids[order - 1] = token;
    fn(order, key);
  }
}

void bump_totals(OverlapStats& s) {
  ++s.hyp_len;
  for (int order = 1; order <= kMaxNGramOrder; ++order)
    if (s.hyp_len >= order) ++s.hyp_totals[order - 1];
}

}  // namespace

OverlapStats peek_extend(const BeamEntry& entry, TokenId token,
                         const GoldNGramIndex& index) {
  OverlapStats s = entry.cache.stats;
  bump_totals(s);
  for_new_ngrams(entry.seq, token, [&](int order, const NGramKey& key) {
    const int slot = index.find(order, key);
    if (slot >= 0 && entry.cache.hyp_counts[slot] < index.gold_count(slot))
      ++s.matches[order - 1];
  });
  return s;
}

BeamEntry cached_extend(const BeamEntry& entry, TokenId token,
                        const GoldNGramIndex& index, ApproxMetric metric) {
  BeamEntry out;
  out.cache.hyp_counts = entry.cache.hyp_counts;
  out.cache.stats = entry.cache.stats;
  bump_totals(out.cache.stats);
  for_new_ngrams(entry.seq, token, [&](int order, const NGramKey& key) {
    const int slot = index.find(order, key);
    if (slot < 0) return;
    if (++out.cache.hyp_counts[slot] <= index.gold_count(slot))
      ++out.cache.stats.matches[order - 1];
  });
  out.seq.reserve(entry.seq.size() + 1);
  out.seq = entry.seq;
  out.seq.push_back(token);
  out.score = approx_score(metric, out.cache.stats);
  return out;
}

BeamEntry make_entry(TokenView seq, const GoldNGramIndex& index,
                     ApproxMetric metric) {
  BeamEntry e;
  e.cache.hyp_counts.assign(index.slots(), 0);
  e.cache.stats = index.empty_stats();
  for (TokenId tok : seq) e = cached_extend(e, tok, index, metric);
  e.score = approx_score(metric, e.cache.stats);
  return e;
}

namespace {

TokenSeq unique_tokens(TokenView gold) {
  TokenSeq c(gold.begin(), gold.end());
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

struct Child {
  std::size_t parent;
  TokenId token;
  double score;
};

// Stable selection of the top `k` children, higher score first.
void keep_top(std::vector<Child>& children, std::size_t k) {
  std::stable_sort(children.begin(), children.end(),
                   [](const Child& a, const Child& b) { return a.score > b.score; });
  if (children.size() > k) children.resize(k);
}

}  // namespace

BeamOracleResult beam_oracle_next(TokenView prefix, TokenView gold,
                                  const BeamConfig& cfg) {
  validate(cfg);
  if (gold.empty()) throw std::invalid_argument("beam oracle: empty gold");
  const TokenSeq candidates = unique_tokens(gold);
  const bool cached = cfg.scoring == ScoringMode::Cached;

  std::optional<GoldNGramIndex> index;
  std::vector<BeamEntry> queue(1);
  if (cached) {
    index.emplace(gold);
    queue[0] = make_entry(prefix, *index, cfg.metric);
  } else {
    queue[0].seq.assign(prefix.begin(), prefix.end());
  }
  queue[0].score = -std::numeric_limits<double>::infinity();

  BeamOracleResult result;
  result.best_seq = queue[0].seq;
  std::vector<Child> children;
  TokenSeq scratch;
  for (std::size_t round = 0; round < cfg.beam_length; ++round) {
    children.clear();
    children.reserve(queue.size() * candidates.size());
    for (std::size_t p = 0; p < queue.size(); ++p) {
      for (TokenId word : candidates) {
        double s;
        if (cached) {
          s = approx_score(cfg.metric, peek_extend(queue[p], word, *index));
        } else {
          scratch = queue[p].seq;
          scratch.push_back(word);
          s = approx_score(cfg.metric, scratch, gold);
        }
        children.push_back({p, word, s});
      }
    }
    keep_top(children, cfg.beam_size);

    std::vector<BeamEntry> next;
    next.reserve(children.size());
    for (const Child& c : children) {
      if (cached) {
        next.push_back(cached_extend(queue[c.parent], c.token, *index, cfg.metric));
      } else {
        BeamEntry e;
        e.seq = queue[c.parent].seq;
        e.seq.push_back(c.token);
        e.score = c.score;
        next.push_back(std::move(e));
      }
    }
    if (!next.empty() && next.front().score > result.best_score) {
      result.best_score = next.front().score;
      result.best_seq = next.front().seq;
    }
    queue = std::move(next);
  }

  if (result.best_seq.size() > prefix.size())
    result.token = result.best_seq[prefix.size()];
  return result;
}

TokenSeq gold_copy_completion(TokenView prefix, TokenView gold) {
  TokenSeq out(prefix.begin(), prefix.end());
  if (prefix.size() < gold.size())
    out.insert(out.end(), gold.begin() + prefix.size(), gold.end());
  return out;
}

SupervisionChoice select_supervision(TokenView prefix, TokenView gold,
                                     const BeamConfig& cfg) {
  const BeamOracleResult beam = beam_oracle_next(prefix, gold, cfg);
  SupervisionChoice choice;
  choice.oracle_score = beam.best_score;
  TokenSeq copy = gold_copy_completion(prefix, gold);
  choice.gold_copy_score = approx_score(cfg.metric, copy, gold);

  if (beam.best_score > choice.gold_copy_score) {
    choice.source = SupervisionSource::Beam;
    choice.chosen_score = beam.best_score;
    choice.next_token = beam.token;
    choice.completion = beam.best_seq;
  } else {
    choice.source = SupervisionSource::GoldCopy;
    choice.chosen_score = choice.gold_copy_score;
    if (prefix.size() < gold.size()) choice.next_token = gold[prefix.size()];
    choice.completion = std::move(copy);
  }
  return choice;
}

}  // namespace dynoracle
