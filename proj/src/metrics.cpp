#include "dynoracle/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dynoracle {

ScoreTriple make_triple(double precision, double recall) {
  const double denom = precision + recall;
  const double f1 = denom > 0.0 ? 2.0 * precision * recall / denom : 0.0;
  return {precision, recall, f1};
}

// ---------------------------------------------------------------------------
// Span F1

namespace {

bool overlaps(const Span& a, const Span& b) {
  return a.start <= b.end && b.start <= a.end;
}

bool qualifies(const Span& pred, const Span& gold, MatchMode mode) {
  if (pred.type != gold.type) return false;
  if (mode == MatchMode::Exact)
    return pred.start == gold.start && pred.end == gold.end;
  return overlaps(pred, gold);
}

bool continues(const std::optional<IncrementalSpanState::OpenSpan>& open,
               const Tag& tag) {
  return open && tag.kind == TagKind::Inside && open->type == tag.type;
}

// Closes the open predicted and/or gold span ending at state.position - 1.
void close_spans(IncrementalSpanState& st, bool close_pred, bool close_gold) {
  if (close_pred && st.open_pred) {
    ++st.counts.n_pred;
    if (!st.open_pred->matched) {
      st.pending_pred.push_back(
          {st.open_pred->start, st.position - 1, st.open_pred->type});
    }
    st.open_pred.reset();
  }
  if (close_gold && st.open_gold) {
    ++st.counts.n_gold;
    const Span gold{st.open_gold->start, st.position - 1, st.open_gold->type};
    auto hit = std::find_if(
        st.pending_pred.begin(), st.pending_pred.end(),
        [&](const Span& p) { return qualifies(p, gold, st.mode); });
    if (hit != st.pending_pred.end()) {
      ++st.counts.matched;
      st.pending_pred.erase(hit);
    } else if (st.mode == MatchMode::Partial && st.open_pred &&
               !st.open_pred->matched && st.open_pred->type == gold.type) {
      // An open predicted span started no later than gold.end and is still
      // running, so it overlaps.
      ++st.counts.matched;
      st.open_pred->matched = true;
    }
    st.open_gold.reset();
  }
}

}  // namespace

MatchCounts match_spans(const std::vector<Span>& pred,
                        const std::vector<Span>& gold, MatchMode mode) {
  MatchCounts counts;
  counts.n_pred = static_cast<int>(pred.size());
  counts.n_gold = static_cast<int>(gold.size());
  std::vector<bool> used(pred.size(), false);
  for (const Span& g : gold) {
    for (std::size_t p = 0; p < pred.size(); ++p) {
      if (!used[p] && qualifies(pred[p], g, mode)) {
        used[p] = true;
        ++counts.matched;
        break;
      }
    }
  }
  return counts;
}

ScoreTriple f1_from_counts(const MatchCounts& c) {
  if (c.n_pred == 0 && c.n_gold == 0) return {1.0, 1.0, 1.0};
  const double p = c.n_pred > 0 ? static_cast<double>(c.matched) / c.n_pred : 0.0;
  const double r = c.n_gold > 0 ? static_cast<double>(c.matched) / c.n_gold : 0.0;
  return make_triple(p, r);
}

SpanF1Result span_f1(std::span<const Tag> pred, std::span<const Tag> gold,
                     MatchMode mode) {
  if (pred.size() != gold.size()) {
    throw std::invalid_argument("span_f1: length mismatch (" +
                                std::to_string(pred.size()) + " vs " +
                                std::to_string(gold.size()) + ")");
  }
  const MatchCounts counts =
      match_spans(extract_spans(pred), extract_spans(gold), mode);
  return {f1_from_counts(counts), counts};
}

IncrementalSpanState incremental_span_step(IncrementalSpanState st,
                                           const Tag& pred_tag,
                                           const Tag& gold_tag) {
  const bool pred_cont = continues(st.open_pred, pred_tag);
  const bool gold_cont = continues(st.open_gold, gold_tag);
  close_spans(st, !pred_cont, !gold_cont);

  const std::size_t t = st.position;
  if (!pred_cont && !pred_tag.is_outside())
    st.open_pred = IncrementalSpanState::OpenSpan{t, pred_tag.type, false};
  if (!gold_cont && !gold_tag.is_outside())
    st.open_gold = IncrementalSpanState::OpenSpan{t, gold_tag.type, false};
  ++st.position;

  // Every gold span still to close starts at or after this bound.
  const std::size_t bound = st.open_gold ? st.open_gold->start : st.position;
  std::erase_if(st.pending_pred, [&](const Span& p) { return p.end < bound; });
  return st;
}

MatchCounts incremental_span_finish(const IncrementalSpanState& state) {
  IncrementalSpanState st = state;
  close_spans(st, true, true);
  return st.counts;
}

// ---------------------------------------------------------------------------
// Edit distance

EditCharts edit_charts(TokenView fed, TokenView gold) {
  const std::size_t n = fed.size();
  const std::size_t m = gold.size();
  EditCharts ch;
  ch.fed_len = n;
  ch.gold_len = m;
  ch.dp_wer = IntChart(n + 1, m + 1);
  ch.dp_do = IntChart(n + 2, m + 1);

  auto& w = ch.dp_wer;
  for (std::size_t j = 0; j <= m; ++j) w(0, j) = static_cast<int>(j);
  for (std::size_t i = 0; i <= n; ++i) w(i, 0) = static_cast<int>(i);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const int penalty = fed[i - 1] == gold[j - 1] ? 0 : 1;
      w(i, j) = std::min({w(i - 1, j - 1) + penalty, w(i - 1, j) + 1,
                          w(i, j - 1) + 1});
    }
  }

  auto& d = ch.dp_do;
  for (std::size_t j = 0; j <= m; ++j) d(0, j) = static_cast<int>(j);
  for (std::size_t i = 1; i <= n + 1; ++i) {
    d(i, 0) = static_cast<int>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      d(i, j) = std::min({w(i - 1, j - 1), w(i - 1, j) + 1, d(i, j - 1) + 1});
    }
  }
  return ch;
}

WerResult wer(TokenView hyp, TokenView ref) {
  // Two-row Levenshtein; the full chart is only needed by the oracle.
  std::vector<int> prev(ref.size() + 1), cur(ref.size() + 1);
  for (std::size_t j = 0; j <= ref.size(); ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= hyp.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= ref.size(); ++j) {
      const int penalty = hyp[i - 1] == ref[j - 1] ? 0 : 1;
      cur[j] = std::min({prev[j - 1] + penalty, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  WerResult r;
  r.distance = prev[ref.size()];
  if (!ref.empty())
    r.rate = static_cast<double>(r.distance) / static_cast<double>(ref.size());
  else if (hyp.empty())
    r.rate = 0.0;
  return r;
}

// ---------------------------------------------------------------------------
// N-gram metrics

std::size_t NGramKeyHash::operator()(const NGramKey& k) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ull;
  for (TokenId id : k.ids) {
    h ^= id + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdull;
  }
  return static_cast<std::size_t>(h ^ (h >> 33));
}

NGramKey ngram_key(TokenView seq, std::size_t pos, int order) {
  NGramKey key;
  for (int k = 0; k < order; ++k) key.ids[k] = seq[pos + k];
  return key;
}

NGramCounts::NGramCounts(TokenView seq, int max_order) {
  for (int order = 1; order <= max_order; ++order) {
    if (seq.size() < static_cast<std::size_t>(order)) break;
    auto& table = counts_[order - 1];
    for (std::size_t pos = 0; pos + order <= seq.size(); ++pos) {
      ++table[ngram_key(seq, pos, order)];
      ++totals_[order - 1];
    }
  }
}

int NGramCounts::count(int order, const NGramKey& key) const {
  const auto& table = counts_.at(order - 1);
  auto it = table.find(key);
  return it == table.end() ? 0 : it->second;
}

OverlapStats overlap_stats(TokenView hyp, TokenView ref) {
  OverlapStats s;
  s.hyp_len = static_cast<int>(hyp.size());
  s.ref_len = static_cast<int>(ref.size());
  const NGramCounts h(hyp);
  const NGramCounts r(ref);
  for (int order = 1; order <= kMaxNGramOrder; ++order) {
    s.hyp_totals[order - 1] = h.total(order);
    s.ref_totals[order - 1] = r.total(order);
    int clipped = 0;
    for (const auto& [key, count] : h.table(order))
      clipped += std::min(count, r.count(order, key));
    s.matches[order - 1] = clipped;
  }
  return s;
}

double bleu4_from_stats(const OverlapStats& s) {
  if (s.hyp_len == 0) return 0.0;
  double log_sum = 0.0;
  for (int k = 0; k < kMaxNGramOrder; ++k) {
    const int num = s.matches[k];
    const int den = s.hyp_totals[k];
    const double p = (num == 0 || den == 0)
                         ? static_cast<double>(num + 1) / (den + 1)
                         : static_cast<double>(num) / den;
    log_sum += std::log(p);
  }
  const double bp =
      s.hyp_len >= s.ref_len
          ? 1.0
          : std::exp(1.0 - static_cast<double>(s.ref_len) / s.hyp_len);
  return bp * std::exp(log_sum / kMaxNGramOrder);
}

ScoreTriple rouge_from_stats(const OverlapStats& s, int n) {
  if (n < 1 || n > kMaxNGramOrder)
    throw std::invalid_argument("rouge_n: order must be in 1..4");
  const int overlap = s.matches[n - 1];
  const int hyp_total = s.hyp_totals[n - 1];
  const int ref_total = s.ref_totals[n - 1];
  if (hyp_total == 0 && ref_total == 0) return {1.0, 1.0, 1.0};
  const double p = hyp_total > 0 ? static_cast<double>(overlap) / hyp_total : 0.0;
  const double r = ref_total > 0 ? static_cast<double>(overlap) / ref_total : 0.0;
  return make_triple(p, r);
}

double bleu4(TokenView hyp, TokenView ref) {
  return bleu4_from_stats(overlap_stats(hyp, ref));
}

ScoreTriple rouge_n(TokenView hyp, TokenView ref, int n) {
  if (n < 1 || n > kMaxNGramOrder)
    throw std::invalid_argument("rouge_n: order must be in 1..4");
  return rouge_from_stats(overlap_stats(hyp, ref), n);
}

ScoreTriple rouge_l(TokenView hyp, TokenView ref) {
  if (hyp.empty() && ref.empty()) return {1.0, 1.0, 1.0};
  if (hyp.empty() || ref.empty()) return {};
  std::vector<int> prev(ref.size() + 1, 0), cur(ref.size() + 1, 0);
  for (std::size_t i = 1; i <= hyp.size(); ++i) {
    for (std::size_t j = 1; j <= ref.size(); ++j) {
      cur[j] = hyp[i - 1] == ref[j - 1] ? prev[j - 1] + 1
                                        : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  const double lcs = prev[ref.size()];
  return make_triple(lcs / hyp.size(), lcs / ref.size());
}

}  // namespace dynoracle
