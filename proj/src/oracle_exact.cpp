#include "dynoracle/oracle_exact.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace dynoracle {

namespace {

bool starts_with(const Tag& tag, TagKind kind) { return tag.kind == kind; }

// Picks the label column from one dp_do row. `costs` holds columns 1..|G|
// followed by the End column.
std::size_t pick_column(std::span<const int> costs, std::size_t diagonal) {
  const int best = *std::min_element(costs.begin(), costs.end());
  if (diagonal >= 1 && diagonal <= costs.size() && costs[diagonal - 1] == best)
    return diagonal;
  for (std::size_t col = costs.size(); col >= 1; --col)
    if (costs[col - 1] == best) return col;
  return costs.size();  // unreachable
}

// Rolling chart state for greedy rollouts: the dp_wer row of the fed prefix.
class WerRoller {
 public:
  WerRoller(TokenView gold, TokenView prefix) : gold_(gold) {
    wer_row_.resize(gold.size() + 1);
    for (std::size_t j = 0; j <= gold.size(); ++j)
      wer_row_[j] = static_cast<int>(j);
    for (TokenId tok : prefix) push(tok);
  }

  WerLabel next() const {
    const std::size_t m = gold_.size();
    const std::size_t row = fed_ + 1;
    std::vector<int> costs(m + 1);
    int left = static_cast<int>(row);  // dp_do(row, 0)
    for (std::size_t j = 1; j <= m; ++j) {
      left = std::min({wer_row_[j - 1], wer_row_[j] + 1, left + 1});
      costs[j - 1] = left;
    }
    costs[m] = wer_row_[m];
    const std::size_t col = pick_column(costs, row);
    if (col == m + 1) return std::nullopt;
    return gold_[col - 1];
  }

  void push(TokenId tok) {
    ++fed_;
    std::vector<int> next(wer_row_.size());
    next[0] = static_cast<int>(fed_);
    for (std::size_t j = 1; j < next.size(); ++j) {
      const int penalty = tok == gold_[j - 1] ? 0 : 1;
      next[j] = std::min(
          {wer_row_[j - 1] + penalty, wer_row_[j] + 1, next[j - 1] + 1});
    }
    wer_row_.swap(next);
  }

 private:
  TokenView gold_;
  std::vector<int> wer_row_;
  std::size_t fed_ = 0;
};

}  // namespace

Tag partial_f1_next_tag(const TagStepContext& ctx) {
  const Tag& gold = ctx.curr_gold;
  const Tag& prev = ctx.prev_pred;
  if (starts_with(gold, TagKind::Begin)) {
    if (starts_with(prev, TagKind::Begin) && gold.type == prev.type)
      return Tag::inside(gold.type);
    return gold;
  }
  if (starts_with(gold, TagKind::Inside)) {
    if (prev.is_outside()) return Tag::begin(gold.type);
    if (prev.type != ctx.prev_gold.type) return Tag::outside();
    return gold;
  }
  return Tag::outside();
}

Tag exact_f1_next_tag(const TagStepContext& ctx) {
  const Tag& gold = ctx.curr_gold;
  const Tag& prev = ctx.prev_pred;
  if (starts_with(gold, TagKind::Begin)) {
    if (!prev.is_outside()) return Tag::outside();
    return gold;
  }
  if (starts_with(gold, TagKind::Inside)) {
    if (prev.is_outside()) return Tag::outside();
    if (prev.type != ctx.prev_gold.type && prev.kind != ctx.prev_gold.kind)
      return Tag::outside();
    return gold;
  }
  return Tag::outside();
}

TagOracle tag_oracle_for(TagMetric metric) {
  return metric == TagMetric::ExactF1 ? &exact_f1_next_tag : &partial_f1_next_tag;
}

MatchMode match_mode_for(TagMetric metric) {
  return metric == TagMetric::ExactF1 ? MatchMode::Exact : MatchMode::Partial;
}

TagSeq complete_tags(TagOracle next, std::span<const Tag> gold,
                     std::span<const Tag> pred_prefix) {
  if (pred_prefix.size() > gold.size()) {
    throw std::invalid_argument("complete_tags: prefix longer than gold (" +
                                std::to_string(pred_prefix.size()) + " > " +
                                std::to_string(gold.size()) + ")");
  }
  TagSeq out(pred_prefix.begin(), pred_prefix.end());
  out.reserve(gold.size());
  for (std::size_t t = out.size(); t < gold.size(); ++t) {
    TagStepContext ctx;
    if (t > 0) {
      ctx.prev_gold = gold[t - 1];
      ctx.prev_pred = out[t - 1];
    }
    ctx.curr_gold = gold[t];
    out.push_back(next(ctx));
  }
  return out;
}

std::size_t wer_label_column(const EditCharts& charts, std::size_t row) {
  const std::size_t m = charts.gold_len;
  std::vector<int> costs(m + 1);
  for (std::size_t j = 1; j <= m; ++j) costs[j - 1] = charts.dp_do(row, j);
  costs[m] = charts.stop_cost(row);
  return pick_column(costs, row);
}

WerOracleOutput wer_oracle(TokenView gold, TokenView fed) {
  const EditCharts charts = edit_charts(fed, gold);
  WerOracleOutput out;
  out.labels.reserve(fed.size() + 1);
  bool ended = false;
  for (std::size_t row = 1; row <= fed.size() + 1; ++row) {
    const std::size_t col = ended ? gold.size() + 1 : wer_label_column(charts, row);
    if (col == gold.size() + 1) {
      ended = true;
      out.labels.push_back(std::nullopt);
    } else {
      out.labels.push_back(gold[col - 1]);
    }
  }
  return out;
}

WerLabel wer_oracle_next(TokenView gold, TokenView prefix) {
  return WerRoller(gold, prefix).next();
}

TokenSeq complete_wer(TokenView gold, TokenView prefix) {
  WerRoller roller(gold, prefix);
  TokenSeq out;
  for (std::size_t step = 0; step <= gold.size(); ++step) {
    const WerLabel label = roller.next();
    if (!label) return out;
    out.push_back(*label);
    roller.push(*label);
  }
  throw std::logic_error("complete_wer: rollout did not reach End");
}

}  // namespace dynoracle
