#include "dynoracle/sim_harness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dynoracle/parallel.hpp"
#include "dynoracle/random.hpp"

namespace dynoracle {

CorruptionPolicy CorruptionPolicy::at_level(double level, std::uint64_t seed) {
  return {level, level, level, seed};
}

namespace {

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument(std::string("corruption: ") + name +
                                " must be in [0, 1]");
}

TokenSeq unigrams(TokenView gold) {
  TokenSeq u(gold.begin(), gold.end());
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  return u;
}

}  // namespace

TokenSeq corrupt(TokenView gold, const CorruptionPolicy& policy) {
  check_probability(policy.p_drop, "p_drop");
  check_probability(policy.p_substitute, "p_substitute");
  check_probability(policy.p_insert, "p_insert");
  const TokenSeq source = unigrams(gold);
  Rng rng(policy.seed);
  TokenSeq out;
  out.reserve(gold.size() * 2);
  for (TokenId tok : gold) {
    const double u_drop = rng.uniform();
    const double u_sub = rng.uniform();
    const double u_ins = rng.uniform();
    const TokenId sub = source[rng.below(source.size())];
    const TokenId ins = source[rng.below(source.size())];
    if (u_drop >= policy.p_drop) out.push_back(u_sub < policy.p_substitute ? sub : tok);
    if (u_ins < policy.p_insert) out.push_back(ins);
  }
  return out;
}

ComparisonRecord compare_once(TokenView gold, const CorruptionPolicy& policy,
                              std::size_t cut, const BeamConfig& cfg) {
  const TokenSeq corrupted = corrupt(gold, policy);
  if (cut > corrupted.size()) {
    throw std::invalid_argument("compare_once: cut " + std::to_string(cut) +
                                " exceeds corrupted length " +
                                std::to_string(corrupted.size()));
  }
  const TokenView prefix(corrupted.data(), cut);
  const SupervisionChoice choice = select_supervision(prefix, gold, cfg);
  ComparisonRecord rec;
  rec.cut = cut;
  rec.beam_size = cfg.beam_size;
  rec.gold_copy_score = choice.gold_copy_score;
  rec.oracle_score = choice.chosen_score;
  rec.delta = choice.chosen_score - choice.gold_copy_score;
  rec.source = choice.source;
  rec.corruption = policy.p_drop;
  return rec;
}

const TrendRow& TrendTable::at(double corruption, std::size_t beam_size) const {
  for (const auto& r : rows)
    if (r.corruption == corruption && r.beam_size == beam_size) return r;
  throw std::out_of_range("trend table has no cell for the requested level/beam");
}

SweepResult trend_report(const std::vector<TokenSeq>& corpus,
                         const SweepConfig& cfg) {
  if (corpus.empty()) throw std::invalid_argument("trend_report: empty corpus");
  const std::size_t n_levels = cfg.corruption_levels.size();
  const std::size_t n_beams = cfg.beam_sizes.size();
  const std::size_t cells = n_levels * n_beams;

  // Slot layout: ((sentence * levels) + level) * beams + beam.
  std::vector<ComparisonRecord> slots(corpus.size() * cells);
  parallel_for(corpus.size() * n_levels, cfg.jobs, [&](std::size_t task) {
    const std::size_t sid = task / n_levels;
    const std::size_t li = task % n_levels;
    const TokenSeq& gold = corpus[sid];
    const auto policy = CorruptionPolicy::at_level(
        cfg.corruption_levels[li], derive_seed({cfg.seed, sid, li, 1}));
    const std::size_t corrupted_len = corrupt(gold, policy).size();
    Rng cut_rng(derive_seed({cfg.seed, sid, li, 2}));
    const std::size_t cut = cut_rng.between(0, corrupted_len);
    for (std::size_t bi = 0; bi < n_beams; ++bi) {
      BeamConfig beam = cfg.base;
      beam.beam_size = cfg.beam_sizes[bi];
      ComparisonRecord rec = compare_once(gold, policy, cut, beam);
      rec.sentence_id = sid;
      slots[task * n_beams + bi] = rec;
    }
  });

  SweepResult result;
  result.records = slots;
  for (std::size_t li = 0; li < n_levels; ++li) {
    for (std::size_t bi = 0; bi < n_beams; ++bi) {
      TrendRow row;
      row.corruption = cfg.corruption_levels[li];
      row.beam_size = cfg.beam_sizes[bi];
      double improved = 0.0, gold_sum = 0.0, delta_sum = 0.0;
      for (std::size_t sid = 0; sid < corpus.size(); ++sid) {
        const auto& rec = slots[(sid * n_levels + li) * n_beams + bi];
        ++row.records;
        if (rec.delta > 0.0) improved += 1.0;
        gold_sum += rec.gold_copy_score;
        delta_sum += rec.delta;
      }
      row.frac_improved = improved / row.records;
      row.mean_gold_copy = gold_sum / row.records;
      row.mean_delta = delta_sum / row.records;
      result.table.rows.push_back(row);
    }
  }
  return result;
}

std::vector<TokenSeq> synthetic_corpus(std::size_t sentences, std::uint64_t seed,
                                       std::size_t vocab_size, std::size_t min_len,
                                       std::size_t max_len) {
  if (vocab_size == 0 || min_len == 0 || min_len > max_len)
    throw std::invalid_argument("synthetic_corpus: bad shape");
  // Zipf(1) cumulative weights.
  std::vector<double> cdf(vocab_size);
  double acc = 0.0;
  for (std::size_t r = 0; r < vocab_size; ++r) {
    acc += 1.0 / static_cast<double>(r + 1);
    cdf[r] = acc;
  }
  std::vector<TokenSeq> corpus;
  corpus.reserve(sentences);
  for (std::size_t s = 0; s < sentences; ++s) {
    Rng rng(derive_seed({seed, s}));
    TokenSeq sent(rng.between(min_len, max_len));
    for (auto& tok : sent) {
      const double u = rng.uniform() * acc;
      tok = static_cast<TokenId>(std::upper_bound(cdf.begin(), cdf.end(), u) -
                                 cdf.begin());
      tok = std::min<TokenId>(tok, static_cast<TokenId>(vocab_size - 1));
    }
    corpus.push_back(std::move(sent));
  }
  return corpus;
}

Record to_record(const ComparisonRecord& rec) {
  Record r;
  r.add("record", "comparison")
      .add("sentence_id", rec.sentence_id)
      .add("corruption", rec.corruption)
      .add("cut", rec.cut)
      .add("beam_size", rec.beam_size)
      .add("gold_copy_score", rec.gold_copy_score)
      .add("oracle_score", rec.oracle_score)
      .add("delta", rec.delta)
      .add("source", to_string(rec.source));
  return r;
}

Record to_record(const TrendRow& row) {
  Record r;
  r.add("record", "trend")
      .add("corruption", row.corruption)
      .add("beam_size", row.beam_size)
      .add("records", row.records)
      .add("frac_improved", row.frac_improved)
      .add("mean_gold_copy", row.mean_gold_copy)
      .add("mean_delta", row.mean_delta);
  return r;
}

}  // namespace dynoracle
