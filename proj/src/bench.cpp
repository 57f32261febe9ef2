#include "dynoracle/bench.hpp"

#include <chrono>

#include "dynoracle/random.hpp"
#include "dynoracle/sim_harness.hpp"

namespace dynoracle {

BeamBenchResult run_beam_cache_bench(const BeamBenchConfig& cfg) {
  const auto corpus =
      synthetic_corpus(cfg.sentences, cfg.seed, 60, cfg.gold_len, cfg.gold_len);
  struct Query {
    const TokenSeq* gold;
    TokenSeq prefix;
  };
  std::vector<Query> queries;
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    const TokenSeq noisy = corrupt(
        corpus[s], CorruptionPolicy::at_level(cfg.corruption,
                                              derive_seed({cfg.seed, s, 7})));
    Rng rng(derive_seed({cfg.seed, s, 8}));
    for (std::size_t c = 0; c < cfg.cuts_per_sentence; ++c) {
      const std::size_t cut = rng.between(0, noisy.size());
      queries.push_back({&corpus[s], TokenSeq(noisy.begin(), noisy.begin() + cut)});
    }
  }

  BeamConfig beam;
  beam.beam_size = cfg.beam_size;
  beam.beam_length = cfg.beam_length;
  beam.metric = cfg.metric;

  auto run = [&](ScoringMode mode, std::vector<BeamOracleResult>& out) {
    beam.scoring = mode;
    out.clear();
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& q : queries) out.push_back(beam_oracle_next(q.prefix, *q.gold, beam));
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
  };

  BeamBenchResult result;
  result.queries = queries.size();
  std::vector<BeamOracleResult> naive, cached;
  result.naive_ms = run(ScoringMode::Naive, naive);
  result.cached_ms = run(ScoringMode::Cached, cached);
  for (std::size_t i = 0; i < queries.size(); ++i) {
    if (naive[i].best_seq != cached[i].best_seq ||
        naive[i].best_score != cached[i].best_score ||
        naive[i].token != cached[i].token) {
      result.identical = false;
    }
  }
  return result;
}

Record to_record(const BeamBenchResult& r) {
  Record rec;
  rec.add("record", "bench")
      .add("workload", "beam-cache")
      .add("queries", r.queries)
      .add("naive_ms", r.naive_ms)
      .add("cached_ms", r.cached_ms)
      .add("speedup", r.speedup())
      .add("identical", r.identical);
  return rec;
}

}  // namespace dynoracle
