#pragma once

#include <cstdint>

#include "dynoracle/corpus_io.hpp"
#include "dynoracle/oracle_approx.hpp"

namespace dynoracle {

struct BeamBenchConfig {
  std::size_t sentences = 20;
  std::size_t gold_len = 30;
  std::size_t beam_size = 20;
  std::size_t beam_length = 4;
  std::size_t cuts_per_sentence = 5;
  double corruption = 0.1;
  ApproxMetric metric = ApproxMetric::Bleu4;
  std::uint64_t seed = 0;
};

struct BeamBenchResult {
  std::size_t queries = 0;
  double naive_ms = 0.0;
  double cached_ms = 0.0;
  // Every query returned the same sequence and a bit-identical score.
  bool identical = true;

  double speedup() const { return cached_ms > 0.0 ? naive_ms / cached_ms : 0.0; }
};

// Same corrupted-prefix queries through the naive and the cached scorer.
BeamBenchResult run_beam_cache_bench(const BeamBenchConfig& cfg);

Record to_record(const BeamBenchResult& result);

}  // namespace dynoracle
